use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use genhk::Guards;
use genhk_cli::output::{render_csv, render_json};
use genhk_cli::runner::{RowError, EXIT_GUARD};
use genhk_cli::{parse_problem, run, RunOptions};

fn problems_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_genhk"))
}

const FERMAT_SMALL: &str = r#"
[ring]
p = 2
vars = ["x", "y", "z"]
quotient = ["x^3+y^3+z^3"]

[module.M]
cyclic = ["x", "y+z"]

[module.S]
syzygy = "M"

[[task]]
id = "f"
kind = "fhk"
module = "M"
n_range = [1, 3]

[[task]]
id = "th"
kind = "theta"
module = "M"
n_range = [1, 1]

[[task]]
id = "t1"
kind = "tor"
module = "M"
i = 1
n_range = [1, 2]

[[task]]
id = "s"
kind = "fhk"
module = "S"
n_range = [1, 2]
"#;

fn values(table: &genhk_cli::ResultTable, task: &str) -> Vec<String> {
    table
        .rows
        .iter()
        .filter(|r| r.task == task)
        .map(|r| r.value.clone().unwrap_or_default())
        .collect()
}

#[test]
fn shipped_problem_files_parse_and_round_trip() {
    let mut count = 0;
    for entry in fs::read_dir(problems_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let doc = parse_problem(&fs::read_to_string(&path).unwrap())
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            let again = parse_problem(&doc.to_toml()).unwrap();
            assert_eq!(again, doc, "{}", path.display());
            count += 1;
        }
    }
    assert!(count >= 6);
}

#[test]
fn fermat_cubic_rows() {
    let doc = parse_problem(FERMAT_SMALL).unwrap();
    let table = run(&doc, &RunOptions::default()).unwrap();
    assert_eq!(values(&table, "f"), ["4", "20", "84"]);
    assert_eq!(values(&table, "th"), ["0"]);
    // Tor_1 against F^n(syz M), computed two ways
    assert_eq!(values(&table, "t1"), values(&table, "s"));
    assert_eq!(table.exit_code(), 0);
}

#[test]
fn output_independent_of_jobs_and_cache() {
    let doc = parse_problem(FERMAT_SMALL).unwrap();
    let base = run(&doc, &RunOptions::default()).unwrap();
    for (jobs, cache) in [(3, true), (1, false), (4, false)] {
        let other = run(
            &doc,
            &RunOptions {
                jobs,
                cache,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(render_csv(&other).unwrap(), render_csv(&base).unwrap());
        assert_eq!(render_json(&other), render_json(&base));
    }
}

#[test]
fn empty_task_list() {
    let text = "[ring]\np = 3\nvars = [\"x\"]\n";
    let table = run(&parse_problem(text).unwrap(), &RunOptions::default()).unwrap();
    assert!(table.rows.is_empty());
    assert_eq!(table.exit_code(), 0);
    assert_eq!(
        render_csv(&table).unwrap(),
        "task,module,kind,n,q,value,finite\n"
    );
}

#[test]
fn guard_trips_are_row_errors() {
    let doc = parse_problem(FERMAT_SMALL).unwrap();
    let opts = RunOptions {
        guards: Guards {
            max_pairs: 1,
            ..Guards::default()
        },
        ..Default::default()
    };
    let table = run(&doc, &opts).unwrap();
    assert!(table
        .rows
        .iter()
        .any(|r| matches!(r.error, Some(RowError::Guard(_)))));
    assert_eq!(table.rows.len(), 8);
    assert_eq!(table.exit_code(), EXIT_GUARD);
}

#[test]
fn json_numbers_are_strings() {
    let doc = parse_problem(FERMAT_SMALL).unwrap();
    let table = run(&doc, &RunOptions::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&render_json(&table)).unwrap();
    assert_eq!(v["meta"]["p"], "2");
    assert_eq!(v["rows"][1]["value"], "20");
    assert_eq!(v["rows"][1]["q"], "4");
    assert!(v["fits"].as_array().unwrap().is_empty());
}

#[test]
fn binary_run_csv_and_oracle_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.toml");
    fs::write(&file, FERMAT_SMALL).unwrap();
    let out = bin()
        .args(["run", "--format", "csv"])
        .arg(&file)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("task,module,kind,n,q,value,finite\nf,M,fhk,1,2,4,true\n"));
    let out = bin()
        .args(["verify", "--format", "json"])
        .arg(&file)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"][0]["oracle"]["agrees"], true);
}

#[test]
fn binary_input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.toml");
    fs::write(
        &file,
        FERMAT_SMALL.replace("module = \"S\"", "module = \"N\""),
    )
    .unwrap();
    let out = bin().arg("run").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("\"N\""));
    let out = bin()
        .arg("run")
        .arg(dir.path().join("missing.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn binary_guard_trip_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.toml");
    fs::write(&file, FERMAT_SMALL).unwrap();
    let out = bin()
        .args(["run", "--guard-pairs", "1"])
        .arg(&file)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_fit_verb() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    fs::write(&csv, "n,q,value\n1,2,4\n2,4,20\n3,8,84\n4,16,340\n").unwrap();
    let out = bin()
        .args(["fit", "--dim", "2", "--closed-form", "4(q^2-1)/3"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("model: (4*q^2 - 4)/3"), "{text}");
    fs::write(&csv, "n,q,value\n1,2,4\n2,4,20\n3,8,84\n4,16,341\n").unwrap();
    let out = bin()
        .args(["fit", "--dim", "2", "--period", "1"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_section_path_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.toml");
    let text = "[ring]\np = 3\nvars = [\"x\", \"y\"]\n\n[module.k]\ncyclic = [\"x\", \"y\"]\n\n\
                [[task]]\nkind = \"fhk\"\nmodule = \"k\"\nn_range = [1, 2]\n\n\
                [output]\nformat = \"csv\"\npath = \"out.csv\"\n";
    fs::write(&file, text).unwrap();
    let out = bin().arg("run").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(
        csv,
        "task,module,kind,n,q,value,finite\nt1,k,fhk,1,3,9,true\nt1,k,fhk,2,9,81,true\n"
    );
}
