//! `genhk run | verify | fit`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use genhk::fit::{
    best_fit, fit_quasi_polynomial, format_rational, leading_ratio, verify_closed_form, ClosedForm,
};
use genhk::Guards;
use genhk_cli::runner::{EXIT_INPUT, EXIT_OK};
use genhk_cli::{parse_problem, read_series, render, run, Format, RunOptions};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "genhk",
    version,
    about = "Generalized Hilbert-Kunz computations over F_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every task of a problem file.
    Run(RunArgs),
    /// Like `run`, cross-checking every fhk value with the brute-force oracle.
    Verify(RunArgs),
    /// Fit a CSV series (columns n, q, value) to a quasi-polynomial in q.
    Fit(FitArgs),
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    /// Worker threads; output does not depend on this.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Overrides the document's [output] format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of the document's [output] path or stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// S-pair limit per Gröbner computation.
    #[arg(long)]
    guard_pairs: Option<usize>,
    /// Colon-step limit per iterated saturation.
    #[arg(long)]
    guard_sat: Option<usize>,
    /// Coordinate limit for one oracle linear-algebra piece.
    #[arg(long)]
    guard_oracle: Option<usize>,
    /// Rebuild modules for every cell instead of sharing them.
    #[arg(long)]
    no_cache: bool,
    /// Cross-check fhk values with the oracle (implied by `verify`).
    #[arg(long)]
    verify_oracle: bool,
}

#[derive(Args)]
struct FitArgs {
    csv: PathBuf,
    /// Degree of the fitted form (the Krull dimension).
    #[arg(long)]
    dim: u32,
    /// Fit exactly this period; otherwise search periods 1..=3.
    #[arg(long)]
    period: Option<usize>,
    /// Only rows whose `task` column matches.
    #[arg(long)]
    task: Option<String>,
    /// Check every sample against this closed form.
    #[arg(long)]
    closed_form: Option<String>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => run_cmd(args, false),
        Command::Verify(args) => run_cmd(args, true),
        Command::Fit(args) => fit_cmd(args),
    };
    ExitCode::from(code as u8)
}

fn fail(msg: impl std::fmt::Display) -> i32 {
    eprintln!("genhk: {msg}");
    EXIT_INPUT
}

fn run_cmd(args: RunArgs, verify: bool) -> i32 {
    let text = match fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", args.file.display())),
    };
    let doc = match parse_problem(&text) {
        Ok(d) => d,
        Err(e) => return fail(format!("{}: {e}", args.file.display())),
    };
    let defaults = Guards::default();
    let opts = RunOptions {
        jobs: args.jobs.max(1),
        guards: Guards {
            max_pairs: args.guard_pairs.unwrap_or(defaults.max_pairs),
            max_saturation_steps: args.guard_sat.unwrap_or(defaults.max_saturation_steps),
            oracle_max_coords: args.guard_oracle.unwrap_or(defaults.oracle_max_coords),
        },
        cache: !args.no_cache,
        verify_oracle: verify || args.verify_oracle,
    };
    let table = match run(&doc, &opts) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let out_spec = doc.output.clone().unwrap_or_default();
    let format = args.format.or(out_spec.format).unwrap_or(Format::Table);
    let text = match render(&table, format) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let path = args.output.or_else(|| {
        out_spec.path.map(|p| {
            // relative output paths are relative to the problem file
            let p = PathBuf::from(p);
            match args.file.parent() {
                Some(dir) if p.is_relative() => dir.join(p),
                _ => p,
            }
        })
    });
    match path {
        Some(p) => {
            if let Err(e) = fs::write(&p, text) {
                return fail(format!("{}: {e}", p.display()));
            }
        }
        None => print!("{text}"),
    }
    for r in &table.rows {
        if let Some(e) = &r.error {
            eprintln!("genhk: task {} n={}: {}", r.task, r.n, e.message());
        }
        if let Some(o) = r.oracle.filter(|o| !o.agrees) {
            eprintln!(
                "genhk: task {} n={}: oracle gives {} against {}",
                r.task,
                r.n,
                o.value,
                r.value.as_deref().unwrap_or("?")
            );
        }
    }
    table.exit_code()
}

fn fit_cmd(args: FitArgs) -> i32 {
    let file = match fs::File::open(&args.csv) {
        Ok(f) => f,
        Err(e) => return fail(format!("{}: {e}", args.csv.display())),
    };
    let series = match read_series(file, args.dim, args.task.as_deref()) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let closed = match args
        .closed_form
        .as_deref()
        .map(ClosedForm::parse)
        .transpose()
    {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let ratios = leading_ratio(&series).ok();
    let fit = match args.period {
        Some(s) => fit_quasi_polynomial(&series, args.dim, s),
        None => best_fit(&series, 3),
    };
    let fit = match fit {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let checks = closed.as_ref().map(|c| verify_closed_form(&series, c));
    let model = fit.form.as_ref().map(|f| f.to_string());
    match args.format {
        Format::Json => {
            let doc = json!({
                "p": series.p().to_string(),
                "dim": args.dim.to_string(),
                "ratios": ratios.as_ref().map(|r| r.ratios.iter().map(format_rational).collect::<Vec<_>>()),
                "model": model,
                "period": fit.period.to_string(),
                "verified": fit.verified(),
                "holdout": fit.holdout.iter().map(|h| json!({
                    "n": h.sample.n.to_string(),
                    "value": h.sample.value.to_string(),
                    "predicted": format_rational(&h.predicted),
                    "pass": h.pass,
                })).collect::<Vec<_>>(),
                "closed_form": checks.as_ref().map(|cs| cs.iter().map(|c| json!({
                    "n": c.sample.n.to_string(),
                    "expected": format_rational(&c.expected),
                    "pass": c.pass,
                })).collect::<Vec<_>>()),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Table | Format::Csv => {
            if let Some(r) = &ratios {
                let rs: Vec<String> = r.ratios.iter().map(format_rational).collect();
                println!("value/q^{}: {} ({:?})", args.dim, rs.join(", "), r.trend);
            }
            match &model {
                Some(m) => println!("model: {m}  [period {}]", fit.period),
                None => println!("model: none"),
            }
            for h in &fit.holdout {
                println!(
                    "holdout n={} q={}: {} vs predicted {} {}",
                    h.sample.n,
                    h.sample.q,
                    h.sample.value,
                    format_rational(&h.predicted),
                    if h.pass { "pass" } else { "FAIL" }
                );
            }
            for c in checks.iter().flatten() {
                println!(
                    "closed form n={}: {} vs {} {}",
                    c.sample.n,
                    c.sample.value,
                    format_rational(&c.expected),
                    if c.pass { "pass" } else { "FAIL" }
                );
            }
        }
    }
    let closed_ok = checks.is_none_or(|cs| cs.iter().all(|c| c.pass));
    if fit.verified() && closed_ok {
        EXIT_OK
    } else {
        EXIT_INPUT
    }
}
