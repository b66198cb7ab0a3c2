//! Rendering of result tables (table, CSV, JSON) and CSV sample series.

use std::io::{Read, Write};

use genhk::fit::{Sample, SampleSeries};
use serde_json::{json, Value};
use thiserror::Error as ThisError;

use crate::problem::Format;
use crate::runner::{FitSummary, ResultTable, Row, RowError};

#[derive(Debug, ThisError)]
pub enum OutputError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("series: {0}")]
    Series(String),
}

pub const CSV_HEADER: [&str; 7] = ["task", "module", "kind", "n", "q", "value", "finite"];

/// The value column: the exact value, `inf`, or `error`.
fn value_cell(r: &Row) -> String {
    match (&r.value, &r.error) {
        (_, Some(_)) => "error".into(),
        (Some(v), None) => v.clone(),
        (None, None) => "inf".into(),
    }
}

pub fn render(table: &ResultTable, format: Format) -> Result<String, OutputError> {
    match format {
        Format::Csv => render_csv(table),
        Format::Json => Ok(render_json(table)),
        Format::Table => Ok(render_table(table)),
    }
}

pub fn render_csv(table: &ResultTable) -> Result<String, OutputError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in &table.rows {
        w.write_record([
            r.task.clone(),
            r.module.clone(),
            r.kind.clone(),
            r.n.to_string(),
            r.q.to_string(),
            value_cell(r),
            r.finite.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("utf-8 fields"))
}

fn row_json(r: &Row) -> Value {
    let mut v = json!({
        "task": r.task,
        "module": r.module,
        "kind": r.kind,
        "n": r.n.to_string(),
        "q": r.q.to_string(),
        "value": r.value,
        "finite": r.finite,
    });
    if let Some(e) = &r.error {
        v["error"] = json!({
            "kind": if matches!(e, RowError::Guard(_)) { "guard" } else { "failed" },
            "message": e.message(),
        });
    }
    if let Some(o) = &r.oracle {
        v["oracle"] = json!({
            "value": o.value.to_string(),
            "stable": o.stable,
            "agrees": o.agrees,
        });
    }
    v
}

fn fit_json(f: &FitSummary) -> Value {
    json!({
        "task": f.task,
        "module": f.module,
        "dim": f.dim.to_string(),
        "ratios": f.ratios,
        "trend": f.trend,
        "model": f.model,
        "degree": f.degree.to_string(),
        "period": f.period.to_string(),
        "verified": f.verified,
        "limit": f.limit,
        "closed_form": f.closed_form,
        "closed_form_checks": f.closed_form_checks.iter()
            .map(|(n, ok)| json!({"n": n.to_string(), "pass": ok}))
            .collect::<Vec<_>>(),
        "note": f.note,
    })
}

/// `{meta, rows[], fits[]}`; numbers are strings so rationals stay exact.
pub fn render_json(table: &ResultTable) -> String {
    let m = &table.meta;
    let doc = json!({
        "meta": {
            "tool": "genhk",
            "version": env!("CARGO_PKG_VERSION"),
            "p": m.p.to_string(),
            "vars": m.vars,
            "quotient": m.quotient,
            "tasks": m.tasks.to_string(),
            "verify_oracle": m.verify_oracle,
        },
        "rows": table.rows.iter().map(row_json).collect::<Vec<_>>(),
        "fits": table.fits.iter().map(fit_json).collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json");
    s.push('\n');
    s
}

/// Aligned human-readable table with wall times and fit summaries.
pub fn render_table(table: &ResultTable) -> String {
    let mut lines: Vec<Vec<String>> = vec![[
        "task", "module", "kind", "n", "q", "value", "finite", "ms", "oracle",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()];
    for r in &table.rows {
        let value = match &r.error {
            Some(e) => format!("error: {}", e.message()),
            None => value_cell(r),
        };
        let oracle = match &r.oracle {
            Some(o) if o.agrees => format!("ok ({})", o.value),
            Some(o) => format!("MISMATCH ({})", o.value),
            None => String::new(),
        };
        lines.push(vec![
            r.task.clone(),
            r.module.clone(),
            r.kind.clone(),
            r.n.to_string(),
            r.q.to_string(),
            value,
            r.finite.to_string(),
            format!("{:.1}", r.wall.as_secs_f64() * 1e3),
            oracle,
        ]);
    }
    let widths: Vec<usize> = (0..lines[0].len())
        .map(|c| {
            lines
                .iter()
                .map(|l| l[c].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for l in &lines {
        let cells: Vec<String> = l
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    for f in &table.fits {
        out.push('\n');
        out.push_str(&format!(
            "fit {} ({}), degree <= {}:\n",
            f.task, f.module, f.dim
        ));
        if !f.ratios.is_empty() {
            out.push_str(&format!(
                "  value/q^{}: {} ({})\n",
                f.dim,
                f.ratios.join(", "),
                f.trend.as_deref().unwrap_or("")
            ));
        }
        match &f.model {
            Some(m) => out.push_str(&format!(
                "  model: {m}  [period {}, holdout {}]\n",
                f.period,
                if f.verified { "pass" } else { "FAIL" }
            )),
            None => out.push_str("  model: none\n"),
        }
        if let Some(l) = &f.limit {
            out.push_str(&format!("  leading coefficient: {l}\n"));
        }
        if let Some(cf) = &f.closed_form {
            let marks: Vec<String> = f
                .closed_form_checks
                .iter()
                .map(|(n, ok)| format!("n={n}:{}", if *ok { "pass" } else { "FAIL" }))
                .collect();
            out.push_str(&format!("  closed form {cf}: {}\n", marks.join(" ")));
        }
        if let Some(n) = &f.note {
            out.push_str(&format!("  note: {n}\n"));
        }
    }
    out
}

/// Read `n,q,value` columns (by header name) from CSV; other columns are
/// ignored, and rows can be restricted to one `task`. `p` is recovered
/// from `q = p^n`.
pub fn read_series(
    input: impl Read,
    dim: u32,
    task: Option<&str>,
) -> Result<SampleSeries, OutputError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| OutputError::Series(format!("missing column {name}")))
    };
    let (cn, cq, cv) = (col("n")?, col("q")?, col("value")?);
    let ct = headers.iter().position(|h| h.trim() == "task");
    let mut samples = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if let (Some(want), Some(ct)) = (task, ct) {
            if rec.get(ct) != Some(want) {
                continue;
            }
        }
        let field = |c: usize| -> Result<u64, OutputError> {
            let s = rec.get(c).unwrap_or("").trim();
            s.parse()
                .map_err(|_| OutputError::Series(format!("not an integer: {s:?}")))
        };
        samples.push(Sample {
            n: field(cn)? as u32,
            q: field(cq)?,
            value: field(cv)?,
        });
    }
    let p = infer_p(&samples)?;
    SampleSeries::new(p, dim, samples).map_err(|e| OutputError::Series(e.to_string()))
}

fn infer_p(samples: &[Sample]) -> Result<u32, OutputError> {
    let s = samples
        .iter()
        .find(|s| s.n >= 1)
        .ok_or_else(|| OutputError::Series("no sample with n >= 1".into()))?;
    let guess = (s.q as f64).powf(1.0 / s.n as f64).round() as u32;
    (guess.saturating_sub(1)..=guess + 1)
        .find(|&p| p >= 2 && (p as u64).checked_pow(s.n) == Some(s.q))
        .ok_or_else(|| OutputError::Series(format!("q = {} is not an n-th power", s.q)))
}

pub fn write_series(out: impl Write, series: &SampleSeries) -> Result<(), OutputError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "q", "value"])?;
    for s in series.samples() {
        w.write_record([s.n.to_string(), s.q.to_string(), s.value.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_round_trip() {
        let s = SampleSeries::from_values(3, 2, &[(1, 24), (2, 240)]).unwrap();
        let mut buf = Vec::new();
        write_series(&mut buf, &s).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "n,q,value\n1,3,24\n2,9,240\n"
        );
        assert_eq!(read_series(buf.as_slice(), 2, None).unwrap(), s);
    }

    #[test]
    fn series_from_result_csv_filters_task() {
        let text = "task,module,kind,n,q,value,finite\na,M,fhk,1,2,4,true\nb,N,fhk,1,2,9,true\na,M,fhk,2,4,20,true\n";
        let s = read_series(text.as_bytes(), 2, Some("a")).unwrap();
        assert_eq!(s.p(), 2);
        assert_eq!(
            s.samples().iter().map(|s| s.value).collect::<Vec<_>>(),
            vec![4, 20]
        );
        assert!(read_series("n,q\n1,2\n".as_bytes(), 2, None).is_err());
    }
}
