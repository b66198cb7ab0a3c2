//! Task execution: one cell per (task, n), run on a rayon pool, assembled
//! in document order.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use genhk::fit::{
    best_fit, format_rational, leading_ratio, verify_closed_form, ClosedForm, SampleSeries,
};
use genhk::frobenius::{fhk, local_cohomology_length, refl_pair, theta, tor_frobenius_length};
use genhk::oracle::oracle_fhk;
use genhk::{Error, Guards, LengthResult, PresentedModule};
use rayon::prelude::*;

use crate::problem::{ProblemDocument, ProblemError, TaskKind, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub jobs: usize,
    pub guards: Guards,
    /// Share one module (and its Gröbner bases and resolution) across all
    /// cells that reference it.
    pub cache: bool,
    pub verify_oracle: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            jobs: 1,
            guards: Guards::default(),
            cache: true,
            verify_oracle: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowError {
    Guard(String),
    Failed(String),
}

impl RowError {
    pub fn message(&self) -> &str {
        match self {
            RowError::Guard(m) | RowError::Failed(m) => m,
        }
    }
}

impl From<Error> for RowError {
    fn from(e: Error) -> Self {
        if e.is_guard() {
            RowError::Guard(e.to_string())
        } else {
            RowError::Failed(e.to_string())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCheck {
    pub value: u64,
    pub stable: bool,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub task: String,
    pub module: String,
    pub kind: String,
    pub n: u64,
    pub q: u64,
    /// Exact value; `None` when the length is infinite or on error.
    pub value: Option<String>,
    pub finite: bool,
    pub error: Option<RowError>,
    pub oracle: Option<OracleCheck>,
    pub wall: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitSummary {
    pub task: String,
    pub module: String,
    pub dim: u32,
    pub ratios: Vec<String>,
    pub trend: Option<String>,
    pub model: Option<String>,
    pub degree: u32,
    pub period: usize,
    pub verified: bool,
    /// Fitted coefficient of `q^dim`.
    pub limit: Option<String>,
    pub closed_form: Option<String>,
    /// `(n, pass)` per sample against `closed_form`.
    pub closed_form_checks: Vec<(u32, bool)>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Meta {
    pub p: u64,
    pub vars: Vec<String>,
    pub quotient: Vec<String>,
    pub tasks: usize,
    pub verify_oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultTable {
    pub meta: Meta,
    pub rows: Vec<Row>,
    pub fits: Vec<FitSummary>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

impl ResultTable {
    pub fn oracle_mismatches(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.oracle.is_some_and(|o| !o.agrees))
            .count()
    }

    /// 3 on an oracle mismatch, else 2 on any guard trip, else 1 on any
    /// other row error, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.oracle_mismatches() > 0 {
            EXIT_ORACLE
        } else if self
            .rows
            .iter()
            .any(|r| matches!(r.error, Some(RowError::Guard(_))))
        {
            EXIT_GUARD
        } else if self.rows.iter().any(|r| r.error.is_some()) {
            EXIT_INPUT
        } else {
            EXIT_OK
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    task: usize,
    /// `n` for Frobenius tasks, the exponent `e` for `refl`.
    param: u64,
    /// `refl` yields two rows per exponent.
    part: u8,
}

struct Modules<'a> {
    ws: Workspace<'a>,
    names: Vec<String>,
    shared: Vec<OnceLock<Result<Arc<PresentedModule>, Error>>>,
    cache: bool,
}

impl Modules<'_> {
    fn get(&self, name: &str) -> Result<Arc<PresentedModule>, Error> {
        let build = || self.ws.build_module(name).map(Arc::new);
        if !self.cache {
            return build();
        }
        let idx = self
            .names
            .iter()
            .position(|n| n == name)
            .expect("validated");
        self.shared[idx].get_or_init(build).clone()
    }
}

fn length_value(l: LengthResult) -> (Option<String>, bool) {
    match l.length {
        Some(v) => (Some(v.to_string()), true),
        None => (None, false),
    }
}

pub fn run(doc: &ProblemDocument, opts: &RunOptions) -> Result<ResultTable, ProblemError> {
    doc.validate()?;
    let ws = Workspace::new(doc, opts.guards)?;
    let names: Vec<String> = doc.module.keys().cloned().collect();
    let modules = Modules {
        shared: (0..names.len()).map(|_| OnceLock::new()).collect(),
        names,
        ws,
        cache: opts.cache,
    };
    let mut cells = Vec::new();
    for (idx, t) in doc.tasks.iter().enumerate() {
        if t.kind == TaskKind::Refl {
            let [lo, hi] = t.exponents.expect("validated");
            for e in lo..=hi {
                cells.push(Cell {
                    task: idx,
                    param: e,
                    part: 0,
                });
                cells.push(Cell {
                    task: idx,
                    param: e,
                    part: 1,
                });
            }
        } else {
            let [lo, hi] = t.n_range.expect("validated");
            for n in lo..=hi {
                cells.push(Cell {
                    task: idx,
                    param: n as u64,
                    part: 0,
                });
            }
        }
    }
    // refl rows come in pairs from one computation; memoize per (task, e)
    let refl_memo: BTreeMap<(usize, u64), OnceLock<Result<genhk::frobenius::ReflPair, Error>>> =
        cells
            .iter()
            .filter(|c| doc.tasks[c.task].kind == TaskKind::Refl)
            .map(|c| ((c.task, c.param), OnceLock::new()))
            .collect();
    let eval = |c: &Cell| evaluate(doc, &modules, &refl_memo, c, opts);
    let rows: Vec<Row> = if opts.jobs <= 1 {
        cells.iter().map(eval).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| ProblemError::Invalid(format!("thread pool: {e}")))?;
        pool.install(|| cells.par_iter().map(eval).collect())
    };
    let fits = fit_summaries(doc, &modules, &rows);
    Ok(ResultTable {
        meta: Meta {
            p: doc.ring.p,
            vars: doc.ring.vars.clone(),
            quotient: doc.ring.quotient.clone(),
            tasks: doc.tasks.len(),
            verify_oracle: opts.verify_oracle,
        },
        rows,
        fits,
    })
}

fn evaluate(
    doc: &ProblemDocument,
    modules: &Modules<'_>,
    refl_memo: &BTreeMap<(usize, u64), OnceLock<Result<genhk::frobenius::ReflPair, Error>>>,
    cell: &Cell,
    opts: &RunOptions,
) -> Row {
    let start = Instant::now();
    let task = &doc.tasks[cell.task];
    let ring = &modules.ws.ring;
    let mut row = Row {
        task: doc.task_id(cell.task),
        module: task.module.clone().unwrap_or_default(),
        kind: task.kind.name().to_string(),
        n: cell.param,
        q: 0,
        value: None,
        finite: false,
        error: None,
        oracle: None,
        wall: Duration::ZERO,
    };
    let result: Result<(), Error> = (|| {
        if task.kind == TaskKind::Refl {
            let (a, b) = (
                task.a.as_deref().unwrap_or(""),
                task.b.as_deref().unwrap_or(""),
            );
            row.module = format!("({a}):({b})");
            row.kind = if cell.part == 0 { "refl_h2" } else { "refl_h0" }.to_string();
            row.q = cell.param;
            let pair = refl_memo[&(cell.task, cell.param)]
                .get_or_init(|| {
                    refl_pair(
                        &modules.ws.base,
                        &ring.parse(a)?,
                        &ring.parse(b)?,
                        cell.param,
                    )
                })
                .clone()?;
            (row.value, row.finite) = if cell.part == 0 {
                length_value(pair.h2_symbolic)
            } else {
                (Some(pair.h0_bracket.to_string()), true)
            };
            return Ok(());
        }
        let n = cell.param as u32;
        row.q = ring.q_of(n)?;
        let m = modules.get(task.module.as_deref().expect("validated"))?;
        match task.kind {
            TaskKind::Fhk | TaskKind::HkEstimate => {
                let v = fhk(&m, n);
                // an infinite H^0 length is a value, not a failure
                if let Err(Error::InfiniteLength) = v {
                    return Ok(());
                }
                let v = v?;
                (row.value, row.finite) = (Some(v.to_string()), true);
                if opts.verify_oracle {
                    let o = oracle_fhk(&m, n)?;
                    row.oracle = Some(OracleCheck {
                        value: o.value,
                        stable: o.stable,
                        agrees: o.value == v,
                    });
                }
            }
            TaskKind::Tor => {
                let i = task.i.expect("validated");
                row.kind = format!("tor{i}");
                (row.value, row.finite) = length_value(tor_frobenius_length(&m, i, n)?);
            }
            TaskKind::LocalCohomology => {
                let k = task.k.expect("validated");
                row.kind = format!("h{k}");
                (row.value, row.finite) = length_value(local_cohomology_length(&m, k, n)?);
            }
            TaskKind::Theta => {
                let t = theta(&m, n)?;
                (row.value, row.finite) = (Some(t.theta.to_string()), true);
            }
            TaskKind::Refl => unreachable!(),
        }
        Ok(())
    })();
    if let Err(e) = result {
        row.value = None;
        row.finite = false;
        row.error = Some(e.into());
    }
    row.wall = start.elapsed();
    row
}

fn fit_summaries(doc: &ProblemDocument, modules: &Modules<'_>, rows: &[Row]) -> Vec<FitSummary> {
    let mut out = Vec::new();
    for (idx, task) in doc.tasks.iter().enumerate() {
        let spec = match (task.kind, &task.fit) {
            (TaskKind::HkEstimate, f) => f.clone().unwrap_or_default(),
            (TaskKind::Fhk, Some(f)) => f.clone(),
            _ => continue,
        };
        let id = doc.task_id(idx);
        let mut summary = FitSummary {
            task: id.clone(),
            module: task.module.clone().unwrap_or_default(),
            dim: 0,
            ratios: Vec::new(),
            trend: None,
            model: None,
            degree: 0,
            period: 0,
            verified: false,
            limit: None,
            closed_form: spec.closed_form.clone(),
            closed_form_checks: Vec::new(),
            note: None,
        };
        let dim = match spec.dim {
            Some(d) => d,
            None => match modules.ws.base.krull_dim() {
                Ok(d) => d as u32,
                Err(e) => {
                    summary.note = Some(e.to_string());
                    out.push(summary);
                    continue;
                }
            },
        };
        summary.dim = dim;
        let mine: Vec<&Row> = rows.iter().filter(|r| r.task == id).collect();
        if let Some(bad) = mine.iter().find(|r| r.value.is_none()) {
            summary.note = Some(format!("no finite value at n = {}", bad.n));
            out.push(summary);
            continue;
        }
        let values: Vec<(u32, u64)> = mine
            .iter()
            .map(|r| {
                (
                    r.n as u32,
                    r.value.as_ref().and_then(|v| v.parse().ok()).unwrap_or(0),
                )
            })
            .collect();
        let series = match SampleSeries::from_values(doc.ring.p as u32, dim, &values) {
            Ok(s) => s,
            Err(e) => {
                summary.note = Some(e.to_string());
                out.push(summary);
                continue;
            }
        };
        if let Ok(rep) = leading_ratio(&series) {
            summary.ratios = rep.ratios.iter().map(format_rational).collect();
            summary.trend = Some(format!("{:?}", rep.trend).to_lowercase());
        }
        match best_fit(&series, spec.max_period.unwrap_or(3)) {
            Ok(fit) => {
                summary.degree = fit.degree;
                summary.period = fit.period;
                summary.verified = fit.verified();
                if let Some(form) = &fit.form {
                    summary.model = Some(form.to_string());
                    summary.limit = form
                        .coefficient_of(dim as usize)
                        .map(|c| format_rational(&c));
                } else {
                    summary.note =
                        Some("no exact quasi-polynomial fit with a passing holdout".into());
                }
            }
            Err(e) => summary.note = Some(e.to_string()),
        }
        if let Some(cf) = &spec.closed_form {
            if let Ok(form) = ClosedForm::parse(cf) {
                summary.closed_form_checks = verify_closed_form(&series, &form)
                    .iter()
                    .map(|c| (c.sample.n, c.pass))
                    .collect();
            }
        }
        out.push(summary);
    }
    out
}
