//! Problem documents: a ring, named modules, and a task list, in TOML.

use std::collections::BTreeMap;
use std::sync::Arc;

use genhk::{Error, Guards, Matrix, OrderKind, PolyRing, PresentedModule, QuotientRing};
use serde::{Deserialize, Serialize};
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum ProblemError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("task {task}: unresolved module reference {name:?}")]
    UnresolvedModule { task: String, name: String },
    #[error("module {module}: unresolved syzygy reference {name:?}")]
    UnresolvedSyzygy { module: String, name: String },
    #[error("module {0}: syzygy references form a cycle")]
    SyzygyCycle(String),
    #[error("invalid prime {0}")]
    InvalidPrime(u64),
    #[error("{context}: {source}")]
    Algebra {
        context: String,
        #[source]
        source: Error,
    },
    #[error("{0}")]
    Invalid(String),
}

fn algebra(context: impl Into<String>) -> impl FnOnce(Error) -> ProblemError {
    let context = context.into();
    move |source| match source {
        Error::NotPrime(p) => ProblemError::InvalidPrime(p),
        source => ProblemError::Algebra { context, source },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub ring: RingSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub module: BTreeMap<String, ModuleSpec>,
    #[serde(default, rename = "task", skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub p: u64,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quotient: Vec<String>,
}

/// Exactly one of the four constructions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    /// `R / (gens)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<Vec<String>>,
    /// `coker` of the matrix, given as rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    /// The ideal `(gens) ⊆ R` as a module.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<String>>,
    /// First syzygy of another named module.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub syzygy: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Fhk,
    Tor,
    LocalCohomology,
    Theta,
    Refl,
    HkEstimate,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Fhk => "fhk",
            TaskKind::Tor => "tor",
            TaskKind::LocalCohomology => "local_cohomology",
            TaskKind::Theta => "theta",
            TaskKind::Refl => "refl",
            TaskKind::HkEstimate => "hk_estimate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub kind: TaskKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    /// Inclusive range of Frobenius exponents `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_range: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    /// Inclusive range of symbolic-power exponents for `refl`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    /// Degree to fit; defaults to the Krull dimension of `R`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_period: Option<usize>,
    /// Expected closed form, checked sample by sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parse and validate a problem document.
pub fn parse_problem(text: &str) -> Result<ProblemDocument, ProblemError> {
    let doc: ProblemDocument = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        ProblemError::Syntax {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    doc.validate()?;
    Ok(doc)
}

impl ProblemDocument {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("document serializes")
    }

    /// The id shown in output rows: explicit, or `t<index>` (1-based).
    pub fn task_id(&self, index: usize) -> String {
        self.tasks[index]
            .id
            .clone()
            .unwrap_or_else(|| format!("t{}", index + 1))
    }

    /// Every reference resolves, every polynomial parses, every task has
    /// the parameters its kind needs.
    pub fn validate(&self) -> Result<(), ProblemError> {
        let ws = Workspace::new(self, Guards::default())?;
        for (name, spec) in &self.module {
            let kinds = [
                spec.cyclic.is_some(),
                spec.matrix.is_some(),
                spec.ideal.is_some(),
                spec.syzygy.is_some(),
            ];
            if kinds.iter().filter(|&&k| k).count() != 1 {
                return Err(ProblemError::Invalid(format!(
                    "module {name}: give exactly one of cyclic, matrix, ideal, syzygy"
                )));
            }
            let ctx = format!("module {name}");
            let parse = |gens: &[String]| -> Result<(), ProblemError> {
                for g in gens {
                    ws.ring.parse(g).map_err(algebra(ctx.clone()))?;
                }
                Ok(())
            };
            if let Some(g) = &spec.cyclic {
                parse(g)?;
            }
            if let Some(g) = &spec.ideal {
                parse(g)?;
            }
            if let Some(rows) = &spec.matrix {
                Matrix::parse(&ws.ring, rows).map_err(algebra(ctx.clone()))?;
            }
            // follow the syzygy chain to a concrete module
            let mut cur = name.clone();
            let mut steps = 0;
            while let Some(target) = self.module[&cur].syzygy.clone() {
                if !self.module.contains_key(&target) {
                    return Err(ProblemError::UnresolvedSyzygy {
                        module: cur,
                        name: target,
                    });
                }
                steps += 1;
                if steps > self.module.len() {
                    return Err(ProblemError::SyzygyCycle(name.clone()));
                }
                cur = target;
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for (idx, task) in self.tasks.iter().enumerate() {
            let id = self.task_id(idx);
            if !seen.insert(id.clone()) {
                return Err(ProblemError::Invalid(format!("duplicate task id {id}")));
            }
            let invalid = |msg: &str| ProblemError::Invalid(format!("task {id}: {msg}"));
            if task.kind == TaskKind::Refl {
                let (Some(a), Some(b)) = (&task.a, &task.b) else {
                    return Err(invalid("refl needs a and b"));
                };
                for s in [a, b] {
                    ws.ring.parse(s).map_err(algebra(format!("task {id}")))?;
                }
                match task.exponents {
                    Some([lo, hi]) if lo >= 1 && lo <= hi => {}
                    _ => {
                        return Err(invalid(
                            "refl needs exponents = [lo, hi] with 1 <= lo <= hi",
                        ))
                    }
                }
                continue;
            }
            let Some(name) = &task.module else {
                return Err(invalid("missing module"));
            };
            if !self.module.contains_key(name) {
                return Err(ProblemError::UnresolvedModule {
                    task: id,
                    name: name.clone(),
                });
            }
            match task.n_range {
                Some([lo, hi]) if lo <= hi => {}
                _ => return Err(invalid("n_range must be [lo, hi] with lo <= hi")),
            }
            match task.kind {
                TaskKind::Tor if task.i.is_none_or(|i| i == 0) => {
                    return Err(invalid("tor needs i >= 1"))
                }
                TaskKind::LocalCohomology if task.k.is_none_or(|k| k == 0) => {
                    return Err(invalid("local_cohomology needs k >= 1"))
                }
                TaskKind::HkEstimate if task.n_range.is_some_and(|[lo, hi]| lo != 1 || hi < 2) => {
                    return Err(invalid(
                        "hk_estimate needs n_range = [1, n_max] with n_max >= 2",
                    ))
                }
                _ => {}
            }
            if let Some(fit) = &task.fit {
                if !matches!(task.kind, TaskKind::Fhk | TaskKind::HkEstimate) {
                    return Err(invalid("fit applies to fhk and hk_estimate tasks"));
                }
                if let Some(cf) = &fit.closed_form {
                    genhk::fit::ClosedForm::parse(cf).map_err(algebra(format!("task {id}")))?;
                }
                if fit.max_period == Some(0) {
                    return Err(invalid("max_period must be positive"));
                }
            }
        }
        Ok(())
    }
}

/// The ring and module constructors of a document.
pub struct Workspace<'a> {
    doc: &'a ProblemDocument,
    pub ring: Arc<PolyRing>,
    pub base: Arc<QuotientRing>,
}

impl<'a> Workspace<'a> {
    pub fn new(doc: &'a ProblemDocument, guards: Guards) -> Result<Self, ProblemError> {
        let r = &doc.ring;
        let vars: Vec<&str> = r.vars.iter().map(String::as_str).collect();
        let kind = if r.weights.is_some() {
            OrderKind::WeightedGrevLex
        } else {
            OrderKind::GrevLex
        };
        let ring = PolyRing::with_order(r.p, &vars, r.weights.clone(), kind)
            .map_err(algebra("ring"))?
            .with_guards(guards);
        let gens = r
            .quotient
            .iter()
            .map(|g| ring.parse(g))
            .collect::<Result<Vec<_>, _>>()
            .map_err(algebra("ring quotient"))?;
        let base = if gens.is_empty() {
            QuotientRing::polynomial(ring.clone())
        } else {
            QuotientRing::new(ring.clone(), gens).map_err(algebra("ring quotient"))?
        };
        Ok(Workspace { doc, ring, base })
    }

    /// Build a named module from scratch (no sharing).
    pub fn build_module(&self, name: &str) -> Result<PresentedModule, Error> {
        let spec = self
            .doc
            .module
            .get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown module {name}")))?;
        let polys = |gens: &[String]| {
            gens.iter()
                .map(|g| self.ring.parse(g))
                .collect::<Result<Vec<_>, _>>()
        };
        if let Some(g) = &spec.cyclic {
            return PresentedModule::cyclic(self.base.clone(), &polys(g)?);
        }
        if let Some(g) = &spec.ideal {
            return PresentedModule::ideal_module(self.base.clone(), &polys(g)?);
        }
        if let Some(rows) = &spec.matrix {
            return PresentedModule::new(self.base.clone(), Matrix::parse(&self.ring, rows)?);
        }
        let target = spec.syzygy.as_deref().expect("validated");
        self.build_module(target)?.syzygy_module()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[ring]
p = 2
vars = ["x", "y", "z"]
quotient = ["x^3+y^3+z^3"]

[module.M]
cyclic = ["x", "y+z"]

[[task]]
kind = "fhk"
module = "M"
n_range = [1, 3]
"#;

    #[test]
    fn minimal_document_parses() {
        let doc = parse_problem(MINIMAL).unwrap();
        assert_eq!(doc.tasks.len(), 1);
        assert_eq!(doc.task_id(0), "t1");
        assert_eq!(parse_problem(&doc.to_toml()).unwrap(), doc);
    }

    #[test]
    fn undefined_module_is_named() {
        let text = MINIMAL.replace("module = \"M\"", "module = \"N\"");
        let err = parse_problem(&text).unwrap_err();
        assert!(err.to_string().contains("\"N\""), "{err}");
    }

    #[test]
    fn unknown_keys_rejected_with_position() {
        let text = MINIMAL.replace("n_range", "n_rnage");
        match parse_problem(&text).unwrap_err() {
            ProblemError::Syntax { line, .. } => assert!(line > 0),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn bad_prime_and_bad_polynomial() {
        let text = MINIMAL.replace("p = 2", "p = 4");
        assert!(matches!(
            parse_problem(&text),
            Err(ProblemError::InvalidPrime(4))
        ));
        let text = MINIMAL.replace("\"y+z\"", "\"y+w\"");
        assert!(matches!(
            parse_problem(&text),
            Err(ProblemError::Algebra { .. })
        ));
    }

    #[test]
    fn syzygy_cycles_rejected() {
        let text = format!("{MINIMAL}\n[module.A]\nsyzygy = \"B\"\n\n[module.B]\nsyzygy = \"A\"\n");
        assert!(matches!(
            parse_problem(&text),
            Err(ProblemError::SyzygyCycle(_))
        ));
    }

    #[test]
    fn empty_range_rejected() {
        let text = MINIMAL.replace("[1, 3]", "[3, 1]");
        assert!(matches!(
            parse_problem(&text),
            Err(ProblemError::Invalid(_))
        ));
    }
}
