//! The ambient polynomial ring P = F_p[x_1..x_v].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::{MonomialOrder, OrderKind, MAX_VARS};
use crate::poly::Polynomial;

/// Resource limits that abort runaway computations instead of hanging.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Guards {
    /// Maximum number of S-pairs processed by a single Gröbner computation.
    pub max_pairs: usize,
    /// Maximum number of colon steps in iterated saturation.
    pub max_saturation_steps: usize,
    /// Maximum ambient dimension of one truncated piece in the oracle;
    /// building a piece holds a dense square of this size.
    pub oracle_max_coords: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_pairs: 500_000,
            max_saturation_steps: 64,
            oracle_max_coords: 12_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: PrimeField,
    vars: Vec<String>,
    weights: Vec<u32>,
    order: MonomialOrder,
    guards: Guards,
}

impl PolyRing {
    /// Graded reverse lexicographic ring with unit weights.
    pub fn new(p: u64, vars: &[&str]) -> Result<Arc<Self>> {
        Self::with_order(p, vars, None, OrderKind::GrevLex)
    }

    /// `weights` grade the ring (Hilbert functions, oracle truncation); they
    /// enter the monomial order only for [`OrderKind::WeightedGrevLex`].
    pub fn with_order(
        p: u64,
        vars: &[&str],
        weights: Option<Vec<u32>>,
        kind: OrderKind,
    ) -> Result<Arc<Self>> {
        let field = PrimeField::new(p)?;
        // one slot stays free for the elimination variable
        if vars.is_empty() || vars.len() >= MAX_VARS {
            return Err(Error::TooManyVariables(vars.len()));
        }
        let mut names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        for (i, v) in names.iter().enumerate() {
            let ok = v
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidArgument(format!("bad variable name {v:?}")));
            }
            if names[..i].contains(v) {
                return Err(Error::InvalidArgument(format!("duplicate variable {v}")));
            }
        }
        let weights = weights.unwrap_or_else(|| vec![1; vars.len()]);
        if weights.len() != vars.len() || weights.contains(&0) {
            return Err(Error::InvalidArgument(
                "one positive weight per variable required".into(),
            ));
        }
        let order = match kind {
            OrderKind::GrevLex => MonomialOrder::grevlex(vars.len()),
            OrderKind::Lex => MonomialOrder::lex(vars.len()),
            OrderKind::WeightedGrevLex => MonomialOrder::weighted_grevlex(weights.clone())?,
        };
        names.shrink_to_fit();
        Ok(Arc::new(PolyRing {
            field,
            vars: names,
            weights,
            order,
            guards: Guards::default(),
        }))
    }

    /// Copy of this ring with different guards.
    pub fn with_guards(&self, guards: Guards) -> Arc<Self> {
        Arc::new(PolyRing {
            guards,
            ..self.clone()
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn guards(&self) -> Guards {
        self.guards
    }

    /// `q` if it is `p^n` for some `n >= 0`, returning `n`.
    pub fn frobenius_exponent(&self, q: u64) -> Result<u32> {
        let p = self.characteristic() as u64;
        let mut n = 0;
        let mut acc = 1u64;
        while acc < q {
            acc = acc.saturating_mul(p);
            n += 1;
        }
        if acc == q {
            Ok(n)
        } else {
            Err(Error::NotPowerOfP { q, p: p as u32 })
        }
    }

    pub fn q_of(&self, n: u32) -> Result<u64> {
        (self.characteristic() as u64)
            .checked_pow(n)
            .ok_or(Error::ExponentOverflow)
    }

    pub fn zero(self: &Arc<Self>) -> Polynomial {
        Polynomial::zero(self.clone())
    }

    pub fn one(self: &Arc<Self>) -> Polynomial {
        Polynomial::constant(self.clone(), 1)
    }

    pub fn var(self: &Arc<Self>, i: usize) -> Polynomial {
        Polynomial::variable(self.clone(), i)
    }

    pub fn vars(self: &Arc<Self>) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<Polynomial> {
        crate::poly::parse(self, text)
    }

    pub fn parse_all(self: &Arc<Self>, texts: &[&str]) -> Result<Vec<Polynomial>> {
        texts.iter().map(|t| self.parse(t)).collect()
    }
}
