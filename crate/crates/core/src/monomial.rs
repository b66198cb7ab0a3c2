//! Dense exponent vectors and global monomial orders.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on the number of ring variables (one slot is reserved for the
/// auxiliary variable used by elimination).
pub const MAX_VARS: usize = 12;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
    };

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables(exps.len()));
        }
        let mut m = Monomial::ONE;
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u16::try_from(e).map_err(|_| Error::ExponentOverflow)?;
        }
        Ok(m)
    }

    /// The monomial `x_i`.
    pub fn var(i: usize) -> Self {
        let mut m = Monomial::ONE;
        m.exps[i] = 1;
        m
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    #[inline]
    pub fn exponents(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    pub fn set_exponent(&mut self, i: usize, e: u32) -> Result<()> {
        self.exps[i] = u16::try_from(e).map_err(|_| Error::ExponentOverflow)?;
        Ok(())
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    #[inline]
    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        weights
            .iter()
            .zip(self.exps.iter())
            .map(|(&w, &e)| w * e as u32)
            .sum()
    }

    /// Product; panics on exponent overflow (exponents are `u16`).
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, &b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_add(b).expect("monomial exponent overflow");
        }
        out
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut out = *self;
        for (a, &b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_add(b).ok_or(Error::ExponentOverflow)?;
        }
        Ok(out)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other` divides `self`.
    #[inline]
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, &b) in out.exps.iter_mut().zip(other.exps.iter()) {
            debug_assert!(*a >= b);
            *a -= b;
        }
        out
    }

    #[inline]
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, &b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = (*a).max(b);
        }
        out
    }

    #[inline]
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Every exponent multiplied by `q`.
    pub fn scale(&self, q: u64) -> Result<Monomial> {
        let mut out = *self;
        for a in out.exps.iter_mut() {
            let v = (*a as u64).checked_mul(q).ok_or(Error::ExponentOverflow)?;
            *a = u16::try_from(v).map_err(|_| Error::ExponentOverflow)?;
        }
        Ok(out)
    }

    /// Bit `i` set iff `x_i` occurs; used to reject divisibility tests early.
    #[inline]
    pub fn support_mask(&self) -> u32 {
        let mut mask = 0u32;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                mask |= 1 << i;
            }
        }
        mask
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e > 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    GrevLex,
    Lex,
    WeightedGrevLex,
}

/// A global monomial order on `nvars` variables. Variables are ranked by
/// declaration order, so `x_0 > x_1 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    weights: Vec<u32>,
}

impl MonomialOrder {
    pub fn grevlex(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::GrevLex,
            weights: vec![1; nvars],
        }
    }

    pub fn lex(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            weights: vec![1; nvars],
        }
    }

    pub fn weighted_grevlex(weights: Vec<u32>) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        Ok(MonomialOrder {
            kind: OrderKind::WeightedGrevLex,
            weights,
        })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Same order with one more variable (weight 1) appended last.
    pub(crate) fn with_extra_var(&self) -> Self {
        let mut weights = self.weights.clone();
        weights.push(1);
        MonomialOrder {
            kind: self.kind,
            weights,
        }
    }

    #[inline]
    pub fn degree(&self, m: &Monomial) -> u32 {
        m.weighted_degree(&self.weights)
    }

    #[inline]
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let n = self.weights.len();
        match self.kind {
            OrderKind::Lex => a.exps[..n].cmp(&b.exps[..n]),
            OrderKind::GrevLex | OrderKind::WeightedGrevLex => {
                let da = self.degree(a);
                let db = self.degree(b);
                if da != db {
                    return da.cmp(&db);
                }
                for i in (0..n).rev() {
                    if a.exps[i] != b.exps[i] {
                        return b.exps[i].cmp(&a.exps[i]);
                    }
                }
                Ordering::Equal
            }
        }
    }
}
