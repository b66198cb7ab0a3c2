//! `R = P / I_R`, modelled by carrying `I_R` alongside the ambient ring.

use std::sync::Arc;

use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::groebner::{poly_in_component, Ideal, Vector};
use crate::poly::{same_ring, Polynomial};
use crate::ring::PolyRing;

#[derive(Debug)]
pub struct QuotientRing {
    ambient: Arc<PolyRing>,
    ideal: Ideal,
    dim: OnceCell<usize>,
}

impl QuotientRing {
    pub fn new(ambient: Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Arc<Self>> {
        let ideal = Ideal::new(ambient.clone(), gens)?;
        if ideal.is_unit()? {
            return Err(Error::UnitIdeal);
        }
        Ok(Arc::new(QuotientRing {
            ambient,
            ideal,
            dim: OnceCell::new(),
        }))
    }

    /// The polynomial ring itself (`I_R = 0`).
    pub fn polynomial(ambient: Arc<PolyRing>) -> Arc<Self> {
        Arc::new(QuotientRing {
            ideal: Ideal::zero(ambient.clone()),
            dim: OnceCell::with_value(ambient.nvars()),
            ambient,
        })
    }

    pub fn parse(ambient: Arc<PolyRing>, gens: &[&str]) -> Result<Arc<Self>> {
        let gens = ambient.parse_all(gens)?;
        QuotientRing::new(ambient, gens)
    }

    pub fn ambient(&self) -> &Arc<PolyRing> {
        &self.ambient
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// Reduced basis of `I_R`; empty for a polynomial ring.
    pub fn relations(&self) -> Result<&[Polynomial]> {
        self.ideal.groebner_basis()
    }

    pub fn krull_dim(&self) -> Result<usize> {
        self.dim.get_or_try_init(|| self.ideal.krull_dim()).copied()
    }

    /// Generator of `I_R` when it is principal and nonzero.
    pub fn hypersurface_equation(&self) -> Result<Option<Polynomial>> {
        let gb = self.relations()?;
        Ok(match gb {
            [f] => Some(f.clone()),
            _ => None,
        })
    }

    /// `I_R * P^rank` as generators.
    pub fn block(&self, rank: usize) -> Result<Vec<Vector>> {
        let gb = self.relations()?;
        let mut out = Vec::with_capacity(rank * gb.len());
        for c in 0..rank {
            for f in gb {
                out.push(poly_in_component(f, c));
            }
        }
        Ok(out)
    }

    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        if !same_ring(f.ring(), &self.ambient) {
            return Err(Error::RingMismatch);
        }
        self.ideal.normal_form(f)
    }

    pub fn is_zero(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermat_is_a_surface() {
        let p = PolyRing::new(2, &["x", "y", "z"]).unwrap();
        let r = QuotientRing::parse(p, &["x^3+y^3+z^3"]).unwrap();
        assert_eq!(r.krull_dim().unwrap(), 2);
        assert!(r.hypersurface_equation().unwrap().is_some());
        assert_eq!(r.block(2).unwrap().len(), 2);
    }

    #[test]
    fn unit_ideal_rejected() {
        let p = PolyRing::new(3, &["x"]).unwrap();
        assert!(matches!(
            QuotientRing::parse(p, &["x", "x+1"]),
            Err(Error::UnitIdeal)
        ));
    }
}
