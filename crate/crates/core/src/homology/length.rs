//! Lengths of `m`-torsion subquotients of free modules, `m = (x_1..x_v)`.
//!
//! Everything is measured locally at the origin: `Γ_m(P^r/K) = (K : m^∞)/K`
//! is supported only at `m`, so its `k`-dimension is the length over the
//! localization (and over the completion).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{kernel_modulo, poly_in_component, Submodule, Vector};
use crate::ring::PolyRing;

/// A length together with what is known about the rest of the support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LengthResult {
    /// `None` when the local length is infinite.
    pub length: Option<u64>,
    /// The global model has support away from the origin (not counted).
    pub non_local_support: bool,
}

impl LengthResult {
    pub fn finite(length: u64, non_local_support: bool) -> Self {
        LengthResult {
            length: Some(length),
            non_local_support,
        }
    }

    pub fn infinite() -> Self {
        LengthResult {
            length: None,
            non_local_support: true,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.length.is_some()
    }

    pub fn value(&self) -> Result<u64> {
        self.length.ok_or(Error::InfiniteLength)
    }
}

fn graded_in_degree_zero(ring: &PolyRing, gens: &[Vector]) -> bool {
    let w = ring.weights();
    gens.iter().all(|g| {
        let mut degs = g.terms().iter().map(|(t, _)| t.mono.weighted_degree(w));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    })
}

/// `ℓ(Γ_m(P^r / rel))`. Modules of finite length that are visibly graded
/// are counted directly; everything else goes through saturation.
pub fn gamma_length(rel: &Submodule) -> Result<LengthResult> {
    if rel.is_zero_dimensional()? && graded_in_degree_zero(rel.ring(), rel.generators()) {
        return Ok(LengthResult::finite(rel.quotient_dimension()?, false));
    }
    gamma_length_saturated(rel)
}

/// `ℓ((rel : m^∞) / rel)`, always through the saturation.
pub fn gamma_length_saturated(rel: &Submodule) -> Result<LengthResult> {
    let sat = rel.saturate_at_origin()?;
    let non_local = !sat.is_everything()?;
    let len = torsion_subquotient(rel, &sat)?;
    Ok(LengthResult::finite(len, non_local))
}

/// `dim_k L/K`, presented as the cokernel of the kernel of `P^s -> L/K`
/// (`s` = number of basis elements of `L`).
fn torsion_subquotient(k: &Submodule, l: &Submodule) -> Result<u64> {
    let images = l.groebner_basis()?.to_vec();
    if images.is_empty() {
        return Ok(0);
    }
    let ker = kernel_modulo(k.ring(), k.rank(), &images, k.generators())?;
    ker.quotient_dimension()
}

/// `ℓ(L/K)` for `K ⊆ L ⊆ P^r` with `L/K` supported at the origin.
pub fn subquotient_length(k: &Submodule, l: &Submodule) -> Result<u64> {
    if k.rank() != l.rank() {
        return Err(Error::Shape(format!("ranks {} and {}", k.rank(), l.rank())));
    }
    if !l.contains_module(k)? {
        return Err(Error::NotContained);
    }
    let images = l.groebner_basis()?.to_vec();
    if images.is_empty() {
        return Ok(0);
    }
    let ker = kernel_modulo(k.ring(), k.rank(), &images, k.generators())?;
    if !ker.is_zero_dimensional()? {
        return Err(Error::NotTorsion);
    }
    if !graded_in_degree_zero(k.ring(), ker.generators())
        && !ker.saturate_at_origin()?.is_everything()?
    {
        // finite-dimensional, but with points away from the origin
        return Err(Error::NotTorsion);
    }
    ker.quotient_dimension()
}

/// Length of `(P^r / rel)` localized at the origin, or infinite.
///
/// After removing `Γ_m`, the rest vanishes locally iff every basis vector
/// is killed by an element outside `m`, i.e. iff each `(sat : e_i)` has a
/// basis element with nonzero constant term.
pub fn local_length(rel: &Submodule) -> Result<LengthResult> {
    let sat = rel.saturate_at_origin()?;
    let ring: &Arc<PolyRing> = rel.ring();
    let mut non_local = false;
    if !sat.is_everything()? {
        non_local = true;
        for c in 0..rel.rank() {
            let e = poly_in_component(&ring.one(), c);
            let colon = kernel_modulo(ring, rel.rank(), &[e], sat.generators())?;
            let unit = colon
                .groebner_basis()?
                .iter()
                .any(|g| g.terms().last().is_some_and(|(t, _)| t.mono.is_one()));
            if !unit {
                return Ok(LengthResult::infinite());
            }
        }
    }
    Ok(LengthResult::finite(
        torsion_subquotient(rel, &sat)?,
        non_local,
    ))
}
