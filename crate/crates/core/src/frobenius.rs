//! Frobenius twists and the invariants built on them.
//!
//! `F^n` acts on a presentation by raising every matrix entry to the power
//! `q = p^n`; `I_R` is carried along untouched. `Tor_i(M, F^n_* R)` is read
//! off the twisted resolution, and `H^k_m` is reached through local duality
//! over the ambient polynomial ring.

use std::sync::Arc;

use num::BigRational;

use crate::error::{Error, Result};
use crate::fit::{best_fit, leading_ratio, FitReport, RatioReport, SampleSeries};
use crate::groebner::Ideal;
use crate::homology::{
    homology_presentation, local_length, resolve, LengthResult, Matrix, PresentedModule,
    QuotientRing,
};
use crate::poly::Polynomial;

/// `F^n(M)`: entry-wise `q`-th powers of the relation matrix.
pub fn frobenius_module(m: &PresentedModule, n: u32) -> Result<PresentedModule> {
    if n == 0 {
        return Ok(m.clone());
    }
    let q = m.base().ambient().q_of(n)?;
    PresentedModule::new(m.base().clone(), m.matrix().frobenius(q)?)
}

/// `fhk_M(n) = ℓ(H⁰_m(F^n(M)))`.
pub fn fhk(m: &PresentedModule, n: u32) -> Result<u64> {
    frobenius_module(m, n)?.gamma_m_length()?.value()
}

/// `ℓ(Γ_m(Tor_i(M, F^n_* R)))` as homology of the twisted resolution.
/// The resolution is cached on `m`, so repeated calls only twist.
pub fn tor_frobenius_length(m: &PresentedModule, i: usize, n: u32) -> Result<LengthResult> {
    if i == 0 {
        return Err(Error::InvalidArgument(
            "Tor index must be at least 1".into(),
        ));
    }
    let q = m.base().ambient().q_of(n)?;
    m.resolution(i + 1)?.frobenius(q)?.homology_length(i)
}

/// `ℓ(H^k_m(F^n(M)))`, via `Ext^{D-k}_P(F^n(M), P)` with `D = dim P`.
pub fn local_cohomology_length(m: &PresentedModule, k: usize, n: u32) -> Result<LengthResult> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "use the H^0 length (fhk) for k = 0".into(),
        ));
    }
    let twisted = frobenius_module(m, n)?;
    local_cohomology_of(&twisted, k)
}

fn local_cohomology_of(m: &PresentedModule, k: usize) -> Result<LengthResult> {
    let ring = m.base().ambient();
    let dim = ring.nvars();
    if k > dim || m.rank() == 0 {
        return Ok(LengthResult::finite(0, false));
    }
    let j = dim - k;
    let poly = QuotientRing::polynomial(ring.clone());
    // relations over P include I_R
    let pres = Matrix::from_columns(ring.clone(), m.rank(), &m.relations().generator_columns())?;
    let res = resolve(&poly, &pres, j + 1)?;
    let rows_of = |i: usize| {
        res.map(i).map(|d| {
            (0..d.rows())
                .map(|a| crate::groebner::vector_from_polys(&d.row(a)))
                .collect::<Vec<_>>()
        })
    };
    let out = rows_of(j + 1);
    let incoming = if j == 0 { None } else { rows_of(j) };
    let rel = homology_presentation(
        &poly,
        res.rank(j),
        out.as_ref().map(|v| (res.rank(j + 1), v.as_slice())),
        incoming.as_deref(),
    )?;
    match rel {
        None => Ok(LengthResult::finite(0, false)),
        Some(rel) => local_length(&rel),
    }
}

/// Lengths entering Hochster's theta pairing with `F^n_* R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThetaValue {
    pub n: u32,
    pub q: u64,
    pub dim: usize,
    pub tor_even: u64,
    pub tor_odd: u64,
    pub theta: i64,
}

/// `θ = ℓ(Tor_{2d}) − ℓ(Tor_{2d+1})` over a hypersurface of dimension `d`.
pub fn theta(m: &PresentedModule, n: u32) -> Result<ThetaValue> {
    let base = m.base();
    if base.hypersurface_equation()?.is_none() {
        return Err(Error::NotHypersurface);
    }
    let d = base.krull_dim()?;
    let q = base.ambient().q_of(n)?;
    let twisted = m.resolution(2 * d + 2)?.frobenius(q)?;
    let local = |i: usize| twisted.homology_local_length(i)?.value();
    let tor_even = local(2 * d)?;
    let tor_odd = local(2 * d + 1)?;
    Ok(ThetaValue {
        n,
        q,
        dim: d,
        tor_even,
        tor_odd,
        theta: tor_even as i64 - tor_odd as i64,
    })
}

/// `((a^e) + I_R) : b^e`, the `e`-th symbolic power of `(a) : (b)` for a
/// reflexive ideal written that way.
pub fn symbolic_power(
    base: &QuotientRing,
    a: &Polynomial,
    b: &Polynomial,
    e: u64,
) -> Result<Ideal> {
    if base.is_zero(a)? || base.is_zero(b)? {
        return Err(Error::ZeroDivisor);
    }
    let mut gens = vec![a.pow(e)?];
    gens.extend(base.relations()?.iter().cloned());
    Ideal::new(base.ambient().clone(), gens)?.colon(&b.pow(e)?)
}

/// `(ℓ(H²_m(I^(e))), ℓ(H⁰_m(R/(a^e, b^e))))` for `I = (a) : (b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReflPair {
    pub exponent: u64,
    pub h2_symbolic: LengthResult,
    pub h0_bracket: u64,
}

impl ReflPair {
    pub fn difference(&self) -> Result<i64> {
        Ok(self.h2_symbolic.value()? as i64 - self.h0_bracket as i64)
    }
}

pub fn refl_pair(
    base: &Arc<QuotientRing>,
    a: &Polynomial,
    b: &Polynomial,
    e: u64,
) -> Result<ReflPair> {
    let sym = symbolic_power(base, a, b, e)?;
    let module = PresentedModule::ideal_module(base.clone(), sym.groebner_basis()?)?;
    let h2 = local_cohomology_of(&module, 2)?;
    let bracket = PresentedModule::cyclic(base.clone(), &[a.pow(e)?, b.pow(e)?])?;
    Ok(ReflPair {
        exponent: e,
        h2_symbolic: h2,
        h0_bracket: bracket.gamma_m_length()?.value()?,
    })
}

/// `fhk_M(n)` for `n = 1..=n_max` with its ratio trend and best exact fit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkEstimate {
    pub series: SampleSeries,
    pub ratios: RatioReport,
    pub fit: FitReport,
    /// Coefficient of `q^d` in the fitted form, when every residue class
    /// agrees on it.
    pub limit: Option<BigRational>,
}

impl HkEstimate {
    pub fn last_ratio(&self) -> &BigRational {
        self.ratios.ratios.last().expect("at least two samples")
    }
}

pub fn hk_estimate(m: &PresentedModule, n_max: u32, max_period: usize) -> Result<HkEstimate> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("need n_max >= 2".into()));
    }
    let d = m.base().krull_dim()?;
    let values = (1..=n_max)
        .map(|n| Ok((n, fhk(m, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let series = SampleSeries::from_values(m.base().ambient().characteristic(), d as u32, &values)?;
    let ratios = leading_ratio(&series)?;
    let fit = best_fit(&series, max_period)?;
    let limit = fit.form.as_ref().and_then(|f| f.coefficient_of(d));
    Ok(HkEstimate {
        series,
        ratios,
        fit,
        limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRing;

    fn fermat(p: u64) -> Arc<QuotientRing> {
        let r = PolyRing::new(p, &["x", "y", "z"]).unwrap();
        QuotientRing::parse(r, &["x^3+y^3+z^3"]).unwrap()
    }

    #[test]
    fn twist_of_cyclic_is_bracket_power() {
        let base = fermat(2);
        let m = PresentedModule::parse_cyclic(base.clone(), &["x", "y+z"]).unwrap();
        let f = frobenius_module(&m, 2).unwrap();
        let direct = PresentedModule::parse_cyclic(base, &["x^4", "y^4+z^4"]).unwrap();
        assert!(f.same_presentation(&direct).unwrap());
        assert!(frobenius_module(&m, 0)
            .unwrap()
            .same_presentation(&m)
            .unwrap());
    }

    #[test]
    fn twists_compose() {
        let base = fermat(2);
        let m = PresentedModule::parse_cyclic(base, &["x", "y+z"]).unwrap();
        let a = frobenius_module(&frobenius_module(&m, 1).unwrap(), 1).unwrap();
        let b = frobenius_module(&m, 2).unwrap();
        assert!(a.same_presentation(&b).unwrap());
    }

    #[test]
    fn fermat_cubic_small_values() {
        let base = fermat(2);
        let m = PresentedModule::parse_cyclic(base, &["x", "y+z"]).unwrap();
        assert_eq!(fhk(&m, 1).unwrap(), 4);
        assert_eq!(fhk(&m, 2).unwrap(), 20);
    }

    #[test]
    fn free_modules_have_trivial_invariants() {
        let base = fermat(2);
        let m = PresentedModule::free(base, 1).unwrap();
        assert_eq!(fhk(&m, 1).unwrap(), 0);
        assert_eq!(tor_frobenius_length(&m, 1, 1).unwrap().length, Some(0));
        assert_eq!(theta(&m, 1).unwrap().theta, 0);
    }

    #[test]
    fn regular_element_has_no_higher_tor() {
        let base = fermat(2);
        let m = PresentedModule::parse_cyclic(base, &["x"]).unwrap();
        for i in 1..=2 {
            for n in 1..=2 {
                assert_eq!(tor_frobenius_length(&m, i, n).unwrap().length, Some(0));
            }
        }
    }

    #[test]
    fn tor_one_matches_syzygy_fhk() {
        let base = fermat(2);
        let m = PresentedModule::parse_cyclic(base, &["x", "y+z"]).unwrap();
        let syz = m.syzygy_module().unwrap();
        let tor = tor_frobenius_length(&m, 1, 1).unwrap().value().unwrap();
        assert_eq!(tor, fhk(&syz, 1).unwrap());
    }

    #[test]
    fn local_cohomology_of_polynomial_ring_vanishes_below_top() {
        let r = PolyRing::new(3, &["x", "y"]).unwrap();
        let base = QuotientRing::polynomial(r);
        let m = PresentedModule::free(base, 1).unwrap();
        assert_eq!(local_cohomology_length(&m, 1, 1).unwrap().length, Some(0));
        // H^2_m(P) is not finitely generated, let alone of finite length
        assert!(!local_cohomology_length(&m, 2, 0).unwrap().is_finite());
    }

    #[test]
    fn artinian_twist_has_no_higher_cohomology() {
        let r = PolyRing::new(3, &["x", "y"]).unwrap();
        let base = QuotientRing::polynomial(r);
        let m = PresentedModule::parse_cyclic(base, &["x", "y"]).unwrap();
        for k in 1..=2 {
            assert_eq!(local_cohomology_length(&m, k, 1).unwrap().length, Some(0));
        }
    }

    #[test]
    fn h1_of_curve_with_embedded_point() {
        // P/(x^2, xy) in two variables: H^1_m is the top cohomology of a
        // one-dimensional module, which is not of finite length
        let r = PolyRing::new(3, &["x", "y"]).unwrap();
        let base = QuotientRing::polynomial(r);
        let m = PresentedModule::parse_cyclic(base, &["x^2", "x*y"]).unwrap();
        assert!(!local_cohomology_length(&m, 1, 0).unwrap().is_finite());
    }

    #[test]
    fn regular_ring_estimate_is_one() {
        let r = PolyRing::new(3, &["x", "y"]).unwrap();
        let base = QuotientRing::polynomial(r);
        let m = PresentedModule::parse_cyclic(base, &["x", "y"]).unwrap();
        let est = hk_estimate(&m, 4, 2).unwrap();
        assert!(est
            .ratios
            .ratios
            .iter()
            .all(|r| *r == BigRational::from_integer(1.into())));
        assert_eq!(est.limit, Some(BigRational::from_integer(1.into())));
    }

    #[test]
    fn symbolic_power_of_quadric_ruling() {
        let r = PolyRing::new(5, &["x", "y", "u", "v"]).unwrap();
        let base = QuotientRing::parse(r.clone(), &["x*y-u*v"]).unwrap();
        let (a, b) = (r.parse("x").unwrap(), r.parse("v").unwrap());
        let i1 = symbolic_power(&base, &a, &b, 1).unwrap();
        let expect = Ideal::parse(&r, &["x", "u", "x*y-u*v"]).unwrap();
        assert!(i1.same_ideal(&expect).unwrap());
        let principal = symbolic_power(&base, &a, &r.one(), 3).unwrap();
        let cube = Ideal::parse(&r, &["x^3", "x*y-u*v"]).unwrap();
        assert!(principal.same_ideal(&cube).unwrap());
    }
}
