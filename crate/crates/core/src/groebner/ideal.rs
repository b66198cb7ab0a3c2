//! Ideals of `P`, as rank-one submodules with a polynomial-level API.

use std::sync::Arc;

use once_cell::sync::OnceCell;

use super::engine::{self, Arith, Term, TermOrder, Vector};
use super::submodule::{poly_in_component, Submodule};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{same_ring, Polynomial};
use crate::ring::PolyRing;

#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
    module: Submodule,
    gb: OnceCell<Vec<Polynomial>>,
}

fn to_poly(ring: &Arc<PolyRing>, v: &Vector) -> Polynomial {
    Polynomial::from_sorted(
        ring.clone(),
        v.terms().iter().map(|&(t, c)| (t.mono, c)).collect(),
    )
}

impl Ideal {
    pub fn new(ring: Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Self> {
        if gens.iter().any(|g| !same_ring(g.ring(), &ring)) {
            return Err(Error::RingMismatch);
        }
        let vecs = gens.iter().map(|g| poly_in_component(g, 0)).collect();
        let module = Submodule::new(ring.clone(), 1, vecs)?;
        Ok(Ideal {
            ring,
            gens,
            module,
            gb: OnceCell::new(),
        })
    }

    pub fn parse(ring: &Arc<PolyRing>, gens: &[&str]) -> Result<Self> {
        Ideal::new(ring.clone(), ring.parse_all(gens)?)
    }

    pub fn zero(ring: Arc<PolyRing>) -> Self {
        Ideal::new(ring, Vec::new()).expect("empty generator list")
    }

    pub fn unit(ring: Arc<PolyRing>) -> Self {
        let one = ring.one();
        Ideal::new(ring, vec![one]).expect("same ring")
    }

    /// The maximal ideal at the origin, `(x_1, ..., x_v)`.
    pub fn maximal(ring: Arc<PolyRing>) -> Self {
        let vars = ring.vars();
        Ideal::new(ring, vars).expect("same ring")
    }

    fn from_module(ring: Arc<PolyRing>, module: Submodule) -> Self {
        let gens = module
            .generators()
            .iter()
            .map(|v| to_poly(&ring, v))
            .collect();
        Ideal {
            ring,
            gens,
            module,
            gb: OnceCell::new(),
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn as_submodule(&self) -> &Submodule {
        &self.module
    }

    /// Reduced Gröbner basis under the ring's order, sorted by increasing
    /// leading monomial. Every element is monic.
    pub fn groebner_basis(&self) -> Result<&[Polynomial]> {
        self.gb
            .get_or_try_init(|| {
                Ok(self
                    .module
                    .groebner_basis()?
                    .iter()
                    .map(|v| to_poly(&self.ring, v))
                    .collect())
            })
            .map(|v| v.as_slice())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let nf = self.module.normal_form(&poly_in_component(f, 0))?;
        Ok(to_poly(&self.ring, &nf))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.module.contains_module(&other.module)
    }

    pub fn same_ideal(&self, other: &Ideal) -> Result<bool> {
        self.module.same_as(&other.module)
    }

    pub fn is_unit(&self) -> Result<bool> {
        self.module.is_everything()
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.ring.clone(), gens)
    }

    /// `I^[q]`: generated by `g^q` over the given generators.
    pub fn bracket_power(&self, q: u64) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.frobenius_power(q))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(self.ring.clone(), gens)
    }

    /// `(g^e)` over the given generators, for any exponent `e`.
    pub fn generator_power(&self, e: u64) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.pow(e))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(self.ring.clone(), gens)
    }

    /// `I ∩ J`, eliminating `t` from `t I + (1 - t) J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let n = self.ring.nvars();
        let order = TermOrder::eliminating(self.ring.order().with_extra_var(), n);
        let field = self.ring.field();
        let ar = Arith::new(field, &order);
        let t = Monomial::var(n);
        let lift = |f: &Polynomial, m: &Monomial, c: u32| -> Vec<(Term, u32)> {
            f.terms()
                .iter()
                .map(|&(mono, k)| {
                    (
                        Term {
                            mono: mono.mul(m),
                            comp: 0,
                        },
                        field.mul(k, c),
                    )
                })
                .collect()
        };
        let mut gens = Vec::new();
        for f in self.gens.iter().filter(|f| !f.is_zero()) {
            gens.push(ar.normalize(lift(f, &t, 1)));
        }
        for g in other.gens.iter().filter(|g| !g.is_zero()) {
            let mut terms = lift(g, &Monomial::ONE, 1);
            terms.extend(lift(g, &t, field.neg(1)));
            gens.push(ar.normalize(terms));
        }
        let gb = engine::groebner(&gens, field, &order, true, self.ring.guards().max_pairs)?;
        let polys: Vec<Polynomial> = gb
            .iter()
            .filter(|v| v.terms()[0].0.mono.exponent(n) == 0)
            .map(|v| {
                Polynomial::from_terms(
                    self.ring.clone(),
                    v.terms().iter().map(|&(t, c)| (t.mono, c)).collect(),
                )
            })
            .collect();
        Ideal::new(self.ring.clone(), polys)
    }

    /// `(I : f) = (I ∩ (f)) / f`.
    pub fn colon(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let principal = Ideal::new(self.ring.clone(), vec![f.clone()])?;
        let inter = self.intersect(&principal)?;
        let gens = inter
            .gens
            .iter()
            .map(|g| g.exact_div(f))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(self.ring.clone(), gens)
    }

    /// `(I : J) = ⋂_j (I : g_j)`.
    pub fn colon_ideal(&self, other: &Ideal) -> Result<Ideal> {
        let gens: Vec<&Polynomial> = other.gens.iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Ok(Ideal::unit(self.ring.clone()));
        }
        let mut acc = self.colon(gens[0])?;
        for g in &gens[1..] {
            acc = acc.intersect(&self.colon(g)?)?;
        }
        Ok(acc)
    }

    /// `(I : J^∞)` as the intersection of the element saturations.
    pub fn saturation(&self, other: &Ideal) -> Result<Ideal> {
        let module = self.module.saturation(other.generators())?;
        Ok(Ideal::from_module(self.ring.clone(), module))
    }

    /// `(I : J^∞)` by iterated colon until stable (guarded).
    pub fn saturation_iterated(&self, other: &Ideal) -> Result<Ideal> {
        let limit = self.ring.guards().max_saturation_steps;
        let mut current = self.clone();
        for _ in 0..limit {
            let next = current.colon_ideal(other)?;
            if next.same_ideal(&current)? {
                return Ok(current);
            }
            current = next;
        }
        Err(Error::GuardExceeded {
            kind: "saturation",
            limit,
        })
    }

    /// Krull dimension of `P / I`: the largest set of variables containing
    /// the support of no leading monomial.
    pub fn krull_dim(&self) -> Result<usize> {
        if self.is_unit()? {
            return Err(Error::UnitIdeal);
        }
        let n = self.ring.nvars();
        let masks: Vec<u32> = self
            .groebner_basis()?
            .iter()
            .map(|g| g.terms()[0].0.support_mask())
            .collect();
        let mut best = 0;
        for set in 0u32..(1 << n) {
            let size = set.count_ones() as usize;
            if size > best && masks.iter().all(|&m| m & !set != 0) {
                best = size;
            }
        }
        Ok(best)
    }

    /// `dim_k P / I`, failing when infinite.
    pub fn quotient_dimension(&self) -> Result<u64> {
        self.module.quotient_dimension()
    }
}
