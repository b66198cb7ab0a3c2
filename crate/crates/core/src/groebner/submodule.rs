//! Submodules of free modules `P^r` with cached reduced Gröbner bases.
//!
//! The basis is taken under position-over-term extension of the ring order,
//! where component 0 is largest. That makes every prefix of components an
//! elimination block, which is what [`kernel_modulo`] relies on.

use std::sync::Arc;

use once_cell::sync::OnceCell;

use super::engine::{self, Arith, Term, TermOrder, Vector};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{same_ring, Polynomial};
use crate::ring::PolyRing;

#[derive(Clone, Debug)]
pub struct Submodule {
    ring: Arc<PolyRing>,
    rank: usize,
    gens: Vec<Vector>,
    gb: OnceCell<Vec<Vector>>,
}

pub(crate) fn pot_order(ring: &PolyRing) -> TermOrder {
    TermOrder::pot(ring.order().clone())
}

/// Column vector `entries` as an element of `P^r` (`r = entries.len()`).
pub fn vector_from_polys(entries: &[Polynomial]) -> Vector {
    let mut terms = Vec::new();
    for (c, f) in entries.iter().enumerate() {
        terms.extend(f.terms().iter().map(|&(m, k)| {
            (
                Term {
                    mono: m,
                    comp: c as u32,
                },
                k,
            )
        }));
    }
    // components ascend, and POT puts smaller components first
    Vector { terms }
}

pub fn vector_to_polys(ring: &Arc<PolyRing>, v: &Vector, rank: usize) -> Vec<Polynomial> {
    let mut parts: Vec<Vec<_>> = vec![Vec::new(); rank];
    for &(t, c) in v.terms() {
        parts[t.comp as usize].push((t.mono, c));
    }
    parts
        .into_iter()
        .map(|terms| Polynomial::from_terms(ring.clone(), terms))
        .collect()
}

/// `f * e_comp`.
pub fn poly_in_component(f: &Polynomial, comp: usize) -> Vector {
    Vector {
        terms: f
            .terms()
            .iter()
            .map(|&(m, c)| {
                (
                    Term {
                        mono: m,
                        comp: comp as u32,
                    },
                    c,
                )
            })
            .collect(),
    }
}

fn shift_components(v: &Vector, offset: i64) -> Vector {
    Vector {
        terms: v
            .terms
            .iter()
            .map(|&(t, c)| {
                (
                    Term {
                        mono: t.mono,
                        comp: (t.comp as i64 + offset) as u32,
                    },
                    c,
                )
            })
            .collect(),
    }
}

fn resort(ar: &Arith<'_>, v: &Vector) -> Vector {
    ar.normalize(v.terms.clone())
}

impl Submodule {
    pub fn new(ring: Arc<PolyRing>, rank: usize, gens: Vec<Vector>) -> Result<Self> {
        for g in &gens {
            if let Some(c) = g.max_component() {
                if c as usize >= rank {
                    return Err(Error::Shape(format!(
                        "generator uses component {c} in rank {rank}"
                    )));
                }
            }
        }
        Ok(Submodule {
            ring,
            rank,
            gens,
            gb: OnceCell::new(),
        })
    }

    /// `gb` must already be a reduced basis; it is put in canonical order.
    pub(crate) fn with_basis(ring: Arc<PolyRing>, rank: usize, mut gb: Vec<Vector>) -> Self {
        let order = pot_order(&ring);
        gb.sort_by(|a, b| order.compare(&a.terms[0].0, &b.terms[0].0));
        Submodule {
            ring,
            rank,
            gens: gb.clone(),
            gb: OnceCell::with_value(gb),
        }
    }

    pub fn zero(ring: Arc<PolyRing>, rank: usize) -> Self {
        Submodule::with_basis(ring, rank, Vec::new())
    }

    /// The whole free module `P^r`.
    pub fn free(ring: Arc<PolyRing>, rank: usize) -> Self {
        let gens = (0..rank)
            .map(|c| poly_in_component(&ring.one(), c))
            .collect();
        Submodule::with_basis(ring, rank, gens)
    }

    /// Generated by the given columns (each of length `rank`).
    pub fn from_columns(
        ring: Arc<PolyRing>,
        rank: usize,
        cols: &[Vec<Polynomial>],
    ) -> Result<Self> {
        let mut gens = Vec::with_capacity(cols.len());
        for col in cols {
            if col.len() != rank {
                return Err(Error::Shape(format!(
                    "column of length {} in rank {rank}",
                    col.len()
                )));
            }
            if col.iter().any(|f| !same_ring(f.ring(), &ring)) {
                return Err(Error::RingMismatch);
            }
            gens.push(vector_from_polys(col));
        }
        Submodule::new(ring, rank, gens)
    }

    /// `I * P^r` for an ideal given by generators.
    pub fn ideal_block(ring: Arc<PolyRing>, rank: usize, ideal_gens: &[Polynomial]) -> Self {
        let mut gens = Vec::new();
        for c in 0..rank {
            for f in ideal_gens {
                if !f.is_zero() {
                    gens.push(poly_in_component(f, c));
                }
            }
        }
        Submodule {
            ring,
            rank,
            gens,
            gb: OnceCell::new(),
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vector] {
        &self.gens
    }

    pub fn generator_columns(&self) -> Vec<Vec<Polynomial>> {
        self.gens
            .iter()
            .map(|g| vector_to_polys(&self.ring, g, self.rank))
            .collect()
    }

    pub(crate) fn order(&self) -> TermOrder {
        pot_order(&self.ring)
    }

    pub fn groebner_basis(&self) -> Result<&[Vector]> {
        self.gb
            .get_or_try_init(|| {
                engine::groebner(
                    &self.gens,
                    self.ring.field(),
                    &self.order(),
                    self.rank == 1,
                    self.ring.guards().max_pairs,
                )
            })
            .map(|v| v.as_slice())
    }

    /// Submodule generated by the reduced basis (same module, canonical gens).
    pub fn canonical(&self) -> Result<Submodule> {
        Ok(Submodule::with_basis(
            self.ring.clone(),
            self.rank,
            self.groebner_basis()?.to_vec(),
        ))
    }

    pub fn normal_form(&self, v: &Vector) -> Result<Vector> {
        let order = self.order();
        let ar = Arith::new(self.ring.field(), &order);
        let basis = engine::elems(self.groebner_basis()?);
        Ok(ar.normal_form(v, &basis))
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        Ok(self.normal_form(v)?.is_zero())
    }

    pub fn contains_module(&self, other: &Submodule) -> Result<bool> {
        self.check(other)?;
        let order = self.order();
        let ar = Arith::new(self.ring.field(), &order);
        let basis = engine::elems(self.groebner_basis()?);
        Ok(other
            .gens
            .iter()
            .all(|g| ar.normal_form(g, &basis).is_zero()))
    }

    /// Equality as submodules (reduced bases coincide).
    pub fn same_as(&self, other: &Submodule) -> Result<bool> {
        self.check(other)?;
        Ok(self.groebner_basis()? == other.groebner_basis()?)
    }

    fn check(&self, other: &Submodule) -> Result<()> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::Shape(format!(
                "ranks {} and {}",
                self.rank, other.rank
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Submodule::new(self.ring.clone(), self.rank, gens)
    }

    /// True when the basis contains every unit vector, i.e. the module is `P^r`.
    pub fn is_everything(&self) -> Result<bool> {
        let gb = self.groebner_basis()?;
        Ok((0..self.rank).all(|c| {
            gb.iter()
                .any(|g| g.terms[0].0.comp as usize == c && g.terms[0].0.mono.is_one())
        }))
    }

    pub fn lead_terms(&self) -> Result<Vec<Term>> {
        Ok(self
            .groebner_basis()?
            .iter()
            .map(|g| g.terms[0].0)
            .collect())
    }

    fn leads_by_component(&self) -> Result<Vec<Vec<Monomial>>> {
        let mut by = vec![Vec::new(); self.rank];
        for t in self.lead_terms()? {
            by[t.comp as usize].push(t.mono);
        }
        Ok(by)
    }

    /// Whether `P^r / self` is annihilated by a power of the maximal ideal
    /// at the origin (every component's lead ideal has a pure power of every
    /// variable).
    pub fn is_zero_dimensional(&self) -> Result<bool> {
        let n = self.ring.nvars();
        Ok(self
            .leads_by_component()?
            .iter()
            .all(|leads| has_pure_powers(leads, n)))
    }

    /// `dim_k P^r / self` by counting standard monomials.
    pub fn quotient_dimension(&self) -> Result<u64> {
        let n = self.ring.nvars();
        let mut total = 0u64;
        for leads in self.leads_by_component()? {
            total += count_standard(&leads, n).ok_or(Error::NotTorsion)?;
        }
        Ok(total)
    }

    /// Standard monomials of weighted degree `t` (all components in degree 0).
    pub fn standard_monomials_in_degree(&self, t: u32) -> Result<u64> {
        let n = self.ring.nvars();
        let weights = self.ring.weights().to_vec();
        let mut monos = Vec::new();
        monomials_of_degree(&weights, n, t, &mut monos);
        let mut total = 0;
        for leads in self.leads_by_component()? {
            total += monos
                .iter()
                .filter(|m| !leads.iter().any(|l| l.divides(m)))
                .count() as u64;
        }
        Ok(total)
    }

    /// Syzygies of the generators: `{a in P^s : sum a_j g_j = 0}`.
    pub fn syzygies(&self) -> Result<Submodule> {
        kernel_modulo(&self.ring, self.rank, &self.gens, &[])
    }

    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.check(other)?;
        let r = self.rank as i64;
        let mut gens: Vec<Vector> = other.gens.clone();
        for a in &self.gens {
            let mut terms = a.terms.clone();
            terms.extend(shift_components(a, r).terms);
            gens.push(Vector { terms });
        }
        let order = self.order();
        let gb = engine::groebner(
            &gens,
            self.ring.field(),
            &order,
            false,
            self.ring.guards().max_pairs,
        )?;
        let inter: Vec<Vector> = gb
            .iter()
            .filter(|g| g.terms[0].0.comp as i64 >= r)
            .map(|g| shift_components(g, -r))
            .collect();
        Ok(Submodule::with_basis(self.ring.clone(), self.rank, inter))
    }

    /// `(K : f) = {v : f v in K}`.
    pub fn colon_element(&self, f: &Polynomial) -> Result<Submodule> {
        if f.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let images: Vec<Vector> = (0..self.rank).map(|c| poly_in_component(f, c)).collect();
        kernel_modulo(&self.ring, self.rank, &images, &self.gens)
    }

    /// `(K : J) = ⋂_j (K : g_j)`.
    pub fn colon_ideal(&self, ideal_gens: &[Polynomial]) -> Result<Submodule> {
        let gens: Vec<&Polynomial> = ideal_gens.iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Ok(Submodule::free(self.ring.clone(), self.rank));
        }
        let mut acc = self.colon_element(gens[0])?;
        for g in &gens[1..] {
            acc = acc.intersect(&self.colon_element(g)?)?;
        }
        Ok(acc)
    }

    /// `(K : f^∞)` by eliminating `t` from `K + (1 - t f) P[t]^r`.
    pub fn saturate_element(&self, f: &Polynomial) -> Result<Submodule> {
        if f.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let n = self.ring.nvars();
        let order = TermOrder::eliminating(self.ring.order().with_extra_var(), n);
        let field = self.ring.field();
        let ar = Arith::new(field, &order);
        let t = Monomial::var(n);
        let mut gens: Vec<Vector> = self.gens.iter().map(|g| resort(&ar, g)).collect();
        for c in 0..self.rank {
            let mut terms = vec![(
                Term {
                    mono: Monomial::ONE,
                    comp: c as u32,
                },
                1,
            )];
            for &(m, k) in f.terms() {
                terms.push((
                    Term {
                        mono: m.mul(&t),
                        comp: c as u32,
                    },
                    field.neg(k),
                ));
            }
            gens.push(ar.normalize(terms));
        }
        let gb = engine::groebner(
            &gens,
            field,
            &order,
            self.rank == 1,
            self.ring.guards().max_pairs,
        )?;
        let pot = self.order();
        let back = Arith::new(field, &pot);
        let sat: Vec<Vector> = gb
            .iter()
            .filter(|g| g.terms[0].0.mono.exponent(n) == 0)
            .map(|g| resort(&back, g))
            .collect();
        Ok(Submodule::with_basis(self.ring.clone(), self.rank, sat))
    }

    /// `(K : J^∞) = ⋂_j (K : g_j^∞)`: a vector is killed by a power of `J`
    /// iff it is killed by a power of each generator.
    pub fn saturation(&self, ideal_gens: &[Polynomial]) -> Result<Submodule> {
        let gens: Vec<&Polynomial> = ideal_gens.iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Ok(Submodule::free(self.ring.clone(), self.rank));
        }
        let mut acc: Option<Submodule> = None;
        for g in gens {
            let s = self.saturate_element(g)?;
            if s.is_everything()? {
                continue;
            }
            acc = Some(match acc {
                None => s,
                Some(a) => a.intersect(&s)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Submodule::free(self.ring.clone(), self.rank)))
    }

    /// `(K : J^∞)` by iterating `S -> (S : J)` until the basis repeats,
    /// bounded by the ring's saturation guard.
    pub fn saturation_iterated(&self, ideal_gens: &[Polynomial]) -> Result<Submodule> {
        let limit = self.ring.guards().max_saturation_steps;
        let mut current = self.canonical()?;
        for _ in 0..limit {
            let next = current.colon_ideal(ideal_gens)?;
            if next.same_as(&current)? {
                return Ok(current);
            }
            current = next;
        }
        Err(Error::GuardExceeded {
            kind: "saturation",
            limit,
        })
    }

    /// `(K : m^∞)` for the maximal ideal at the origin.
    pub fn saturate_at_origin(&self) -> Result<Submodule> {
        self.saturation(&self.ring.vars())
    }
}

/// `{a in P^s : sum_j a_j images_j in <modulo>}` where `images_j` and
/// `modulo` live in `P^r`. The result is returned with its reduced basis.
pub fn kernel_modulo(
    ring: &Arc<PolyRing>,
    r: usize,
    images: &[Vector],
    modulo: &[Vector],
) -> Result<Submodule> {
    let s = images.len();
    let mut gens = Vec::with_capacity(s + modulo.len());
    for (j, img) in images.iter().enumerate() {
        let mut terms = img.terms.clone();
        terms.push((
            Term {
                mono: Monomial::ONE,
                comp: (r + j) as u32,
            },
            1,
        ));
        gens.push(Vector { terms });
    }
    gens.extend(modulo.iter().cloned());
    let order = pot_order(ring);
    let gb = engine::groebner(&gens, ring.field(), &order, false, ring.guards().max_pairs)?;
    let ker: Vec<Vector> = gb
        .iter()
        .filter(|g| g.terms[0].0.comp as usize >= r)
        .map(|g| shift_components(g, -(r as i64)))
        .collect();
    Ok(Submodule::with_basis(ring.clone(), s, ker))
}

fn is_pure_in(m: &Monomial, var: usize, n: usize) -> bool {
    (0..n).all(|i| i == var || m.exponent(i) == 0)
}

fn has_pure_powers(leads: &[Monomial], n: usize) -> bool {
    (0..n).all(|v| leads.iter().any(|m| is_pure_in(m, v, n)))
}

/// Number of monomials in `x_0..x_{n-1}` outside the monomial ideal
/// generated by `leads`, or `None` when infinite.
pub(crate) fn count_standard(leads: &[Monomial], n: usize) -> Option<u64> {
    if leads.iter().any(|m| m.is_one()) {
        return Some(0);
    }
    if !has_pure_powers(leads, n) {
        return None;
    }
    Some(count_rec(leads, n))
}

fn count_rec(leads: &[Monomial], k: usize) -> u64 {
    // all leads involve only x_0..x_{k-1}
    if leads.iter().any(|m| m.is_one()) {
        return 0;
    }
    if k == 0 {
        return 1;
    }
    let v = k - 1;
    let bound = leads
        .iter()
        .filter(|m| is_pure_in(m, v, k))
        .map(|m| m.exponent(v))
        .min()
        .expect("pure power present");
    let mut total = 0;
    for e in 0..bound {
        let mut sub: Vec<Monomial> = leads
            .iter()
            .filter(|m| m.exponent(v) <= e)
            .map(|m| {
                let mut p = *m;
                p.set_exponent(v, 0).expect("zero fits");
                p
            })
            .collect();
        sub.sort();
        sub.dedup();
        total += count_rec(&sub, v);
    }
    total
}

pub(crate) fn monomials_of_degree(weights: &[u32], n: usize, t: u32, out: &mut Vec<Monomial>) {
    fn rec(
        weights: &[u32],
        n: usize,
        i: usize,
        left: u32,
        cur: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) {
        if i == n {
            if left == 0 {
                out.push(*cur);
            }
            return;
        }
        let w = weights[i];
        let mut e = 0;
        while e * w <= left {
            cur.set_exponent(i, e).expect("degree bound fits u16");
            rec(weights, n, i + 1, left - e * w, cur, out);
            e += 1;
        }
        cur.set_exponent(i, 0).expect("zero fits");
    }
    let mut cur = Monomial::ONE;
    rec(weights, n, 0, t, &mut cur, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(ring: &Arc<PolyRing>, entries: &[&str]) -> Vec<Polynomial> {
        ring.parse_all(entries).unwrap()
    }

    #[test]
    fn koszul_syzygy() {
        let r = PolyRing::new(7, &["x", "y"]).unwrap();
        let m = Submodule::from_columns(r.clone(), 1, &[col(&r, &["x"]), col(&r, &["y"])]).unwrap();
        let syz = m.syzygies().unwrap();
        let cols = syz.generator_columns();
        assert_eq!(cols.len(), 1);
        // (y, -x) up to scaling
        let expected = Submodule::from_columns(r.clone(), 2, &[col(&r, &["y", "-x"])]).unwrap();
        assert!(syz.same_as(&expected).unwrap());
    }

    #[test]
    fn identity_has_no_syzygies() {
        let r = PolyRing::new(3, &["x", "y"]).unwrap();
        let m =
            Submodule::from_columns(r.clone(), 2, &[col(&r, &["1", "0"]), col(&r, &["0", "1"])])
                .unwrap();
        assert!(m.syzygies().unwrap().groebner_basis().unwrap().is_empty());
    }

    #[test]
    fn standard_monomial_counts() {
        let r = PolyRing::new(3, &["x", "y"]).unwrap();
        let m =
            Submodule::from_columns(r.clone(), 1, &[col(&r, &["x^3"]), col(&r, &["y^3"])]).unwrap();
        assert_eq!(m.quotient_dimension().unwrap(), 9);
        let m2 = Submodule::from_columns(r.clone(), 1, &[col(&r, &["x^3"])]).unwrap();
        assert_eq!(m2.quotient_dimension(), Err(Error::NotTorsion));
        assert!(!m2.is_zero_dimensional().unwrap());
        assert_eq!(m2.standard_monomials_in_degree(4).unwrap(), 3);
    }

    #[test]
    fn module_saturation_routes_agree() {
        let r = PolyRing::new(5, &["x", "y"]).unwrap();
        // K = <(x^2, 0), (x y, 0), (0, y^3)> + <(y, x)>
        let k = Submodule::from_columns(
            r.clone(),
            2,
            &[
                col(&r, &["x^2", "0"]),
                col(&r, &["x*y", "0"]),
                col(&r, &["0", "y^3"]),
                col(&r, &["y", "x"]),
            ],
        )
        .unwrap();
        let a = k.saturate_at_origin().unwrap();
        let b = k.saturation_iterated(&r.vars()).unwrap();
        assert!(a.same_as(&b).unwrap());
        assert!(a.contains_module(&k).unwrap());
    }

    #[test]
    fn intersection_of_modules() {
        let r = PolyRing::new(5, &["x", "y"]).unwrap();
        let a = Submodule::from_columns(r.clone(), 1, &[col(&r, &["x"])]).unwrap();
        let b = Submodule::from_columns(r.clone(), 1, &[col(&r, &["y"])]).unwrap();
        let i = a.intersect(&b).unwrap();
        let expected = Submodule::from_columns(r.clone(), 1, &[col(&r, &["x*y"])]).unwrap();
        assert!(i.same_as(&expected).unwrap());
    }
}
