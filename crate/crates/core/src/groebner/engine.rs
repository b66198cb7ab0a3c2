//! Buchberger's algorithm for submodules of free modules over F_p[x].
//!
//! Ideals are the rank-one case. Pairs are pruned with the Gebauer–Möller
//! criteria and chosen by (sugar, lcm, index) so output is reproducible.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::{Coef, PrimeField};
use crate::monomial::{Monomial, MonomialOrder};

/// A monomial placed in a component of a free module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mono: Monomial,
    pub comp: u32,
}

impl Term {
    #[inline]
    pub fn divides(&self, other: &Term) -> bool {
        self.comp == other.comp && self.mono.divides(&other.mono)
    }
}

/// Sparse element of `P^r`, terms sorted in decreasing order under the
/// order it was built with.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vector {
    pub(crate) terms: Vec<(Term, Coef)>,
}

impl Vector {
    pub fn zero() -> Self {
        Vector { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Term, Coef)] {
        &self.terms
    }

    pub fn lead(&self) -> Option<Term> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_component(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.comp).max()
    }
}

/// Term order on a free module: an optional elimination block, then either
/// position-over-term (smaller component index is larger) or
/// term-over-position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    pub(crate) mono: MonomialOrder,
    pub(crate) pot: bool,
    /// Variables with index `>= k` form an elimination block compared first.
    pub(crate) elim_from: Option<usize>,
}

impl TermOrder {
    pub fn pot(mono: MonomialOrder) -> Self {
        TermOrder {
            mono,
            pot: true,
            elim_from: None,
        }
    }

    pub(crate) fn eliminating(mono: MonomialOrder, first_eliminated: usize) -> Self {
        TermOrder {
            mono,
            pot: true,
            elim_from: Some(first_eliminated),
        }
    }

    #[inline]
    fn elim_degree(&self, m: &Monomial, k: usize) -> u32 {
        (k..self.mono.nvars()).map(|i| m.exponent(i)).sum()
    }

    #[inline]
    pub fn compare(&self, a: &Term, b: &Term) -> Ordering {
        if let Some(k) = self.elim_from {
            let (da, db) = (self.elim_degree(&a.mono, k), self.elim_degree(&b.mono, k));
            if da != db {
                return da.cmp(&db);
            }
        }
        if self.pot {
            if a.comp != b.comp {
                return b.comp.cmp(&a.comp);
            }
            self.mono.compare(&a.mono, &b.mono)
        } else {
            match self.mono.compare(&a.mono, &b.mono) {
                Ordering::Equal => b.comp.cmp(&a.comp),
                o => o,
            }
        }
    }

    #[inline]
    pub fn degree(&self, m: &Monomial) -> u32 {
        self.mono.degree(m)
    }
}

/// Arithmetic on [`Vector`]s for a fixed field and term order.
#[derive(Clone, Debug)]
pub struct Arith<'a> {
    pub field: PrimeField,
    pub order: &'a TermOrder,
}

impl<'a> Arith<'a> {
    pub fn new(field: PrimeField, order: &'a TermOrder) -> Self {
        Arith { field, order }
    }

    /// Sorts, merges duplicates and drops zeros.
    pub fn normalize(&self, mut terms: Vec<(Term, Coef)>) -> Vector {
        terms.sort_by(|a, b| self.order.compare(&b.0, &a.0));
        let mut out: Vec<(Term, Coef)> = Vec::with_capacity(terms.len());
        for (t, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == t => last.1 = self.field.add(last.1, c),
                _ => out.push((t, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Vector { terms: out }
    }

    /// `a - c * m * b`.
    pub fn sub_mul(
        &self,
        a: &[(Term, Coef)],
        c: Coef,
        m: &Monomial,
        b: &[(Term, Coef)],
    ) -> Vec<(Term, Coef)> {
        let f = self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let scaled = |(t, d): (Term, Coef)| {
            (
                Term {
                    mono: t.mono.mul(m),
                    comp: t.comp,
                },
                f.neg(f.mul(c, d)),
            )
        };
        let mut next_b = if j < b.len() {
            Some(scaled(b[j]))
        } else {
            None
        };
        while i < a.len() {
            let Some(tb) = next_b else { break };
            match self.order.compare(&a[i].0, &tb.0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(tb);
                    j += 1;
                    next_b = if j < b.len() {
                        Some(scaled(b[j]))
                    } else {
                        None
                    };
                }
                Ordering::Equal => {
                    let s = f.add(a[i].1, tb.1);
                    if s != 0 {
                        out.push((a[i].0, s));
                    }
                    i += 1;
                    j += 1;
                    next_b = if j < b.len() {
                        Some(scaled(b[j]))
                    } else {
                        None
                    };
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        if let Some(tb) = next_b {
            out.push(tb);
            for &t in &b[j + 1..] {
                out.push(scaled(t));
            }
        }
        out
    }

    pub fn add(&self, a: &Vector, b: &Vector) -> Vector {
        let minus_one = self.field.neg(1);
        Vector {
            terms: self.sub_mul(&a.terms, minus_one, &Monomial::ONE, &b.terms),
        }
    }

    pub fn sub(&self, a: &Vector, b: &Vector) -> Vector {
        Vector {
            terms: self.sub_mul(&a.terms, 1, &Monomial::ONE, &b.terms),
        }
    }

    pub fn scale(&self, a: &Vector, c: Coef, m: &Monomial) -> Vector {
        if c == 0 {
            return Vector::zero();
        }
        Vector {
            terms: a
                .terms
                .iter()
                .map(|&(t, d)| {
                    (
                        Term {
                            mono: t.mono.mul(m),
                            comp: t.comp,
                        },
                        self.field.mul(c, d),
                    )
                })
                .collect(),
        }
    }

    /// `f * v` for a polynomial `f` given as (monomial, coefficient) terms.
    pub fn mul_poly(&self, poly: &[(Monomial, Coef)], v: &Vector) -> Vector {
        let mut acc: Vec<(Term, Coef)> = Vec::new();
        for &(m, c) in poly {
            acc = self.sub_mul(&acc, self.field.neg(c), &m, &v.terms);
        }
        Vector { terms: acc }
    }

    pub fn monic(&self, v: &Vector) -> Vector {
        match v.terms.first() {
            None => v.clone(),
            Some(&(_, 1)) => v.clone(),
            Some(&(_, c)) => self.scale(v, self.field.inv(c), &Monomial::ONE),
        }
    }

    /// Full reduction of `f` modulo monic elements `basis`.
    pub fn normal_form(&self, f: &Vector, basis: &[Elem]) -> Vector {
        let mut p = f.terms.clone();
        let mut start = 0;
        let mut rem = Vec::new();
        while start < p.len() {
            let (t, c) = p[start];
            match find_divisor(&t, basis) {
                Some(g) => {
                    let m = t.mono.div(&g.lead.mono);
                    p = self.sub_mul(&p[start + 1..], c, &m, &g.vec.terms[1..]);
                    start = 0;
                }
                None => {
                    rem.push((t, c));
                    start += 1;
                }
            }
        }
        Vector { terms: rem }
    }

    /// Reduces only while the leading term is divisible.
    fn top_reduce(&self, f: Vec<(Term, Coef)>, basis: &[Elem]) -> Vec<(Term, Coef)> {
        let mut p = f;
        while let Some(&(t, c)) = p.first() {
            match find_divisor(&t, basis) {
                Some(g) => {
                    let m = t.mono.div(&g.lead.mono);
                    p = self.sub_mul(&p[1..], c, &m, &g.vec.terms[1..]);
                }
                None => break,
            }
        }
        p
    }
}

/// A monic basis element with cached lead data.
#[derive(Clone, Debug)]
pub struct Elem {
    pub vec: Vector,
    pub lead: Term,
    mask: u32,
    sugar: u32,
}

impl Elem {
    pub fn new(vec: Vector, sugar: u32) -> Self {
        let lead = vec.lead().expect("basis element must be nonzero");
        Elem {
            mask: lead.mono.support_mask(),
            lead,
            vec,
            sugar,
        }
    }
}

#[inline]
fn find_divisor<'b>(t: &Term, basis: &'b [Elem]) -> Option<&'b Elem> {
    let tmask = t.mono.support_mask();
    basis
        .iter()
        .find(|g| g.mask & !tmask == 0 && g.lead.divides(t))
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Term,
    sugar: u32,
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
///
/// `ideal_case` enables the coprime-lead criterion, which is only valid in
/// rank one. The result is sorted by increasing lead term.
pub fn groebner(
    gens: &[Vector],
    field: PrimeField,
    order: &TermOrder,
    ideal_case: bool,
    max_pairs: usize,
) -> Result<Vec<Vector>> {
    let ar = Arith::new(field, order);
    let mut inputs: Vec<Vector> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ar.monic(g))
        .collect();
    inputs.sort_by(|a, b| order.compare(&a.terms[0].0, &b.terms[0].0));
    inputs.dedup();

    let mut st = State {
        ar,
        basis: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        ideal_case,
    };
    for g in inputs {
        let sugar = g
            .terms
            .iter()
            .map(|(t, _)| order.degree(&t.mono))
            .max()
            .unwrap_or(0);
        let reduced = st.ar.normal_form(&g, &st.basis);
        if !reduced.is_zero() {
            st.insert(st.ar.monic(&reduced), sugar);
        }
    }

    let mut processed = 0usize;
    while let Some(pair) = st.pop_pair() {
        processed += 1;
        if processed > max_pairs {
            return Err(Error::GuardExceeded {
                kind: "S-pair",
                limit: max_pairs,
            });
        }
        let gi = &st.basis[pair.i];
        let gj = &st.basis[pair.j];
        let mi = pair.lcm.mono.div(&gi.lead.mono);
        let mj = pair.lcm.mono.div(&gj.lead.mono);
        let left = st.ar.scale(&gi.vec, 1, &mi);
        let s = st.ar.sub_mul(&left.terms[1..], 1, &mj, &gj.vec.terms[1..]);
        let h = st.ar.top_reduce(s, &st.basis);
        if h.is_empty() {
            continue;
        }
        let h = st.ar.normal_form(&Vector { terms: h }, &st.basis);
        let h = st.ar.monic(&h);
        st.insert(h, pair.sugar);
    }

    let mut result: Vec<Elem> = st
        .active
        .iter()
        .enumerate()
        .filter(|(_, &a)| a)
        .map(|(k, _)| st.basis[k].clone())
        .collect();
    result.sort_by(|a, b| order.compare(&a.lead, &b.lead));
    let mut out = Vec::with_capacity(result.len());
    for k in 0..result.len() {
        let g = &result[k];
        let tail = Vector {
            terms: g.vec.terms[1..].to_vec(),
        };
        let tail = st.ar.normal_form(&tail, &result);
        let mut terms = Vec::with_capacity(tail.terms.len() + 1);
        terms.push(g.vec.terms[0]);
        terms.extend(tail.terms);
        out.push(Vector { terms });
    }
    Ok(out)
}

struct State<'a> {
    ar: Arith<'a>,
    basis: Vec<Elem>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    ideal_case: bool,
}

impl State<'_> {
    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let ord = self.ar.order;
        let (a, b) = (&self.basis[i], &self.basis[j]);
        let d = ord.degree(lcm);
        (a.sugar + d - ord.degree(&a.lead.mono)).max(b.sugar + d - ord.degree(&b.lead.mono))
    }

    fn insert(&mut self, h: Vector, sugar: u32) {
        let hidx = self.basis.len();
        self.basis.push(Elem::new(h, sugar));
        self.active.push(false);
        let lh = self.basis[hidx].lead;

        let cands: Vec<usize> = (0..hidx)
            .filter(|&g| self.active[g] && self.basis[g].lead.comp == lh.comp)
            .collect();
        let lcms: Vec<Monomial> = cands
            .iter()
            .map(|&g| lh.mono.lcm(&self.basis[g].lead.mono))
            .collect();
        let coprime: Vec<bool> = cands
            .iter()
            .map(|&g| self.ideal_case && lh.mono.coprime(&self.basis[g].lead.mono))
            .collect();

        let mut kept: Vec<usize> = Vec::new();
        for k in 0..cands.len() {
            let l1 = &lcms[k];
            let dominated = (k + 1..cands.len())
                .chain(kept.iter().copied())
                .any(|o| lcms[o].divides(l1));
            if coprime[k] || !dominated {
                kept.push(k);
            }
        }

        let basis = &self.basis;
        self.pairs.retain(|p| {
            if p.lcm.comp != lh.comp || !lh.mono.divides(&p.lcm.mono) {
                return true;
            }
            let li = basis[p.i].lead.mono.lcm(&lh.mono);
            let lj = basis[p.j].lead.mono.lcm(&lh.mono);
            li == p.lcm.mono || lj == p.lcm.mono
        });

        for k in kept {
            if coprime[k] {
                continue;
            }
            let g = cands[k];
            let sugar = self.pair_sugar(g, hidx, &lcms[k]);
            self.pairs.push(Pair {
                i: g,
                j: hidx,
                lcm: Term {
                    mono: lcms[k],
                    comp: lh.comp,
                },
                sugar,
            });
        }

        for g in 0..hidx {
            if self.active[g] && lh.divides(&self.basis[g].lead) {
                self.active[g] = false;
            }
        }
        self.active[hidx] = true;
    }

    fn pop_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ord = self.ar.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let better = match a.sugar.cmp(&b.sugar) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => match ord.compare(&a.lcm, &b.lcm) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => (a.i, a.j) < (b.i, b.j),
                },
            };
            if better {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }
}

/// Wraps reduced basis vectors as [`Elem`]s for reduction.
pub fn elems(gb: &[Vector]) -> Vec<Elem> {
    gb.iter().map(|v| Elem::new(v.clone(), 0)).collect()
}
