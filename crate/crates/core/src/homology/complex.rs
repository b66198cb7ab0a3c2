//! Free complexes over `R = P/I_R`, resolutions, and homology lengths.

use std::sync::Arc;

use super::length::{gamma_length, local_length, LengthResult};
use super::matrix::Matrix;
use super::quotient::QuotientRing;
use crate::error::{Error, Result};
use crate::groebner::{kernel_modulo, vector_from_polys, Submodule, Vector};
use crate::poly::Polynomial;

/// `F_0 <- F_1 <- ... <- F_len`, with `maps[i] = δ_{i+1}: F_{i+1} -> F_i`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    base: Arc<QuotientRing>,
    ranks: Vec<usize>,
    maps: Vec<Matrix>,
}

impl FreeComplex {
    pub fn new(base: Arc<QuotientRing>, rank0: usize, maps: Vec<Matrix>) -> Result<Self> {
        let mut ranks = vec![rank0];
        for m in &maps {
            if m.rows() != *ranks.last().expect("nonempty") {
                return Err(Error::Shape("maps are not composable".into()));
            }
            ranks.push(m.cols());
        }
        Ok(FreeComplex { base, ranks, maps })
    }

    pub fn base(&self) -> &Arc<QuotientRing> {
        &self.base
    }

    /// Number of maps.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Rank of `F_i` (zero past the end).
    pub fn rank(&self, i: usize) -> usize {
        self.ranks.get(i).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `δ_i: F_i -> F_{i-1}` for `1 <= i <= len`.
    pub fn map(&self, i: usize) -> Option<&Matrix> {
        i.checked_sub(1).and_then(|k| self.maps.get(k))
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// First `len` maps.
    pub fn truncate(&self, len: usize) -> FreeComplex {
        let len = len.min(self.maps.len());
        FreeComplex {
            base: self.base.clone(),
            ranks: self.ranks[..=len].to_vec(),
            maps: self.maps[..len].to_vec(),
        }
    }

    /// Entry-wise `q`-th powers of every map.
    pub fn frobenius(&self, q: u64) -> Result<FreeComplex> {
        let maps = self
            .maps
            .iter()
            .map(|m| m.frobenius(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeComplex {
            base: self.base.clone(),
            ranks: self.ranks.clone(),
            maps,
        })
    }

    /// `δ_i δ_{i+1} ≡ 0 mod I_R` for all consecutive pairs.
    pub fn is_complex(&self) -> Result<bool> {
        for w in self.maps.windows(2) {
            let prod = w[0].mul(&w[1])?;
            for f in prod.entries() {
                if !self.base.is_zero(f)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// No entry of any map has a nonzero constant term.
    pub fn is_minimal(&self) -> bool {
        self.maps.iter().all(|m| !m.has_unit_entry())
    }

    /// Relations `K` with `H_i ≅ P^s / K`, or `None` when `H_i = 0`.
    pub fn homology_relations(&self, i: usize) -> Result<Option<Submodule>> {
        let outgoing = self.map(i).map(|m| (m.rows(), m.column_vectors()));
        let incoming = self.map(i + 1).map(|m| m.column_vectors());
        homology_presentation(
            &self.base,
            self.rank(i),
            outgoing.as_ref().map(|(r, c)| (*r, c.as_slice())),
            incoming.as_deref(),
        )
    }

    /// `ℓ(Γ_m(H_i))`, flagging homology supported away from the origin.
    pub fn homology_length(&self, i: usize) -> Result<LengthResult> {
        match self.homology_relations(i)? {
            None => Ok(LengthResult::finite(0, false)),
            Some(rel) => gamma_length(&rel),
        }
    }

    /// `ℓ((H_i)_m)`, infinite when the homology has positive-dimensional
    /// support through the origin.
    pub fn homology_local_length(&self, i: usize) -> Result<LengthResult> {
        match self.homology_relations(i)? {
            None => Ok(LengthResult::finite(0, false)),
            Some(rel) => local_length(&rel),
        }
    }
}

/// Presentation `P^s / K` of `ker(out) / im(in)` at a free module of rank
/// `mid`, all modulo `I_R`. `out` is `(target rank, columns)`; `None` for
/// either map means zero. Returns `None` for zero homology.
pub(crate) fn homology_presentation(
    base: &QuotientRing,
    mid: usize,
    out: Option<(usize, &[Vector])>,
    incoming: Option<&[Vector]>,
) -> Result<Option<Submodule>> {
    let ring = base.ambient();
    if mid == 0 {
        return Ok(None);
    }
    let cycles = match out {
        Some((target, cols)) if target > 0 && !cols.is_empty() => {
            kernel_modulo(ring, target, cols, &base.block(target)?)?
        }
        _ => Submodule::free(ring.clone(), mid),
    };
    let mut bounds = base.block(mid)?;
    if let Some(cols) = incoming {
        bounds.extend(cols.iter().cloned());
    }
    let bsub = Submodule::new(ring.clone(), mid, bounds.clone())?;
    let mut gens: Vec<Vector> = Vec::new();
    for z in cycles.groebner_basis()? {
        let r = bsub.normal_form(z)?;
        if !r.is_zero() && !gens.contains(&r) {
            gens.push(r);
        }
    }
    if gens.is_empty() {
        return Ok(None);
    }
    Ok(Some(kernel_modulo(ring, mid, &gens, &bounds)?))
}

/// Reduce modulo `I_R·P^rank`, drop zeros, then keep a candidate only if it
/// is not already in the span of `I_R·P^rank` and the kept ones. Candidates
/// are tried in increasing degree, so graded input yields a minimal set.
pub(crate) fn prune(
    base: &QuotientRing,
    rank: usize,
    candidates: &[Vector],
) -> Result<Vec<Vector>> {
    let ring = base.ambient();
    let block = base.block(rank)?;
    let bsub = Submodule::new(ring.clone(), rank, block.clone())?;
    let w = ring.weights();
    let mut cands: Vec<(u32, Vector)> = Vec::new();
    for c in candidates {
        let r = bsub.normal_form(c)?;
        if r.is_zero() || cands.iter().any(|(_, v)| *v == r) {
            continue;
        }
        let deg = r
            .terms()
            .iter()
            .map(|(t, _)| t.mono.weighted_degree(w))
            .max()
            .unwrap_or(0);
        cands.push((deg, r));
    }
    // stable: ties keep input order, which is deterministic
    cands.sort_by_key(|(d, v)| (*d, v.terms().len()));
    let mut kept: Vec<Vector> = Vec::new();
    for (_, c) in cands {
        let mut gens = block.clone();
        gens.extend(kept.iter().cloned());
        let span = Submodule::new(ring.clone(), rank, gens)?;
        if !span.contains(&c)? {
            kept.push(c);
        }
    }
    Ok(kept)
}

fn reduce_entries(base: &QuotientRing, m: &Matrix) -> Result<Matrix> {
    m.map(|f| base.reduce(f))
}

/// Cancel nonzero constant entries of `next` (and the matching column of
/// `prev`) by change of basis: a constant entry at `(a, b)` splits off
/// `0 -> R e_b -> R e_a -> 0`.
fn minimalize(base: &QuotientRing, prev: Option<&mut Matrix>, next: &mut Matrix) -> Result<()> {
    let ring = base.ambient().clone();
    let field = ring.field();
    let mut prev = prev;
    loop {
        let pivot = (0..next.rows())
            .flat_map(|a| (0..next.cols()).map(move |b| (a, b)))
            .find(|&(a, b)| {
                let f = next.get(a, b);
                f.is_constant() && !f.is_zero()
            });
        let Some((a, b)) = pivot else {
            return Ok(());
        };
        let c_inv = field.inv(next.get(a, b).constant_term());
        let col_b = next.column(b);
        let mut columns = Vec::with_capacity(next.cols() - 1);
        for k in 0..next.cols() {
            if k == b {
                continue;
            }
            let w = next.get(a, k).scale(c_inv);
            let mut col = next.column(k);
            if !w.is_zero() {
                for (i, entry) in col.iter_mut().enumerate() {
                    *entry = base.reduce(&entry.sub(&w.mul(&col_b[i])?)?)?;
                }
            }
            col.remove(a);
            columns.push(col);
        }
        *next = Matrix::from_columns(ring.clone(), next.rows() - 1, &columns)?;
        if let Some(p) = prev.as_deref_mut() {
            let cols: Vec<Vec<Polynomial>> = (0..p.cols())
                .filter(|&j| j != a)
                .map(|j| p.column(j))
                .collect();
            *p = Matrix::from_columns(ring.clone(), p.rows(), &cols)?;
        }
    }
}

/// Free resolution of `coker(presentation)` over `R`, with `length` maps.
///
/// Each step takes the kernel modulo `I_R`, prunes generators that are
/// redundant modulo `I_R`, and cancels constant entries against the
/// previous map. Once a kernel vanishes the remaining maps are empty.
pub fn resolve(
    base: &Arc<QuotientRing>,
    presentation: &Matrix,
    length: usize,
) -> Result<FreeComplex> {
    let ring = base.ambient();
    let rank0 = presentation.rows();
    let first = prune(base, rank0, &presentation.column_vectors())?;
    let mut d1 = reduce_entries(
        base,
        &Matrix::from_column_vectors(ring.clone(), rank0, &first),
    )?;
    minimalize(base, None, &mut d1)?;
    let mut maps = vec![d1];
    let mut rank0 = rank0;
    // a cancelled pivot in δ_1 removes a generator of F_0
    if let Some(m) = maps.first() {
        rank0 = m.rows();
    }
    while maps.len() < length {
        let last = maps.last().expect("nonempty");
        let (target, src) = (last.rows(), last.cols());
        let next = if src == 0 {
            Matrix::zero(ring.clone(), 0, 0)
        } else if target == 0 {
            Matrix::identity(ring.clone(), src)
        } else {
            let cols = last.column_vectors();
            let ker = kernel_modulo(ring, target, &cols, &base.block(target)?)?;
            let gens = prune(base, src, ker.groebner_basis()?)?;
            Matrix::from_column_vectors(ring.clone(), src, &gens)
        };
        let mut next = reduce_entries(base, &next)?;
        let n = maps.len();
        minimalize(base, maps.get_mut(n - 1), &mut next)?;
        maps.push(next);
    }
    maps.truncate(length.max(1));
    FreeComplex::new(base.clone(), rank0, maps)
}

/// Columns of `m` as vectors after reducing modulo `I_R`.
pub(crate) fn reduced_columns(base: &QuotientRing, m: &Matrix) -> Result<Vec<Vector>> {
    (0..m.cols())
        .map(|j| {
            let col = m
                .column(j)
                .iter()
                .map(|f| base.reduce(f))
                .collect::<Result<Vec<_>>>()?;
            Ok(vector_from_polys(&col))
        })
        .collect()
}
