//! Brute-force check of `ℓ(Γ_m(P^r/K))` by dense linear algebra over F_p on
//! degree-truncated pieces, with no Gröbner bases involved.
//!
//! With `K_u` the span of all `μ·g` (generators `g`) landing in piece `u`,
//! and `Q^0_u = K_u`, the recursion
//! `Q^j_t = {f ∈ P^r_t : x_i f ∈ Q^{j-1}_{t+w_i} for all i}` gives the
//! elements killed by `m^j`. When the generators are homogeneous the pieces
//! are graded components and every reading is a lower bound that becomes
//! exact for large `(D, s)`; otherwise pieces are `P_{≤u}` and readings are
//! heuristic until they stabilize.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Coef, PrimeField};
use crate::groebner::{monomials_of_degree, poly_in_component, vector_from_polys, Vector};
use crate::homology::PresentedModule;
use crate::monomial::Monomial;
use crate::ring::PolyRing;

/// Reduced row echelon form of a subspace of `F_p^n`.
#[derive(Clone, Debug)]
struct Echelon {
    rows: Vec<Vec<Coef>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, f: &PrimeField, v: &mut [Coef]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                axpy(f, v, f.neg(c), row);
            }
        }
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    fn insert(&mut self, f: &PrimeField, mut v: Vec<Coef>) -> bool {
        self.reduce(f, &mut v);
        let Some(p) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = f.inv(v[p]);
        for c in v.iter_mut() {
            *c = f.mul(*c, inv);
        }
        for row in &mut self.rows {
            let c = row[p];
            if c != 0 {
                axpy(f, row, f.neg(c), &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }
}

/// `y += a x`.
fn axpy(f: &PrimeField, y: &mut [Coef], a: Coef, x: &[Coef]) {
    let p = f.characteristic() as u64;
    let a = a as u64;
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = ((*yi as u64 + a * xi as u64) % p) as Coef;
        }
    }
}

/// Basis of the kernel of the map whose image of the `k`-th basis vector
/// is `images[k]`.
fn kernel(f: &PrimeField, images: &[Vec<Coef>]) -> Vec<Vec<Coef>> {
    let n = images.len();
    let width = images.first().map_or(0, |v| v.len());
    // augmented rows [image | e_k]
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for (k, img) in images.iter().enumerate() {
        let mut row = img.clone();
        row.resize(width + n, 0);
        row[width + k] = 1;
        ech.insert(f, row);
    }
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        if p >= width {
            out.push(row[width..].to_vec());
        }
    }
    out
}

/// One truncated piece: `P^r_u` (graded) or `P^r_{≤u}` (filtered), kept
/// only through the quotient map onto `P^r_u / K_u`.
struct Piece {
    index: HashMap<Monomial, usize>,
    nmono: usize,
    /// non-pivot coordinates of `K_u` in RREF, a basis of the quotient
    std: Vec<usize>,
    std_pos: HashMap<usize, usize>,
    /// quotient image of each pivot coordinate: minus its RREF row
    /// restricted to `std`
    pivot_image: HashMap<usize, Vec<Coef>>,
}

impl Piece {
    /// Quotient coordinates of the basis vector `pos`.
    fn image(&self, pos: usize) -> Vec<Coef> {
        match self.std_pos.get(&pos) {
            Some(&i) => {
                let mut v = vec![0; self.std.len()];
                v[i] = 1;
                v
            }
            None => self.pivot_image[&pos].clone(),
        }
    }
}

pub struct Oracle {
    ring: std::sync::Arc<PolyRing>,
    rank: usize,
    gens: Vec<(u32, Vector)>,
    graded: bool,
    max_coords: usize,
    pieces: HashMap<u32, Piece>,
    // Q^j_t as a subspace of the quotient coordinates of piece t
    torsion: HashMap<(u32, u32), Echelon>,
}

/// One oracle evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleReading {
    pub value: u64,
    pub degree_bound: u32,
    pub depth: u32,
    /// unchanged under `(D + 1, s + 1)`
    pub stable: bool,
    pub graded: bool,
}

impl Oracle {
    /// `gens` are the relations of `P^rank / K` as vectors.
    pub fn new(ring: std::sync::Arc<PolyRing>, rank: usize, gens: &[Vector]) -> Self {
        let w = ring.weights().to_vec();
        let mut graded = true;
        let mut list = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            let degs: Vec<u32> = g
                .terms()
                .iter()
                .map(|(t, _)| t.mono.weighted_degree(&w))
                .collect();
            let top = *degs.iter().max().expect("nonzero");
            if degs.iter().any(|&d| d != top) {
                graded = false;
            }
            list.push((top, g.clone()));
        }
        Oracle {
            max_coords: ring.guards().oracle_max_coords,
            ring,
            rank,
            gens: list,
            graded,
            pieces: HashMap::new(),
            torsion: HashMap::new(),
        }
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    fn monomials(&self, u: u32) -> Vec<Monomial> {
        let w = self.ring.weights();
        let n = self.ring.nvars();
        let mut out = Vec::new();
        if self.graded {
            monomials_of_degree(w, n, u, &mut out);
        } else {
            for t in 0..=u {
                monomials_of_degree(w, n, t, &mut out);
            }
        }
        out
    }

    fn piece(&mut self, u: u32) -> Result<&Piece> {
        if !self.pieces.contains_key(&u) {
            let p = self.build_piece(u)?;
            self.pieces.insert(u, p);
        }
        Ok(&self.pieces[&u])
    }

    fn build_piece(&self, u: u32) -> Result<Piece> {
        let field = self.ring.field();
        let monos = self.monomials(u);
        let nmono = monos.len();
        let n = nmono * self.rank;
        if n > self.max_coords {
            return Err(Error::MemoryGuard(n));
        }
        let index: HashMap<Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut k = Echelon::new();
        for (deg, g) in &self.gens {
            if *deg > u {
                continue;
            }
            let mut mult = Vec::new();
            if self.graded {
                monomials_of_degree(self.ring.weights(), self.ring.nvars(), u - deg, &mut mult);
            } else {
                for t in 0..=(u - deg) {
                    monomials_of_degree(self.ring.weights(), self.ring.nvars(), t, &mut mult);
                }
            }
            for mu in mult {
                let mut v = vec![0; n];
                for (t, c) in g.terms() {
                    let m = t.mono.checked_mul(&mu)?;
                    v[t.comp as usize * nmono + index[&m]] = *c;
                }
                k.insert(&field, v);
            }
        }
        let mut is_pivot = vec![false; n];
        for &p in &k.pivots {
            is_pivot[p] = true;
        }
        let std: Vec<usize> = (0..n).filter(|&i| !is_pivot[i]).collect();
        let std_pos: HashMap<usize, usize> = std.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let pivot_image = k
            .rows
            .iter()
            .zip(&k.pivots)
            .map(|(row, &p)| (p, std.iter().map(|&c| field.neg(row[c])).collect()))
            .collect();
        Ok(Piece {
            index,
            nmono,
            std,
            std_pos,
            pivot_image,
        })
    }

    /// Image of the quotient basis vector `b` of piece `t` under `x_i`, in
    /// quotient coordinates of piece `t + w_i`.
    fn multiply(&mut self, t: u32, i: usize) -> Result<Vec<Vec<Coef>>> {
        let w = self.ring.weights()[i];
        let var = Monomial::var(i);
        self.piece(t + w)?;
        self.piece(t)?;
        let src = &self.pieces[&t];
        let dst = &self.pieces[&(t + w)];
        let monos_src: Vec<Monomial> = {
            let mut v = vec![Monomial::ONE; src.nmono];
            for (m, &ix) in &src.index {
                v[ix] = *m;
            }
            v
        };
        let mut out = Vec::with_capacity(src.std.len());
        for &c in &src.std {
            let (comp, ix) = (c / src.nmono, c % src.nmono);
            let m = monos_src[ix].checked_mul(&var)?;
            out.push(dst.image(comp * dst.nmono + dst.index[&m]));
        }
        Ok(out)
    }

    /// `Q^j_t` in quotient coordinates.
    fn killed(&mut self, j: u32, t: u32) -> Result<Echelon> {
        if let Some(e) = self.torsion.get(&(j, t)) {
            return Ok(e.clone());
        }
        let field = self.ring.field();
        let dim_t = self.piece(t)?.std.len();
        let result = if j == 0 {
            Echelon::new()
        } else {
            let mut images: Vec<Vec<Coef>> = vec![Vec::new(); dim_t];
            for i in 0..self.ring.nvars() {
                let w = self.ring.weights()[i];
                let target = self.killed(j - 1, t + w)?;
                let mult = self.multiply(t, i)?;
                for (b, mut v) in mult.into_iter().enumerate() {
                    target.reduce(&field, &mut v);
                    images[b].extend(v);
                }
            }
            let mut e = Echelon::new();
            for v in kernel(&field, &images) {
                e.insert(&field, v);
            }
            e
        };
        self.torsion.insert((j, t), result.clone());
        Ok(result)
    }

    /// `ℓ` of the part of `Γ_m` visible with degree bound `d` and depth `s`.
    pub fn value(&mut self, d: u32, s: u32) -> Result<u64> {
        if self.graded {
            let mut total = 0;
            for t in 0..=d {
                total += self.killed(s, t)?.dim() as u64;
            }
            Ok(total)
        } else {
            Ok(self.killed(s, d)?.dim() as u64)
        }
    }

    pub fn reading(&mut self, d: u32, s: u32) -> Result<OracleReading> {
        let value = self.value(d, s)?;
        let next = self.value(d + 1, s + 1)?;
        Ok(OracleReading {
            value,
            degree_bound: d,
            depth: s,
            stable: value == next,
            graded: self.graded,
        })
    }

    /// Escalate `(D, s)` from `(start, start)` until two consecutive stable
    /// readings, giving up (unstable) past `max_degree`.
    pub fn auto(&mut self, start: u32, max_degree: u32) -> Result<OracleReading> {
        let mut d = start.max(1);
        let mut prev = self.value(d, d)?;
        let mut streak = 0;
        while d < max_degree {
            d += 1;
            let v = self.value(d, d)?;
            if v == prev {
                streak += 1;
                if streak == 2 {
                    return Ok(OracleReading {
                        value: v,
                        degree_bound: d - 2,
                        depth: d - 2,
                        stable: true,
                        graded: self.graded,
                    });
                }
            } else {
                streak = 0;
            }
            prev = v;
        }
        Ok(OracleReading {
            value: prev,
            degree_bound: d,
            depth: d,
            stable: false,
            graded: self.graded,
        })
    }
}

/// Reading at a fixed `(D, s)` for `P^rank / <gens>`.
pub fn oracle_gamma_m_length(
    ring: &std::sync::Arc<PolyRing>,
    rank: usize,
    gens: &[Vector],
    d: u32,
    s: u32,
) -> Result<OracleReading> {
    Oracle::new(ring.clone(), rank, gens).reading(d, s)
}

/// Raw relations of `M`: matrix columns and the given generators of `I_R`
/// in every component (no Gröbner basis anywhere).
fn raw_relations(m: &PresentedModule) -> Vec<Vector> {
    let mut gens = m.matrix().column_vectors();
    for c in 0..m.rank() {
        for f in m.base().ideal().generators() {
            gens.push(poly_in_component(f, c));
        }
    }
    gens
}

/// Oracle value of `fhk_M(n)`, starting at `D = q · maxdeg` of the
/// untwisted relations.
pub fn oracle_fhk(m: &PresentedModule, n: u32) -> Result<OracleReading> {
    let ring = m.base().ambient().clone();
    let q = ring.q_of(n)?;
    let w = ring.weights().to_vec();
    let raw = raw_relations(m);
    let maxdeg = raw
        .iter()
        .flat_map(|g| g.terms().iter().map(|(t, _)| t.mono.weighted_degree(&w)))
        .max()
        .unwrap_or(1);
    let twisted: Vec<Vector> = if n == 0 {
        raw
    } else {
        let mut out = m.matrix().frobenius(q)?.column_vectors();
        for c in 0..m.rank() {
            for f in m.base().ideal().generators() {
                out.push(poly_in_component(f, c));
            }
        }
        out
    };
    let start = u32::try_from(q).map_err(|_| Error::ExponentOverflow)? * maxdeg;
    let mut oracle = Oracle::new(ring, m.rank(), &twisted);
    oracle.auto(start, 4 * start + 16)
}

/// Oracle for a cyclic quotient `P / (gens)` given as polynomials.
pub fn oracle_ideal(
    ring: &std::sync::Arc<PolyRing>,
    gens: &[crate::poly::Polynomial],
    d: u32,
    s: u32,
) -> Result<OracleReading> {
    let vecs: Vec<Vector> = gens
        .iter()
        .map(|g| vector_from_polys(std::slice::from_ref(g)))
        .collect();
    oracle_gamma_m_length(ring, 1, &vecs, d, s)
}
