//! Finitely presented modules `M = coker(A) = R^r / im(A)` over `R = P/I_R`.

use std::fmt;
use std::sync::{Arc, Mutex};

use super::complex::{prune, reduced_columns, resolve, FreeComplex};
use super::length::{gamma_length, local_length, LengthResult};
use super::matrix::Matrix;
use super::quotient::QuotientRing;
use crate::error::{Error, Result};
use crate::groebner::{kernel_modulo, poly_in_component, Ideal, Submodule};
use crate::poly::{same_ring, Polynomial};

pub struct PresentedModule {
    base: Arc<QuotientRing>,
    matrix: Matrix,
    relations: Submodule,
    // longest resolution computed so far; resolutions only ever get replaced
    // by longer ones of the same module
    resolution: Mutex<Option<FreeComplex>>,
}

impl Clone for PresentedModule {
    fn clone(&self) -> Self {
        PresentedModule {
            base: self.base.clone(),
            matrix: self.matrix.clone(),
            relations: self.relations.clone(),
            resolution: Mutex::new(self.resolution.lock().expect("poisoned").clone()),
        }
    }
}

impl fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PresentedModule")
            .field("rank", &self.rank())
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl PresentedModule {
    /// `coker(matrix)`; the `I_R` block is added to the relations.
    pub fn new(base: Arc<QuotientRing>, matrix: Matrix) -> Result<Self> {
        if !same_ring(matrix.ring(), base.ambient()) {
            return Err(Error::RingMismatch);
        }
        let rank = matrix.rows();
        let mut gens = matrix.column_vectors();
        gens.extend(base.block(rank)?);
        let relations = Submodule::new(base.ambient().clone(), rank, gens)?;
        Ok(PresentedModule {
            base,
            matrix,
            relations,
            resolution: Mutex::new(None),
        })
    }

    pub fn free(base: Arc<QuotientRing>, rank: usize) -> Result<Self> {
        let m = Matrix::zero(base.ambient().clone(), rank, 0);
        PresentedModule::new(base, m)
    }

    /// `R / (gens)`.
    pub fn cyclic(base: Arc<QuotientRing>, gens: &[Polynomial]) -> Result<Self> {
        let m = Matrix::from_columns(
            base.ambient().clone(),
            1,
            &gens.iter().map(|g| vec![g.clone()]).collect::<Vec<_>>(),
        )?;
        PresentedModule::new(base, m)
    }

    pub fn parse_cyclic(base: Arc<QuotientRing>, gens: &[&str]) -> Result<Self> {
        let gens = base.ambient().parse_all(gens)?;
        PresentedModule::cyclic(base, &gens)
    }

    /// The ideal `(gens) ⊆ R` as a module: `R^m / syz_R(gens)`.
    pub fn ideal_module(base: Arc<QuotientRing>, gens: &[Polynomial]) -> Result<Self> {
        let ring = base.ambient().clone();
        let mut kept = Vec::new();
        for g in gens {
            let r = base.reduce(g)?;
            if !r.is_zero() && !kept.contains(&r) {
                kept.push(r);
            }
        }
        if kept.is_empty() {
            return PresentedModule::free(base, 0);
        }
        let images: Vec<_> = kept.iter().map(|g| poly_in_component(g, 0)).collect();
        let syz = kernel_modulo(&ring, 1, &images, &base.block(1)?)?;
        let cols = prune(&base, kept.len(), syz.groebner_basis()?)?;
        let m = Matrix::from_column_vectors(ring, kept.len(), &cols);
        PresentedModule::new(base, m)
    }

    /// `syz M = im(A) ≅ R^n / ker_R(A)` for `M = coker(A)`, `A` of size
    /// `r x n` (after dropping columns redundant modulo `I_R`).
    pub fn syzygy_module(&self) -> Result<PresentedModule> {
        let ring = self.base.ambient().clone();
        let cols = prune(&self.base, self.rank(), &self.matrix.column_vectors())?;
        if cols.is_empty() {
            return PresentedModule::free(self.base.clone(), 0);
        }
        let r = self.rank();
        let ker = kernel_modulo(&ring, r, &cols, &self.base.block(r)?)?;
        let syz = prune(&self.base, cols.len(), ker.groebner_basis()?)?;
        let m = Matrix::from_column_vectors(ring, cols.len(), &syz);
        PresentedModule::new(self.base.clone(), m)
    }

    pub fn base(&self) -> &Arc<QuotientRing> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Relations as a submodule of `P^r`, including `I_R·P^r`.
    pub fn relations(&self) -> &Submodule {
        &self.relations
    }

    /// Same module (same relations submodule of `P^r`).
    pub fn same_presentation(&self, other: &PresentedModule) -> Result<bool> {
        if self.rank() != other.rank() {
            return Ok(false);
        }
        self.relations.same_as(&other.relations)
    }

    /// `ℓ(H⁰_m(M))`.
    pub fn gamma_m_length(&self) -> Result<LengthResult> {
        gamma_length(&self.relations)
    }

    /// `ℓ(M_m)`, infinite unless `M` is supported only at the origin locally.
    pub fn local_length(&self) -> Result<LengthResult> {
        local_length(&self.relations)
    }

    /// `dim_k M_t` for `M` graded by the ring weights, generators in degree 0.
    pub fn hilbert_function(&self, t: u32) -> Result<u64> {
        let w = self.base.ambient().weights();
        let graded = self.relations.generators().iter().all(|g| {
            let mut degs = g.terms().iter().map(|(t, _)| t.mono.weighted_degree(w));
            match degs.next() {
                None => true,
                Some(d) => degs.all(|e| e == d),
            }
        });
        if !graded {
            return Err(Error::NonHomogeneous);
        }
        self.relations.standard_monomials_in_degree(t)
    }

    /// Free resolution with `length` maps, cached across calls.
    pub fn resolution(&self, length: usize) -> Result<FreeComplex> {
        let mut guard = self.resolution.lock().expect("poisoned");
        if let Some(c) = guard.as_ref() {
            if c.len() >= length {
                return Ok(c.truncate(length));
            }
        }
        let c = resolve(&self.base, &self.matrix, length)?;
        *guard = Some(c.clone());
        Ok(c)
    }

    /// Resolution without touching the cache.
    pub fn resolution_uncached(&self, length: usize) -> Result<FreeComplex> {
        resolve(&self.base, &self.matrix, length)
    }

    /// The relation columns reduced modulo `I_R`.
    pub fn reduced_relations(&self) -> Result<Matrix> {
        let cols = reduced_columns(&self.base, &self.matrix)?;
        Ok(Matrix::from_column_vectors(
            self.base.ambient().clone(),
            self.rank(),
            &cols,
        ))
    }

    /// An ideal of `P` containing `I_R`, viewed as the cyclic module `P/I`.
    pub fn from_ideal(base: Arc<QuotientRing>, ideal: &Ideal) -> Result<Self> {
        PresentedModule::cyclic(base, ideal.generators())
    }
}
