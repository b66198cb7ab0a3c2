//! Dense matrices of polynomials. A `rows x cols` matrix is a map
//! `P^cols -> P^rows`; its columns are the images of the basis vectors.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{vector_from_polys, vector_to_polys, Vector};
use crate::poly::{same_ring, Polynomial};
use crate::ring::PolyRing;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    ring: Arc<PolyRing>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl Matrix {
    /// Row-major entries.
    pub fn new(
        ring: Arc<PolyRing>,
        rows: usize,
        cols: usize,
        entries: Vec<Polynomial>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|f| !same_ring(f.ring(), &ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(Matrix {
            ring,
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(ring: Arc<PolyRing>, rows: usize, cols: usize) -> Self {
        let entries = vec![ring.zero(); rows * cols];
        Matrix {
            ring,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(ring: Arc<PolyRing>, n: usize) -> Self {
        let mut m = Matrix::zero(ring.clone(), n, n);
        for i in 0..n {
            m.entries[i * n + i] = ring.one();
        }
        m
    }

    /// Parse row-major polynomial strings.
    pub fn parse(ring: &Arc<PolyRing>, rows: &[Vec<String>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Shape("ragged matrix rows".into()));
            }
            for s in row {
                entries.push(ring.parse(s)?);
            }
        }
        Matrix::new(ring.clone(), rows.len(), cols, entries)
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(
        ring: Arc<PolyRing>,
        rows: usize,
        columns: &[Vec<Polynomial>],
    ) -> Result<Self> {
        let cols = columns.len();
        let mut m = Matrix::zero(ring, rows, cols);
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Shape(format!(
                    "column of length {} in {rows} rows",
                    c.len()
                )));
            }
            for (i, f) in c.iter().enumerate() {
                m.entries[i * cols + j] = f.clone();
            }
        }
        if m.entries.iter().any(|f| !same_ring(f.ring(), &m.ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(m)
    }

    pub(crate) fn from_column_vectors(
        ring: Arc<PolyRing>,
        rows: usize,
        columns: &[Vector],
    ) -> Self {
        let cols: Vec<Vec<Polynomial>> = columns
            .iter()
            .map(|v| vector_to_polys(&ring, v, rows))
            .collect();
        Matrix::from_columns(ring, rows, &cols).expect("shapes agree")
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Polynomial> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column_vectors(&self) -> Vec<Vector> {
        (0..self.cols)
            .map(|j| vector_from_polys(&self.column(j)))
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            ring: self.ring.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.ring.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.ring.zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b)?)?;
                    }
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// Entry-wise `q`-th powers.
    pub fn frobenius(&self, q: u64) -> Result<Matrix> {
        self.map(|f| f.frobenius_power(q))
    }

    pub fn map(&self, mut f: impl FnMut(&Polynomial) -> Result<Polynomial>) -> Result<Matrix> {
        let entries = self
            .entries
            .iter()
            .map(&mut f)
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            entries,
            ..self.clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|f| f.is_zero())
    }

    /// Some entry has a nonzero constant term.
    pub fn has_unit_entry(&self) -> bool {
        self.entries.iter().any(|f| f.constant_term() != 0)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|f| f.to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{:?}", self.to_strings())
    }
}
