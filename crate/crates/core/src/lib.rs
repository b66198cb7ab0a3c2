//! Generalized Hilbert–Kunz functions and related Frobenius invariants for
//! finitely presented modules over `F_p[x_1..x_v]/I`.
//!
//! Everything is exact: coefficients live in F_p, lengths are counted from
//! standard monomials of Gröbner bases, and sequence fitting uses rationals.
//! Lengths are local at the origin `m = (x_1, ..., x_v)`.

pub mod error;
pub mod field;
pub mod fit;
pub mod frobenius;
pub mod groebner;
pub mod homology;
pub mod monomial;
pub mod oracle;
pub mod poly;
pub mod ring;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use groebner::{Ideal, Submodule, Vector};
pub use homology::{FreeComplex, LengthResult, Matrix, PresentedModule, QuotientRing};
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use poly::{poly_arith, ArithOp, Polynomial};
pub use ring::{Guards, PolyRing};
