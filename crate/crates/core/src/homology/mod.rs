//! Modules over `R = P/I_R`: presentations, lengths, resolutions, homology.

mod complex;
mod length;
mod matrix;
mod presented;
mod quotient;

pub(crate) use complex::homology_presentation;
pub use complex::{resolve, FreeComplex};
pub use length::{
    gamma_length, gamma_length_saturated, local_length, subquotient_length, LengthResult,
};
pub use matrix::Matrix;
pub use presented::PresentedModule;
pub use quotient::QuotientRing;
