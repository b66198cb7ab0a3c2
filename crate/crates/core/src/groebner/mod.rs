//! Gröbner bases for ideals and submodules of free modules over `P`.

pub mod engine;
mod ideal;
mod submodule;

pub use engine::{Term, Vector};
pub use ideal::Ideal;
pub(crate) use submodule::monomials_of_degree;
pub use submodule::{
    kernel_modulo, poly_in_component, vector_from_polys, vector_to_polys, Submodule,
};
