//! Exact integer matrices and Smith normal form.

mod matrix;
mod scalar;
mod snf;

pub use matrix::IntMatrix;
pub use snf::{cokernel_structure, invariant_factors, rank, snf, CokernelStructure, SmithDecomposition};
