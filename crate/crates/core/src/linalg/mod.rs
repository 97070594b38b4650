//! Dense complex linear algebra at desk scale: the matrix carrier, LU solves,
//! and a Schur-based eigensolver.

pub mod eigen;
pub mod lu;
mod matrix;

pub use eigen::{condition2, eigenvalues, norm2, Eigendecomposition};
pub use lu::{inverse, solve, Lu};
pub use matrix::{inner, vec_add, vec_norm, vec_scale, vec_sub, CVector, ComplexDenseMatrix};
