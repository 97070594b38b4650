//! Fractional powers of the third-order block linearization
//! `𝔸 = [[0, −I, 0], [0, 0, −I], [A, 0, 0]]` for finite-dimensional
//! m-ω-accretive `A`, with independent numerical oracles for every formula.
//!
//! Everything numerical is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix the working precision at `f64`.

// Negated comparisons deliberately treat NaN as a failed precondition.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::too_many_arguments
)]

pub mod block_linearization;
pub mod error;
pub mod evolution_solver;
pub mod fractional_block;
pub mod fractional_core;
pub mod linalg;
pub mod operator_models;
pub mod quadrature;
pub mod sampling;
pub mod scalar;
pub mod spectra;

pub use error::{Error, Result};

pub type Complex64 = num_complex::Complex<f64>;
pub type Matrix = linalg::ComplexDenseMatrix<f64>;
pub type Model = operator_models::SectorialModel<f64>;
pub type Block = block_linearization::BlockOperator<f64>;
pub type State = evolution_solver::StateTriple<f64>;
pub type Report = evolution_solver::SolveReport<f64>;
pub type Quadrature = fractional_core::QuadratureSpec<f64>;

pub type Matrix32 = linalg::ComplexDenseMatrix<f32>;
pub type Model32 = operator_models::SectorialModel<f32>;
