use thiserror::Error;

/// Failures raised by model construction and the fractional-power pipelines.
///
/// Numeric payloads are carried as `f64` regardless of the working scalar.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("sector violation: entry {index} has argument {angle} outside [-{omega}, {omega}]")]
    SectorViolation {
        index: usize,
        angle: f64,
        omega: f64,
    },

    #[error("sector half-angle {omega} leaves [0, π/2]")]
    AngleOutOfRange { omega: f64 },

    #[error("eigenvalue {re}{im:+}i has |arg| beyond the declared sector {omega}")]
    SpectralInclusion { re: f64, im: f64, omega: f64 },

    #[error("matrix is not (numerically) diagonalizable: eigenvector condition {condition:e} exceeds {limit:e}")]
    NotDiagonalizable { condition: f64, limit: f64 },

    #[error("eigenvalue {re}{im:+}i lies on the branch cut of the principal logarithm")]
    BranchCut { re: f64, im: f64 },

    #[error("operation requires 0 in the resolvent set of A")]
    SingularOperator,

    #[error("λ = {re}{im:+}i has λ³ in the spectrum of A")]
    SpectrumCollision { re: f64, im: f64 },

    #[error("matrix is numerically singular ({0})")]
    Singular(String),

    #[error(
        "quadrature did not reach rel_tol {rel_tol:e} with {nodes} nodes (achieved {achieved:e})"
    )]
    QuadratureNotConverged {
        achieved: f64,
        rel_tol: f64,
        nodes: usize,
    },

    #[error("QR iteration failed to converge after {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("alpha = {alpha} exceeds the generation threshold alpha* = {alpha_star}")]
    GenerationThreshold { alpha: f64, alpha_star: f64 },

    #[error("initial-data transform degenerates at alpha = {alpha} (denominator {value:e})")]
    DegenerateDenominator { alpha: f64, value: f64 },

    #[error("factorization roots are confluent at alpha = {alpha} (|b - a| = {gap:e})")]
    ConfluentRoots { alpha: f64, gap: f64 },

    #[error("step size underflow at t = {time}")]
    StepUnderflow { time: f64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
