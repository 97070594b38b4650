//! Fractional powers `A^α` by the Balakrishnan integral and by a
//! principal-branch eigendecomposition oracle.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{norm2, vec_norm, ComplexDenseMatrix, Eigendecomposition, Lu};
use crate::operator_models::SectorialModel;
use crate::quadrature::GaussLegendre;
use crate::sampling::{rng, unit_vector};
use crate::scalar::{principal_powf, Real, C};

/// The oracle refuses eigenvector bases worse conditioned than this.
pub const ORACLE_CONDITION_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerMethod {
    Quadrature,
    Oracle,
}

#[derive(Debug, Clone)]
pub struct PowerResult<T> {
    pub matrix: ComplexDenseMatrix<T>,
    pub alpha: T,
    pub method: PowerMethod,
    pub residual_vs_oracle: Option<T>,
}

/// Discretization of the Balakrishnan integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    /// Starting Gauss–Legendre node count per half-integral.
    pub node_count: usize,
    /// Where `[0, ∞)` is split; `None` selects `‖A‖₂`.
    pub split_point: Option<T>,
    /// Stop once doubling the node count changes the result by at most this (relative, Frobenius).
    pub rel_tol: T,
    pub max_node_count: usize,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            node_count: 16,
            split_point: None,
            rel_tol: T::tol(1e-10),
            max_node_count: 4096,
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 8 {
            return Err(Error::InvalidInput(format!(
                "node_count must be >= 8 (got {})",
                self.node_count
            )));
        }
        if self.max_node_count < self.node_count {
            return Err(Error::InvalidInput(
                "max_node_count below node_count".into(),
            ));
        }
        if !(self.rel_tol > T::zero() && self.rel_tol <= T::lit(1e-2)) {
            return Err(Error::InvalidInput("rel_tol must lie in (0, 1e-2]".into()));
        }
        if let Some(s) = self.split_point {
            if !(s > T::zero() && s.is_finite()) {
                return Err(Error::InvalidInput(
                    "split_point must be a finite positive real".into(),
                ));
            }
        }
        Ok(())
    }
}

fn oracle_eigen<T: Real>(model: &SectorialModel<T>) -> Result<&Eigendecomposition<T>> {
    let limit = T::lit(ORACLE_CONDITION_LIMIT);
    match model.eigen() {
        Some(e) if e.condition <= limit => Ok(e),
        Some(e) => Err(Error::NotDiagonalizable {
            condition: e.condition.to_f64_lossy(),
            limit: ORACLE_CONDITION_LIMIT,
        }),
        None => Err(Error::NotDiagonalizable {
            condition: f64::INFINITY,
            limit: ORACLE_CONDITION_LIMIT,
        }),
    }
}

fn check_branch<T: Real>(values: &[C<T>]) -> Result<()> {
    match values
        .iter()
        .find(|z| z.im == T::zero() && z.re < T::zero())
    {
        Some(z) => Err(Error::BranchCut {
            re: z.re.to_f64_lossy(),
            im: z.im.to_f64_lossy(),
        }),
        None => Ok(()),
    }
}

/// `V·diag(f(λ))·V⁻¹` for the principal power `λ ↦ λ^p` of any real exponent.
///
/// Negative exponents are taken as powers of `λ⁻¹`; `p = 0` gives `I` and
/// `p = 1` returns the matrix itself.
fn eigen_power<T: Real>(e: &Eigendecomposition<T>, p: T) -> Result<ComplexDenseMatrix<T>> {
    if p == T::zero() {
        return Ok(ComplexDenseMatrix::identity(e.dim()));
    }
    check_branch(&e.values)?;
    if p < T::zero() {
        if e.values.iter().any(|z| z.norm() == T::zero()) {
            return Err(Error::SingularOperator);
        }
        let q = -p;
        return Ok(e.apply(|z| principal_powf(z.inv(), q)));
    }
    Ok(e.apply(|z| principal_powf(z, p)))
}

/// Principal power `A^p` of a model for any real exponent `p`.
pub fn real_power<T: Real>(model: &SectorialModel<T>, p: T) -> Result<ComplexDenseMatrix<T>> {
    if !p.is_finite() {
        return Err(Error::InvalidInput("exponent must be finite".into()));
    }
    if p == T::zero() {
        return Ok(ComplexDenseMatrix::identity(model.dim()));
    }
    if p == T::one() {
        return Ok(model.matrix().clone());
    }
    if p < T::zero() && !model.zero_in_resolvent() {
        return Err(Error::SingularOperator);
    }
    eigen_power(oracle_eigen(model)?, p)
}

/// Principal power of an arbitrary matrix through its own eigendecomposition.
pub fn principal_power_of_matrix<T: Real>(
    a: &ComplexDenseMatrix<T>,
    p: T,
) -> Result<ComplexDenseMatrix<T>> {
    let e = Eigendecomposition::new(a)?;
    if !(e.condition <= T::lit(ORACLE_CONDITION_LIMIT)) {
        return Err(Error::NotDiagonalizable {
            condition: e.condition.to_f64_lossy(),
            limit: ORACLE_CONDITION_LIMIT,
        });
    }
    eigen_power(&e, p)
}

pub fn principal_power_oracle<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
) -> Result<PowerResult<T>> {
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "alpha = {alpha} outside [0, 1]"
        )));
    }
    Ok(PowerResult {
        matrix: real_power(model, alpha)?,
        alpha,
        method: PowerMethod::Oracle,
        residual_vs_oracle: None,
    })
}

pub fn cube_root<T: Real>(model: &SectorialModel<T>) -> Result<PowerResult<T>> {
    principal_power_oracle(model, T::one() / T::lit(3.0))
}

/// `‖X − Y‖_F / ‖Y‖_F`, or the absolute difference when `Y = 0`.
pub fn relative_error<T: Real>(x: &ComplexDenseMatrix<T>, y: &ComplexDenseMatrix<T>) -> T {
    let d = (x - y).norm_fro();
    let s = y.norm_fro();
    if s > T::zero() {
        d / s
    } else {
        d
    }
}

fn pairwise_sum<T: Real>(terms: &[ComplexDenseMatrix<T>], dim: usize) -> ComplexDenseMatrix<T> {
    match terms.len() {
        0 => ComplexDenseMatrix::zeros(dim),
        1 => terms[0].clone(),
        n => {
            let (l, r) = terms.split_at(n / 2);
            &pairwise_sum(l, dim) + &pairwise_sum(r, dim)
        }
    }
}

/// Both substituted half-integrals at a fixed node count, before the
/// `sin(πα)/π` prefactor.
fn balakrishnan_sum<T: Real>(
    a: &ComplexDenseMatrix<T>,
    alpha: T,
    s: T,
    rule: &GaussLegendre<T>,
) -> Result<ComplexDenseMatrix<T>> {
    let n = a.dim();
    let one = T::one();
    // [0, s]: λ = s·u^{1/α}, so λ^{α−1}dλ = (s^α/α) du.
    let lower_scale = s.powf(alpha) / alpha;
    // [s, ∞): λ = s·w^{−1/(1−α)}, so λ^{α−1}dλ·A(λ+A)⁻¹ = (s^{α−1}/(1−α))·A(I + tA)⁻¹ dw with t = 1/λ.
    let upper_scale = s.powf(alpha - one) / (one - alpha);
    let inv_alpha = one / alpha;
    let inv_beta = one / (one - alpha);
    let terms: Vec<Result<ComplexDenseMatrix<T>>> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter())
        .flat_map_iter(|(&x, &w)| {
            let lower = {
                let lambda = s * x.powf(inv_alpha);
                Lu::new(&a.shift(C::new(lambda, T::zero())))
                    .map(|lu| lu.solve(a).scale_real(w * lower_scale))
            };
            let upper = {
                let t = x.powf(inv_beta) / s;
                let m = a.scale_real(t).shift(C::new(one, T::zero()));
                Lu::new(&m).map(|lu| lu.solve(a).scale_real(w * upper_scale))
            };
            [lower, upper]
        })
        .collect();
    let terms = terms.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&terms, n))
}

/// Quadrature of `sin(πα)/π ∫₀^∞ λ^{α−1} A(λI + A)⁻¹ dλ` with node doubling.
pub fn balakrishnan_power<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
    quad: &QuadratureSpec<T>,
) -> Result<PowerResult<T>> {
    quad.validate()?;
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "alpha = {alpha} outside [0, 1]"
        )));
    }
    let oracle = principal_power_oracle(model, alpha).ok();
    let finish = |matrix: ComplexDenseMatrix<T>| {
        let residual_vs_oracle = oracle.as_ref().map(|o| relative_error(&matrix, &o.matrix));
        PowerResult {
            matrix,
            alpha,
            method: PowerMethod::Quadrature,
            residual_vs_oracle,
        }
    };
    if alpha == T::zero() {
        return Ok(finish(ComplexDenseMatrix::identity(model.dim())));
    }
    if alpha == T::one() {
        return Ok(finish(model.matrix().clone()));
    }
    if !model.zero_in_resolvent() {
        return Err(Error::SingularOperator);
    }
    let a = model.matrix();
    let s = match quad.split_point {
        Some(s) => s,
        None => norm2(a)?,
    };
    let prefactor = (T::PI() * alpha).sin() / T::PI();
    let mut n = quad.node_count;
    let mut prev = balakrishnan_sum(a, alpha, s, &GaussLegendre::new(n))?;
    let mut achieved = T::infinity();
    while 2 * n <= quad.max_node_count {
        n *= 2;
        let next = balakrishnan_sum(a, alpha, s, &GaussLegendre::new(n))?;
        achieved = relative_error(&prev, &next);
        prev = next;
        if achieved <= quad.rel_tol {
            return Ok(finish(prev.scale_real(prefactor)));
        }
    }
    Err(Error::QuadratureNotConverged {
        achieved: achieved.to_f64_lossy(),
        rel_tol: quad.rel_tol.to_f64_lossy(),
        nodes: n,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport<T> {
    /// `max ‖A^α x‖ / (‖x‖^{1−α}·‖Ax‖^α)` over the samples.
    pub max_ratio: T,
    pub trials: usize,
}

/// Sampled constant of the moment inequality `‖A^α x‖ ≤ C‖x‖^{1−α}‖Ax‖^α`.
pub fn moment_inequality_probe<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
    trials: usize,
    seed: u64,
) -> Result<MomentReport<T>> {
    let p = real_power(model, alpha)?;
    let a = model.matrix();
    let mut r = rng(seed);
    let mut max_ratio = T::zero();
    for _ in 0..trials.max(1) {
        let x = unit_vector::<T>(&mut r, model.dim());
        let num = vec_norm(&p.matvec(&x));
        let den = vec_norm(&x).powf(T::one() - alpha) * vec_norm(&a.matvec(&x)).powf(alpha);
        if den > T::zero() {
            max_ratio = max_ratio.max(num / den);
        }
    }
    Ok(MomentReport {
        max_ratio,
        trials: trials.max(1),
    })
}
