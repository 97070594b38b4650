//! Closed-form fractional powers `𝔸^α` of the block operator, the location
//! of their spectra and the generation threshold `α*`.

use crate::block_linearization::{spectrum_block, BlockLabel, BlockOperator};
use crate::error::{Error, Result};
use crate::fractional_core::real_power;
use crate::linalg::inner;
use crate::operator_models::SectorialModel;
use crate::sampling::{rng, unit_vector};
use crate::scalar::{principal_arg, principal_powf, Real, C};
use crate::spectra::{max_abs_arg, partition_sectors};

/// Half-width of the window around `π/2` reported as the boundary case.
pub const BOUNDARY_WINDOW: f64 = 1e-9;

/// `Υ_j^α = 2·cos(2π(α+j)/3) + 1`
pub fn upsilon<T: Real>(alpha: T, j: usize) -> T {
    let arg = T::TAU() * (alpha + T::lit(j as f64)) / T::lit(3.0);
    T::lit(2.0) * arg.cos() + T::one()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpsilonTriple<T> {
    pub alpha: T,
    pub values: [T; 3],
}

impl<T: Real> UpsilonTriple<T> {
    pub fn new(alpha: T) -> Self {
        Self {
            alpha,
            values: [upsilon(alpha, 0), upsilon(alpha, 1), upsilon(alpha, 2)],
        }
    }

    pub fn sum(&self) -> T {
        self.values[0] + self.values[1] + self.values[2]
    }
}

/// `max |sin 3θπ − sin θπ·(2cos 2θπ + 1)|` over the grid.
pub fn sin_triple_identity_check<T: Real>(theta_grid: &[T]) -> T {
    let pi = T::PI();
    theta_grid
        .iter()
        .map(|&t| {
            let lhs = (T::lit(3.0) * t * pi).sin();
            let rhs = (t * pi).sin() * (T::lit(2.0) * (T::lit(2.0) * t * pi).cos() + T::one());
            (lhs - rhs).abs()
        })
        .fold(T::zero(), T::max)
}

/// `3π/(4π + 2ω)`
pub fn alpha_star<T: Real>(omega: T) -> T {
    // Written without π in the numerator so α*(0) and α*(π/2) are exact.
    T::lit(3.0) / (T::lit(4.0) + T::lit(2.0) * omega / T::PI())
}

/// Toeplitz-by-blocks closed form of `𝔸^α` for `α ∈ [0, 1]`.
pub fn closed_form_fractional_block<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
) -> Result<BlockOperator<T>> {
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "alpha = {alpha} outside [0, 1]"
        )));
    }
    if !model.zero_in_resolvent() {
        return Err(Error::SingularOperator);
    }
    if !model.is_diagonalizable() {
        return Err(Error::NotDiagonalizable {
            condition: f64::INFINITY,
            limit: crate::operator_models::DIAGONALIZABLE_CONDITION_LIMIT,
        });
    }
    let three = T::lit(3.0);
    let one = T::one();
    let two = T::lit(2.0);
    let [u0, u1, u2] = UpsilonTriple::new(alpha).values;
    let third = one / three;
    let p0 = real_power(model, alpha / three)?.scale_real(u0 * third);
    let pm1 = real_power(model, (alpha - one) / three)?.scale_real(-u2 * third);
    let pm2 = real_power(model, (alpha - two) / three)?.scale_real(u1 * third);
    let pp1 = real_power(model, (alpha + one) / three)?.scale_real(-u1 * third);
    let pp2 = real_power(model, (alpha + two) / three)?.scale_real(u2 * third);
    BlockOperator::new(
        [
            [p0.clone(), pm1.clone(), pm2],
            [pp1.clone(), p0.clone(), pm1],
            [pp2, pp1, p0],
        ],
        BlockLabel::AAlphaBlock,
    )
}

/// `σ(𝔸^α)` as principal `α`-th powers of `σ(𝔸)`.
pub fn fractional_block_spectrum<T: Real>(model: &SectorialModel<T>, alpha: T) -> Vec<C<T>> {
    spectrum_block(model)
        .into_iter()
        .map(|z| principal_powf(z, alpha))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorClassification<T> {
    /// Around `0`.
    pub gamma1: Vec<C<T>>,
    /// Around `+2πα/3`.
    pub gamma2: Vec<C<T>>,
    /// Around `−2πα/3`.
    pub gamma3: Vec<C<T>>,
    pub alpha: T,
    pub omega: T,
    pub max_abs_arg: T,
    /// Every point lies in its assigned closed sector of half-angle `αω/3`.
    pub inclusion_holds: bool,
}

pub fn classify_spectrum_sectors<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
) -> Result<SectorClassification<T>> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::InvalidInput(format!(
            "alpha = {alpha} outside (0, 1)"
        )));
    }
    if !model.zero_in_resolvent() {
        return Err(Error::SingularOperator);
    }
    let points = fractional_block_spectrum(model, alpha);
    let c = T::TAU() * alpha / T::lit(3.0);
    let half = alpha * model.omega() / T::lit(3.0);
    let tol = T::tol(1e-10);
    let part = partition_sectors(&points, [T::zero(), c, -c], half, tol);
    let [gamma1, gamma2, gamma3] = part.groups;
    Ok(SectorClassification {
        gamma1,
        gamma2,
        gamma3,
        alpha,
        omega: model.omega(),
        max_abs_arg: max_abs_arg(&points),
        inclusion_holds: part.worst_excess <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenerationVerdict {
    Analytic,
    StronglyContinuousBoundary,
    NotGenerated,
}

impl GenerationVerdict {
    /// Verdict from the largest spectral argument of `𝔸^α`.
    pub fn from_angle<T: Real>(max_abs_arg: T) -> Self {
        let half_pi = T::FRAC_PI_2();
        let w = T::lit(BOUNDARY_WINDOW);
        if max_abs_arg < half_pi - w {
            Self::Analytic
        } else if max_abs_arg > half_pi + w {
            Self::NotGenerated
        } else {
            Self::StronglyContinuousBoundary
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Analytic => "analytic",
            Self::StronglyContinuousBoundary => "strongly_continuous_boundary",
            Self::NotGenerated => "not_generated",
        }
    }

    pub fn generates(self) -> bool {
        !matches!(self, Self::NotGenerated)
    }
}

pub fn generation_verdict<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
) -> Result<GenerationVerdict> {
    Ok(GenerationVerdict::from_angle(
        classify_spectrum_sectors(model, alpha)?.max_abs_arg,
    ))
}

/// Sampled half-angle of the numerical range of `A^α`, to set against `απ/2`.
pub fn power_numerical_range_angle<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
    sample_count: usize,
    seed: u64,
) -> Result<T> {
    let p = real_power(model, alpha)?;
    let mut r = rng(seed);
    let mut worst = T::zero();
    for _ in 0..sample_count.max(1) {
        let x = unit_vector::<T>(&mut r, model.dim());
        let z = inner(&p.matvec(&x), &x);
        if z.norm() > T::zero() {
            worst = worst.max(principal_arg(z).abs());
        }
    }
    Ok(worst)
}
