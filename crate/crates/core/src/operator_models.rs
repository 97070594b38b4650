//! Finite-dimensional m-ω-accretive model operators.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{condition2, eigenvalues, inner, ComplexDenseMatrix, Eigendecomposition};
use crate::sampling::{rng, unit_vector};
use crate::scalar::{cis, principal_arg, Real, C};

/// Default number of sampled unit vectors for numerical-range estimates.
pub const DEFAULT_SAMPLES: usize = 4096;

/// Eigenvector condition beyond which a model is flagged non-diagonalizable.
pub const DIAGONALIZABLE_CONDITION_LIMIT: f64 = 1e12;

/// Default angular slack for the spectral-inclusion check.
pub fn default_angle_tol<T: Real>() -> T {
    T::tol(1e-10)
}

/// A matrix `A` together with a certified sector half-angle `ω` and
/// structural flags derived from its spectrum.
#[derive(Debug, Clone)]
pub struct SectorialModel<T> {
    matrix: ComplexDenseMatrix<T>,
    omega: T,
    spectrum: Vec<C<T>>,
    is_selfadjoint: bool,
    is_diagonalizable: bool,
    zero_in_resolvent: bool,
    angle_tol: T,
    eigen: Option<Arc<Eigendecomposition<T>>>,
}

impl<T: Real> SectorialModel<T> {
    /// Wraps an arbitrary matrix with a claimed sector angle, using the
    /// default angle tolerance.
    pub fn from_matrix(matrix: ComplexDenseMatrix<T>, omega: T) -> Result<Self> {
        Self::from_matrix_with_tol(matrix, omega, default_angle_tol())
    }

    pub fn from_matrix_with_tol(
        matrix: ComplexDenseMatrix<T>,
        omega: T,
        angle_tol: T,
    ) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::InvalidInput("matrix must have dim >= 1".into()));
        }
        if !matrix.is_finite() {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        check_omega(omega)?;
        let limit = T::lit(DIAGONALIZABLE_CONDITION_LIMIT);
        let (spectrum, eigen) = match Eigendecomposition::new(&matrix) {
            Ok(e) if e.condition.is_finite() && e.condition <= limit => {
                (e.values.clone(), Some(Arc::new(e)))
            }
            Ok(e) => (e.values, None),
            Err(Error::NotDiagonalizable { .. }) => (eigenvalues(&matrix)?, None),
            Err(e) => return Err(e),
        };
        let is_selfadjoint = omega == T::zero() && matrix.is_hermitian();
        Self::assemble(matrix, omega, spectrum, is_selfadjoint, eigen, angle_tol)
    }

    fn assemble(
        matrix: ComplexDenseMatrix<T>,
        omega: T,
        spectrum: Vec<C<T>>,
        is_selfadjoint: bool,
        eigen: Option<Arc<Eigendecomposition<T>>>,
        angle_tol: T,
    ) -> Result<Self> {
        for z in &spectrum {
            if z.norm() > T::zero() && principal_arg(*z).abs() > omega + angle_tol {
                return Err(Error::SpectralInclusion {
                    re: z.re.to_f64_lossy(),
                    im: z.im.to_f64_lossy(),
                    omega: omega.to_f64_lossy(),
                });
            }
        }
        let scale = matrix.max_abs().max(T::min_positive_value());
        let floor = T::epsilon() * scale * T::lit(100.0 * matrix.dim() as f64);
        let zero_in_resolvent = spectrum.iter().all(|z| z.norm() > floor);
        Ok(Self {
            is_diagonalizable: eigen.is_some(),
            matrix,
            omega,
            spectrum,
            is_selfadjoint,
            zero_in_resolvent,
            angle_tol,
            eigen,
        })
    }

    pub fn matrix(&self) -> &ComplexDenseMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn spectrum(&self) -> &[C<T>] {
        &self.spectrum
    }

    pub fn is_selfadjoint(&self) -> bool {
        self.is_selfadjoint
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.is_diagonalizable
    }

    pub fn zero_in_resolvent(&self) -> bool {
        self.zero_in_resolvent
    }

    pub fn angle_tol(&self) -> T {
        self.angle_tol
    }

    /// Cached eigendecomposition; `None` for non-diagonalizable models.
    pub fn eigen(&self) -> Option<&Eigendecomposition<T>> {
        self.eigen.as_deref()
    }

    /// Largest `|arg λ|` over the spectrum.
    pub fn max_abs_arg(&self) -> T {
        crate::spectra::max_abs_arg(&self.spectrum)
    }
}

fn check_omega<T: Real>(omega: T) -> Result<()> {
    if !(omega >= T::zero() && omega <= T::FRAC_PI_2()) {
        return Err(Error::AngleOutOfRange {
            omega: omega.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Diagonal operator with entries `moduli[k]·e^{i·angles[k]}`.
pub fn make_diag_sectorial<T: Real>(
    moduli: &[T],
    angles: &[T],
    omega: T,
) -> Result<SectorialModel<T>> {
    if moduli.is_empty() {
        return Err(Error::InvalidInput("moduli must be non-empty".into()));
    }
    if moduli.len() != angles.len() {
        return Err(Error::InvalidInput(format!(
            "moduli and angles differ in length ({} vs {})",
            moduli.len(),
            angles.len()
        )));
    }
    check_omega(omega)?;
    for (k, (&r, &theta)) in moduli.iter().zip(angles).enumerate() {
        if !(r >= T::zero()) || !r.is_finite() {
            return Err(Error::InvalidInput(format!(
                "moduli[{k}] must be a finite nonnegative real"
            )));
        }
        if !(theta.abs() <= omega) {
            return Err(Error::SectorViolation {
                index: k,
                angle: theta.to_f64_lossy(),
                omega: omega.to_f64_lossy(),
            });
        }
    }
    let entries: Vec<C<T>> = moduli
        .iter()
        .zip(angles)
        .map(|(&r, &theta)| {
            if theta == T::zero() {
                Complex::new(r, T::zero())
            } else {
                cis(theta) * r
            }
        })
        .collect();
    let matrix = ComplexDenseMatrix::from_diagonal(&entries);
    let eigen = Eigendecomposition::from_diagonal(entries.clone());
    let selfadjoint = omega == T::zero();
    SectorialModel::assemble(
        matrix,
        omega,
        entries,
        selfadjoint,
        Some(Arc::new(eigen)),
        default_angle_tol(),
    )
}

/// Tridiagonal `(2, −1)/h²` Dirichlet Laplacian on `n` interior points.
pub fn make_dirichlet_laplacian_1d<T: Real>(n: usize, h: T) -> Result<SectorialModel<T>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::InvalidInput(
            "h must be a finite positive real".into(),
        ));
    }
    let inv_h2 = T::one() / (h * h);
    let matrix = ComplexDenseMatrix::from_fn(n, |i, j| {
        let v = if i == j {
            T::lit(2.0) * inv_h2
        } else if i.abs_diff(j) == 1 {
            -inv_h2
        } else {
            T::zero()
        };
        Complex::new(v, T::zero())
    });
    let mut model = SectorialModel::from_matrix(matrix, T::zero())?;
    // Hermitian input: the QR iterates carry only rounding-level imaginary parts.
    for z in &mut model.spectrum {
        z.im = T::zero();
    }
    if let Some(e) = model.eigen.as_mut() {
        let mut e2 = (**e).clone();
        for z in &mut e2.values {
            z.im = T::zero();
        }
        *e = Arc::new(e2);
    }
    Ok(model)
}

/// `e^{iφ}·A`, widening the sector to `ω + |φ|`.
pub fn make_rotated<T: Real>(model: &SectorialModel<T>, phi: T) -> Result<SectorialModel<T>> {
    let omega = model.omega + phi.abs();
    check_omega(omega)?;
    let rot = cis(phi);
    let matrix = model.matrix.scale(rot);
    let spectrum: Vec<C<T>> = model.spectrum.iter().map(|z| *z * rot).collect();
    let eigen = model.eigen.as_ref().map(|e| {
        let mut e2 = (**e).clone();
        for z in &mut e2.values {
            *z *= rot;
        }
        Arc::new(e2)
    });
    let selfadjoint = phi == T::zero() && model.is_selfadjoint;
    SectorialModel::assemble(matrix, omega, spectrum, selfadjoint, eigen, model.angle_tol)
}

/// Samples `⟨Ax, x⟩` at `sample_count` random unit vectors.
fn numerical_range_samples<T: Real>(
    model: &SectorialModel<T>,
    sample_count: usize,
    seed: u64,
) -> Vec<C<T>> {
    let mut r = rng(seed);
    (0..sample_count)
        .map(|_| {
            let x = unit_vector::<T>(&mut r, model.dim());
            inner(&model.matrix.matvec(&x), &x)
        })
        .collect()
}

/// Sampled estimate of the half-angle of the numerical range `W(A)`.
pub fn certify_omega<T: Real>(model: &SectorialModel<T>, sample_count: usize, seed: u64) -> T {
    numerical_range_samples(model, sample_count.max(1), seed)
        .into_iter()
        .filter(|z| z.norm() > T::zero())
        .map(|z| principal_arg(z).abs())
        .fold(T::zero(), T::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccretivityReport<T> {
    /// Every sample satisfied `|Im⟨Ax,x⟩| ≤ tan(ω)·Re⟨Ax,x⟩` within tolerance.
    pub sector_inequality: bool,
    /// Largest violation `|Im|·cos ω − Re·sin ω`, normalized by `|⟨Ax,x⟩|`.
    pub worst_excess: T,
    /// `I + A` is numerically invertible.
    pub identity_plus_invertible: bool,
    pub identity_plus_condition: T,
    pub samples: usize,
}

impl<T> AccretivityReport<T> {
    pub fn passed(&self) -> bool {
        self.sector_inequality && self.identity_plus_invertible
    }
}

pub fn check_accretivity<T: Real>(
    model: &SectorialModel<T>,
    sample_count: usize,
    seed: u64,
) -> AccretivityReport<T> {
    let (s, c) = model.omega.sin_cos();
    let samples = numerical_range_samples(model, sample_count.max(1), seed);
    let worst_excess = samples
        .iter()
        .filter(|z| z.norm() > T::zero())
        .map(|z| (z.im.abs() * c - z.re * s) / z.norm())
        .fold(T::neg_infinity(), T::max);
    let worst_excess = if worst_excess.is_finite() {
        worst_excess
    } else {
        T::zero()
    };
    let cond =
        condition2(&model.matrix.shift(Complex::new(T::one(), T::zero()))).unwrap_or(T::infinity());
    AccretivityReport {
        sector_inequality: worst_excess <= default_angle_tol(),
        worst_excess,
        identity_plus_invertible: cond.is_finite() && cond < T::one() / T::epsilon(),
        identity_plus_condition: cond,
        samples: samples.len(),
    }
}
