//! The block operator `𝔸 = [[0, −I, 0], [0, 0, −I], [A, 0, 0]]` on
//! `X = H^{2/3} × H^{1/3} × H`, its resolvent and its spectrum.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractional_core::real_power;
use crate::linalg::{norm2, ComplexDenseMatrix, Lu};
use crate::operator_models::SectorialModel;
use crate::scalar::{cis, creal, principal_arg, Real, C};
use crate::spectra::{partition_sectors, SectorPartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockLabel {
    ABlock,
    AAlphaBlock,
    ResolventBlock,
}

/// A 3×3 grid of equally sized square blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator<T> {
    block_dim: usize,
    blocks: [[ComplexDenseMatrix<T>; 3]; 3],
    pub label: BlockLabel,
}

impl<T: Real> BlockOperator<T> {
    pub fn new(blocks: [[ComplexDenseMatrix<T>; 3]; 3], label: BlockLabel) -> Result<Self> {
        let block_dim = blocks[0][0].dim();
        if blocks.iter().flatten().any(|b| b.dim() != block_dim) {
            return Err(Error::InvalidInput(
                "all nine blocks must share block_dim".into(),
            ));
        }
        Ok(Self {
            block_dim,
            blocks,
            label,
        })
    }

    /// Splits a `3n × 3n` matrix into its 3×3 block partition.
    pub fn from_flat(m: &ComplexDenseMatrix<T>, label: BlockLabel) -> Result<Self> {
        if !m.dim().is_multiple_of(3) || m.dim() == 0 {
            return Err(Error::InvalidInput(format!(
                "dimension {} is not a positive multiple of 3",
                m.dim()
            )));
        }
        let n = m.dim() / 3;
        let blocks = std::array::from_fn(|i| std::array::from_fn(|j| m.submatrix(i * n, j * n, n)));
        Self::new(blocks, label)
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn block(&self, i: usize, j: usize) -> &ComplexDenseMatrix<T> {
        &self.blocks[i][j]
    }

    pub fn blocks(&self) -> &[[ComplexDenseMatrix<T>; 3]; 3] {
        &self.blocks
    }

    pub fn flatten(&self) -> ComplexDenseMatrix<T> {
        let n = self.block_dim;
        let mut m = ComplexDenseMatrix::zeros(3 * n);
        for (i, row) in self.blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                m.set_submatrix(i * n, j * n, b);
            }
        }
        m
    }
}

pub fn assemble_block<T: Real>(model: &SectorialModel<T>) -> BlockOperator<T> {
    let n = model.dim();
    let z = ComplexDenseMatrix::zeros(n);
    let mi = -&ComplexDenseMatrix::identity(n);
    BlockOperator {
        block_dim: n,
        blocks: [
            [z.clone(), mi.clone(), z.clone()],
            [z.clone(), z.clone(), mi],
            [model.matrix().clone(), z.clone(), z],
        ],
        label: BlockLabel::ABlock,
    }
}

/// `(λI − 𝔸)⁻¹` from `R = (λ³I − A)⁻¹`.
pub fn resolvent_closed_form<T: Real>(
    model: &SectorialModel<T>,
    lambda: C<T>,
) -> Result<BlockOperator<T>> {
    let l3 = lambda * lambda * lambda;
    let collision = || Error::SpectrumCollision {
        re: lambda.re.to_f64_lossy(),
        im: lambda.im.to_f64_lossy(),
    };
    let tol = T::tol(1e-12);
    if model
        .spectrum()
        .iter()
        .any(|mu| (l3 - *mu).norm() <= tol * T::one().max(mu.norm()))
    {
        return Err(collision());
    }
    let a = model.matrix();
    let r = Lu::new(&(-a).shift(l3)).map_err(|_| collision())?.inverse();
    let ar = a.matmul(&r);
    let l2r = r.scale(lambda * lambda);
    let mlr = r.scale(-lambda);
    let mar = -&ar;
    let lar = ar.scale(lambda);
    Ok(BlockOperator {
        block_dim: a.dim(),
        blocks: [
            [l2r.clone(), mlr.clone(), r],
            [mar.clone(), l2r.clone(), mlr],
            [lar, mar, l2r],
        ],
        label: BlockLabel::ResolventBlock,
    })
}

/// The three cube roots of every eigenvalue of `A`, `3·dim` points in total.
pub fn spectrum_block<T: Real>(model: &SectorialModel<T>) -> Vec<C<T>> {
    let third = T::one() / T::lit(3.0);
    model
        .spectrum()
        .iter()
        .flat_map(|&z| {
            let r = z.norm().powf(third);
            let theta = principal_arg(z);
            [
                theta / T::lit(3.0),
                (theta + T::TAU()) / T::lit(3.0),
                (theta - T::TAU()) / T::lit(3.0),
            ]
            .map(|phi| {
                if phi == T::zero() {
                    creal(r)
                } else {
                    cis(phi) * r
                }
            })
        })
        .collect()
}

/// Spectral abscissa of `−𝔸`, `max Re(−λ)` over `σ(𝔸)`.
pub fn nongeneration_evidence<T: Real>(model: &SectorialModel<T>) -> T {
    spectrum_block(model)
        .into_iter()
        .map(|z| -z.re)
        .fold(T::neg_infinity(), T::max)
}

/// `σ(𝔸)` split among `S(ω/3)`, `e^{2πi/3}S(ω/3)` and `e^{−2πi/3}S(ω/3)`.
pub fn block_spectrum_sectors<T: Real>(model: &SectorialModel<T>, tol: T) -> SectorPartition<T> {
    let c = T::TAU() / T::lit(3.0);
    partition_sectors(
        &spectrum_block(model),
        [T::zero(), c, -c],
        model.omega() / T::lit(3.0),
        tol,
    )
}

/// `count` logarithmically spaced points on `[lo, hi]`.
pub fn log_grid<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let step = (b - a) / T::lit((count - 1) as f64);
            (0..count)
                .map(|k| match k {
                    0 => lo,
                    k if k == count - 1 => hi,
                    k => (a + step * T::lit(k as f64)).exp(),
                })
                .collect()
        }
    }
}

/// 40 log-spaced points on `[1e−3, 1e6]`.
pub fn default_lambda_grid<T: Real>() -> Vec<T> {
    log_grid(T::lit(1e-3), T::lit(1e6), 40)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventProbeReport<T> {
    pub lambda_grid: Vec<T>,
    /// `‖(λI + 𝔸)⁻¹‖` in the weighted X-norm when available, else the flat 2-norm.
    pub norms: Vec<T>,
    pub flat_norms: Vec<T>,
    /// Whether `norms` are X-norms (`0 ∈ ρ(A)` and `A` diagonalizable).
    pub weighted: bool,
    pub fitted_m: T,
    pub fitted_k: T,
}

/// Conjugation weights `A^{2/3}`, `A^{1/3}`, `I` and their inverses.
fn x_weights<T: Real>(
    model: &SectorialModel<T>,
) -> Option<[(ComplexDenseMatrix<T>, ComplexDenseMatrix<T>); 3]> {
    if !model.zero_in_resolvent() {
        return None;
    }
    let t = T::one() / T::lit(3.0);
    let two_t = T::lit(2.0) / T::lit(3.0);
    let w0 = real_power(model, two_t).ok()?;
    let w0i = real_power(model, -two_t).ok()?;
    let w1 = real_power(model, t).ok()?;
    let w1i = real_power(model, -t).ok()?;
    let id = ComplexDenseMatrix::identity(model.dim());
    Some([(w0, w0i), (w1, w1i), (id.clone(), id)])
}

/// Samples `‖(λI + 𝔸)⁻¹‖` along a positive grid.
pub fn resolvent_bound_probe<T: Real>(
    model: &SectorialModel<T>,
    lambda_grid: &[T],
) -> Result<ResolventProbeReport<T>> {
    if lambda_grid.iter().any(|&l| !(l > T::zero())) {
        return Err(Error::InvalidInput("lambda_grid values must be > 0".into()));
    }
    let weights = x_weights(model);
    let rows: Vec<Result<(T, T)>> = lambda_grid
        .par_iter()
        .map(|&l| {
            // (λI + 𝔸)⁻¹ = −((−λ)I − 𝔸)⁻¹
            let res = resolvent_closed_form(model, creal(-l))
                .map_err(|e| Error::Internal(format!("(λI + 𝔸) singular at λ = {l}: {e}")))?;
            let flat = norm2(&res.flatten())?;
            let weighted = match &weights {
                Some(w) => {
                    let blocks = std::array::from_fn(|i| {
                        std::array::from_fn(|j| w[i].0.matmul(res.block(i, j)).matmul(&w[j].1))
                    });
                    norm2(&BlockOperator::new(blocks, BlockLabel::ResolventBlock)?.flatten())?
                }
                None => flat,
            };
            Ok((weighted, flat))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let norms: Vec<T> = rows.iter().map(|r| r.0).collect();
    let flat_norms: Vec<T> = rows.iter().map(|r| r.1).collect();
    let fitted_m = lambda_grid
        .iter()
        .zip(&norms)
        .map(|(&l, &n)| l * n)
        .fold(T::zero(), T::max);
    let fitted_k = lambda_grid
        .iter()
        .zip(&norms)
        .map(|(&l, &n)| (l + T::one()) * n)
        .fold(T::zero(), T::max);
    Ok(ResolventProbeReport {
        lambda_grid: lambda_grid.to_vec(),
        norms,
        flat_norms,
        weighted: weights.is_some(),
        fitted_m,
        fitted_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues, inverse};
    use crate::operator_models::{make_diag_sectorial, make_dirichlet_laplacian_1d};
    use crate::spectra::hausdorff_distance;
    use num_complex::Complex;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn scalar(x: f64) -> SectorialModel<f64> {
        make_diag_sectorial(&[x], &[0.0], 0.0).unwrap()
    }

    #[test]
    fn scalar_block_is_companion() {
        let b = assemble_block(&scalar(1.0)).flatten();
        let want = ComplexDenseMatrix::from_real_rows(&[
            &[0.0, -1.0, 0.0],
            &[0.0, 0.0, -1.0],
            &[1.0, 0.0, 0.0],
        ]);
        assert_eq!(b, want);
        let ev = eigenvalues(&b).unwrap();
        let roots: Vec<_> = (0..3)
            .map(|k| Complex::from_polar(1.0, 2.0 * PI * k as f64 / 3.0))
            .collect();
        assert!(hausdorff_distance(&ev, &roots) < 1e-12);
    }

    #[test]
    fn flatten_round_trip() {
        let m = make_dirichlet_laplacian_1d(3, 1.0).unwrap();
        let b = assemble_block(&m);
        let back = BlockOperator::from_flat(&b.flatten(), BlockLabel::ABlock).unwrap();
        assert_eq!(back, b);
        assert!(
            BlockOperator::<f64>::from_flat(&ComplexDenseMatrix::zeros(4), BlockLabel::ABlock)
                .is_err()
        );
    }

    #[test]
    fn resolvent_scalar_center_entry() {
        let r = resolvent_closed_form(&scalar(1.0), Complex::new(-1.0, 0.0)).unwrap();
        assert_eq!(r.block(0, 2)[(0, 0)], Complex::new(-0.5, 0.0));
        assert!(matches!(
            resolvent_closed_form(&scalar(1.0), Complex::new(1.0, 0.0)),
            Err(Error::SpectrumCollision { .. })
        ));
    }

    #[test]
    fn resolvent_matches_direct_inverse() {
        let m = make_diag_sectorial(&[2.0, 5.0], &[0.0, 0.0], 0.0).unwrap();
        let l = Complex::new(0.0, 2.0);
        let closed = resolvent_closed_form(&m, l).unwrap().flatten();
        let direct = inverse(&(-&assemble_block(&m).flatten()).shift(l)).unwrap();
        assert!((&closed - &direct).max_abs() < 1e-12);
    }

    #[test]
    fn spectrum_of_rotated_scalar() {
        let m = make_diag_sectorial(&[8.0], &[FRAC_PI_4], FRAC_PI_4).unwrap();
        let s = spectrum_block(&m);
        let base = PI / 12.0;
        let want = [base, base + 2.0 * PI / 3.0, base - 2.0 * PI / 3.0]
            .map(|t| Complex::from_polar(2.0, t));
        for (z, w) in s.iter().zip(&want) {
            assert!((z - w).norm() < 1e-14);
        }
    }

    #[test]
    fn abscissa_examples() {
        let m = make_diag_sectorial(&[1.0, 8.0, 27.0], &[0.0; 3], 0.0).unwrap();
        assert!((nongeneration_evidence(&m) - 1.5f64).abs() < 1e-14);
        assert!((nongeneration_evidence(&scalar(1.0)) - 0.5f64).abs() < 1e-15);
    }

    #[test]
    fn scalar_probe_matches_direct_inverse() {
        let rep = resolvent_bound_probe(&scalar(1.0), &[1.0]).unwrap();
        let flat = assemble_block(&scalar(1.0))
            .flatten()
            .shift(Complex::new(1.0, 0.0));
        let direct = norm2(&inverse(&flat).unwrap()).unwrap();
        assert!((rep.flat_norms[0] - direct).abs() < 1e-13);
        assert!(rep.weighted);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = default_lambda_grid::<f64>();
        assert_eq!(g.len(), 40);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[39], 1e6);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
