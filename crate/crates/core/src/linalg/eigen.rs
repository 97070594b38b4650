//! Dense complex eigensolver.
//!
//! Householder reduction to upper Hessenberg form, then the single-shift
//! complex QR algorithm (Wilkinson shifts, Givens rotations) to a complex
//! Schur form `A = Z·T·Zᴴ`. Eigenvectors come from back-substitution on the
//! triangular factor and are normalized to unit 2-norm, which keeps the
//! eigenvector condition number close to its optimal diagonal scaling.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::lu::Lu;
use crate::linalg::matrix::ComplexDenseMatrix;
use crate::scalar::{cone, creal, czero, Real, C};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 40;

/// Complex Schur form: `a = z · t · zᴴ` with `t` upper triangular and `z` unitary.
#[derive(Debug, Clone)]
pub struct Schur<T> {
    pub t: ComplexDenseMatrix<T>,
    pub z: Option<ComplexDenseMatrix<T>>,
}

/// Eigendecomposition `A = V·diag(values)·V⁻¹` with unit-norm eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigendecomposition<T> {
    pub values: Vec<C<T>>,
    pub vectors: ComplexDenseMatrix<T>,
    pub inverse: ComplexDenseMatrix<T>,
    /// `‖V‖₂·‖V⁻¹‖₂`
    pub condition: T,
}

impl<T: Real> Eigendecomposition<T> {
    pub fn new(a: &ComplexDenseMatrix<T>) -> Result<Self> {
        let schur = schur(a, true)?;
        let z = schur.z.as_ref().expect("schur vectors requested");
        let y = triangular_eigenvectors(&schur.t);
        let mut vectors = z.matmul(&y);
        let n = a.dim();
        for j in 0..n {
            let norm = (0..n)
                .map(|i| vectors[(i, j)].norm_sqr())
                .fold(T::zero(), |s, v| s + v)
                .sqrt();
            if norm > T::zero() {
                for i in 0..n {
                    vectors[(i, j)] /= norm;
                }
            }
        }
        let values = schur.t.diagonal();
        let inverse = Lu::new(&vectors)
            .map_err(|_| Error::NotDiagonalizable {
                condition: f64::INFINITY,
                limit: f64::INFINITY,
            })?
            .inverse();
        let condition = norm2(&vectors)? * norm2(&inverse)?;
        Ok(Self {
            values,
            vectors,
            inverse,
            condition,
        })
    }

    /// Exact decomposition of a diagonal matrix (`V = I`).
    pub fn from_diagonal(values: Vec<C<T>>) -> Self {
        let n = values.len();
        Self {
            values,
            vectors: ComplexDenseMatrix::identity(n),
            inverse: ComplexDenseMatrix::identity(n),
            condition: T::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V · diag(f(λ_k)) · V⁻¹`
    pub fn apply(&self, f: impl Fn(C<T>) -> C<T>) -> ComplexDenseMatrix<T> {
        let n = self.dim();
        let fv: Vec<C<T>> = self.values.iter().map(|&l| f(l)).collect();
        let scaled = ComplexDenseMatrix::from_fn(n, |i, j| self.vectors[(i, j)] * fv[j]);
        scaled.matmul(&self.inverse)
    }

    /// Maps a vector into eigen-coordinates, `V⁻¹ x`.
    pub fn to_modal(&self, x: &[C<T>]) -> Vec<C<T>> {
        self.inverse.matvec(x)
    }

    /// Maps eigen-coordinates back, `V c`.
    pub fn from_modal(&self, c: &[C<T>]) -> Vec<C<T>> {
        self.vectors.matvec(c)
    }

    /// `‖A·V − V·Λ‖_F / ‖A‖_F`
    pub fn residual(&self, a: &ComplexDenseMatrix<T>) -> T {
        let av = a.matmul(&self.vectors);
        let n = self.dim();
        let vl = ComplexDenseMatrix::from_fn(n, |i, j| self.vectors[(i, j)] * self.values[j]);
        let scale = a.norm_fro().max(T::min_positive_value());
        (&av - &vl).norm_fro() / scale
    }
}

/// Eigenvalues only (no Schur vectors accumulated), in Schur-diagonal order.
pub fn eigenvalues<T: Real>(a: &ComplexDenseMatrix<T>) -> Result<Vec<C<T>>> {
    Ok(schur(a, false)?.t.diagonal())
}

/// Largest singular value, `sqrt(λ_max(AᴴA))`.
pub fn norm2<T: Real>(a: &ComplexDenseMatrix<T>) -> Result<T> {
    if a.dim() == 0 {
        return Ok(T::zero());
    }
    let scale = a.max_abs();
    if scale == T::zero() {
        return Ok(T::zero());
    }
    // Pre-scaling keeps AᴴA clear of overflow and underflow.
    let b = a.scale_real(T::one() / scale);
    let gram = b.conj_transpose().matmul(&b);
    let top = eigenvalues(&gram)?
        .into_iter()
        .map(|z| z.re)
        .fold(T::zero(), T::max);
    Ok(top.max(T::zero()).sqrt() * scale)
}

/// 2-norm condition number `‖A‖₂·‖A⁻¹‖₂`; infinite for singular input.
pub fn condition2<T: Real>(a: &ComplexDenseMatrix<T>) -> Result<T> {
    match Lu::new(a) {
        Ok(lu) => Ok(norm2(a)? * norm2(&lu.inverse())?),
        Err(Error::Singular(_)) => Ok(T::infinity()),
        Err(e) => Err(e),
    }
}

/// Reduces `a` to upper Hessenberg form `H = Qᴴ A Q`.
fn hessenberg<T: Real>(
    a: &ComplexDenseMatrix<T>,
    want_q: bool,
) -> (ComplexDenseMatrix<T>, Option<ComplexDenseMatrix<T>>) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = want_q.then(|| ComplexDenseMatrix::identity(n));
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let x: Vec<C<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |s, v| s + v)
            .sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let tail = x[1..]
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |s, v| s + v);
        if tail == T::zero() {
            continue;
        }
        let phase = if x[0].norm() == T::zero() {
            cone()
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |s, v| s + v)
            .sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        let two = T::lit(2.0);
        // H ← (I − 2vvᴴ) H on rows k+1..n
        for j in 0..n {
            let mut s: C<T> = czero();
            for (idx, i) in (k + 1..n).enumerate() {
                s += v[idx].conj() * h[(i, j)];
            }
            s *= two;
            for (idx, i) in (k + 1..n).enumerate() {
                let d = v[idx] * s;
                h[(i, j)] -= d;
            }
        }
        // H ← H (I − 2vvᴴ) on columns k+1..n
        for i in 0..n {
            let mut s: C<T> = czero();
            for (idx, j) in (k + 1..n).enumerate() {
                s += h[(i, j)] * v[idx];
            }
            s *= two;
            for (idx, j) in (k + 1..n).enumerate() {
                let d = s * v[idx].conj();
                h[(i, j)] -= d;
            }
        }
        if let Some(q) = q.as_mut() {
            for i in 0..n {
                let mut s: C<T> = czero();
                for (idx, j) in (k + 1..n).enumerate() {
                    s += q[(i, j)] * v[idx];
                }
                s *= two;
                for (idx, j) in (k + 1..n).enumerate() {
                    let d = s * v[idx].conj();
                    q[(i, j)] -= d;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = czero();
        }
    }
    (h, q)
}

/// Rotation `G = [c, s; −conj(s), c]` with `G·[x; y] = [r; 0]`.
fn givens<T: Real>(x: C<T>, y: C<T>) -> (T, C<T>) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == T::zero() {
        return (T::one(), czero());
    }
    if ax == T::zero() {
        return (T::zero(), y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

fn wilkinson_shift<T: Real>(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> C<T> {
    let half = T::lit(0.5);
    let tr_half = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition via shifted QR on the Hessenberg form.
pub fn schur<T: Real>(a: &ComplexDenseMatrix<T>, want_z: bool) -> Result<Schur<T>> {
    let n = a.dim();
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let (mut h, mut z) = hessenberg(a, want_z);
    if n <= 1 {
        return Ok(Schur { t: h, z });
    }
    let eps = T::epsilon();
    let anorm = h.norm_fro().max(T::min_positive_value());
    let max_iter = MAX_SWEEPS_PER_EIGENVALUE * n;
    let mut total = 0usize;
    let mut its = 0usize;
    let mut ihi = n - 1;

    while ihi > 0 {
        // locate the start of the active unreduced block
        let mut l = ihi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == T::zero() { anorm } else { s };
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = czero();
                break;
            }
            l -= 1;
        }
        if l == ihi {
            ihi -= 1;
            its = 0;
            continue;
        }
        total += 1;
        its += 1;
        if total > max_iter {
            return Err(Error::EigenNoConvergence { iterations: total });
        }

        let mu = if its % 11 == 10 {
            // exceptional shift to break cycles
            let sub = h[(ihi, ihi - 1)];
            h[(ihi, ihi)] + creal(T::lit(0.75) * (sub.re.abs() + sub.im.abs()))
        } else {
            wilkinson_shift(
                h[(ihi - 1, ihi - 1)],
                h[(ihi - 1, ihi)],
                h[(ihi, ihi - 1)],
                h[(ihi, ihi)],
            )
        };

        let mut x = h[(l, l)] - mu;
        let mut y = h[(l + 1, l)];
        for k in l..ihi {
            if k > l {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let cc = creal(c);
            // rows k, k+1 from column (k−1) to the right edge (full T for eigenvectors)
            let jstart = if k > l { k - 1 } else { l };
            for j in jstart..n {
                let hk = h[(k, j)];
                let hk1 = h[(k + 1, j)];
                h[(k, j)] = cc * hk + s * hk1;
                h[(k + 1, j)] = -s.conj() * hk + cc * hk1;
            }
            if k > l {
                h[(k + 1, k - 1)] = czero();
            }
            // columns k, k+1 from the top row down to min(k+2, ihi)
            let iend = (k + 2).min(ihi);
            for i in 0..=iend {
                let hk = h[(i, k)];
                let hk1 = h[(i, k + 1)];
                h[(i, k)] = hk * cc + hk1 * s.conj();
                h[(i, k + 1)] = -hk * s + hk1 * cc;
            }
            if let Some(z) = z.as_mut() {
                for i in 0..n {
                    let zk = z[(i, k)];
                    let zk1 = z[(i, k + 1)];
                    z[(i, k)] = zk * cc + zk1 * s.conj();
                    z[(i, k + 1)] = -zk * s + zk1 * cc;
                }
            }
        }
    }

    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = czero();
        }
    }
    Ok(Schur { t: h, z })
}

/// Eigenvectors of an upper triangular matrix by back-substitution.
/// Near-equal diagonal pairs are separated by a floor on the pivot.
fn triangular_eigenvectors<T: Real>(t: &ComplexDenseMatrix<T>) -> ComplexDenseMatrix<T> {
    let n = t.dim();
    let smin = (T::epsilon() * t.norm_fro()).max(T::min_positive_value());
    let mut y = ComplexDenseMatrix::zeros(n);
    for k in 0..n {
        let lk = t[(k, k)];
        y[(k, k)] = cone();
        for i in (0..k).rev() {
            let mut s: C<T> = czero();
            for j in i + 1..=k {
                s += t[(i, j)] * y[(j, k)];
            }
            let mut d = t[(i, i)] - lk;
            if d.norm() < smin {
                d = Complex::new(smin, T::zero());
            }
            y[(i, k)] = -s / d;
        }
    }
    y
}
