use crate::error::{Error, Result};
use crate::linalg::matrix::{CVector, ComplexDenseMatrix};
use crate::scalar::{czero, Real};

/// LU factorization with partial (row) pivoting, `P·A = L·U`.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    factors: ComplexDenseMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn new(a: &ComplexDenseMatrix<T>) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        let tiny = T::epsilon() * scale * T::lit(n.max(1) as f64);

        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold(
                        (k, T::zero()),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot <= tiny || pivot == T::zero() {
                return Err(Error::Singular(format!(
                    "zero pivot in column {k} (|pivot| = {:e})",
                    pivot.to_f64_lossy()
                )));
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f == czero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { factors: lu, perm })
    }

    pub fn solve_vec(&self, b: &[crate::scalar::C<T>]) -> CVector<T> {
        let n = self.factors.dim();
        let mut x: CVector<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.factors[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.factors[(i, j)] * x[j];
            }
            x[i] = s / self.factors[(i, i)];
        }
        x
    }

    /// Solves `A·X = B` column by column.
    pub fn solve(&self, b: &ComplexDenseMatrix<T>) -> ComplexDenseMatrix<T> {
        let n = b.dim();
        let mut out = ComplexDenseMatrix::zeros(n);
        for j in 0..n {
            let col = self.solve_vec(&b.column(j));
            for (i, v) in col.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    pub fn inverse(&self) -> ComplexDenseMatrix<T> {
        self.solve(&ComplexDenseMatrix::identity(self.factors.dim()))
    }
}

pub fn solve<T: Real>(
    a: &ComplexDenseMatrix<T>,
    b: &ComplexDenseMatrix<T>,
) -> Result<ComplexDenseMatrix<T>> {
    Ok(Lu::new(a)?.solve(b))
}

pub fn inverse<T: Real>(a: &ComplexDenseMatrix<T>) -> Result<ComplexDenseMatrix<T>> {
    Ok(Lu::new(a)?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn inverse_of_permuted_matrix() {
        let a = ComplexDenseMatrix::<f64>::from_real_rows(&[&[0.0, 2.0], &[3.0, 1.0]]);
        let inv = inverse(&a).unwrap();
        let prod = &a * &inv;
        assert!((&prod - &ComplexDenseMatrix::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = ComplexDenseMatrix::<f64>::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(Lu::new(&a), Err(Error::Singular(_))));
    }

    #[test]
    fn complex_solve() {
        let a = ComplexDenseMatrix::<f64>::from_fn(3, |i, j| {
            Complex::new(if i == j { 4.0 } else { 0.5 }, (i as f64) - (j as f64))
        });
        let x: Vec<_> = (0..3).map(|k| Complex::new(k as f64, 1.0)).collect();
        let b = a.matvec(&x);
        let y = Lu::new(&a).unwrap().solve_vec(&b);
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).norm() < 1e-14);
        }
    }
}
