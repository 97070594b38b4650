use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{cone, czero, Real, C};

pub type CVector<T> = Vec<C<T>>;

/// Square complex matrix with value semantics, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexDenseMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> ComplexDenseMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![czero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_row_major(entries: Vec<C<T>>) -> Option<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        (dim * dim == entries.len()).then_some(Self { dim, data: entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == dim),
            "rows must form a square"
        );
        Self::from_fn(dim, |i, j| Complex::new(T::lit(rows[i][j]), T::zero()))
    }

    pub fn from_diagonal(diag: &[C<T>]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> CVector<T> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> CVector<T> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.dim).all(|i| (0..=i).all(|j| self[(i, j)] == self[(j, i)].conj()))
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| *z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| *z * s).collect(),
        }
    }

    /// `self + s·I`
    pub fn shift(&self, s: C<T>) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)] += s;
        }
        m
    }

    pub fn matvec(&self, x: &[C<T>]) -> CVector<T> {
        assert_eq!(x.len(), self.dim, "matvec dimension mismatch");
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(czero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == czero() {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * *b;
                }
            }
        }
        out
    }

    pub fn norm_fro(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Extracts the `size × size` block whose top-left corner is `(row, col)`.
    pub fn submatrix(&self, row: usize, col: usize, size: usize) -> Self {
        Self::from_fn(size, |i, j| self[(row + i, col + j)])
    }

    pub fn set_submatrix(&mut self, row: usize, col: usize, block: &Self) {
        for i in 0..block.dim {
            for j in 0..block.dim {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> ComplexDenseMatrix<U> {
        ComplexDenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexDenseMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexDenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Add for &ComplexDenseMatrix<T> {
    type Output = ComplexDenseMatrix<T>;

    fn add(self, rhs: Self) -> ComplexDenseMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        ComplexDenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexDenseMatrix<T> {
    type Output = ComplexDenseMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexDenseMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        ComplexDenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

impl<T: Real> Mul for &ComplexDenseMatrix<T> {
    type Output = ComplexDenseMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexDenseMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Neg for &ComplexDenseMatrix<T> {
    type Output = ComplexDenseMatrix<T>;

    fn neg(self) -> ComplexDenseMatrix<T> {
        ComplexDenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| -*z).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexDenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexDenseMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in &self.data[i * self.dim..(i + 1) * self.dim] {
                write!(f, "({:?}, {:?}) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn vec_norm<T: Real>(x: &[C<T>]) -> T {
    x.iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

/// `⟨x, y⟩ = Σ x_i · conj(y_i)`, linear in the first slot.
pub fn inner<T: Real>(x: &[C<T>], y: &[C<T>]) -> C<T> {
    x.iter()
        .zip(y)
        .fold(czero(), |acc, (a, b)| acc + *a * b.conj())
}

pub fn vec_sub<T: Real>(x: &[C<T>], y: &[C<T>]) -> CVector<T> {
    x.iter().zip(y).map(|(a, b)| *a - *b).collect()
}

pub fn vec_add<T: Real>(x: &[C<T>], y: &[C<T>]) -> CVector<T> {
    x.iter().zip(y).map(|(a, b)| *a + *b).collect()
}

pub fn vec_scale<T: Real>(x: &[C<T>], s: C<T>) -> CVector<T> {
    x.iter().map(|a| *a * s).collect()
}
