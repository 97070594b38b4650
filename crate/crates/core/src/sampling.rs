//! Seeded random complex vectors. All draws go through ChaCha8 so that a
//! given seed reproduces bit-identical samples on every platform.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{vec_norm, CVector};
use crate::scalar::Real;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vector with i.i.d. standard complex-normal components.
pub fn complex_normal<T: Real>(rng: &mut impl Rng, dim: usize) -> CVector<T> {
    (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect()
}

/// Uniformly distributed point on the unit sphere of `ℂ^dim`.
pub fn unit_vector<T: Real>(rng: &mut impl Rng, dim: usize) -> CVector<T> {
    loop {
        let v = complex_normal::<T>(rng, dim);
        let n = vec_norm(&v);
        if n > T::zero() {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn uniform<T: Real>(rng: &mut impl Rng, lo: f64, hi: f64) -> T {
    T::lit(rng.random_range(lo..hi))
}
