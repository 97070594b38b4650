//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar the library is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Sum
    + 'static
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// A tolerance of `x`, but never tighter than a thousand machine epsilons.
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(1e3))
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type C<T> = Complex<T>;

#[inline]
pub fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub fn creal<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `e^{iθ}`
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Principal argument in (−π, π].
#[inline]
pub fn principal_arg<T: Real>(z: C<T>) -> T {
    let a = z.im.atan2(z.re);
    // atan2 returns −π for (−x, −0.0); fold onto the closed end of the branch.
    if a <= -T::PI() {
        T::PI()
    } else {
        a
    }
}

/// Principal power `exp(p · Log z)` with arg Log z ∈ (−π, π].
///
/// `z = 0` maps to 0 for `p > 0` and to 1 for `p = 0`.
pub fn principal_powf<T: Real>(z: C<T>, p: T) -> C<T> {
    if p == T::zero() {
        return cone();
    }
    let r = z.norm();
    if r == T::zero() {
        return czero();
    }
    let theta = principal_arg(z);
    let m = r.powf(p);
    let phase = theta * p;
    Complex::new(m * phase.cos(), m * phase.sin())
}
