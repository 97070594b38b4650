//! The fractional third-order Cauchy problem
//! `u‴ + Υ₀B u″ + Υ₀B² u′ + B³u = 0`, `B = A^{α/3}`, solved three ways: the
//! factorized closed form, the semigroup `e^{−t𝔸^α}` and an adaptive
//! Dormand–Prince reference integration of the first-order system.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractional_block::{alpha_star, closed_form_fractional_block, UpsilonTriple};
use crate::fractional_core::{real_power, ORACLE_CONDITION_LIMIT};
use crate::linalg::{
    vec_add, vec_norm, vec_scale, vec_sub, CVector, ComplexDenseMatrix, Eigendecomposition,
};
use crate::operator_models::SectorialModel;
use crate::scalar::{cis, creal, czero, principal_powf, Real, C};

/// Smallest admissible `|Δ|` and `|b − a|`.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// A point `(u, v, w)` of `X = H^{2/3} × H^{1/3} × H`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTriple<T> {
    pub u: CVector<T>,
    pub v: CVector<T>,
    pub w: CVector<T>,
}

impl<T: Real> StateTriple<T> {
    pub fn new(u: CVector<T>, v: CVector<T>, w: CVector<T>) -> Result<Self> {
        if u.len() != v.len() || v.len() != w.len() || u.is_empty() {
            return Err(Error::InvalidInput(
                "state components must share a positive dim".into(),
            ));
        }
        let s = Self { u, v, w };
        if !s
            .flatten()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::InvalidInput("state entries must be finite".into()));
        }
        Ok(s)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            u: vec![czero(); dim],
            v: vec![czero(); dim],
            w: vec![czero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn flatten(&self) -> CVector<T> {
        let mut x = Vec::with_capacity(3 * self.dim());
        x.extend_from_slice(&self.u);
        x.extend_from_slice(&self.v);
        x.extend_from_slice(&self.w);
        x
    }

    pub fn from_flat(x: &[C<T>]) -> Result<Self> {
        if !x.len().is_multiple_of(3) || x.is_empty() {
            return Err(Error::InvalidInput(format!(
                "length {} is not a positive multiple of 3",
                x.len()
            )));
        }
        let n = x.len() / 3;
        Ok(Self {
            u: x[..n].to_vec(),
            v: x[n..2 * n].to_vec(),
            w: x[2 * n..].to_vec(),
        })
    }

    /// Component norms `(‖A^{2/3}u‖, ‖A^{1/3}v‖, ‖w‖)` of the X-norm.
    pub fn x_components(&self, model: &SectorialModel<T>) -> Result<[T; 3]> {
        Ok([
            fractional_norm(&self.u, T::lit(2.0) / T::lit(3.0), model)?,
            fractional_norm(&self.v, T::one() / T::lit(3.0), model)?,
            vec_norm(&self.w),
        ])
    }

    pub fn x_norm(&self, model: &SectorialModel<T>) -> Result<T> {
        let [a, b, c] = self.x_components(model)?;
        Ok((a * a + b * b + c * c).sqrt())
    }
}

/// Roots `a`, `b`, `−1` (in units of `B`) of the factorized characteristic cubic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationCoefficients<T> {
    pub alpha: T,
    pub a: C<T>,
    pub b: C<T>,
    pub third_root: C<T>,
}

impl<T: Real> FactorizationCoefficients<T> {
    /// Coefficients of `(x − a)(x − b)(x − third_root)`, leading term first.
    pub fn polynomial(&self) -> [C<T>; 4] {
        let (a, b, c) = (self.a, self.b, self.third_root);
        [
            creal(T::one()),
            -(a + b + c),
            a * b + a * c + b * c,
            -(a * b * c),
        ]
    }

    /// Largest coefficient-wise deviation from `(1, Υ₀, Υ₀, 1)`.
    pub fn polynomial_defect(&self) -> T {
        let u0 = creal(UpsilonTriple::new(self.alpha).values[0]);
        let want = [creal(T::one()), u0, u0, creal(T::one())];
        self.polynomial()
            .iter()
            .zip(&want)
            .map(|(p, q)| (*p - *q).norm())
            .fold(T::zero(), T::max)
    }
}

/// `a = −e^{−2πiα/3}`, `b = −e^{2πiα/3}`.
pub fn ab_coefficients<T: Real>(alpha: T) -> Result<FactorizationCoefficients<T>> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::InvalidInput(format!(
            "alpha = {alpha} outside (0, 1)"
        )));
    }
    let theta = T::TAU() * alpha / T::lit(3.0);
    let f = FactorizationCoefficients {
        alpha,
        a: -cis(-theta),
        b: -cis(theta),
        third_root: creal(-T::one()),
    };
    let defect = f.polynomial_defect();
    if defect > T::tol(1e-13) {
        return Err(Error::Internal(format!(
            "factorization polynomial defect {:e} at alpha = {alpha}",
            defect.to_f64_lossy()
        )));
    }
    Ok(f)
}

/// Coefficients `(c₂, c₁, c₀)` of `B`, `B²`, `B³` in
/// `u‴ + c₂Bu″ + c₁B²u′ + c₀B³u = 0`.
pub fn third_order_coefficients<T: Real>(alpha: T) -> (T, T, T) {
    let u0 = UpsilonTriple::new(alpha).values[0];
    (u0, u0, T::one())
}

/// Which form of the third-order equation a residual is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientSet {
    /// `u‴ + Υ₀Bu″ + Υ₀B²u′ + B³u`
    Derived,
    /// `u‴ + 3Υ₀Bu″ + 3Υ₀B²u″ + B³u`
    Printed,
}

/// Which exponent the `ξ` term of `w(0)` carries in the printed transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XiExponent {
    /// `A^{(1−2α)/3}ξ`
    OneMinusTwoAlpha,
    /// `A^{(2−2α)/3}ξ`
    TwoMinusTwoAlpha,
}

fn check_model<T: Real>(model: &SectorialModel<T>) -> Result<&Eigendecomposition<T>> {
    if !model.zero_in_resolvent() {
        return Err(Error::SingularOperator);
    }
    match model.eigen() {
        Some(e) if e.condition <= T::lit(ORACLE_CONDITION_LIMIT) => Ok(e),
        other => Err(Error::NotDiagonalizable {
            condition: other.map_or(f64::INFINITY, |e| e.condition.to_f64_lossy()),
            limit: ORACLE_CONDITION_LIMIT,
        }),
    }
}

fn check_data<T: Real>(model: &SectorialModel<T>, data: &[&[C<T>]]) -> Result<()> {
    if data.iter().any(|x| x.len() != model.dim()) {
        return Err(Error::InvalidInput(format!(
            "data vectors must have length {}",
            model.dim()
        )));
    }
    Ok(())
}

fn check_threshold<T: Real>(model: &SectorialModel<T>, alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "alpha = {alpha} outside (0, 1]"
        )));
    }
    let star = alpha_star(model.omega());
    if alpha > star {
        return Err(Error::GenerationThreshold {
            alpha: alpha.to_f64_lossy(),
            alpha_star: star.to_f64_lossy(),
        });
    }
    Ok(())
}

/// `Υ₁³ − Υ₂³`, the determinant of the data-to-state map up to a constant.
pub fn transform_determinant<T: Real>(alpha: T) -> T {
    let [_, u1, u2] = UpsilonTriple::new(alpha).values;
    u1 * u1 * u1 - u2 * u2 * u2
}

fn apply<T: Real>(m: &ComplexDenseMatrix<T>, x: &[C<T>], s: T) -> CVector<T> {
    vec_scale(&m.matvec(x), creal(s))
}

/// Maps third-order data `(φ, ψ, ξ) = (u, u′, u″)(0)` to the first-order
/// state `(u, v, w)(0)` of `d/dt x + 𝔸^α x = 0`.
pub fn initial_data_transform<T: Real>(
    phi: &[C<T>],
    psi: &[C<T>],
    xi: &[C<T>],
    alpha: T,
    model: &SectorialModel<T>,
) -> Result<StateTriple<T>> {
    check_data(model, &[phi, psi, xi])?;
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "alpha = {alpha} outside (0, 1]"
        )));
    }
    check_model(model)?;
    let det = transform_determinant(alpha);
    if !(det.abs() >= T::lit(DEGENERACY_TOL)) {
        return Err(Error::DegenerateDenominator {
            alpha: alpha.to_f64_lossy(),
            value: det.to_f64_lossy(),
        });
    }
    let three = T::lit(3.0);
    let nine = T::lit(9.0);
    let two = T::lit(2.0);
    let [u0, u1, u2] = UpsilonTriple::new(alpha).values;
    let p = real_power(model, -alpha / three)?.matvec(psi);
    let q = real_power(model, -two * alpha / three)?.matvec(xi);
    let combo = |cphi: T, cp: T, cq: T| -> CVector<T> {
        phi.iter()
            .zip(&p)
            .zip(&q)
            .map(|((f, pp), qq)| *f * cphi + *pp * cp + *qq * cq)
            .collect()
    };
    let v_in = combo(
        u0 * u0 * u1 + u0 * u2 * u2 - two * u1 * u1 * u2,
        three * (two * u0 * u1 + u2 * u2),
        nine * u1,
    );
    let w_in = combo(
        u0 * u0 * u2 + u0 * u1 * u1 - two * u1 * u2 * u2,
        three * (two * u0 * u2 + u1 * u1),
        nine * u2,
    );
    let v = apply(
        &real_power(model, T::one() / three)?,
        &v_in,
        -T::one() / det,
    );
    let w = apply(&real_power(model, two / three)?, &w_in, -T::one() / det);
    let state = StateTriple::new(phi.to_vec(), v, w)?;
    let defect = round_trip_defect(model, alpha, &state, psi, xi)?;
    let scale = [phi, psi, xi]
        .iter()
        .map(|x| vec_norm(x))
        .fold(T::one(), T::max);
    if defect > T::tol(1e-8) * scale {
        return Err(Error::Internal(format!(
            "initial-data round trip defect {:e}",
            defect.to_f64_lossy()
        )));
    }
    Ok(state)
}

/// `max(‖u′(0) − ψ‖, ‖u″(0) − ξ‖)` for the first component of the
/// trajectory started at `state`, using `u′ = −(𝔸^α x)₁`, `u″ = ((𝔸^α)² x)₁`.
pub fn round_trip_defect<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
    state: &StateTriple<T>,
    psi: &[C<T>],
    xi: &[C<T>],
) -> Result<T> {
    let m = closed_form_fractional_block(model, alpha)?.flatten();
    let x = state.flatten();
    let mx = m.matvec(&x);
    let mmx = m.matvec(&mx);
    let n = model.dim();
    let d1 = vec_norm(&vec_add(&mx[..n], psi));
    let d2 = vec_norm(&vec_sub(&mmx[..n], xi));
    Ok(d1.max(d2))
}

/// The transform exactly as printed, with denominators `Υ₁³ − Υ₀³` and
/// `Υ₂³ − Υ₁³`, for comparison against the derived one.
pub fn printed_initial_data_transform<T: Real>(
    phi: &[C<T>],
    psi: &[C<T>],
    xi: &[C<T>],
    alpha: T,
    model: &SectorialModel<T>,
    xi_exponent: XiExponent,
) -> Result<StateTriple<T>> {
    check_data(model, &[phi, psi, xi])?;
    check_model(model)?;
    let [u0, u1, u2] = UpsilonTriple::new(alpha).values;
    let three = T::lit(3.0);
    let one = T::one();
    let two = T::lit(2.0);
    let dv = u1 * u1 * u1 - u0 * u0 * u0;
    let dw = u2 * u2 * u2 - u1 * u1 * u1;
    for d in [dv, dw] {
        if !(d.abs() >= T::lit(DEGENERACY_TOL)) {
            return Err(Error::DegenerateDenominator {
                alpha: alpha.to_f64_lossy(),
                value: d.to_f64_lossy(),
            });
        }
    }
    let pw = |p: T| real_power(model, p);
    let xi_exp = match xi_exponent {
        XiExponent::OneMinusTwoAlpha => (one - two * alpha) / three,
        XiExponent::TwoMinusTwoAlpha => (two - two * alpha) / three,
    };
    let v = vec_add(
        &vec_sub(
            &apply(&pw(one / three)?, phi, u1 * (u2 - u0) / dv),
            &apply(
                &pw((one - alpha) / three)?,
                psi,
                (u2 + three * u0 * u1) / dv,
            ),
        ),
        &apply(&pw((one - two * alpha) / three)?, xi, -u1 / dv),
    );
    let w = vec_add(
        &vec_add(
            &apply(&pw(two / three)?, phi, u2 * (u0 - u1) / dw),
            &apply(
                &pw((two - alpha) / three)?,
                psi,
                (u1 + three * u0 * u2) / dw,
            ),
        ),
        &apply(&pw(xi_exp)?, xi, -u2 / dw),
    );
    StateTriple::new(phi.to_vec(), v, w)
}

/// Propagator `x ↦ e^{−t𝔸^α}x` through the eigendecomposition of the flattened block.
#[derive(Debug, Clone)]
pub struct SemigroupPropagator<T> {
    pub alpha: T,
    generator: ComplexDenseMatrix<T>,
    eigen: Eigendecomposition<T>,
}

impl<T: Real> SemigroupPropagator<T> {
    pub fn new(model: &SectorialModel<T>, alpha: T) -> Result<Self> {
        check_threshold(model, alpha)?;
        check_model(model)?;
        let generator = closed_form_fractional_block(model, alpha)?.flatten();
        let eigen = Eigendecomposition::new(&generator)?;
        if !(eigen.condition <= T::lit(ORACLE_CONDITION_LIMIT)) {
            return Err(Error::NotDiagonalizable {
                condition: eigen.condition.to_f64_lossy(),
                limit: ORACLE_CONDITION_LIMIT,
            });
        }
        Ok(Self {
            alpha,
            generator,
            eigen,
        })
    }

    /// The flattened `𝔸^α`.
    pub fn generator(&self) -> &ComplexDenseMatrix<T> {
        &self.generator
    }

    /// Eigenvalues of `𝔸^α`.
    pub fn spectrum(&self) -> &[C<T>] {
        &self.eigen.values
    }

    /// `e^{−t𝔸^α}` as a matrix.
    pub fn operator(&self, t: T) -> ComplexDenseMatrix<T> {
        if t == T::zero() {
            return ComplexDenseMatrix::identity(self.generator.dim());
        }
        self.eigen.apply(|l| (l * -t).exp())
    }

    pub fn propagate(&self, state: &StateTriple<T>, t: T) -> Result<StateTriple<T>> {
        if !(t >= T::zero()) {
            return Err(Error::InvalidInput(format!("t = {t} must be nonnegative")));
        }
        if state.dim() * 3 != self.generator.dim() {
            return Err(Error::InvalidInput(
                "state dim does not match the model".into(),
            ));
        }
        if t == T::zero() {
            return Ok(state.clone());
        }
        let c = self.eigen.to_modal(&state.flatten());
        let c: CVector<T> = c
            .iter()
            .zip(&self.eigen.values)
            .map(|(c, l)| *c * (*l * -t).exp())
            .collect();
        StateTriple::from_flat(&self.eigen.from_modal(&c))
    }
}

pub fn propagate_semigroup<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
    state0: &StateTriple<T>,
    t: T,
) -> Result<StateTriple<T>> {
    SemigroupPropagator::new(model, alpha)?.propagate(state0, t)
}

/// Modal coefficients of `u(t) = c_a e^{aBt} + c_b e^{bBt} + c_m e^{−Bt}`.
#[derive(Debug, Clone)]
pub struct ClosedFormSolution<T> {
    pub coefficients: FactorizationCoefficients<T>,
    eigen: Eigendecomposition<T>,
    beta: CVector<T>,
    ca: CVector<T>,
    cb: CVector<T>,
    cm: CVector<T>,
}

impl<T: Real> ClosedFormSolution<T> {
    pub fn new(
        model: &SectorialModel<T>,
        alpha: T,
        phi: &[C<T>],
        psi: &[C<T>],
        xi: &[C<T>],
    ) -> Result<Self> {
        check_data(model, &[phi, psi, xi])?;
        check_threshold(model, alpha)?;
        let eigen = check_model(model)?.clone();
        let f = ab_coefficients(alpha)?;
        let (a, b) = (f.a, f.b);
        let gap = (b - a).norm();
        if !(gap >= T::lit(DEGENERACY_TOL)) {
            return Err(Error::ConfluentRoots {
                alpha: alpha.to_f64_lossy(),
                gap: gap.to_f64_lossy(),
            });
        }
        let p = alpha / T::lit(3.0);
        let beta: CVector<T> = eigen.values.iter().map(|&l| principal_powf(l, p)).collect();
        let (ph, ps, xh) = (eigen.to_modal(phi), eigen.to_modal(psi), eigen.to_modal(xi));
        let one = creal(T::one());
        let (mut ca, mut cb, mut cm) = (vec![], vec![], vec![]);
        for k in 0..beta.len() {
            let bk = beta[k];
            // f(0) = ψ − aBφ and g(0) = ξ − (a+b)Bψ + abB²φ in eigen-coordinates.
            let f0 = ps[k] - a * bk * ph[k];
            let g0 = xh[k] - (a + b) * bk * ps[k] + a * b * bk * bk * ph[k];
            let b2 = bk * bk;
            let cb_k = f0 / (bk * (b - a)) + g0 / (b2 * (one + b) * (b - a));
            let ca_k = ph[k] - f0 / (bk * (b - a)) - g0 / (b2 * (one + a) * (b - a));
            let cm_k = g0 / (b2 * (one + a) * (one + b));
            ca.push(ca_k);
            cb.push(cb_k);
            cm.push(cm_k);
        }
        Ok(Self {
            coefficients: f,
            eigen,
            beta,
            ca,
            cb,
            cm,
        })
    }

    /// `d^k u / dt^k` at `t`.
    pub fn derivative(&self, t: T, k: u32) -> CVector<T> {
        let (a, b) = (self.coefficients.a, self.coefficients.b);
        let modal: CVector<T> = (0..self.beta.len())
            .map(|i| {
                let bk = self.beta[i];
                let (ra, rb, rm) = (a * bk, b * bk, -bk);
                let term = |c: C<T>, r: C<T>| {
                    if c == czero() {
                        czero()
                    } else {
                        c * r.powu(k) * (r * t).exp()
                    }
                };
                term(self.ca[i], ra) + term(self.cb[i], rb) + term(self.cm[i], rm)
            })
            .collect();
        self.eigen.from_modal(&modal)
    }

    pub fn eval(&self, t: T) -> CVector<T> {
        self.derivative(t, 0)
    }
}

pub fn closed_form_solution<T: Real>(
    phi: &[C<T>],
    psi: &[C<T>],
    xi: &[C<T>],
    alpha: T,
    model: &SectorialModel<T>,
    t: T,
) -> Result<CVector<T>> {
    if !(t >= T::zero()) {
        return Err(Error::InvalidInput(format!("t = {t} must be nonnegative")));
    }
    if t == T::zero() {
        check_data(model, &[phi, psi, xi])?;
        ClosedFormSolution::new(model, alpha, phi, psi, xi)?;
        return Ok(phi.to_vec());
    }
    Ok(ClosedFormSolution::new(model, alpha, phi, psi, xi)?.eval(t))
}

/// `‖A^θ x‖₂`
pub fn fractional_norm<T: Real>(x: &[C<T>], theta: T, model: &SectorialModel<T>) -> Result<T> {
    if !(theta >= T::zero() && theta <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "theta = {theta} outside [0, 1]"
        )));
    }
    if x.len() != model.dim() {
        return Err(Error::InvalidInput(
            "vector length does not match the model".into(),
        ));
    }
    if theta == T::zero() {
        return Ok(vec_norm(x));
    }
    Ok(vec_norm(&real_power(model, theta)?.matvec(x)))
}

/// Dormand–Prince 5(4) tableau; the system is autonomous so the nodes are unused.
mod dopri {
    pub const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    /// Fifth-order weights (equal to the last row of `A`).
    pub const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    pub const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
}

/// Adaptive Dormand–Prince integration of `x′ = −𝔸^α x`, reporting the
/// state at every point of `t_grid`.
pub fn reference_integrate<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
    state0: &StateTriple<T>,
    t_grid: &[T],
    rel_tol: T,
) -> Result<Vec<StateTriple<T>>> {
    if !(rel_tol >= T::lit(1e-12) && rel_tol <= T::lit(1e-4)) {
        return Err(Error::InvalidInput(
            "rel_tol must lie in [1e-12, 1e-4]".into(),
        ));
    }
    if t_grid.first().is_some_and(|&t| t != T::zero()) || t_grid.windows(2).any(|w| !(w[0] <= w[1]))
    {
        return Err(Error::InvalidInput(
            "t_grid must be sorted ascending from 0".into(),
        ));
    }
    let m = closed_form_fractional_block(model, alpha)?.flatten();
    if state0.dim() != model.dim() {
        return Err(Error::InvalidInput(
            "state dim does not match the model".into(),
        ));
    }
    let Some(&t_end) = t_grid.last() else {
        return Ok(vec![]);
    };
    let rhs = |y: &[C<T>]| -> CVector<T> { m.matvec(y).into_iter().map(|z| -z).collect() };
    let mut y = state0.flatten();
    let mut out = vec![state0.clone()];
    if t_end == T::zero() {
        out.resize(t_grid.len(), state0.clone());
        return Ok(out);
    }
    let h_min = T::lit(1e-12);
    let h_max = t_end / T::lit(4.0);
    let mut h = t_end / T::lit(100.0);
    let atol = rel_tol * y.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let mut t = T::zero();
    let mut k1 = rhs(&y);
    for &target in &t_grid[1..] {
        while t < target {
            let landing = target - t <= h;
            let step = if landing { target - t } else { h };
            let mut k: Vec<CVector<T>> = Vec::with_capacity(7);
            k.push(k1.clone());
            for s in 1..7 {
                let yi: CVector<T> = (0..y.len())
                    .map(|i| {
                        let mut acc = y[i];
                        for (j, kj) in k.iter().enumerate() {
                            let aij = dopri::A[s][j];
                            if aij != 0.0 {
                                acc += kj[i] * (step * T::lit(aij));
                            }
                        }
                        acc
                    })
                    .collect();
                k.push(rhs(&yi));
            }
            let y5: CVector<T> = (0..y.len())
                .map(|i| {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate() {
                        if dopri::B5[j] != 0.0 {
                            acc += kj[i] * (step * T::lit(dopri::B5[j]));
                        }
                    }
                    acc
                })
                .collect();
            let err_sq = (0..y.len())
                .map(|i| {
                    let e = k.iter().enumerate().fold(czero::<T>(), |acc, (j, kj)| {
                        acc + kj[i] * T::lit(dopri::B5[j] - dopri::B4[j])
                    }) * step;
                    let sc = atol + rel_tol * y[i].norm().max(y5[i].norm());
                    if sc > T::zero() {
                        (e.norm() / sc).powi(2)
                    } else {
                        T::zero()
                    }
                })
                .fold(T::zero(), |a, b| a + b);
            let err = (err_sq / T::lit(y.len() as f64)).sqrt();
            let factor = if err == T::zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * err.powf(-T::lit(0.2)))
                    .min(T::lit(5.0))
                    .max(T::lit(0.2))
            };
            if err <= T::one() {
                t = if landing { target } else { t + step };
                y = y5;
                // First-same-as-last: the seventh stage is f at the accepted point.
                k1 = k.pop().expect("seven stages");
                if !landing {
                    h = (step * factor).min(h_max);
                }
            } else {
                h = (step * factor).min(h_max);
                if h < h_min {
                    return Err(Error::StepUnderflow {
                        time: t.to_f64_lossy(),
                    });
                }
            }
        }
        out.push(StateTriple::from_flat(&y)?);
    }
    Ok(out)
}

/// `max_t ‖u‴ + …‖` with central differences of the closed-form trajectory.
pub fn third_order_residual<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
    phi: &[C<T>],
    psi: &[C<T>],
    xi: &[C<T>],
    t_samples: &[T],
    h: T,
    set: CoefficientSet,
) -> Result<T> {
    if !(h >= T::lit(1e-4) && h <= T::lit(1e-2)) {
        return Err(Error::InvalidInput("h must lie in [1e-4, 1e-2]".into()));
    }
    if t_samples
        .iter()
        .any(|&t| !(t - T::lit(2.0) * h >= T::zero()))
    {
        return Err(Error::InvalidInput("t_samples need t - 2h >= 0".into()));
    }
    let sol = ClosedFormSolution::new(model, alpha, phi, psi, xi)?;
    let b1 = real_power(model, alpha / T::lit(3.0))?;
    let b2 = real_power(model, T::lit(2.0) * alpha / T::lit(3.0))?;
    let b3 = real_power(model, alpha)?;
    let u0 = UpsilonTriple::new(alpha).values[0];
    let two = T::lit(2.0);
    let mut worst = T::zero();
    for &t in t_samples {
        let [um2, um1, uc, up1, up2] =
            [-two, -T::one(), T::zero(), T::one(), two].map(|s| sol.eval(t + s * h));
        let d1 = vec_scale(&vec_sub(&up1, &um1), creal(T::one() / (two * h)));
        let d2 = vec_scale(
            &vec_add(&vec_sub(&up1, &vec_scale(&uc, creal(two))), &um1),
            creal(T::one() / (h * h)),
        );
        let d3 = vec_scale(
            &vec_sub(
                &vec_add(
                    &vec_sub(&up2, &vec_scale(&up1, creal(two))),
                    &vec_scale(&um1, creal(two)),
                ),
                &um2,
            ),
            creal(T::one() / (two * h * h * h)),
        );
        let r = match set {
            CoefficientSet::Derived => {
                let (c2, c1, c0) = third_order_coefficients(alpha);
                vec_add(
                    &vec_add(&d3, &apply(&b1, &d2, c2)),
                    &vec_add(&apply(&b2, &d1, c1), &apply(&b3, &uc, c0)),
                )
            }
            CoefficientSet::Printed => {
                let c = T::lit(3.0) * u0;
                vec_add(
                    &vec_add(&d3, &apply(&b1, &d2, c)),
                    &vec_add(&apply(&b2, &d2, c), &b3.matvec(&uc)),
                )
            }
        };
        worst = worst.max(vec_norm(&r));
    }
    Ok(worst)
}

/// `sup_t ‖x(t) − y(t)‖ / sup_t ‖y(t)‖` over paired samples.
pub fn relative_sup_error<T: Real>(x: &[CVector<T>], y: &[CVector<T>]) -> T {
    let num = x
        .iter()
        .zip(y)
        .map(|(a, b)| vec_norm(&vec_sub(a, b)))
        .fold(T::zero(), T::max);
    let den = y.iter().map(|b| vec_norm(b)).fold(T::zero(), T::max);
    if den > T::zero() {
        num / den
    } else {
        num
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    pub alpha: T,
    pub t_grid: Vec<T>,
    pub initial_state: StateTriple<T>,
    pub closed_form: Vec<CVector<T>>,
    pub semigroup: Vec<StateTriple<T>>,
    pub reference: Vec<StateTriple<T>>,
    pub max_rel_err_closed_vs_semigroup: T,
    pub max_rel_err_semigroup_vs_reference: T,
    pub max_rel_err_closed_vs_reference: T,
    /// `‖A^θ u(t)‖` for `θ = 0, α/3, 2α/3, α` at each grid point.
    pub fractional_norms: Vec<[T; 4]>,
    /// `(‖A^α u‖, ‖A^{2α/3} u′‖, ‖A^{α/3} u″‖)` at each grid point.
    pub regularity_norms: Vec<[T; 3]>,
    /// Largest difference quotient of the regularity norms along the grid.
    pub regularity_lipschitz: T,
    /// Defects of the printed transform, for both `ξ` exponents.
    pub printed_transform_defects: [Option<T>; 2],
}

/// Solves from third-order data and cross-checks all three methods.
pub fn solve<T: Real>(
    model: &SectorialModel<T>,
    alpha: T,
    phi: &[C<T>],
    psi: &[C<T>],
    xi: &[C<T>],
    t_grid: &[T],
    ode_rel_tol: T,
) -> Result<SolveReport<T>> {
    let state0 = initial_data_transform(phi, psi, xi, alpha, model)?;
    let closed = ClosedFormSolution::new(model, alpha, phi, psi, xi)?;
    let prop = SemigroupPropagator::new(model, alpha)?;
    let reference = reference_integrate(model, alpha, &state0, t_grid, ode_rel_tol)?;
    let semigroup = t_grid
        .par_iter()
        .map(|&t| prop.propagate(&state0, t))
        .collect::<Result<Vec<_>>>()?;
    let closed_form: Vec<CVector<T>> = t_grid
        .iter()
        .map(|&t| {
            if t == T::zero() {
                phi.to_vec()
            } else {
                closed.eval(t)
            }
        })
        .collect();
    let semi_u: Vec<CVector<T>> = semigroup.iter().map(|s| s.u.clone()).collect();
    let ref_u: Vec<CVector<T>> = reference.iter().map(|s| s.u.clone()).collect();
    let semi_flat: Vec<CVector<T>> = semigroup.iter().map(|s| s.flatten()).collect();
    let ref_flat: Vec<CVector<T>> = reference.iter().map(|s| s.flatten()).collect();
    let three = T::lit(3.0);
    let thetas = [T::zero(), alpha / three, T::lit(2.0) * alpha / three, alpha];
    let powers = thetas
        .iter()
        .map(|&th| real_power(model, th))
        .collect::<Result<Vec<_>>>()?;
    let fractional_norms: Vec<[T; 4]> = closed_form
        .iter()
        .map(|u| std::array::from_fn(|k| vec_norm(&powers[k].matvec(u))))
        .collect();
    let regularity_norms: Vec<[T; 3]> = t_grid
        .iter()
        .map(|&t| {
            [
                vec_norm(&powers[3].matvec(&closed.derivative(t, 0))),
                vec_norm(&powers[2].matvec(&closed.derivative(t, 1))),
                vec_norm(&powers[1].matvec(&closed.derivative(t, 2))),
            ]
        })
        .collect();
    let regularity_lipschitz = t_grid
        .windows(2)
        .zip(regularity_norms.windows(2))
        .filter(|(t, _)| t[1] > t[0])
        .flat_map(|(t, n)| (0..3).map(move |k| (n[1][k] - n[0][k]).abs() / (t[1] - t[0])))
        .fold(T::zero(), T::max);
    let printed_transform_defects = [XiExponent::OneMinusTwoAlpha, XiExponent::TwoMinusTwoAlpha]
        .map(|e| {
            printed_initial_data_transform(phi, psi, xi, alpha, model, e)
                .and_then(|s| round_trip_defect(model, alpha, &s, psi, xi))
                .ok()
        });
    Ok(SolveReport {
        alpha,
        t_grid: t_grid.to_vec(),
        initial_state: state0,
        max_rel_err_closed_vs_semigroup: relative_sup_error(&closed_form, &semi_u),
        max_rel_err_semigroup_vs_reference: relative_sup_error(&semi_flat, &ref_flat),
        max_rel_err_closed_vs_reference: relative_sup_error(&closed_form, &ref_u),
        closed_form,
        semigroup,
        reference,
        fractional_norms,
        regularity_norms,
        regularity_lipschitz,
        printed_transform_defects,
    })
}

/// `min Re σ(𝔸^α)`
pub fn decay_rate<T: Real>(prop: &SemigroupPropagator<T>) -> T {
    prop.spectrum()
        .iter()
        .map(|z| z.re)
        .fold(T::infinity(), T::min)
}

/// Decay rate fitted from `‖x(t)‖` on `[t_end/2, t_end]`: least squares
/// through the local maxima of `ln‖x(t)‖` (all samples when there are fewer
/// than two maxima).
pub fn fit_decay_rate<T: Real>(
    prop: &SemigroupPropagator<T>,
    state0: &StateTriple<T>,
    t_end: T,
    samples: usize,
) -> Result<T> {
    let samples = samples.max(4);
    let ts: Vec<T> = (0..=samples)
        .map(|k| t_end * (T::one() + T::lit(k as f64) / T::lit(samples as f64)) / T::lit(2.0))
        .collect();
    let logs = ts
        .iter()
        .map(|&t| {
            prop.propagate(state0, t)
                .map(|s| vec_norm(&s.flatten()).ln())
        })
        .collect::<Result<Vec<T>>>()?;
    let peaks: Vec<(T, T)> = (1..logs.len() - 1)
        .filter(|&i| logs[i] >= logs[i - 1] && logs[i] >= logs[i + 1])
        .map(|i| (ts[i], logs[i]))
        .collect();
    let pts: Vec<(T, T)> = if peaks.len() >= 2 {
        peaks
    } else {
        ts.iter().copied().zip(logs.iter().copied()).collect()
    };
    let n = T::lit(pts.len() as f64);
    let mt = pts.iter().map(|p| p.0).fold(T::zero(), |a, b| a + b) / n;
    let ml = pts.iter().map(|p| p.1).fold(T::zero(), |a, b| a + b) / n;
    let sxy = pts
        .iter()
        .map(|p| (p.0 - mt) * (p.1 - ml))
        .fold(T::zero(), |a, b| a + b);
    let sxx = pts
        .iter()
        .map(|p| (p.0 - mt) * (p.0 - mt))
        .fold(T::zero(), |a, b| a + b);
    Ok(-sxy / sxx)
}

/// Convenience: `Complex` vector from real parts.
pub fn real_vector<T: Real>(x: &[f64]) -> CVector<T> {
    x.iter()
        .map(|&v| Complex::new(T::lit(v), T::zero()))
        .collect()
}
