//! Worked examples for each module, checked against closed-form values or
//! against independently computed reference numbers frozen below.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, TAU};

use accretia_core::block_linearization::{
    assemble_block, nongeneration_evidence, resolvent_bound_probe, resolvent_closed_form,
    spectrum_block,
};
use accretia_core::evolution_solver::{
    closed_form_solution, fractional_norm, initial_data_transform, propagate_semigroup,
    real_vector, reference_integrate, solve, third_order_residual, CoefficientSet, StateTriple,
};
use accretia_core::fractional_block::{
    alpha_star, classify_spectrum_sectors, closed_form_fractional_block, generation_verdict,
    GenerationVerdict,
};
use accretia_core::fractional_core::{
    balakrishnan_power, cube_root, moment_inequality_probe, principal_power_of_matrix,
    relative_error,
};
use accretia_core::linalg::{eigenvalues, inverse, norm2, vec_norm, vec_sub};
use accretia_core::operator_models::{
    certify_omega, check_accretivity, make_diag_sectorial, make_dirichlet_laplacian_1d,
    make_rotated,
};
use accretia_core::sampling::{complex_normal, rng};
use accretia_core::spectra::hausdorff_distance;
use accretia_core::{Complex64, Matrix, Quadrature};
use approx::assert_abs_diff_eq;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sorted_re(mut v: Vec<Complex64>) -> Vec<f64> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re));
    v.iter().map(|z| z.re).collect()
}

#[test]
fn laplacian_3x3_eigenvalues() {
    let m = make_dirichlet_laplacian_1d(3, 1.0).unwrap();
    let s = 2.0f64.sqrt();
    for (got, want) in sorted_re(m.spectrum().to_vec())
        .iter()
        .zip([2.0 - s, 2.0, 2.0 + s])
    {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
    }
    assert!(m.is_selfadjoint());
    assert_eq!(m.omega(), 0.0);
}

#[test]
fn laplacian_smallest_eigenvalue_matches_sine_formula() {
    let (n, h) = (8, 0.5);
    let m = make_dirichlet_laplacian_1d(n, h).unwrap();
    let ev = sorted_re(m.spectrum().to_vec());
    assert!(ev.iter().all(|&l| l > 0.0 && l < 16.0));
    let want = 4.0 / (h * h) * (PI / (2.0 * (n as f64 + 1.0))).sin().powi(2);
    assert_abs_diff_eq!(ev[0], want, epsilon = 1e-12);
}

#[test]
fn certify_omega_on_a_segment_numerical_range() {
    let m = make_diag_sectorial(&[1.0, 1.0], &[FRAC_PI_6, -FRAC_PI_6], FRAC_PI_6).unwrap();
    let w = certify_omega(&m, 10_000, 3);
    assert!((FRAC_PI_6 - 0.02..=FRAC_PI_6 + 1e-12).contains(&w), "{w}");
    let diag =
        make_diag_sectorial(&[1.0, 2.0, 3.0], &[FRAC_PI_6, -FRAC_PI_6, 0.0], FRAC_PI_6).unwrap();
    let w = certify_omega(&diag, 4096, 11);
    assert!(w <= FRAC_PI_6 + 1e-12 && w > FRAC_PI_6 - 0.05, "{w}");
}

#[test]
fn rotated_laplacian_is_accretive_in_its_sector() {
    let m = make_rotated(&make_dirichlet_laplacian_1d(4, 1.0).unwrap(), FRAC_PI_4).unwrap();
    assert_abs_diff_eq!(m.omega(), FRAC_PI_4, epsilon = 1e-15);
    let r = check_accretivity(&m, 4096, 5);
    assert!(r.sector_inequality && r.identity_plus_invertible, "{r:?}");
    let bad = make_diag_sectorial(&[1.0], &[FRAC_PI_3], FRAC_PI_3).unwrap();
    assert!(make_rotated(&bad, FRAC_PI_4).is_err());
}

#[test]
fn quadrature_on_rotated_laplacian() {
    let m = make_rotated(&make_dirichlet_laplacian_1d(6, 1.0).unwrap(), FRAC_PI_6).unwrap();
    let p = balakrishnan_power(&m, 0.4, &Quadrature::default()).unwrap();
    assert!(p.residual_vs_oracle.unwrap() <= 1e-6);
    let four = make_diag_sectorial(&[4.0], &[0.0], 0.0).unwrap();
    let p = balakrishnan_power(&four, 0.5, &Quadrature::default()).unwrap();
    assert_abs_diff_eq!(p.matrix[(0, 0)].re, 2.0, epsilon = 1e-6);
}

#[test]
fn cube_root_of_laplacian_cubes_back() {
    let m = make_dirichlet_laplacian_1d(4, 1.0).unwrap();
    let r = cube_root(&m).unwrap().matrix;
    let cubed = r.matmul(&r).matmul(&r);
    assert!(relative_error(&cubed, m.matrix()) <= 1e-9);
    let z = make_diag_sectorial(&[8.0], &[FRAC_PI_4], FRAC_PI_4).unwrap();
    let r = cube_root(&z).unwrap().matrix[(0, 0)];
    assert_abs_diff_eq!(r.re, 2.0 * (PI / 12.0).cos(), epsilon = 1e-14);
    assert_abs_diff_eq!(r.im, 2.0 * (PI / 12.0).sin(), epsilon = 1e-14);
}

#[test]
fn moment_constant_is_stable_across_seeds() {
    let m = make_dirichlet_laplacian_1d(6, 1.0).unwrap();
    let cs: Vec<f64> = (0..4)
        .map(|s| moment_inequality_probe(&m, 0.3, 1000, s).unwrap().max_ratio)
        .collect();
    let (lo, hi) = cs
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi.is_finite() && (hi - lo) / hi < 0.1, "{cs:?}");
    // Hölder's inequality bounds the ratio by one for a normal operator.
    assert!(hi <= 1.0 + 1e-12);
}

#[test]
fn block_of_diag_1_8_has_both_cube_root_triples() {
    let m = make_diag_sectorial(&[1.0, 8.0], &[0.0, 0.0], 0.0).unwrap();
    let ev = eigenvalues(&assemble_block(&m).flatten()).unwrap();
    let want: Vec<Complex64> = [1.0, 2.0]
        .iter()
        .flat_map(|&r| [0.0, TAU / 3.0, -TAU / 3.0].map(|t| Complex64::from_polar(r, t)))
        .collect();
    assert!(hausdorff_distance(&ev, &want) < 1e-12);
}

#[test]
fn resolvent_matches_direct_inverse() {
    let m = make_diag_sectorial(&[2.0, 5.0], &[0.0, 0.0], 0.0).unwrap();
    let lambda = c(0.0, 2.0);
    let r = resolvent_closed_form(&m, lambda).unwrap().flatten();
    let block = assemble_block(&m).flatten();
    let direct = inverse(&(&Matrix::identity(6).scale(lambda) - &block)).unwrap();
    assert!((&r - &direct).max_abs() <= 1e-12);
    // λ²/(λ³ − μ) for μ = 2 and 5, from an independent evaluation.
    assert_abs_diff_eq!(r[(0, 0)].re, 0.11764705882352941, epsilon = 1e-15);
    assert_abs_diff_eq!(r[(0, 0)].im, -0.47058823529411764, epsilon = 1e-15);
    assert_abs_diff_eq!(r[(1, 1)].re, 0.2247191011235955, epsilon = 1e-15);
    assert_abs_diff_eq!(r[(1, 1)].im, -0.3595505617977528, epsilon = 1e-15);
}

#[test]
fn laplacian_block_spectrum_matches_eigensolve() {
    let m = make_dirichlet_laplacian_1d(4, 1.0).unwrap();
    let ev = eigenvalues(&assemble_block(&m).flatten()).unwrap();
    assert!(hausdorff_distance(&ev, &spectrum_block(&m)) <= 1e-10);
}

#[test]
fn resolvent_probe_against_direct_inversion() {
    let m = make_diag_sectorial(&[1.0], &[0.0], 0.0).unwrap();
    let p = resolvent_bound_probe(&m, &[1.0]).unwrap();
    let shifted = &Matrix::identity(3) + &assemble_block(&m).flatten();
    let direct = norm2(&inverse(&shifted).unwrap()).unwrap();
    assert_abs_diff_eq!(p.flat_norms[0], direct, epsilon = 1e-12);
    // For A = [1] every weight is the identity.
    assert_abs_diff_eq!(p.norms[0], direct, epsilon = 1e-12);
    let big = resolvent_bound_probe(&m, &[1e3, 1e4, 1e5]).unwrap();
    let scaled: Vec<f64> = big
        .lambda_grid
        .iter()
        .zip(&big.norms)
        .map(|(l, n)| l * n)
        .collect();
    assert!(
        (scaled[2] - 1.0).abs() < 1e-4 && (scaled[1] - 1.0).abs() < 1e-3,
        "{scaled:?}"
    );
    for (l, n) in big.lambda_grid.iter().zip(&big.norms) {
        assert!(*n <= big.fitted_m / l * (1.0 + 1e-15));
    }
}

#[test]
fn nongeneration_on_fine_laplacian() {
    let m = make_dirichlet_laplacian_1d(8, 0.25).unwrap();
    // Largest eigenvalue 64·sin²(8π/18), cube-rooted and halved.
    assert_abs_diff_eq!(
        nongeneration_evidence(&m),
        1.9796920314079853,
        epsilon = 1e-10
    );
    let cubes = make_diag_sectorial(&[1.0, 8.0, 27.0], &[0.0; 3], 0.0).unwrap();
    assert_abs_diff_eq!(nongeneration_evidence(&cubes), 1.5, epsilon = 1e-14);
}

#[test]
fn closed_form_half_power_of_unit_block() {
    let m = make_diag_sectorial(&[1.0], &[0.0], 0.0).unwrap();
    let p = closed_form_fractional_block(&m, 0.5).unwrap().flatten();
    let want = [[2.0, -2.0, -1.0], [1.0, 2.0, -2.0], [2.0, 1.0, 2.0]];
    for i in 0..3 {
        for j in 0..3 {
            assert_abs_diff_eq!(p[(i, j)].re, want[i][j] / 3.0, epsilon = 1e-15);
            assert_abs_diff_eq!(p[(i, j)].im, 0.0, epsilon = 1e-15);
        }
    }
    let ev = eigenvalues(&p).unwrap();
    let want: Vec<Complex64> = [0.0, FRAC_PI_3, -FRAC_PI_3]
        .iter()
        .map(|&t| Complex64::from_polar(1.0, t))
        .collect();
    assert!(hausdorff_distance(&ev, &want) < 1e-14);
}

#[test]
fn closed_form_block_against_frozen_matrix_power() {
    // Principal 0.3 power of the flattened block for A = [[2, −1], [−1, 2]],
    // computed independently by a dense eigendecomposition.
    let m = make_dirichlet_laplacian_1d(2, 1.0).unwrap();
    let p = closed_form_fractional_block(&m, 0.3).unwrap().flatten();
    assert_abs_diff_eq!(p[(0, 0)].re, 0.9233470656670119, epsilon = 1e-13);
    assert_abs_diff_eq!(p[(0, 5)].re, -0.06388228899396281, epsilon = 1e-13);
    assert_abs_diff_eq!(p[(4, 1)].re, -0.2663209357070371, epsilon = 1e-13);
    let oracle = principal_power_of_matrix(&assemble_block(&m).flatten(), 0.3).unwrap();
    assert!(relative_error(&p, &oracle) < 1e-12);
}

#[test]
fn threshold_values_and_verdicts() {
    assert_eq!(alpha_star(0.0), 0.75);
    assert_eq!(alpha_star(FRAC_PI_2), 0.6);
    assert_abs_diff_eq!(alpha_star(FRAC_PI_4), 2.0 / 3.0, epsilon = 1e-15);
    let one = make_diag_sectorial(&[1.0], &[0.0], 0.0).unwrap();
    assert_eq!(
        generation_verdict(&one, 0.74).unwrap(),
        GenerationVerdict::Analytic
    );
    assert_eq!(
        generation_verdict(&one, 0.76).unwrap(),
        GenerationVerdict::NotGenerated
    );
    let i = make_diag_sectorial(&[1.0], &[FRAC_PI_2], FRAC_PI_2).unwrap();
    assert_eq!(
        generation_verdict(&i, 0.6).unwrap(),
        GenerationVerdict::StronglyContinuousBoundary
    );
    let c = classify_spectrum_sectors(&i, 0.6).unwrap();
    assert_abs_diff_eq!(c.max_abs_arg, FRAC_PI_2, epsilon = 1e-14);
    // Cross-check the angle arithmetic with the eigenvalues of the block itself.
    let ev = eigenvalues(&closed_form_fractional_block(&i, 0.6).unwrap().flatten()).unwrap();
    let widest = ev.iter().map(|z| z.arg().abs()).fold(0.0, f64::max);
    assert_abs_diff_eq!(widest, FRAC_PI_2, epsilon = 1e-10);
}

#[test]
fn max_abs_arg_shrinks_monotonically_as_alpha_decreases() {
    let m = make_rotated(&make_dirichlet_laplacian_1d(4, 1.0).unwrap(), FRAC_PI_6).unwrap();
    let args: Vec<f64> = (1..=40)
        .rev()
        .map(|k| {
            classify_spectrum_sectors(&m, k as f64 / 50.0)
                .unwrap()
                .max_abs_arg
        })
        .collect();
    assert!(args.windows(2).all(|w| w[1] < w[0]));
    assert!(*args.last().unwrap() < 0.05);
}

#[test]
fn closed_form_solution_scalar_example() {
    // u‴ + 2u″ + 2u′ + u = 0, u(0) = 1, u′(0) = u″(0) = 0, integrated
    // independently through the matrix exponential of its companion form.
    let m = make_diag_sectorial(&[1.0], &[0.0], 0.0).unwrap();
    let (phi, zero) = (real_vector(&[1.0]), real_vector(&[0.0]));
    for (t, want) in [(0.5, 0.9838758631875403), (1.0, 0.9013866362861354)] {
        let u = closed_form_solution(&phi, &zero, &zero, 0.5, &m, t).unwrap();
        assert_abs_diff_eq!(u[0].re, want, epsilon = 1e-13);
        assert_abs_diff_eq!(u[0].im, 0.0, epsilon = 1e-13);
    }
    let t_grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let r = solve(&m, 0.5, &phi, &zero, &zero, &t_grid, 1e-10).unwrap();
    assert!(r.max_rel_err_closed_vs_reference <= 1e-6);
    assert_eq!(
        closed_form_solution(&phi, &zero, &zero, 0.5, &m, 0.0).unwrap(),
        phi
    );
}

#[test]
fn closed_form_against_semigroup_on_laplacian() {
    let m = make_dirichlet_laplacian_1d(4, 1.0).unwrap();
    let mut r = rng(21);
    let [phi, psi, xi]: [Vec<Complex64>; 3] = std::array::from_fn(|_| complex_normal(&mut r, 4));
    let t_grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let rep = solve(&m, 0.4, &phi, &psi, &xi, &t_grid, 1e-10).unwrap();
    assert!(
        rep.max_rel_err_closed_vs_semigroup <= 1e-8,
        "{}",
        rep.max_rel_err_closed_vs_semigroup
    );
    assert!(rep.fractional_norms.iter().flatten().all(|x| x.is_finite()));
    assert!(rep.regularity_lipschitz.is_finite());
    for (norms, &t) in rep.regularity_norms.iter().zip(&t_grid) {
        assert!(norms.iter().all(|x| x.is_finite()), "t = {t}");
    }
}

#[test]
fn transformed_data_reproduces_the_derivatives() {
    // Propagate the first-order state and difference its first component.
    let m = make_diag_sectorial(&[1.0], &[0.0], 0.0).unwrap();
    let (phi, zero) = (real_vector(&[1.0]), real_vector(&[0.0]));
    let s0 = initial_data_transform(&phi, &zero, &zero, 0.5, &m).unwrap();
    let h = 1e-3;
    let u = |t: f64| propagate_semigroup(&m, 0.5, &s0, t).unwrap().u[0];
    let (u0, u1, u2) = (u(0.0), u(h), u(2.0 * h));
    let d1 = (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * h);
    let d2 = (u0 - 2.0 * u1 + u2) / (h * h);
    assert!(d1.norm() < 1e-6, "{d1}");
    assert!(d2.norm() < 1e-2, "{d2}");
    let zero_state = initial_data_transform(&zero, &zero, &zero, 0.5, &m).unwrap();
    assert_eq!(zero_state, StateTriple::zeros(1));
}

#[test]
fn reference_integrator_on_an_eigenvector() {
    let m = make_diag_sectorial(&[1.0], &[0.0], 0.0).unwrap();
    let p = closed_form_fractional_block(&m, 0.5).unwrap().flatten();
    // Eigenvector of 𝔸^{1/2} for eigenvalue 1: (1, −1, 1)/√3.
    let v = [1.0, -1.0, 1.0].map(|x| c(x / 3f64.sqrt(), 0.0));
    let pv = p.matvec(&v);
    assert!(vec_norm(&vec_sub(&pv, &v)) < 1e-14);
    let s0 = StateTriple::from_flat(&v).unwrap();
    let grid = [0.0, 0.5, 1.0];
    let traj = reference_integrate(&m, 0.5, &s0, &grid, 1e-8).unwrap();
    for (s, &t) in traj.iter().zip(&grid) {
        let want: Vec<Complex64> = v.iter().map(|x| x * (-t).exp()).collect();
        assert!(vec_norm(&vec_sub(&s.flatten(), &want)) <= 1e-8);
    }
    let zero = reference_integrate(&m, 0.5, &StateTriple::zeros(1), &grid, 1e-8).unwrap();
    assert!(zero
        .iter()
        .all(|s| s.flatten().iter().all(|z| *z == c(0.0, 0.0))));
}

#[test]
fn fractional_norm_examples() {
    let four = make_diag_sectorial(&[4.0], &[0.0], 0.0).unwrap();
    assert_abs_diff_eq!(
        fractional_norm(&real_vector(&[1.0]), 0.5, &four).unwrap(),
        2.0,
        epsilon = 1e-14
    );
    let m = make_dirichlet_laplacian_1d(4, 1.0).unwrap();
    let x = real_vector(&[0.5, 0.5, 0.5, 0.5]);
    assert_abs_diff_eq!(fractional_norm(&x, 0.0, &m).unwrap(), 1.0, epsilon = 1e-15);
    let e = m.eigen().unwrap();
    let oracle = e.apply(|l| l.powf(2.0 / 3.0)).matvec(&x);
    assert_abs_diff_eq!(
        fractional_norm(&x, 2.0 / 3.0, &m).unwrap(),
        vec_norm(&oracle),
        epsilon = 1e-13
    );
}

#[test]
fn residual_distinguishes_the_coefficient_sets() {
    let m = make_diag_sectorial(&[1.0], &[0.0], 0.0).unwrap();
    let (phi, zero) = (real_vector(&[1.0]), real_vector(&[0.0]));
    let ts = [0.5, 1.0];
    let derived = third_order_residual(
        &m,
        0.5,
        &phi,
        &zero,
        &zero,
        &ts,
        1e-3,
        CoefficientSet::Derived,
    )
    .unwrap();
    assert!(derived <= 1e-4, "{derived}");
    let printed = third_order_residual(
        &m,
        0.5,
        &phi,
        &zero,
        &zero,
        &ts,
        1e-3,
        CoefficientSet::Printed,
    )
    .unwrap();
    assert!(printed > 0.1, "{printed}");
    let z = third_order_residual(
        &m,
        0.5,
        &zero,
        &zero,
        &zero,
        &ts,
        1e-3,
        CoefficientSet::Derived,
    )
    .unwrap();
    assert_eq!(z, 0.0);
}
