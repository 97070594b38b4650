//! Invariants checked over randomly generated sectorial models.

use std::f64::consts::FRAC_PI_2;

use accretia_core::block_linearization::{assemble_block, resolvent_closed_form};
use accretia_core::evolution_solver::{
    ab_coefficients, closed_form_solution, decay_rate, fit_decay_rate, initial_data_transform,
    round_trip_defect, solve, SemigroupPropagator, StateTriple,
};
use accretia_core::fractional_block::{
    alpha_star, classify_spectrum_sectors, closed_form_fractional_block, fractional_block_spectrum,
    sin_triple_identity_check,
};
use accretia_core::fractional_core::{principal_power_of_matrix, real_power, relative_error};
use accretia_core::linalg::{eigenvalues, vec_norm, vec_sub};
use accretia_core::operator_models::{
    certify_omega, make_diag_sectorial, make_dirichlet_laplacian_1d, make_rotated,
};
use accretia_core::sampling::{complex_normal, rng};
use accretia_core::spectra::hausdorff_distance;
use accretia_core::{Complex64, Model};
use proptest::prelude::*;

fn diag_model() -> impl Strategy<Value = Model> {
    (1usize..5, 0.0f64..1.4).prop_flat_map(|(n, omega)| {
        (
            proptest::collection::vec(0.2f64..5.0, n),
            proptest::collection::vec(-1.0f64..=1.0, n),
            Just(omega),
        )
            .prop_map(|(moduli, unit, omega)| {
                let angles: Vec<f64> = unit.iter().map(|u| u * omega).collect();
                make_diag_sectorial(&moduli, &angles, omega).unwrap()
            })
    })
}

fn rotated_laplacian() -> impl Strategy<Value = Model> {
    (1usize..7, 0.3f64..1.5, -1.2f64..1.2).prop_map(|(n, h, phi)| {
        make_rotated(&make_dirichlet_laplacian_1d(n, h).unwrap(), phi).unwrap()
    })
}

fn any_model() -> impl Strategy<Value = Model> {
    prop_oneof![diag_model(), rotated_laplacian()]
}

fn data(dim: usize, seed: u64) -> [Vec<Complex64>; 3] {
    let mut r = rng(seed);
    std::array::from_fn(|_| complex_normal(&mut r, dim))
}

fn spread(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectrum_lies_in_the_sector(m in any_model()) {
        prop_assert!(m.max_abs_arg() <= m.omega() + m.angle_tol());
        prop_assert!(m.zero_in_resolvent());
    }

    #[test]
    fn rotation_adds_the_angle(n in 1usize..6, phi in -1.5f64..1.5) {
        let base = make_dirichlet_laplacian_1d(n, 1.0).unwrap();
        let r = make_rotated(&base, phi).unwrap();
        prop_assert!((r.omega() - phi.abs()).abs() < 1e-15);
        prop_assert!(r.omega() >= base.omega());
    }

    #[test]
    fn certified_angle_is_deterministic_and_bounded(m in any_model(), seed in any::<u64>()) {
        let w = certify_omega(&m, 256, seed);
        prop_assert_eq!(w, certify_omega(&m, 256, seed));
        prop_assert!(w <= m.omega() + 1e-10);
    }

    #[test]
    fn real_powers_multiply(m in any_model(), s in 0.05f64..0.9, t in 0.05f64..0.9) {
        let ps = real_power(&m, s).unwrap();
        let pt = real_power(&m, t).unwrap();
        let pst = real_power(&m, s + t).unwrap();
        prop_assert!(relative_error(&ps.matmul(&pt), &pst) < 1e-10);
        prop_assert!(relative_error(&real_power(&m, 1.0).unwrap(), m.matrix()) < 1e-10);
    }

    #[test]
    fn resolvent_identity(m in diag_model(), re in 0.5f64..3.0, im in -3.0f64..3.0, shift in 0.2f64..1.0) {
        let (l, mu) = (Complex64::new(re, im), Complex64::new(re + shift, -im));
        prop_assume!(m.spectrum().iter().all(|s| (l.powi(3) - s).norm() > 0.05 && (mu.powi(3) - s).norm() > 0.05));
        let rl = resolvent_closed_form(&m, l).unwrap().flatten();
        let rm = resolvent_closed_form(&m, mu).unwrap().flatten();
        let lhs = &rl - &rm;
        let rhs = rl.matmul(&rm).scale(mu - l);
        prop_assert!((&lhs - &rhs).max_abs() <= 1e-9 * (1.0 + rl.max_abs() * rm.max_abs()));
    }

    #[test]
    fn closed_form_block_matches_matrix_oracle(m in any_model(), alpha in 0.05f64..0.95) {
        let closed = closed_form_fractional_block(&m, alpha).unwrap().flatten();
        let oracle = principal_power_of_matrix(&assemble_block(&m).flatten(), alpha).unwrap();
        prop_assert!(relative_error(&closed, &oracle) < 1e-9);
    }

    #[test]
    fn spectral_mapping(m in any_model(), alpha in 0.05f64..0.95) {
        let ev = eigenvalues(&closed_form_fractional_block(&m, alpha).unwrap().flatten()).unwrap();
        let want = fractional_block_spectrum(&m, alpha);
        prop_assert!(hausdorff_distance(&ev, &want) <= 1e-8 * spread(&want));
    }

    #[test]
    fn sector_classification_matches_threshold(m in any_model(), alpha in 0.05f64..0.95) {
        let c = classify_spectrum_sectors(&m, alpha).unwrap();
        let star = alpha_star(m.max_abs_arg());
        if alpha < star - 1e-9 {
            prop_assert!(c.max_abs_arg < FRAC_PI_2);
        } else if alpha > star + 1e-9 {
            prop_assert!(c.max_abs_arg > FRAC_PI_2);
        }
    }

    #[test]
    fn factorization_reproduces_the_cubic(alpha in 0.01f64..0.99) {
        let f = ab_coefficients(alpha).unwrap();
        prop_assert!(f.polynomial_defect() < 1e-14);
        prop_assert!((f.a.norm() - 1.0).abs() < 1e-15 && (f.a - f.b.conj()).norm() < 1e-15);
    }

    #[test]
    fn sine_triple_identity(theta in proptest::collection::vec(-10.0f64..10.0, 1..20)) {
        prop_assert!(sin_triple_identity_check(&theta) < 1e-12);
    }

    #[test]
    fn solution_is_linear_in_the_data(m in any_model(), alpha in 0.1f64..0.6, t in 0.0f64..2.0, seed in any::<u64>(), k in -2.0f64..2.0) {
        let [p1, q1, r1] = data(m.dim(), seed);
        let [p2, q2, r2] = data(m.dim(), seed.wrapping_add(1));
        let comb = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> { x.iter().zip(y).map(|(a, b)| a * k + b).collect() };
        let u1 = closed_form_solution(&p1, &q1, &r1, alpha, &m, t).unwrap();
        let u2 = closed_form_solution(&p2, &q2, &r2, alpha, &m, t).unwrap();
        let u = closed_form_solution(&comb(&p1, &p2), &comb(&q1, &q2), &comb(&r1, &r2), alpha, &m, t).unwrap();
        let want = comb(&u1, &u2);
        prop_assert!(vec_norm(&vec_sub(&u, &want)) <= 1e-10 * (1.0 + vec_norm(&want)));
    }

    #[test]
    fn initial_data_round_trip(m in any_model(), alpha in 0.05f64..0.95, seed in any::<u64>()) {
        let [phi, psi, xi] = data(m.dim(), seed);
        let s = initial_data_transform(&phi, &psi, &xi, alpha, &m).unwrap();
        prop_assert_eq!(&s.u, &phi);
        let scale = 1.0 + vec_norm(&psi) + vec_norm(&xi);
        prop_assert!(round_trip_defect(&m, alpha, &s, &psi, &xi).unwrap() <= 1e-9 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn semigroup_law(m in any_model(), alpha in 0.1f64..0.6, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let p = SemigroupPropagator::new(&m, alpha).unwrap();
        let lhs = p.operator(s + t);
        let rhs = p.operator(s).matmul(&p.operator(t));
        prop_assert!(relative_error(&lhs, &rhs) < 1e-9);
    }

    #[test]
    fn three_solution_paths_agree(m in any_model(), alpha in 0.1f64..0.6, seed in any::<u64>()) {
        let alpha = alpha.min(alpha_star(m.max_abs_arg()) - 0.02);
        let [phi, psi, xi] = data(m.dim(), seed);
        let grid: Vec<f64> = (0..=5).map(|k| k as f64 / 5.0).collect();
        let r = solve(&m, alpha, &phi, &psi, &xi, &grid, 1e-10).unwrap();
        prop_assert!(r.max_rel_err_closed_vs_semigroup <= 1e-8);
        prop_assert!(r.max_rel_err_semigroup_vs_reference <= 1e-6);
        prop_assert!(r.max_rel_err_closed_vs_reference <= 1e-6);
    }

    #[test]
    fn fitted_decay_matches_the_spectrum(n in 1usize..5, alpha in 0.1f64..0.6, seed in any::<u64>()) {
        let m = make_dirichlet_laplacian_1d(n, 1.0).unwrap();
        let p = SemigroupPropagator::new(&m, alpha).unwrap();
        let want = decay_rate(&p);
        let x0 = StateTriple::from_flat(&data(3 * n, seed)[0]).unwrap();
        let got = fit_decay_rate(&p, &x0, 30.0 / want, 400).unwrap();
        prop_assert!((got - want).abs() <= 0.05 * want, "fitted {} vs {}", got, want);
    }
}
