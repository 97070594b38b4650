//! The same pipeline instantiated at `f32`, with tolerances scaled to match.

use accretia_core::block_linearization::assemble_block;
use accretia_core::evolution_solver::{closed_form_solution, real_vector, SemigroupPropagator};
use accretia_core::fractional_block::{
    alpha_star, closed_form_fractional_block, generation_verdict, GenerationVerdict,
};
use accretia_core::fractional_core::{principal_power_of_matrix, relative_error};
use accretia_core::operator_models::{make_diag_sectorial, make_dirichlet_laplacian_1d};
use accretia_core::Model32;

#[test]
fn laplacian_block_power_in_f32() {
    let m: Model32 = make_dirichlet_laplacian_1d(4, 1.0f32).unwrap();
    let closed = closed_form_fractional_block(&m, 0.4f32).unwrap().flatten();
    let oracle = principal_power_of_matrix(&assemble_block(&m).flatten(), 0.4f32).unwrap();
    assert!(relative_error(&closed, &oracle) < 1e-4);
    assert_eq!(
        generation_verdict(&m, 0.4f32).unwrap(),
        GenerationVerdict::Analytic
    );
    assert_eq!(alpha_star(0.0f32), 0.75);
}

#[test]
fn scalar_solution_in_f32() {
    let m: Model32 = make_diag_sectorial(&[1.0f32], &[0.0], 0.0).unwrap();
    let zero = real_vector::<f32>(&[0.0]);
    let u = closed_form_solution(&real_vector(&[1.0]), &zero, &zero, 0.5f32, &m, 1.0).unwrap();
    assert!((u[0].re - 0.901_386_6).abs() < 1e-5, "{}", u[0]);
    let p = SemigroupPropagator::new(&m, 0.5f32).unwrap();
    assert!(relative_error(&p.operator(0.0), &accretia_core::Matrix32::identity(3)) < 1e-6);
}
