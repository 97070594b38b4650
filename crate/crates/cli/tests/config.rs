use std::f64::consts::FRAC_PI_6;

use accretia::config::{
    parse_config, ConfigError, OperatorSpec, OutputKind, ScenarioConfig, Tolerances, DEFAULT_SEED,
};
use proptest::prelude::*;

const MINIMAL: &str = r#"
name = "minimal"
alpha_grid = [0.5]

[operator.laplacian_1d]
n = 4
h = 1.0
"#;

#[test]
fn minimal_config_gets_defaults() {
    let c = parse_config(MINIMAL).unwrap();
    assert_eq!(c.name, "minimal");
    assert_eq!(c.operator, OperatorSpec::Laplacian1d { n: 4, h: 1.0 });
    assert_eq!(c.alpha_grid, vec![0.5]);
    assert!(c.t_grid.is_empty());
    assert_eq!(c.tolerances.quad_rel_tol, 1e-6);
    assert_eq!(c.tolerances.oracle_rel_tol, 1e-8);
    assert_eq!(c.tolerances.ode_rel_tol, 1e-8);
    assert_eq!(c.seed, DEFAULT_SEED);
    assert_eq!(c.outputs.len(), OutputKind::ALL.len());
}

#[test]
fn alpha_one_is_rejected_naming_alpha_grid() {
    let text = MINIMAL.replace("[0.5]", "[0.5, 1.0]");
    let err = parse_config(&text).unwrap_err();
    assert_eq!(err.field(), Some("alpha_grid"), "{err}");
}

#[test]
fn unknown_operator_tag_is_named() {
    let text = MINIMAL.replace("laplacian_1d", "heat_kernel");
    let err = parse_config(&text).unwrap_err();
    assert_eq!(err.field(), Some("operator"));
    assert!(err.to_string().contains("heat_kernel"), "{err}");

    let nested = r#"
name = "n"
alpha_grid = [0.5]
[operator.rotated]
phi = 0.1
[operator.rotated.inner.mystery]
n = 2
"#;
    let err = parse_config(nested).unwrap_err();
    assert_eq!(err.field(), Some("operator.rotated.inner"));
    assert!(err.to_string().contains("mystery"));
}

#[test]
fn unknown_keys_are_errors() {
    let text = format!("{MINIMAL}\ncolour = \"blue\"\n");
    assert!(matches!(parse_config(&text), Err(ConfigError::Parse(_))));
    let text = MINIMAL.replace("h = 1.0", "h = 1.0\nwidth = 3");
    assert!(parse_config(&text).is_err());
}

#[test]
fn syntax_errors_report_a_line() {
    let err = parse_config("name = \"x\"\nalpha_grid = [0.5\n").unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, ConfigError::Parse(_)));
    assert!(msg.contains("line 2") || msg.contains(":2:"), "{msg}");
}

#[test]
fn validation_names_the_offending_field() {
    let cases = [
        (MINIMAL.replace("\"minimal\"", "\"a/b\""), "name"),
        (MINIMAL.replace("[0.5]", "[]"), "alpha_grid"),
        (format!("t_grid = [0.1, 0.2]\n{MINIMAL}"), "t_grid"),
        (format!("t_grid = [0.0, 0.5, 0.2]\n{MINIMAL}"), "t_grid"),
        (MINIMAL.replace("n = 4", "n = 0"), "operator.laplacian_1d.n"),
        (
            MINIMAL.replace("h = 1.0", "h = -1.0"),
            "operator.laplacian_1d.h",
        ),
        (
            format!("{MINIMAL}\n[tolerances]\nquad_rel_tol = 0.0\n"),
            "tolerances.quad_rel_tol",
        ),
    ];
    for (text, field) in cases {
        let err = parse_config(&text).unwrap_err();
        assert_eq!(err.field(), Some(field), "{err}");
    }
    let diag = r#"
name = "d"
alpha_grid = [0.5]
[operator.diag_sectorial]
moduli = [1.0, 2.0]
angles = [0.1, 0.9]
omega = 0.5
"#;
    assert_eq!(
        parse_config(diag).unwrap_err().field(),
        Some("operator.diag_sectorial.angles")
    );
    let too_far = r#"
name = "r"
alpha_grid = [0.5]
[operator.rotated]
phi = 1.2
[operator.rotated.inner.diag_sectorial]
moduli = [1.0]
angles = [0.5]
omega = 0.5
"#;
    assert_eq!(parse_config(too_far).unwrap_err().field(), Some("operator"));
}

fn operator_strategy() -> impl Strategy<Value = OperatorSpec> {
    let diag = (1usize..4, 0.0f64..1.5).prop_flat_map(|(n, omega)| {
        (
            proptest::collection::vec(0.1f64..10.0, n),
            proptest::collection::vec(-1.0f64..=1.0, n),
            Just(omega),
        )
            .prop_map(|(moduli, unit, omega)| OperatorSpec::DiagSectorial {
                angles: unit.iter().map(|u| u * omega).collect(),
                moduli,
                omega,
            })
    });
    let lap = (1usize..12, 0.05f64..2.0).prop_map(|(n, h)| OperatorSpec::Laplacian1d { n, h });
    prop_oneof![
        diag,
        lap.clone(),
        (lap, -1.5f64..1.5).prop_map(|(inner, phi)| OperatorSpec::Rotated {
            inner: Box::new(inner),
            phi
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trips_through_toml(
        operator in operator_strategy(),
        alpha_grid in proptest::collection::vec(0.001f64..0.999, 1..6),
        steps in proptest::collection::vec(1e-3f64..1.0, 0..6),
        seed in any::<u64>(),
        quad in 1e-12f64..1e-2,
        outputs in proptest::sample::subsequence(OutputKind::ALL.to_vec(), 0..=4),
        name in "[A-Za-z0-9_-]{1,16}",
    ) {
        let mut t = 0.0;
        let mut t_grid = Vec::new();
        if !steps.is_empty() {
            t_grid.push(0.0);
            for s in steps {
                t += s;
                t_grid.push(t);
            }
        }
        let config = ScenarioConfig {
            name,
            operator,
            alpha_grid,
            t_grid,
            tolerances: Tolerances { quad_rel_tol: quad, ..Tolerances::default() },
            outputs: outputs.into_iter().collect(),
            seed,
        };
        // Rotations that leave the sector are rejected, not round-tripped.
        prop_assume!(config.validate().is_ok());
        let back = parse_config(&config.to_toml()).unwrap();
        prop_assert_eq!(back, config);
    }
}

#[test]
fn rotated_round_trip_example() {
    let c = ScenarioConfig {
        name: "rot".into(),
        operator: OperatorSpec::Rotated {
            inner: Box::new(OperatorSpec::Laplacian1d { n: 4, h: 1.0 }),
            phi: FRAC_PI_6,
        },
        alpha_grid: vec![0.25, 0.5],
        t_grid: vec![0.0, 0.5, 1.0],
        tolerances: Tolerances::default(),
        outputs: [OutputKind::ProbeCsv].into_iter().collect(),
        seed: 7,
    };
    assert_eq!(parse_config(&c.to_toml()).unwrap(), c);
}
