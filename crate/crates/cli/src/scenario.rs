//! The scenario bundled with `check`.

use crate::config::{parse_config, ScenarioConfig};

/// Rotated Laplacian with `ω = π/6`, sampled on both sides of `α* ≈ 0.6923`.
pub const CHECK_SCENARIO: &str = r#"name = "check_rotated_laplacian"
alpha_grid = [0.25, 0.5, 0.68, 0.72]
t_grid = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
seed = 42

[operator.rotated]
phi = 0.5235987755982988

[operator.rotated.inner.laplacian_1d]
n = 4
h = 1.0
"#;

pub fn check_scenario() -> ScenarioConfig {
    parse_config(CHECK_SCENARIO).expect("bundled scenario is valid")
}
