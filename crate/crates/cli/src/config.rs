//! Scenario configuration: strict TOML in, validated [`ScenarioConfig`] out.

use std::collections::BTreeSet;
use std::path::Path;

use accretia_core::operator_models::{
    make_diag_sectorial, make_dirichlet_laplacian_1d, make_rotated,
};
use accretia_core::Model;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_QUAD_REL_TOL: f64 = 1e-6;
pub const DEFAULT_ORACLE_REL_TOL: f64 = 1e-8;
pub const DEFAULT_ODE_REL_TOL: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "ACCRETIA_SEED";

#[derive(Debug, Error)]
pub enum ConfigError {
    /// TOML syntax or schema error; the message carries line and column.
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ConfigError {
    fn invalid(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Offending field for validation errors.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Validation { field, .. } => Some(field),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    DiagSectorial {
        moduli: Vec<f64>,
        angles: Vec<f64>,
        omega: f64,
    },
    #[serde(rename = "laplacian_1d")]
    Laplacian1d {
        n: usize,
        h: f64,
    },
    Rotated {
        inner: Box<OperatorSpec>,
        phi: f64,
    },
}

impl OperatorSpec {
    pub fn build(&self) -> accretia_core::Result<Model> {
        match self {
            OperatorSpec::DiagSectorial {
                moduli,
                angles,
                omega,
            } => make_diag_sectorial(moduli, angles, *omega),
            OperatorSpec::Laplacian1d { n, h } => make_dirichlet_laplacian_1d(*n, *h),
            OperatorSpec::Rotated { inner, phi } => make_rotated(&inner.build()?, *phi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_quad")]
    pub quad_rel_tol: f64,
    #[serde(default = "default_oracle")]
    pub oracle_rel_tol: f64,
    #[serde(default = "default_ode")]
    pub ode_rel_tol: f64,
}

fn default_quad() -> f64 {
    DEFAULT_QUAD_REL_TOL
}

fn default_oracle() -> f64 {
    DEFAULT_ORACLE_REL_TOL
}

fn default_ode() -> f64 {
    DEFAULT_ODE_REL_TOL
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad_rel_tol: DEFAULT_QUAD_REL_TOL,
            oracle_rel_tol: DEFAULT_ORACLE_REL_TOL,
            ode_rel_tol: DEFAULT_ODE_REL_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    SpectrumSvg,
    AlphaSweepCsv,
    SolveReportJson,
    ProbeCsv,
}

impl OutputKind {
    pub const ALL: [OutputKind; 4] = [
        OutputKind::SpectrumSvg,
        OutputKind::AlphaSweepCsv,
        OutputKind::SolveReportJson,
        OutputKind::ProbeCsv,
    ];
}

fn default_outputs() -> BTreeSet<OutputKind> {
    OutputKind::ALL.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub operator: OperatorSpec,
    pub alpha_grid: Vec<f64>,
    #[serde(default)]
    pub t_grid: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_outputs")]
    pub outputs: BTreeSet<OutputKind>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let name_ok = !self.name.is_empty()
            && self.name != "."
            && self.name != ".."
            && !self
                .name
                .chars()
                .any(|c| matches!(c, '/' | '\\' | '\0') || c.is_control());
        if !name_ok {
            return Err(ConfigError::invalid(
                "name",
                format!("{:?} is not a valid file stem", self.name),
            ));
        }
        if self.alpha_grid.is_empty() {
            return Err(ConfigError::invalid("alpha_grid", "must not be empty"));
        }
        if let Some(a) = self.alpha_grid.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
            return Err(ConfigError::invalid(
                "alpha_grid",
                format!("{a} is not strictly inside (0, 1)"),
            ));
        }
        if let Some(t) = self.t_grid.iter().find(|&&t| !(t.is_finite() && t >= 0.0)) {
            return Err(ConfigError::invalid(
                "t_grid",
                format!("{t} is not a nonnegative time"),
            ));
        }
        if self.t_grid.first().is_some_and(|&t| t != 0.0) {
            return Err(ConfigError::invalid("t_grid", "must start at 0"));
        }
        if self.t_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ConfigError::invalid(
                "t_grid",
                "must be strictly increasing",
            ));
        }
        let tol = &self.tolerances;
        for (field, v) in [
            ("tolerances.quad_rel_tol", tol.quad_rel_tol),
            ("tolerances.oracle_rel_tol", tol.oracle_rel_tol),
            ("tolerances.ode_rel_tol", tol.ode_rel_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::invalid(
                    field,
                    format!("{v} must be positive and finite"),
                ));
            }
        }
        validate_operator(&self.operator, "operator")
    }

    /// Serializes back to TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs always serialize")
    }
}

fn validate_operator(op: &OperatorSpec, path: &str) -> Result<(), ConfigError> {
    match op {
        OperatorSpec::DiagSectorial {
            moduli,
            angles,
            omega,
        } => {
            let path = format!("{path}.diag_sectorial");
            if moduli.is_empty() {
                return Err(ConfigError::invalid(
                    &format!("{path}.moduli"),
                    "must not be empty",
                ));
            }
            if moduli.len() != angles.len() {
                return Err(ConfigError::invalid(
                    &format!("{path}.angles"),
                    format!(
                        "has {} entries but moduli has {}",
                        angles.len(),
                        moduli.len()
                    ),
                ));
            }
            if moduli.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
                return Err(ConfigError::invalid(
                    &format!("{path}.moduli"),
                    "entries must be positive and finite",
                ));
            }
            if !(*omega >= 0.0 && *omega <= std::f64::consts::FRAC_PI_2) {
                return Err(ConfigError::invalid(
                    &format!("{path}.omega"),
                    format!("{omega} is outside [0, π/2]"),
                ));
            }
            if let Some(a) = angles.iter().find(|&&a| !(a.abs() <= *omega)) {
                return Err(ConfigError::invalid(
                    &format!("{path}.angles"),
                    format!("{a} is outside [-omega, omega]"),
                ));
            }
        }
        OperatorSpec::Laplacian1d { n, h } => {
            let path = format!("{path}.laplacian_1d");
            if *n == 0 {
                return Err(ConfigError::invalid(
                    &format!("{path}.n"),
                    "must be at least 1",
                ));
            }
            if !(*h > 0.0 && h.is_finite()) {
                return Err(ConfigError::invalid(
                    &format!("{path}.h"),
                    "must be positive and finite",
                ));
            }
        }
        OperatorSpec::Rotated { inner, phi } => {
            let path = format!("{path}.rotated");
            if !phi.is_finite() {
                return Err(ConfigError::invalid(
                    &format!("{path}.phi"),
                    "must be finite",
                ));
            }
            validate_operator(inner, &format!("{path}.inner"))?;
        }
    }
    // Catches anything the structural checks above do not, such as a
    // rotation that leaves the accretive class.
    op.build()
        .map(|_| ())
        .map_err(|e| ConfigError::invalid(path, e.to_string()))
}

const OPERATOR_TAGS: [&str; 3] = ["diag_sectorial", "laplacian_1d", "rotated"];

/// First unrecognised operator tag, searching nested `rotated.inner` tables.
fn unknown_operator_tag(value: &toml::Value, path: &str) -> Option<(String, String)> {
    let table = value.as_table()?;
    for (tag, body) in table {
        if !OPERATOR_TAGS.contains(&tag.as_str()) {
            return Some((path.to_string(), tag.clone()));
        }
        if tag == "rotated" {
            if let Some(inner) = body.get("inner") {
                return unknown_operator_tag(inner, &format!("{path}.rotated.inner"));
            }
        }
    }
    None
}

/// Parses and validates a scenario.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let config: ScenarioConfig = toml::from_str(text).map_err(|e| {
        let tag = toml::from_str::<toml::Table>(text).ok().and_then(|t| {
            t.get("operator")
                .and_then(|op| unknown_operator_tag(op, "operator"))
        });
        match tag {
            Some((field, tag)) => ConfigError::invalid(
                &field,
                format!(
                    "unknown operator tag `{tag}` (expected one of {})",
                    OPERATOR_TAGS.join(", ")
                ),
            ),
            None => ConfigError::Parse(e.to_string()),
        }
    })?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

/// Seed override from `ACCRETIA_SEED`, if set.
pub fn seed_override() -> Result<Option<u64>, ConfigError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            ConfigError::invalid(SEED_ENV, format!("{v:?} is not an unsigned integer"))
        }),
        Err(_) => Ok(None),
    }
}
