//! Executes one scenario end to end and writes its reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use accretia_core::block_linearization::{
    assemble_block, block_spectrum_sectors, default_lambda_grid, resolvent_bound_probe,
};
use accretia_core::evolution_solver::{solve, SolveReport};
use accretia_core::fractional_block::{
    alpha_star, classify_spectrum_sectors, closed_form_fractional_block, fractional_block_spectrum,
    GenerationVerdict,
};
use accretia_core::fractional_core::{
    balakrishnan_power, principal_power_of_matrix, relative_error,
};
use accretia_core::linalg::eigenvalues;
use accretia_core::sampling::{complex_normal, rng};
use accretia_core::spectra::hausdorff_distance;
use accretia_core::{Complex64, Model, Quadrature};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{OutputKind, ScenarioConfig};
use crate::format::{float, to_json};
use crate::svg::{emit_spectrum_svg, PointSet, Sector};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Absolute floor of the spectral-mapping check, scaled by the largest modulus.
pub const SPECTRAL_MAPPING_TOL: f64 = 1e-9;
/// Floor on the solve-agreement tolerance; the effective value is
/// `max(SOLVE_TOL_FLOOR, 100 · ode_rel_tol)`.
pub const SOLVE_TOL_FLOOR: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot build operator: {0}")]
    Model(#[from] accretia_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        EXIT_ERROR
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub alpha: Option<f64>,
    pub passed: bool,
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

impl CheckResult {
    fn measured(name: &str, alpha: Option<f64>, value: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            alpha,
            passed: value <= tolerance,
            value: Some(value),
            tolerance: Some(tolerance),
            detail: String::new(),
        }
    }

    fn flag(name: &str, alpha: Option<f64>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            alpha,
            passed,
            value: None,
            tolerance: None,
            detail: detail.into(),
        }
    }

    fn errored(name: &str, alpha: Option<f64>, err: impl std::fmt::Display) -> Self {
        Self::flag(name, alpha, false, err.to_string())
    }
}

/// One row of the alpha sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaRow {
    pub alpha: f64,
    pub max_abs_arg: f64,
    pub verdict: String,
    pub oracle_residual: Option<f64>,
    pub quad_residual: Option<f64>,
    /// `max Re(−λ)` over `σ(𝔸^α)`; positive once `−𝔸^α` stops generating.
    pub spectral_abscissa: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub name: String,
    pub seed: u64,
    pub dim: usize,
    pub omega: f64,
    pub alpha_star: f64,
    pub exit_code: i32,
    pub failed_checks: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub alpha_sweep: Vec<AlphaRow>,
    pub files: Vec<String>,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.exit_code == EXIT_PASS
    }
}

#[derive(Debug, Clone, Serialize)]
struct ComplexSeries {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl ComplexSeries {
    fn new(z: &[Complex64]) -> Self {
        ComplexSeries {
            re: z.iter().map(|c| c.re).collect(),
            im: z.iter().map(|c| c.im).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct SolveJson {
    alpha: f64,
    t_grid: Vec<f64>,
    max_rel_err_closed_vs_semigroup: f64,
    max_rel_err_semigroup_vs_reference: f64,
    max_rel_err_closed_vs_reference: f64,
    u_closed_form: Vec<ComplexSeries>,
    fractional_norms: Vec<[f64; 4]>,
    regularity_norms: Vec<[f64; 3]>,
    regularity_lipschitz: f64,
    printed_transform_defects: [Option<f64>; 2],
}

impl SolveJson {
    fn new(r: &SolveReport<f64>) -> Self {
        SolveJson {
            alpha: r.alpha,
            t_grid: r.t_grid.clone(),
            max_rel_err_closed_vs_semigroup: r.max_rel_err_closed_vs_semigroup,
            max_rel_err_semigroup_vs_reference: r.max_rel_err_semigroup_vs_reference,
            max_rel_err_closed_vs_reference: r.max_rel_err_closed_vs_reference,
            u_closed_form: r
                .closed_form
                .iter()
                .map(|u| ComplexSeries::new(u))
                .collect(),
            fractional_norms: r.fractional_norms.clone(),
            regularity_norms: r.regularity_norms.clone(),
            regularity_lipschitz: r.regularity_lipschitz,
            printed_transform_defects: r.printed_transform_defects,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct SolveFile {
    name: String,
    seed: u64,
    initial_data: [ComplexSeries; 3],
    solves: Vec<SolveJson>,
}

struct AlphaOutcome {
    row: AlphaRow,
    checks: Vec<CheckResult>,
    spectrum: Vec<Complex64>,
    solve: Option<SolveJson>,
}

/// Third-order initial data `(φ, ψ, ξ)` drawn from the scenario seed.
pub fn initial_data(dim: usize, seed: u64) -> [Vec<Complex64>; 3] {
    let mut r = rng(seed);
    std::array::from_fn(|_| complex_normal(&mut r, dim))
}

fn analyse_alpha(
    model: &Model,
    alpha: f64,
    config: &ScenarioConfig,
    data: &[Vec<Complex64>; 3],
) -> AlphaOutcome {
    let tol = &config.tolerances;
    let a = Some(alpha);
    let mut checks = Vec::new();
    let predicted = fractional_block_spectrum(model, alpha);
    let spectral_abscissa = predicted
        .iter()
        .map(|z| -z.re)
        .fold(f64::NEG_INFINITY, f64::max);

    let mut oracle_residual = None;
    match closed_form_fractional_block(model, alpha) {
        Ok(block) => {
            let flat = block.flatten();
            match principal_power_of_matrix(&assemble_block(model).flatten(), alpha) {
                Ok(oracle) => {
                    let r = relative_error(&flat, &oracle);
                    oracle_residual = Some(r);
                    checks.push(CheckResult::measured(
                        "fractional_block_oracle",
                        a,
                        r,
                        tol.oracle_rel_tol,
                    ));
                }
                Err(e) => checks.push(CheckResult::errored("fractional_block_oracle", a, e)),
            }
            let scale = predicted.iter().map(|z| z.norm()).fold(1.0, f64::max);
            match eigenvalues(&flat) {
                Ok(ev) => checks.push(CheckResult::measured(
                    "spectral_mapping",
                    a,
                    hausdorff_distance(&ev, &predicted),
                    SPECTRAL_MAPPING_TOL * scale,
                )),
                Err(e) => checks.push(CheckResult::errored("spectral_mapping", a, e)),
            }
        }
        Err(e) => checks.push(CheckResult::errored("fractional_block_oracle", a, e)),
    }

    let quad_residual = match balakrishnan_power(model, alpha, &Quadrature::default()) {
        Ok(p) => match p.residual_vs_oracle {
            Some(r) => {
                checks.push(CheckResult::measured(
                    "balakrishnan_quadrature",
                    a,
                    r,
                    tol.quad_rel_tol,
                ));
                Some(r)
            }
            None => {
                checks.push(CheckResult::flag(
                    "balakrishnan_quadrature",
                    a,
                    false,
                    "oracle unavailable",
                ));
                None
            }
        },
        Err(e) => {
            checks.push(CheckResult::errored("balakrishnan_quadrature", a, e));
            None
        }
    };

    let (max_abs_arg, verdict) = match classify_spectrum_sectors(model, alpha) {
        Ok(c) => {
            checks.push(CheckResult::flag(
                "sector_inclusion",
                a,
                c.inclusion_holds,
                format!(
                    "|Γ1|={} |Γ2|={} |Γ3|={}",
                    c.gamma1.len(),
                    c.gamma2.len(),
                    c.gamma3.len()
                ),
            ));
            (
                c.max_abs_arg,
                Some(GenerationVerdict::from_angle(c.max_abs_arg)),
            )
        }
        Err(e) => {
            checks.push(CheckResult::errored("sector_inclusion", a, e));
            (f64::NAN, None)
        }
    };

    let mut solve_json = None;
    if !config.t_grid.is_empty() && verdict.is_some_and(GenerationVerdict::generates) {
        let solve_tol = SOLVE_TOL_FLOOR.max(100.0 * tol.ode_rel_tol);
        match solve(
            model,
            alpha,
            &data[0],
            &data[1],
            &data[2],
            &config.t_grid,
            tol.ode_rel_tol,
        ) {
            Ok(r) => {
                checks.push(CheckResult::measured(
                    "solve_closed_vs_semigroup",
                    a,
                    r.max_rel_err_closed_vs_semigroup,
                    solve_tol,
                ));
                checks.push(CheckResult::measured(
                    "solve_semigroup_vs_reference",
                    a,
                    r.max_rel_err_semigroup_vs_reference,
                    solve_tol,
                ));
                checks.push(CheckResult::measured(
                    "solve_closed_vs_reference",
                    a,
                    r.max_rel_err_closed_vs_reference,
                    solve_tol,
                ));
                solve_json = Some(SolveJson::new(&r));
            }
            Err(e) => checks.push(CheckResult::errored("solve", a, e)),
        }
    }

    AlphaOutcome {
        row: AlphaRow {
            alpha,
            max_abs_arg,
            verdict: verdict
                .map_or("unavailable", GenerationVerdict::as_str)
                .to_string(),
            oracle_residual,
            quad_residual,
            spectral_abscissa,
        },
        checks,
        spectrum: predicted,
        solve: solve_json,
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, float)
}

pub fn alpha_sweep_csv(rows: &[AlphaRow]) -> String {
    let mut out =
        String::from("alpha,max_abs_arg,verdict,oracle_residual,quad_residual,spectral_abscissa\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            float(r.alpha),
            float(r.max_abs_arg),
            r.verdict,
            opt(r.oracle_residual),
            opt(r.quad_residual),
            float(r.spectral_abscissa)
        );
    }
    out
}

fn write(
    out_dir: &Path,
    file: String,
    contents: &str,
    files: &mut Vec<String>,
) -> Result<(), RunError> {
    let path = out_dir.join(&file);
    std::fs::write(&path, contents).map_err(|source| RunError::Io {
        path: path.display().to_string(),
        source,
    })?;
    files.push(file);
    Ok(())
}

fn write_svg(
    out_dir: &Path,
    file: String,
    title: &str,
    sets: &[PointSet],
    sectors: &[Sector],
    files: &mut Vec<String>,
) -> Result<(), RunError> {
    let path = out_dir.join(&file);
    emit_spectrum_svg(title, sets, sectors, &path).map_err(|source| RunError::Io {
        path: path.display().to_string(),
        source,
    })?;
    files.push(file);
    Ok(())
}

fn three_sectors(center: f64, half_angle: f64) -> [Sector; 3] {
    [0.0, center, -center].map(|c| Sector {
        center: c,
        half_angle,
    })
}

/// Runs every check and writes the requested outputs plus
/// `<name>_summary.json` into `out_dir`.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunSummary, RunError> {
    let model = config.operator.build()?;
    std::fs::create_dir_all(out_dir).map_err(|source| RunError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let data = initial_data(model.dim(), config.seed);
    let outcomes: Vec<AlphaOutcome> = config
        .alpha_grid
        .par_iter()
        .map(|&alpha| analyse_alpha(&model, alpha, config, &data))
        .collect();

    let mut checks: Vec<CheckResult> = outcomes
        .iter()
        .flat_map(|o| o.checks.iter().cloned())
        .collect();
    let wants = |k: OutputKind| config.outputs.contains(&k);
    let name = &config.name;
    let mut files = Vec::new();

    if wants(OutputKind::ProbeCsv) {
        match resolvent_bound_probe(&model, &default_lambda_grid::<f64>()) {
            Ok(p) => {
                checks.push(CheckResult::flag(
                    "resolvent_bound",
                    None,
                    p.fitted_m.is_finite(),
                    format!(
                        "fitted M = {}, weighted = {}",
                        float(p.fitted_m),
                        p.weighted
                    ),
                ));
                let mut csv = String::from("lambda,norm,flat_norm,lambda_times_norm\n");
                for ((l, n), f) in p.lambda_grid.iter().zip(&p.norms).zip(&p.flat_norms) {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{}",
                        float(*l),
                        float(*n),
                        float(*f),
                        float(l * n)
                    );
                }
                write(out_dir, format!("{name}_probe.csv"), &csv, &mut files)?;
            }
            Err(e) => checks.push(CheckResult::errored("resolvent_bound", None, e)),
        }
    }

    if wants(OutputKind::AlphaSweepCsv) {
        let rows: Vec<AlphaRow> = outcomes.iter().map(|o| o.row.clone()).collect();
        write(
            out_dir,
            format!("{name}_alpha_sweep.csv"),
            &alpha_sweep_csv(&rows),
            &mut files,
        )?;
    }

    let solves: Vec<SolveJson> = outcomes.iter().filter_map(|o| o.solve.clone()).collect();
    if wants(OutputKind::SolveReportJson) && !solves.is_empty() {
        let file = SolveFile {
            name: name.clone(),
            seed: config.seed,
            initial_data: data.each_ref().map(|d| ComplexSeries::new(d)),
            solves,
        };
        write(
            out_dir,
            format!("{name}_solve_report.json"),
            &to_json(&file),
            &mut files,
        )?;
    }

    if wants(OutputKind::SpectrumSvg) {
        let omega = model.omega();
        let part = block_spectrum_sectors(&model, 1e-10);
        let [l1, l2, l3] = part.groups;
        let sets = [
            PointSet::new("Λ1", l1),
            PointSet::new("Λ2", l2),
            PointSet::new("Λ3", l3),
        ];
        let sectors = three_sectors(std::f64::consts::TAU / 3.0, omega / 3.0);
        write_svg(
            out_dir,
            format!("{name}_spectrum.svg"),
            &format!("{name}: spectrum of the block operator"),
            &sets,
            &sectors,
            &mut files,
        )?;
        for (k, o) in outcomes.iter().enumerate() {
            let alpha = o.row.alpha;
            let sets = match classify_spectrum_sectors(&model, alpha) {
                Ok(c) => vec![
                    PointSet::new("Γ1", c.gamma1),
                    PointSet::new("Γ2", c.gamma2),
                    PointSet::new("Γ3", c.gamma3),
                ],
                Err(_) => vec![PointSet::new("σ", o.spectrum.clone())],
            };
            let sectors = three_sectors(std::f64::consts::TAU * alpha / 3.0, alpha * omega / 3.0);
            write_svg(
                out_dir,
                format!("{name}_spectrum_alpha_{k:03}.svg"),
                &format!(
                    "{name}: spectrum of the fractional block, alpha = {}",
                    float(alpha)
                ),
                &sets,
                &sectors,
                &mut files,
            )?;
        }
    }

    let failed_checks: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| match c.alpha {
            Some(a) => format!("{} (alpha = {})", c.name, float(a)),
            None => c.name.clone(),
        })
        .collect();
    files.push(format!("{name}_summary.json"));
    let summary = RunSummary {
        name: name.clone(),
        seed: config.seed,
        dim: model.dim(),
        omega: model.omega(),
        alpha_star: alpha_star(model.omega()),
        exit_code: if failed_checks.is_empty() {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILURE
        },
        failed_checks,
        checks,
        alpha_sweep: outcomes.into_iter().map(|o| o.row).collect(),
        files,
    };
    let path = out_dir.join(format!("{name}_summary.json"));
    std::fs::write(&path, to_json(&summary)).map_err(|source| RunError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(summary)
}

/// Runs scenarios in parallel; each writes only its own files.
pub fn run_batch(configs: &[ScenarioConfig], out_dir: &Path) -> Vec<Result<RunSummary, RunError>> {
    configs
        .par_iter()
        .map(|c| run_scenario(c, out_dir))
        .collect()
}

/// Worst exit code across a batch.
pub fn batch_exit_code(results: &[Result<RunSummary, RunError>]) -> i32 {
    results
        .iter()
        .map(|r| match r {
            Ok(s) => s.exit_code,
            Err(e) => e.exit_code(),
        })
        .max()
        .unwrap_or(EXIT_PASS)
}

/// Default output directory.
pub fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}
