use std::path::{Path, PathBuf};
use std::process::ExitCode;

use accretia::acceptance;
use accretia::config::{load_config, seed_override, ConfigError, ScenarioConfig};
use accretia::runner::{
    batch_exit_code, run_batch, run_scenario, RunSummary, EXIT_CHECK_FAILURE, EXIT_ERROR, EXIT_PASS,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    version,
    about = "Fractional powers of third-order block operators: scenario runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenario files
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads (defaults to all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Replace a scenario's alpha grid by K evenly spaced points on [F, T]
    SweepAlpha {
        config: PathBuf,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the built-in acceptance suite
    Check,
}

fn load(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let mut config = load_config(path)?;
    if let Some(seed) = seed_override()? {
        config.seed = seed;
    }
    Ok(config)
}

fn report(summary: &RunSummary) {
    let status = if summary.passed() { "ok" } else { "FAILED" };
    println!(
        "{}: {status} ({} checks, {} files)",
        summary.name,
        summary.checks.len(),
        summary.files.len()
    );
    for name in &summary.failed_checks {
        println!("  failed check: {name}");
    }
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code.clamp(0, 255) as u8)
}

fn sweep_grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![from],
        _ => (0..steps)
            .map(|k| from + (to - from) * k as f64 / (steps - 1) as f64)
            .collect(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { configs, out, jobs } => {
            if let Some(n) = jobs {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    eprintln!("error: cannot configure {n} worker threads: {e}");
                    return exit(EXIT_ERROR);
                }
            }
            let mut loaded = Vec::new();
            for path in &configs {
                match load(path) {
                    Ok(c) => loaded.push(c),
                    Err(e) => {
                        eprintln!("error: {}: {e}", path.display());
                        return exit(EXIT_ERROR);
                    }
                }
            }
            let mut names: Vec<&str> = loaded.iter().map(|c| c.name.as_str()).collect();
            names.sort_unstable();
            if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
                eprintln!(
                    "error: scenario name {:?} appears more than once; outputs would collide",
                    w[0]
                );
                return exit(EXIT_ERROR);
            }
            let results = run_batch(&loaded, &out);
            for r in &results {
                match r {
                    Ok(s) => report(s),
                    Err(e) => eprintln!("error: {e}"),
                }
            }
            exit(batch_exit_code(&results))
        }
        Command::SweepAlpha {
            config,
            from,
            to,
            steps,
            out,
        } => {
            let mut c = match load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    return exit(EXIT_ERROR);
                }
            };
            c.alpha_grid = sweep_grid(from, to, steps);
            c.t_grid.clear();
            if let Err(e) = c.validate() {
                eprintln!("error: sweep: {e}");
                return exit(EXIT_ERROR);
            }
            match run_scenario(&c, &out) {
                Ok(s) => {
                    report(&s);
                    for row in &s.alpha_sweep {
                        println!(
                            "  alpha {:.6}  max|arg| {:.6}  {}",
                            row.alpha, row.max_abs_arg, row.verdict
                        );
                    }
                    exit(s.exit_code)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit(e.exit_code())
                }
            }
        }
        Command::Check => {
            let outcomes = acceptance::run_all();
            for o in &outcomes {
                println!("{o}");
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            println!("{passed}/{} criteria passed", outcomes.len());
            exit(if passed == outcomes.len() {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILURE
            })
        }
    }
}
