//! Batch front end: parse a run configuration, build the immersion, run the
//! residual checks and write CSV/JSON artifacts.
//!
//! Exit codes: 0 pass, 1 tolerance failure, 2 configuration or usage error,
//! 3 numerical failure. Diagnostics go to standard error.

pub mod config;
pub mod output;
pub mod prepare;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use thiserror::Error;
use zerok_core::phase::PhaseSolution;
use zerok_core::shape::{sample_grid, scan_points, AxisGrid};

use config::{parse_config, ConfigError};
use output::{csv_text, fmt_f64, JsonReport};
use prepare::{prepare, PrepareError, Prepared};

#[derive(Debug, Parser)]
#[command(name = "zerok", version, about = "Verify minimal hypersurfaces of S^4 with vanishing Gauss-Kronecker curvature")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the configured checks and write reports.
    Verify {
        config: PathBuf,
        /// JSON report path (overrides [output] json).
        #[arg(long)]
        json: Option<PathBuf>,
        /// CSV point cloud path (overrides [output] csv).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Record wall time in the JSON report (makes it non-reproducible).
        #[arg(long)]
        timing: bool,
        /// Do not print the summary table.
        #[arg(long, short)]
        quiet: bool,
    },
    /// Print the validity interval and phase-function table of the example12 phase ODE.
    Ode {
        #[arg(long, allow_negative_numbers = true)]
        c1: f64,
        #[arg(long, allow_negative_numbers = true)]
        c2: f64,
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
    /// Write the point cloud and curvatures on the configured grid as CSV.
    Sample {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pretty-print a JSON report from a previous run.
    Report { json: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Config { path: String, source: ConfigError },
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] zerok_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use zerok_core::Error as E;
        match self {
            CliError::Config { .. } | CliError::Invalid(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                E::EmptyInterval { .. }
                | E::BadBasis(_)
                | E::NotApplicable { .. }
                | E::NoAnalyticJet(_)
                | E::Expr(_) => 2,
                _ => 3,
            },
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Loads and prepares a configuration. Output paths in the file are
/// relative to the file's directory.
fn load(path: &Path) -> Result<(Prepared, Option<PathBuf>, Option<PathBuf>), CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let cfg = parse_config(&text).map_err(|source| CliError::Config {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let csv = cfg.csv.as_ref().map(|p| base.join(p));
    let json = cfg.json.as_ref().map(|p| base.join(p));
    let prepared = prepare(&cfg).map_err(|e| match e {
        PrepareError::Core(e) => CliError::Core(e),
        PrepareError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
    })?;
    Ok((prepared, csv, json))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, text).map_err(io_err(path))
}

fn write_csv(p: &Prepared, path: &Path) -> Result<(), CliError> {
    let rows = sample_grid(&p.immersion, &p.grid, &p.analysis);
    let (text, skipped) = csv_text(&rows);
    if skipped > 0 {
        log::warn!("{skipped} grid points could not be sampled and were left out of {}", path.display());
    }
    write(path, &text)
}

fn verify(
    config: &Path,
    json: Option<PathBuf>,
    csv: Option<PathBuf>,
    timing: bool,
    quiet: bool,
) -> Result<i32, CliError> {
    let (p, cfg_csv, cfg_json) = load(config)?;
    let start = Instant::now();
    let report = scan_points(&p.immersion, &p.points, &p.checks, &p.tolerances, &p.analysis)?;
    let elapsed = timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let json_report = JsonReport::new(p.echo.clone(), &report, elapsed);
    if let Some(path) = json.or(cfg_json) {
        write(&path, &json_report.to_json())?;
    }
    if let Some(path) = csv.or(cfg_csv) {
        write_csv(&p, &path)?;
    }
    if !quiet {
        print!("{}", json_report.summary());
    }
    for name in report.failures() {
        eprintln!("check failed: {name}");
    }
    if report.numerical_failure() {
        eprintln!(
            "{} of {} points excluded, above the {:.0}% budget",
            report.excluded,
            report.points,
            100.0 * zerok_core::shape::EXCLUSION_BUDGET
        );
    }
    Ok(json_report.verdict().exit_code())
}

fn ode(c1: f64, c2: f64, samples: usize) -> Result<i32, CliError> {
    if samples < 2 {
        return Err(CliError::Invalid("--samples must be at least 2".into()));
    }
    let phase = PhaseSolution::new(c1, c2)?;
    let (lo, hi) = phase.interval;
    println!("validity interval: ({}, {})", fmt_f64(lo), fmt_f64(hi));
    let (a, b) = phase.shrunk(0.01);
    println!("v,phi,g,h,residual");
    for v in AxisGrid::new(a, b, samples).values() {
        let (g, h) = phase.gh(v)?;
        let rg = phase.coefficient_ode_residual(|x| Ok(phase.gh(x)?.0), v)?;
        let rh = phase.coefficient_ode_residual(|x| Ok(phase.gh(x)?.1), v)?;
        let row = [v, phase.phi(v)?, g, h, rg.abs().max(rh.abs())];
        println!("{}", row.map(fmt_f64).join(","));
    }
    Ok(0)
}

fn sample(config: &Path, out: &Path) -> Result<i32, CliError> {
    let (p, _, _) = load(config)?;
    write_csv(&p, out)?;
    Ok(0)
}

fn report(path: &Path) -> Result<i32, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let r: JsonReport = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{}: not a report: {e}", path.display())))?;
    print!("{}", r.summary());
    Ok(r.verdict().exit_code())
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify {
            config,
            json,
            csv,
            timing,
            quiet,
        } => verify(&config, json, csv, timing, quiet),
        Command::Ode { c1, c2, samples } => ode(c1, c2, samples),
        Command::Sample { config, out } => sample(&config, &out),
        Command::Report { json } => report(&json),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
