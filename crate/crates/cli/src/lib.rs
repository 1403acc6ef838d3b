//! Command-line driver: builds the pipeline for one degree (or a range of
//! degrees for `verify`) and writes JSON, CSV or SVG artifacts.

pub mod report;
pub mod svg;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use monodromy_lab::critical::NewtonOptions;
use monodromy_lab::cycles::{alternating_line_sums, pairing_diagnostics, radical, summarize};
use monodromy_lab::integrals::{check_center_vanishing, IntegralTolerances, TraceOptions};
use monodromy_lab::monodromy::{check_operators, verify_orbit_generation};
use monodromy_lab::{rational, Pipeline, Rational};

pub use report::{emit_report, verify, VerificationReport};

#[derive(Debug, Parser)]
#[command(name = "monodromy-lab", version, about = "Line-arrangement fibrations: vanishing cycles, monodromy and Abelian integrals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact arrangement: vertices, edges, bounded faces.
    Arrange,
    /// Critical and indeterminacy points with value groups.
    Critical,
    /// Vanishing cycles and the intersection matrix.
    Matrix,
    /// Monodromy orbit spans and operator checks.
    Orbit,
    /// Abelian integrals around every center.
    Integrate,
    /// Full pipeline for every degree up to `--d-max`.
    Verify,
    /// SVG drawing of the real arrangement.
    Plot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    #[arg(long, global = true, default_value_t = 2)]
    pub d: usize,
    #[arg(long = "d-max", global = true, default_value_t = 5)]
    pub d_max: usize,
    /// Perturbation of the last line, as `p/q`.
    #[arg(long, global = true, default_value = "0")]
    pub epsilon: String,
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Oval offset as a fraction of the gap to the next critical value.
    #[arg(long = "s", global = true, default_value_t = 0.1)]
    pub s: f64,
    #[arg(long, global = true, default_value_t = 20)]
    pub trials: usize,
    /// Include wall-clock timings in the verification report.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] monodromy_lab::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Core(monodromy_lab::Error::InvalidParameter(_) | monodromy_lab::Error::ParseRational(_)) => 2,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Core(_) => "core",
            Self::Io(_) => "io",
            Self::Json(_) => "serialization",
        }
    }

    /// Machine-readable record for stderr.
    pub fn record(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub d: usize,
    pub d_max: usize,
    #[serde(with = "monodromy_lab::rational")]
    pub epsilon: Rational,
    pub seed: u64,
    pub s: f64,
    pub trials: usize,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub timings: bool,
    #[serde(skip)]
    pub newton: NewtonOptions,
    pub trace: TraceOptions,
    pub integrals: IntegralTolerances,
    #[serde(skip)]
    pub cmd: Option<Command>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let o = &cli.options;
        let epsilon = rational::parse(&o.epsilon).map_err(|e| CliError::Config(e.to_string()))?;
        if o.d_max == 0 {
            return Err(CliError::Config("--d-max must be at least 1".into()));
        }
        // `verify` sweeps 1..=d_max and ignores --d.
        if cli.command != Command::Verify && (o.d == 0 || o.d > o.d_max) {
            return Err(CliError::Config(format!("--d must lie in 1..={}", o.d_max)));
        }
        if !(o.s > 0.0 && o.s <= 0.5) {
            return Err(CliError::Config("--s must lie in (0, 1/2]".into()));
        }
        let default_format = match cli.command {
            Command::Plot => Format::Svg,
            _ => Format::Json,
        };
        let format = o.format.unwrap_or(default_format);
        let allowed = match cli.command {
            Command::Matrix => matches!(format, Format::Json | Format::Csv),
            Command::Plot => matches!(format, Format::Svg),
            _ => matches!(format, Format::Json),
        };
        if !allowed {
            return Err(CliError::Config(format!("format {format:?} not available for this command")));
        }
        Ok(Self {
            command: format!("{:?}", cli.command).to_lowercase(),
            d: o.d,
            d_max: o.d_max,
            epsilon,
            seed: o.seed,
            s: o.s,
            trials: o.trials,
            format,
            out: o.out.clone(),
            timings: o.timings,
            newton: NewtonOptions::default(),
            trace: TraceOptions::default(),
            integrals: IntegralTolerances::default(),
            cmd: Some(cli.command),
        })
    }
}

/// Rendered artifact and whether every check it carries passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifact: String,
    pub pass: bool,
}

/// Deterministic JSON: keys sorted, shortest round-trip floats, trailing
/// newline.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v: Value = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn pipeline(cfg: &RunConfig) -> Result<Pipeline, CliError> {
    Ok(Pipeline::build(cfg.d, &cfg.epsilon, &cfg.newton)?)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cmd = cfg.cmd.ok_or_else(|| CliError::Config("no command".into()))?;
    let ok = |artifact| Ok(Outcome { artifact, pass: true });
    match cmd {
        Command::Arrange => {
            let arr = monodromy_lab::Arrangement::family(cfg.d, &cfg.epsilon)?;
            ok(to_sorted_json(&arr)?)
        }
        Command::Critical => {
            let p = pipeline(cfg)?;
            ok(to_sorted_json(&p.catalog)?)
        }
        Command::Matrix => {
            let p = pipeline(cfg)?;
            if cfg.format == Format::Csv {
                return ok(p.psi.to_csv());
            }
            let rows: Vec<&[i64]> = (0..p.psi.n()).map(|i| p.psi.entries.row(i)).collect();
            ok(to_sorted_json(&json!({
                "d": p.d,
                "epsilon": rational::format(&p.epsilon),
                "cycles": p.cycles,
                "symbols": p.psi.symbols,
                "matrix": rows,
                "summary": summarize(p.d, &p.psi),
                "radical": radical(&p.psi),
                "line_sums": alternating_line_sums(&p.arrangement, &p.cycles, &p.psi),
                "pairing_diagnostics": pairing_diagnostics(&p.psi, &p.cycles, &p.catalog),
            }))?)
        }
        Command::Orbit => {
            let p = pipeline(cfg)?;
            let orbit = verify_orbit_generation(&p)?;
            let ops = check_operators(&p)?;
            let pass = orbit.pass && ops.pass;
            let mut v = serde_json::to_value(&orbit)?;
            v["operators"] = serde_json::to_value(&ops)?;
            Ok(Outcome { artifact: to_sorted_json(&v)?, pass })
        }
        Command::Integrate => {
            let p = pipeline(cfg)?;
            let r = check_center_vanishing(&p.arrangement, &p.catalog, cfg.trials, cfg.seed, cfg.s, &cfg.trace, &cfg.integrals)?;
            Ok(Outcome { artifact: to_sorted_json(&r)?, pass: r.pass || r.centers.is_empty() })
        }
        Command::Verify => {
            let r = verify(cfg)?;
            Ok(Outcome { artifact: to_sorted_json(&r)?, pass: r.pass })
        }
        Command::Plot => {
            let p = pipeline(cfg)?;
            ok(svg::render(&p))
        }
    }
}

/// Caps the worker pool from `MONODROMY_LAB_THREADS`.
pub fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("MONODROMY_LAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("MONODROMY_LAB_THREADS={v:?} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

pub fn write_artifact(cfg: &RunConfig, artifact: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, artifact)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(artifact.as_bytes())?;
        }
    }
    Ok(())
}
