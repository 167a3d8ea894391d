//! `slicetool`: forward slice transforms, reconstructions and self-tests.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 configuration error,
//! 3 numerical failure.

mod commands;
mod error;
mod grid;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use commands::{FieldSource, PointSpec, RunConfig, Transform};
use error::CliError;

#[derive(Parser)]
#[command(name = "slicetool", version, about = "Spherical slice transforms on S^2 and S^3")]
struct Cli {
    /// Leave timings out of JSON output so runs are byte-comparable.
    #[arg(long, global = true)]
    omit_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F_a or S_a of a field; CSV of (ξ, value).
    Forward(RunArgs),
    /// Invert computed transform data of a catalog field; JSON error summary.
    Reconstruct(RunArgs),
    /// Run invariant suites; JSON report.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    transform: Transform,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Catalog field name.
    #[arg(long, conflicts_with = "grid_file", required_unless_present = "grid_file")]
    field: Option<String>,
    /// Sampled field on S^2 (forward only).
    #[arg(long)]
    grid_file: Option<PathBuf>,
    /// Evaluation grid IxJ: I heights times J directions.
    #[arg(long, conflicts_with_all = ["random", "xi"])]
    grid: Option<String>,
    /// Number of seeded random evaluation points.
    #[arg(long, conflicts_with = "xi")]
    random: Option<usize>,
    /// An explicit evaluation point, comma separated and normalized (repeatable).
    #[arg(long, value_delimiter = ',', num_args = 1, action = clap::ArgAction::Append, allow_negative_numbers = true)]
    xi: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Quadrature resolution L.
    #[arg(long, short = 'L', default_value_t = 32)]
    resolution: usize,
    /// Pass threshold on the relative L² error (reconstruct).
    #[arg(long)]
    tol: Option<f64>,
    /// CSV destination; forward writes to stdout without it.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run only the named suites (repeatable).
    #[arg(long)]
    suite: Vec<String>,
    /// Offset the measured error of a suite or check, to exercise failures.
    #[arg(long)]
    perturb: Option<String>,
}

impl RunArgs {
    fn config(&self, command: &'static str) -> (RunConfig, FieldSource) {
        let points = match self.random {
            Some(count) => PointSpec::Random { count, seed: self.seed },
            None if !self.xi.is_empty() => {
                PointSpec::Explicit { points: self.xi.chunks(self.n + 1).map(<[f64]>::to_vec).collect() }
            }
            None => PointSpec::Grid { dims: self.grid.clone().unwrap_or_else(|| "8x16".into()) },
        };
        let source = match (&self.field, &self.grid_file) {
            (Some(f), _) => FieldSource::Catalog(f.clone()),
            (None, Some(p)) => FieldSource::File(p.clone()),
            (None, None) => unreachable!("clap requires a field"),
        };
        let field = match &source {
            FieldSource::Catalog(f) => f.clone(),
            FieldSource::File(p) => p.display().to_string(),
        };
        let cfg = RunConfig {
            command,
            n: self.n,
            a: self.a,
            transform: self.transform,
            field,
            resolution: self.resolution,
            points,
            tolerance: self.tol,
            output: self.out.clone(),
        };
        (cfg, source)
    }
}

#[derive(Serialize)]
struct SelftestSummary {
    command: &'static str,
    config: SelftestConfig,
    suites: Vec<selftest::SuiteReport>,
    metrics: SelftestMetrics,
    pass: bool,
}

#[derive(Serialize)]
struct SelftestConfig {
    suites: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    perturb: Option<String>,
}

#[derive(Serialize)]
struct SelftestMetrics {
    checks: usize,
    failed: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_s: Option<f64>,
}

fn run_selftest(args: &SelftestArgs, omit_timing: bool) -> Result<(), CliError> {
    let mut suites: Vec<&'static str> = Vec::new();
    for s in &args.suite {
        let name = selftest::SUITES
            .iter()
            .find(|k| **k == s.as_str())
            .ok_or_else(|| CliError::Config(format!("unknown suite '{s}'; known: {}", selftest::SUITES.join(", "))))?;
        if !suites.contains(name) {
            suites.push(name);
        }
    }
    if suites.is_empty() {
        suites = selftest::SUITES.to_vec();
    }
    if let Some(p) = &args.perturb {
        if !selftest::SUITES.contains(&p.as_str()) && !selftest::check_names().contains(&p.as_str()) {
            return Err(CliError::Config(format!("--perturb '{p}' names no suite or check")));
        }
    }
    let start = Instant::now();
    let reports = selftest::run(&suites, args.perturb.as_deref(), omit_timing);
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.checks.iter().filter(|c| !c.pass).map(move |c| format!("{}/{}", r.name, c.name)))
        .collect();
    let summary = SelftestSummary {
        command: "selftest",
        config: SelftestConfig { suites: suites.clone(), perturb: args.perturb.clone() },
        metrics: SelftestMetrics {
            checks: reports.iter().map(|r| r.checks.len()).sum(),
            failed: failed.clone(),
            runtime_s: (!omit_timing).then(|| start.elapsed().as_secs_f64()),
        },
        pass: failed.is_empty(),
        suites: reports,
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("report serializes"));
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(failed.join(", ")))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Forward(args) => {
            let (cfg, source) = args.config("forward");
            commands::forward(&cfg, &source)
        }
        Command::Reconstruct(args) => {
            let (cfg, source) = args.config("reconstruct");
            let FieldSource::Catalog(name) = &source else {
                return Err(CliError::Config(
                    "reconstruction needs a catalog field so the error can be measured".into(),
                ));
            };
            if commands::reconstruct(&cfg, name, cli.omit_timing)? {
                Ok(())
            } else {
                Err(CliError::Invariant("reconstruction error above tolerance".into()))
            }
        }
        Command::Selftest(args) => run_selftest(&args, cli.omit_timing),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("slicetool: {e}");
            e.exit_code()
        }
    }
}
