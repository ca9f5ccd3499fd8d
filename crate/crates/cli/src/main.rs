//! mcflab: scenario-driven mean curvature flow laboratory.
//!
//! Exit codes: 0 all checks pass, 1 usage or I/O error, 2 numerical
//! failure, 3 a verification margin was breached.

mod config;
mod report;
mod scenario;
mod snapshot;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mcflab",
    about = "Evolve closed hypersurfaces by mean curvature flow and verify \
             Harnack, pinching and diameter estimates on the run",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Sample a closed-form solution over the time window and verify it.
    Oracle(RunArgs),
    /// Evolve the configured geometry and write the time series.
    Flow(RunArgs),
    /// Harnack sweep, minimizer cross-check and integrated bound.
    Harnack(RunArgs),
    /// Pinching, diameter, sphere-condition and flatness diagnostics.
    Diagnose(RunArgs),
    /// Blow-up rescaling diagnostics.
    Rescale(RunArgs),
    /// Full verification suite.
    Suite(RunArgs),
}

#[derive(Parser, Clone)]
struct RunArgs {
    /// Scenario description file (key = value lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Multiply every check tolerance by this factor.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    /// Override the configured random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Report format (overrides output.format).
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
}

fn scenario_of(command: &Command) -> (config::ScenarioKind, &RunArgs) {
    match command {
        Command::Oracle(a) => (config::ScenarioKind::Oracle, a),
        Command::Flow(a) => (config::ScenarioKind::Flow, a),
        Command::Harnack(a) => (config::ScenarioKind::Harnack, a),
        Command::Diagnose(a) => (config::ScenarioKind::Diagnose, a),
        Command::Rescale(a) => (config::ScenarioKind::Rescale, a),
        Command::Suite(a) => (config::ScenarioKind::Suite, a),
    }
}

fn run() -> Result<i32, (i32, String)> {
    if let Ok(v) = std::env::var("MCFLAB_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                mcflab_core::parallel::configure_threads(n);
            }
            _ => {
                return Err((
                    1,
                    format!("MCFLAB_THREADS must be a positive integer, got `{v}`"),
                ))
            }
        }
    }
    let cli = Cli::parse();
    let (kind, args) = scenario_of(&cli.command);
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| (1, format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = config::parse_config(&text).map_err(|e| (1, e.to_string()))?;
    cfg.scenario = kind;
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(fmt) = &args.format {
        cfg.output_format = match fmt.as_str() {
            "json" => config::ReportFormat::Json,
            _ => config::ReportFormat::Csv,
        };
    }
    let config_dir = args
        .config
        .parent()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    match scenario::run_scenario(&cfg, args.tol_scale, &config_dir) {
        Ok((code, verdict)) => {
            for check in &verdict.checks {
                eprintln!(
                    "{} {}: {}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.name,
                    check.detail
                );
            }
            eprintln!(
                "{} [{}] stop={} steps={} frames={} -> exit {}",
                verdict.scenario,
                verdict.geometry,
                verdict.stop,
                verdict.steps,
                verdict.frames,
                code
            );
            Ok(code)
        }
        Err(e) => Err((e.exit_code(), e.to_string())),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code as u8)
        }
    }
}
