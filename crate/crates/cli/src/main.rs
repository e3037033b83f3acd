// `!(x <= tol)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cre_cli::config::ExperimentConfig;
use cre_cli::report::write_artifacts;
use cre_cli::{presets, run, CliError};
use cre_core::toda::calibrate_kappa;

/// Verification suites and simulations for reflection-equation integrable systems.
#[derive(Parser)]
#[command(name = "cre", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a config and write report.json and timings.json.
    Verify(RunArgs),
    /// Run a toda or xxz config and also write the trajectory CSV files.
    Simulate(RunArgs),
    /// List bundled algebras, automorphisms and example configs.
    Presets {
        /// Print the TOML of one example config.
        #[arg(long)]
        show: Option<String>,
    },
    /// Fit the Toda flow normalization kappa.
    Calibrate {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Write calibration.json into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML).
    #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled example config (see `cre presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: config `output_dir`, else `cre-out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let v: f64 = value.trim().parse().map_err(|e| format!("bad tolerance '{value}': {e}"))?;
    Ok((name.trim().to_string(), v))
}

fn load(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            ExperimentConfig::parse(&text)?
        }
        (None, Some(name)) => presets::load(name)?,
        (None, None) => unreachable!("clap requires --config or --preset"),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    for (name, v) in &args.tol {
        if !(*v >= 0.0) {
            return Err(CliError::Config(format!("tolerance '{name}' must be non-negative, got {v}")));
        }
        cfg.tolerances.insert(name.clone(), *v);
    }
    Ok(cfg)
}

fn execute(args: &RunArgs, simulate: bool) -> Result<bool, CliError> {
    let cfg = load(args)?;
    if simulate && !matches!(cfg.kind, cre_cli::Kind::Toda | cre_cli::Kind::Xxz) {
        return Err(CliError::Config(format!("simulate needs a toda or xxz config, got {:?}", cfg.kind)));
    }
    let out = args.out.clone().or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("cre-out"));
    let outcome = run(&cfg)?;
    let data: &[(String, String)] = if simulate { &outcome.data_files } else { &[] };
    write_artifacts(&out, &outcome.report, &outcome.timings, data)?;
    print!("{}", outcome.report.summary());
    println!("artifacts: {}", out.display());
    Ok(outcome.report.pass)
}

fn calibrate(n: usize, samples: usize, seed: u64, out: Option<&Path>) -> Result<bool, CliError> {
    let cal = calibrate_kappa(n, samples, seed)?;
    let json = serde_json::json!({ "n": n, "samples": cal.samples, "seed": seed, "kappa": cal.kappa, "residual": cal.residual });
    let text = serde_json::to_string_pretty(&json).expect("json serializes") + "\n";
    print!("{text}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
        let path = dir.join("calibration.json");
        std::fs::write(&path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => execute(args, false),
        Command::Simulate(args) => execute(args, true),
        Command::Presets { show: None } => {
            print!("{}", presets::listing());
            Ok(true)
        }
        Command::Presets { show: Some(name) } => presets::preset(name).map(|p| {
            print!("{}", p.toml);
            true
        }),
        Command::Calibrate { n, samples, seed, out } => calibrate(*n, *samples, seed.unwrap_or(1), out.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
