//! `noisevar`: measurement-noise variance estimation on CSV time series.

mod commands;
mod csv_io;
mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{CliError, EstimatorChoice, InputSource};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "noisevar",
    version,
    about = "Estimate measurement-noise variance on 1-D time series",
    long_about = "Generates synthetic scenarios, runs the robust MAD-window estimator and the \
                  correlation-method baselines over CSV measurement streams, compares them, and \
                  emits diagnostic decompositions of the estimation error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct InputArgs {
    /// Measurement CSV with a `y` column; `x`, `r_true` and `t` are used when present
    #[arg(long, group = "source")]
    input: Option<PathBuf>,
    /// Scenario configuration file to generate and use as the input
    #[arg(long, group = "source")]
    scenario: Option<PathBuf>,
    /// Seed override when generating from --scenario
    #[arg(long, requires = "scenario")]
    seed: Option<u64>,
}

impl InputArgs {
    fn source(self) -> InputSource {
        match (self.input, self.scenario) {
            (Some(path), None) => InputSource::Csv(path),
            (None, Some(path)) => InputSource::Scenario { path, seed: self.seed },
            _ => unreachable!("clap enforces exactly one source"),
        }
    }
}

#[derive(Args)]
struct ParamArgs {
    /// Estimator gain K, inside (0, 1)
    #[arg(long, default_value_t = 0.9902)]
    gain: f64,
    /// Estimation window length m
    #[arg(long, default_value_t = 100)]
    window: usize,
    /// MAD scale factor a
    #[arg(long = "mad-scale", default_value_t = 1.4826)]
    mad_scale: f64,
    /// Number of innovation autocovariance lags used by the baselines
    #[arg(long, default_value_t = 4)]
    lags: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EstimatorKind {
    /// Robust MAD-window estimator
    Alg1Mad,
    /// Mean-variance window estimator
    Alg1Mean,
    /// Correlation baseline fitting (M, R)
    Mehra,
    /// Autocovariance least squares fitting (Q, R)
    Als,
    /// All three comparison methods in one output
    All,
}

impl From<EstimatorKind> for EstimatorChoice {
    fn from(kind: EstimatorKind) -> Self {
        match kind {
            EstimatorKind::Alg1Mad => EstimatorChoice::Alg1Mad,
            EstimatorKind::Alg1Mean => EstimatorChoice::Alg1Mean,
            EstimatorKind::Mehra => EstimatorChoice::Mehra,
            EstimatorKind::Als => EstimatorChoice::Als,
            EstimatorKind::All => EstimatorChoice::All,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scenario and write `k,t,x,y,r_true` samples
    Simulate {
        /// Scenario configuration file
        #[arg(long)]
        scenario: PathBuf,
        /// Seed override; defaults to the seed in the scenario file
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path
        #[arg(long)]
        output: PathBuf,
    },
    /// Run an estimator over a measurement stream
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        /// Which estimator to run
        #[arg(long, value_enum, default_value_t = EstimatorKind::Alg1Mad)]
        estimator: EstimatorKind,
        #[command(flatten)]
        params: ParamArgs,
        /// Output CSV path
        #[arg(long)]
        output: PathBuf,
    },
    /// Run all three methods and render the comparison plot
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Output CSV path
        #[arg(long)]
        output: PathBuf,
        /// Output SVG path
        #[arg(long)]
        plot: PathBuf,
    },
    /// Decompose the windowed innovation variance into noise, signal and
    /// cross terms (requires the true signal column `x`)
    Diagnose {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Output CSV path
        #[arg(long)]
        output: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { scenario, seed, output } => {
            commands::cmd_simulate(&scenario, seed, &output)
        }
        Command::Estimate { input, estimator, params, output } => {
            let config = commands::build_config(
                params.gain,
                params.window,
                params.mad_scale,
                noisevar_core::Variability::MadVariance,
            )?;
            commands::cmd_estimate(
                &input.source(),
                estimator.into(),
                &config,
                params.lags,
                &output,
            )
        }
        Command::Compare { input, params, output, plot } => {
            let config = commands::build_config(
                params.gain,
                params.window,
                params.mad_scale,
                noisevar_core::Variability::MadVariance,
            )?;
            commands::cmd_compare(&input.source(), &config, params.lags, &output, &plot)
        }
        Command::Diagnose { input, params, output } => {
            let config = commands::build_config(
                params.gain,
                params.window,
                params.mad_scale,
                noisevar_core::Variability::MeanVariance,
            )?;
            commands::cmd_diagnose(&input.source(), &config, &output)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}
