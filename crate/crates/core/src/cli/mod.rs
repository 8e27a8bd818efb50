//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
//! 4 reliability flag raised under `--strict`, 1 I/O failure.

mod commands;
mod ledger;
mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use commands::{execute, RunOutput};
pub use ledger::{append_record, read_records, RunRecord, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_FLAGGED: i32 = 4;

const DEFAULT_LEDGER: &str = "pickands-ledger.ndjson";

#[derive(Debug, Parser)]
#[command(
    name = "pickands",
    version,
    about = "Monte Carlo laboratory for Pickands constants and Gaussian suprema"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Append-only run ledger (newline-delimited JSON).
    #[arg(long, global = true, env = "PICKANDS_LEDGER")]
    ledger: Option<PathBuf>,
    /// Worker threads; changes wall time only.
    #[arg(long, global = true, default_value_t = 1, value_parser = parse::positive_usize)]
    workers: usize,
    /// Replications per deterministic chunk.
    #[arg(long, global = true, default_value_t = crate::mc::DEFAULT_CHUNK_SIZE, value_parser = parse::positive_usize)]
    chunk_size: usize,
    /// Exit with code 4 when an estimate carries a reliability flag.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SimModel {
    /// Stationary process with covariance exp(−|t|^α).
    Exp,
    /// Fractional Brownian motion with variance 2t^α.
    Fbm,
    /// Drifted process B(t) − t^α.
    Chi,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse::alpha)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = SimModel::Exp)]
    pub model: SimModel,
    /// Horizon; the path is sampled on [0, p].
    #[arg(long, value_parser = parse::non_negative)]
    pub p: f64,
    #[arg(long, value_parser = parse::positive)]
    pub step: f64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct EstimateHArgs {
    #[arg(long, value_parser = parse::alpha)]
    pub alpha: f64,
    #[arg(long = "T", value_parser = parse::non_negative)]
    #[serde(rename = "T")]
    pub t: f64,
    #[arg(long, default_value_t = 0.01, value_parser = parse::positive)]
    pub step: f64,
    #[arg(long, default_value_t = 100_000, value_parser = parse::positive_usize)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct EstimateHRectArgs {
    #[arg(long, value_parser = parse::alpha)]
    pub alpha: f64,
    #[arg(long = "T1", value_parser = parse::non_negative)]
    #[serde(rename = "T1")]
    pub t1: f64,
    #[arg(long = "T2", value_parser = parse::non_negative)]
    #[serde(rename = "T2")]
    pub t2: f64,
    #[arg(long, default_value_t = 0.01, value_parser = parse::positive)]
    pub step: f64,
    #[arg(long, default_value_t = 100_000, value_parser = parse::positive_usize)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct PickandsConstantArgs {
    #[arg(long, value_parser = parse::alpha)]
    pub alpha: f64,
    /// Strictly increasing horizons, comma separated.
    #[arg(long = "T-list", value_delimiter = ',', required = true, value_parser = parse::positive)]
    #[serde(rename = "T_list")]
    pub t_list: Vec<f64>,
    #[arg(long, default_value_t = 0.01, value_parser = parse::positive)]
    pub step: f64,
    #[arg(long, default_value_t = 100_000, value_parser = parse::positive_usize)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct LowerBoundArgs {
    #[arg(long, value_parser = parse::alpha)]
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct VerifyAsymptoticArgs {
    #[arg(long, value_parser = parse::alpha)]
    pub alpha: f64,
    #[arg(long, value_parser = parse::positive)]
    pub p: f64,
    #[arg(long, value_parser = parse::positive)]
    pub u: f64,
    /// Block length in units of u^{-2/α}.
    #[arg(long = "T", value_parser = parse::positive)]
    #[serde(rename = "T")]
    pub t: f64,
    /// Grid step; defaults to u^{-2/α}/20.
    #[arg(long, value_parser = parse::positive)]
    pub step: Option<f64>,
    #[arg(long, default_value_t = 100_000, value_parser = parse::positive_usize)]
    pub n: usize,
    /// Pickands constant for the asymptotic value; known for α ∈ {1, 2}.
    #[arg(long, value_parser = parse::positive)]
    pub h: Option<f64>,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct JointBoundArgs {
    #[arg(long, value_parser = parse::alpha)]
    pub alpha: f64,
    /// Block length in units of u^{-2/α}.
    #[arg(long = "T", value_parser = parse::positive)]
    #[serde(rename = "T")]
    pub t: f64,
    /// Offset of the second block in units of u^{-2/α}; must exceed T.
    #[arg(long, value_parser = parse::positive)]
    pub t0: f64,
    #[arg(long, value_parser = parse::positive)]
    pub u: f64,
    #[arg(long, value_parser = parse::positive)]
    pub step: Option<f64>,
    #[arg(long, default_value_t = 100_000, value_parser = parse::positive_usize)]
    pub n: usize,
    /// H([0,1]²); estimated on a 0.01 grid when absent.
    #[arg(long, value_parser = parse::positive)]
    pub h_square: Option<f64>,
    /// Replications for the H([0,1]²) estimate.
    #[arg(long, default_value_t = 20_000, value_parser = parse::positive_usize)]
    pub h_n: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct CheckInequalitiesArgs {
    #[arg(long, value_parser = parse::alpha)]
    pub alpha: f64,
    /// Horizon of the Borell ensemble.
    #[arg(long, default_value_t = 1.0, value_parser = parse::positive)]
    pub p: f64,
    #[arg(long, default_value_t = 0.01, value_parser = parse::positive)]
    pub step: f64,
    /// Spacing of the ten Borell levels above the mean supremum.
    #[arg(long, default_value_t = 0.3, value_parser = parse::positive)]
    pub level_step: f64,
    /// Level of the ten-point grid comparison.
    #[arg(long, default_value_t = 2.0, value_parser = parse::finite)]
    pub u: f64,
    /// Level of the bivariate comparison.
    #[arg(long, default_value_t = 1.0, value_parser = parse::finite)]
    pub u_pair: f64,
    #[arg(long, default_value_t = 100_000, value_parser = parse::positive_usize)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct BonferroniOracleArgs {
    #[arg(long, default_value_t = 1000, value_parser = parse::positive_usize)]
    pub spaces: usize,
    #[arg(long, default_value_t = 16, value_parser = parse::positive_usize)]
    pub max_atoms: usize,
    #[arg(long, default_value_t = 6, value_parser = parse::positive_usize)]
    pub max_events: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Sample one path and print it as `t,value`.
    Simulate(SimulateArgs),
    /// Estimate H(T) = E exp(sup_[0,T] χ).
    EstimateH(EstimateHArgs),
    /// Estimate H([0,T1]×[0,T2]).
    EstimateHRect(EstimateHRectArgs),
    /// Tabulate H(T)/T over increasing horizons.
    PickandsConstant(PickandsConstantArgs),
    /// Evaluate α / (2^{2+2/α} Γ(1/α)).
    LowerBound(LowerBoundArgs),
    /// Bracket P(sup_[0,p] X > u) over Pickands blocks.
    VerifyAsymptotic(VerifyAsymptoticArgs),
    /// Compare a joint block exceedance with its explicit constant.
    JointBound(JointBoundArgs),
    /// Run the Borell and Slepian checks.
    CheckInequalities(CheckInequalitiesArgs),
    /// Test Bonferroni bracketing on random finite spaces in exact arithmetic.
    BonferroniOracle(BonferroniOracleArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::EstimateH(_) => "estimate-h",
            Command::EstimateHRect(_) => "estimate-h-rect",
            Command::PickandsConstant(_) => "pickands-constant",
            Command::LowerBound(_) => "lower-bound",
            Command::VerifyAsymptotic(_) => "verify-asymptotic",
            Command::JointBound(_) => "joint-bound",
            Command::CheckInequalities(_) => "check-inequalities",
            Command::BonferroniOracle(_) => "bonferroni-oracle",
        }
    }
}

/// Everything that determines the outputs of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub format: OutputFormat,
    pub workers: usize,
    pub chunk_size: usize,
    pub strict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<PathBuf>,
}

impl RunConfig {
    pub fn ledger_path(&self) -> PathBuf {
        self.ledger
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_LEDGER))
    }
}

/// Parses `args` (program name first) into a configuration.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok(RunConfig {
        command: cli.command,
        format: cli.common.format,
        workers: cli.common.workers,
        chunk_size: cli.common.chunk_size,
        strict: cli.common.strict,
        ledger: cli.common.ledger,
    })
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain { .. } | Error::Precondition(_) => EXIT_CONFIG,
        Error::Io(_) | Error::Json(_) => EXIT_IO,
        _ if err.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_NUMERICAL,
    }
}

/// Runs one invocation, writing the report to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_CONFIG,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let started = Instant::now();
    let output = match execute(&config) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let wall_time = started.elapsed().as_secs_f64();
    let printed = match config.format {
        OutputFormat::Csv => out.write_all(output.csv.as_bytes()),
        OutputFormat::Json => writeln!(out, "{}", output.envelope(&config)),
    };
    if let Err(e) = printed {
        let _ = writeln!(err, "error: {e}");
        return EXIT_IO;
    }
    let record = RunRecord::new(&config, &output, wall_time);
    if let Err(e) = append_record(&config.ledger_path(), &record) {
        let _ = writeln!(err, "error: ledger: {e}");
        return EXIT_IO;
    }
    if output.flagged {
        let _ = writeln!(
            err,
            "warning: {}",
            output
                .flag_reason
                .as_deref()
                .unwrap_or("reliability flag raised")
        );
        if config.strict {
            return EXIT_FLAGGED;
        }
    }
    EXIT_OK
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}
