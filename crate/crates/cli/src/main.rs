//! `sqkd`: batch driver for the GHZ-like SQKD simulator.
//!
//! Exit status is 0 on success, 1 on a usage or configuration error and 2
//! when a session is aborted because the eavesdropper was detected.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ghz_sqkd::adversary::{AttackKind, PhaseScope};
use ghz_sqkd::protocol::Phase;

#[derive(Debug, Parser)]
#[command(name = "sqkd", version, about = "Semiquantum key distribution with GHZ-like states")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed; every random choice is derived from it.
    #[arg(long, global = true, env = "SQKD_SEED", default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one full session and report the keys.
    Run(RunArgs),
    /// Monte Carlo detection rates next to the closed forms.
    Detect(DetectArgs),
    /// Qubit-efficiency table.
    Efficiency(EfficiencyArgs),
    /// Exact error and leakage analysis of an entangle-measure attack.
    AnalyzeEm(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PhaseArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

impl PhaseArg {
    fn scope(self) -> PhaseScope {
        match self {
            PhaseArg::One => PhaseScope::Phase1,
            PhaseArg::Two => PhaseScope::Phase2,
            PhaseArg::Both => PhaseScope::Both,
        }
    }

    fn phases(self) -> Vec<Phase> {
        match self {
            PhaseArg::One => vec![Phase::One],
            PhaseArg::Two => vec![Phase::Two],
            PhaseArg::Both => vec![Phase::One, Phase::Two],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AttackArg {
    None,
    MeasureResend,
    InterceptResend,
    DoubleCnot,
    EntangleMeasure,
}

impl From<AttackArg> for AttackKind {
    fn from(a: AttackArg) -> Self {
        match a {
            AttackArg::None => AttackKind::None,
            AttackArg::MeasureResend => AttackKind::MeasureResend,
            AttackArg::InterceptResend => AttackKind::InterceptResend,
            AttackArg::DoubleCnot => AttackKind::DoubleCnot,
            AttackArg::EntangleMeasure => AttackKind::EntangleMeasure,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct SizeArgs {
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    delta: usize,
    #[arg(long, default_value_t = 8)]
    nu: usize,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    size: SizeArgs,
    #[arg(long, value_enum, default_value_t = AttackArg::None)]
    attack: AttackArg,
    /// Phases the eavesdropper attacks.
    #[arg(long, value_enum, default_value_t = PhaseArg::Both)]
    phase: PhaseArg,
    /// Unitary file for `--attack entangle-measure`.
    #[arg(long)]
    em_file: Option<PathBuf>,
    /// Also write the per-round transcript as CSV.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    size: SizeArgs,
    /// Attacks to tabulate (comma separated); defaults to every attack with a
    /// closed form.
    #[arg(long, value_enum, value_delimiter = ',')]
    attack: Vec<AttackArg>,
    #[arg(long, value_enum, default_value_t = PhaseArg::Both)]
    phase: PhaseArg,
    #[arg(long, default_value_t = 40_000)]
    trials: usize,
    #[arg(long)]
    em_file: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct EfficiencyArgs {
    /// One row per value (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "64")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    delta: usize,
    #[arg(long, default_value_t = 8)]
    nu: usize,
}

#[derive(Clone, Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    em_file: PathBuf,
    #[arg(long, value_enum, default_value_t = PhaseArg::Both)]
    phase: PhaseArg,
    /// Error level below which the probe must be uninformative.
    #[arg(long, default_value_t = ghz_sqkd::adversary::ZERO_ERROR_TOL)]
    error_tol: f64,
}

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    Detected,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let opts = output::Options {
        format: cli.format,
        out: cli.out,
    };
    let result = match cli.command {
        Command::Run(a) => commands::run(&a, cli.seed, &opts),
        Command::Detect(a) => commands::detect(&a, cli.seed, &opts),
        Command::Efficiency(a) => commands::efficiency(&a, &opts),
        Command::AnalyzeEm(a) => commands::analyze_em(&a, &opts),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Detected) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
