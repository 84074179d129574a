//! Command-line front end: synthesis, sweeping, verification and export.
//!
//! Exit codes: 0 pass, 1 check or synthesis failure, 2 invalid input,
//! 3 precision cap exhausted.

mod commands;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{canonical_json, trace_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

/// Environment variable holding the precision cap in bits.
pub const PRECISION_ENV: &str = "CIRCLE_REEB_MAX_PRECISION";

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(msg: impl fmt::Display) -> CliError {
        CliError {
            code: EXIT_INVALID,
            message: msg.to_string(),
        }
    }

    pub fn fail(msg: impl fmt::Display) -> CliError {
        CliError {
            code: EXIT_FAIL,
            message: msg.to_string(),
        }
    }

    pub fn precision(msg: impl fmt::Display) -> CliError {
        CliError {
            code: EXIT_PRECISION,
            message: msg.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Parser)]
#[command(name = "circle-reeb", version, about = "Poincaré–Reeb digraphs of circle-cylinder regions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an arrangement realizing a balanced-tree target.
    Synth(SynthArgs),
    /// Sweep an arrangement and write its Reeb digraph.
    Sweep(SweepArgs),
    /// Verify an arrangement against an instance or a target graph.
    Verify(VerifyArgs),
    /// Write the target digraph of an instance.
    Target(TargetArgs),
    /// Region and transversality checks only.
    Check(CheckArgs),
    /// Convert a graph JSON file to DOT.
    ExportDot(ExportDotArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Instance JSON; replaces the flags below.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub theorem: Option<u8>,
    /// Comma-separated child counts per depth.
    #[arg(long)]
    pub children: Option<String>,
    /// Child counts of the second tree (theorem 2).
    #[arg(long)]
    pub children2: Option<String>,
    /// Comma-separated rational levels.
    #[arg(long, allow_hyphen_values = true)]
    pub levels: Option<String>,
    /// `auto` or a positive rational.
    #[arg(long, default_value = "auto")]
    pub radius: String,
    #[arg(long, default_value = "bounded")]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Output directory for instance.json, arrangement.json and report.json.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub arrangement: PathBuf,
    /// Output directory for graph.json (and graph.dot, trace.csv).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub dot: bool,
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub allow_unbounded: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub arrangement: Option<PathBuf>,
    /// Synthesize the arrangement from the instance instead of reading it.
    #[arg(long)]
    pub resynth: bool,
    /// Compare against this graph instead of the instance's target.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub arrangement: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportDotArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "reeb")]
    pub name: String,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    commands::apply_precision_env()?;
    match &cli.command {
        Command::Synth(a) => commands::synth(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Verify(a) => commands::verify(a),
        Command::Target(a) => commands::target(a),
        Command::Check(a) => commands::check(a),
        Command::ExportDot(a) => commands::export_dot(a),
    }
}
