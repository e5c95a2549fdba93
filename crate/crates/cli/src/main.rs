//! `charcom`: character tables, circuit complexity and figure pipelines from
//! the command line.

/// `println!` that tolerates a closed stdout (e.g. piped into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{Flags, Params};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{op}: {source}")]
    Core {
        op: &'static str,
        #[source]
        source: charcom::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("{op}: {source}")]
    Io {
        op: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core { source, .. } if !source.is_io() => 1,
            _ => 2,
        }
    }
}

/// Attaches the command name to library errors.
pub trait Context<T> {
    fn during(self, op: &'static str) -> Result<T, CliError>;
}

impl<T> Context<T> for charcom::Result<T> {
    fn during(self, op: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { op, source })
    }
}

#[derive(Debug, Parser)]
#[command(name = "charcom", version, about = "Character complexity of quantum circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order, class count and abelian flag; writes group.json.
    GroupInfo,
    /// Character table and orthogonality residuals; writes char_table.csv
    /// and orthogonality.json.
    CharTable,
    /// Complexity of a class representative or of a circuit; writes
    /// complexity.json.
    Complexity,
    /// Truncated simulation of a circuit; writes truncation.csv,
    /// measurement.csv and decomposition.json.
    Simulate,
    /// Figure pipeline; writes <kind>.csv, <kind>.json and <kind>.svg.
    Experiment {
        #[arg(value_enum)]
        kind: ExperimentKind,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ExperimentKind {
    Hist,
    Heatmap,
    Scaling,
    Cloud,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let params = Params::resolve(cli.flags)?;
    std::fs::create_dir_all(&params.out_dir).map_err(|source| CliError::Io {
        op: format!("creating {}", params.out_dir.display()),
        source,
    })?;
    match cli.command {
        Command::GroupInfo => commands::group_info(&params),
        Command::CharTable => commands::char_table(&params),
        Command::Complexity => commands::complexity(&params),
        Command::Simulate => commands::simulate(&params),
        Command::Experiment { kind } => commands::experiment(&params, kind),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("charcom: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
