use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qsd::commands::{self, OutputFormat, Selection};

/// Bounds, constructive measurements and optimality certificates for
/// minimum-error discrimination of quantum states.
///
/// Set QSD_TOL to override the certificate tolerance (default 1e-7).
#[derive(Parser)]
#[command(name = "qsd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Every lower and upper bound for an ensemble file.
    Bounds {
        file: PathBuf,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Check the Holevo optimality conditions for a measurement.
    Certify { ensemble: PathBuf, povm: PathBuf },
    /// Build the measurement M_j (0-based j) or all of them.
    Povm {
        ensemble: PathBuf,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        j: Option<usize>,
        #[arg(long)]
        all: bool,
        /// Directory for povm_j<j>.json files; without it JSON goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the built-in three-state example and self-check it.
    Example,
    /// Run a random sweep described by a JSON config.
    Sweep { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr();
    let result = match cli.command {
        Command::Bounds { file, out, format } => {
            let format = match format {
                Format::Table => OutputFormat::Table,
                Format::Json => OutputFormat::Json,
            };
            commands::bounds(&file, out.as_deref(), format, &mut stdout)
        }
        Command::Certify { ensemble, povm } => commands::certify(&ensemble, &povm, &mut stdout),
        Command::Povm {
            ensemble,
            j,
            all: _,
            out,
        } => {
            let selection = j.map_or(Selection::All, Selection::One);
            commands::povm(
                &ensemble,
                selection,
                out.as_deref(),
                &mut stdout,
                &mut stderr,
            )
        }
        Command::Example => commands::example(&mut stdout),
        Command::Sweep { config } => commands::sweep(&config, &mut stdout),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qsd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
