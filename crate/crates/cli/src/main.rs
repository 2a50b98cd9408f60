//! `keydist` — command-line toolkit for secret-key distillability of Pauli
//! and generalized-Pauli channels under two-way advantage distillation.
//!
//! Subcommands: `analyze` a channel file, solve `critical` error rates,
//! `sweep` a protocol across error rates to CSV, and `simulate` the
//! distillation step by seeded Monte Carlo.
//!
//! Output is machine-first: one line of compact JSON (or CSV for sweeps)
//! with every float at nine significant digits; `--pretty` switches to a
//! human-readable summary. Every command is deterministic given its
//! arguments — repeated runs are byte-identical. Exit codes: 0 success,
//! 2 usage or validation error, 1 internal error.

mod analyze;
mod channel;
mod critical;
mod error;
mod json;
mod simulate;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::critical::{ModeArg, ProtocolArg};
use crate::error::{usage, CliError};
use crate::simulate::VariantArg;

#[derive(Parser)]
#[command(
    name = "keydist",
    version,
    about = "Secret-key distillability toolkit for Pauli channels under two-way advantage distillation"
)]
struct Cli {
    /// Print a human-readable summary instead of machine-first JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a channel file: verdict, margin, key rates, attack summary.
    Analyze {
        /// Path to the channel description file (JSON).
        channel_file: PathBuf,
        /// Also report the canonical coefficient ordering (qubit channels).
        #[arg(long)]
        canonicalize: bool,
        /// Block sizes for the key-rate table (comma-separated).
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
        n_list: Vec<u32>,
        /// Cap for the minimal-block-size search and the attack scan.
        #[arg(long, default_value_t = 64)]
        n_max: u32,
    },
    /// Solve a protocol's critical error rate by bisection.
    Critical {
        /// Protocol family.
        #[arg(long)]
        protocol: ProtocolArg,
        /// Alphabet dimension (two-bases / d-plus-1-bases only).
        #[arg(long)]
        d: Option<usize>,
        /// Reconciliation mode.
        #[arg(long)]
        mode: ModeArg,
    },
    /// Tabulate margin and minimal block size across error rates to CSV.
    Sweep {
        /// Protocol family.
        #[arg(long)]
        protocol: ProtocolArg,
        /// Alphabet dimension (two-bases / d-plus-1-bases only).
        #[arg(long)]
        d: Option<usize>,
        /// First error rate (inclusive).
        #[arg(long)]
        from: f64,
        /// Last error rate (inclusive); must exceed --from.
        #[arg(long)]
        to: f64,
        /// Number of grid points (at least 2).
        #[arg(long)]
        steps: u32,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Cap for the minimal-block-size column.
        #[arg(long, default_value_t = 64)]
        n_max: u32,
    },
    /// Monte Carlo simulation of one distillation variant.
    Simulate {
        /// Path to the channel description file (JSON).
        channel_file: PathBuf,
        /// Block size N.
        #[arg(long)]
        n: u32,
        /// Number of blocks to simulate.
        #[arg(long)]
        trials: u64,
        /// Distillation variant.
        #[arg(long, value_enum, default_value_t = VariantArg::Cad1)]
        variant: VariantArg,
        /// Master seed; the full output is a deterministic function of it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Applies `KEYDIST_THREADS` (the only environment variable the tool reads)
/// to the global thread pool. Results never depend on the thread count —
/// only wall-clock time does.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("KEYDIST_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&k| k >= 1)
        .ok_or_else(|| usage(format!("KEYDIST_THREADS must be a positive integer, found `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(error::internal)
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Analyze {
            channel_file,
            canonicalize,
            n_list,
            n_max,
        } => analyze::run(&channel_file, canonicalize, &n_list, n_max, cli.pretty),
        Command::Critical { protocol, d, mode } => critical::run(protocol, d, mode, cli.pretty),
        Command::Sweep {
            protocol,
            d,
            from,
            to,
            steps,
            out,
            n_max,
        } => sweep::run(protocol, d, from, to, steps, &out, n_max, cli.pretty),
        Command::Simulate {
            channel_file,
            n,
            trials,
            variant,
            seed,
        } => simulate::run(&channel_file, n, trials, variant, seed, cli.pretty),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
        }
    }
}
