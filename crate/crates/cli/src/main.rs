//! `jumpact`: simulate paths, estimate the jump activity index from tick
//! files, run Monte Carlo tables and replay runs from their manifests.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "jumpact",
    version,
    about = "Jump activity estimation under irregular sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one path at the random observation times and write it as tick CSV.
    Simulate {
        /// INI configuration; defaults are used for missing keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides `[study] seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Manifest path (default: next to the output, `.manifest.ini`).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Estimate the index from a `time,price` CSV file.
    Estimate {
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        flags: EstimatorFlags,
        /// True index, for the scaled error and standardized statistic.
        #[arg(long)]
        true_beta: Option<f64>,
        /// Also write the report as a CSV header and row.
        #[arg(long)]
        csv_out: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Run a Monte Carlo study and write the table, QQ data and a manifest.
    McTable {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        /// Also write one SVG QQ plot per cell.
        #[arg(long)]
        svg: bool,
        /// Overrides `[study] reps`.
        #[arg(long)]
        reps: Option<usize>,
        /// Overrides `[study] seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; results do not depend on it.
        #[arg(long, env = "JUMPACT_WORKERS")]
        workers: Option<usize>,
    },
    /// Print the limit constants for a stable index and duration law.
    Constants {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Takes the duration law from `[scheme]`.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        phi_rate: Option<f64>,
        #[arg(long)]
        phi_floor: Option<f64>,
        #[arg(long, default_value_t = jumpact::stable::DEFAULT_MC_SIZE)]
        mc_size: usize,
        #[arg(long, default_value_t = jumpact::stable::DEFAULT_MC_SEED)]
        seed: u64,
        /// Also print the limiting variance for this ratio `v/u`.
        #[arg(long)]
        rho: Option<f64>,
    },
    /// Re-run a command from its manifest.
    Replay {
        manifest: PathBuf,
        /// Write outputs here (same file names) instead of the recorded paths.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VarianceArg {
    Data,
    KnownPhi,
}

/// Overrides of `[estimator]`.
#[derive(Args)]
struct EstimatorFlags {
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    u_exponent: Option<f64>,
    #[arg(long)]
    u_scale: Option<f64>,
    #[arg(long)]
    k_exponent: Option<f64>,
    #[arg(long)]
    r_exponent: Option<f64>,
    #[arg(long)]
    debias: bool,
    #[arg(long)]
    mc_size: Option<usize>,
    #[arg(long, value_enum)]
    variance: Option<VarianceArg>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
