//! `qot`: transport costs, qubit formulas, fixtures and monotonicity campaigns.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical failure,
//! 3 property violation.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "qot", version, about = "Optimal transport between quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transport cost between two states given as JSON files.
    Transport(TransportArgs),
    /// Semi-analytic qubit cost against the SDP solver.
    Qubit {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        r: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
    },
    /// Metric derivative G(r, v).
    MetricG {
        #[arg(long)]
        r: f64,
        #[arg(long, allow_negative_numbers = true)]
        v1: f64,
        #[arg(long, allow_negative_numbers = true)]
        v2: f64,
    },
    /// CSV of h(r, v2) = G(r, (1, v2)) - g11(r) - g22(r) v2^2.
    Riemann {
        #[arg(long)]
        r: f64,
        /// `lo:hi:count` or a comma-separated list of v2 values.
        #[arg(long, default_value = "-3:3:61", allow_hyphen_values = true)]
        grid: String,
    },
    /// Qutrit pair whose line-geometry cost increases under a unitary.
    Counterexample,
    /// Random scan of dual positivity under extremal qubit channels.
    LemmaF {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Monotonicity campaign writing records.csv and summary.json.
    Campaign(CampaignArgs),
}

#[derive(Args, Debug)]
struct TransportArgs {
    #[arg(long)]
    state_a: PathBuf,
    #[arg(long)]
    state_b: PathBuf,
    /// Classical distance matrix JSON.
    #[arg(long, conflicts_with = "projector")]
    cost: Option<PathBuf>,
    /// Projector cost (default when no cost file is given).
    #[arg(long)]
    projector: bool,
    /// Use the squared cost and report its square root as well.
    #[arg(long)]
    squared: bool,
    /// Write the full solution (coupling and dual pair) as JSON.
    #[arg(long)]
    coupling_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CampaignArgs {
    #[arg(long)]
    n: usize,
    /// choi-rank-k, extremal or mixed-unitary.
    #[arg(long)]
    family: String,
    #[arg(long)]
    rank_k: Option<usize>,
    /// Unitaries per mixed-unitary channel (default 3).
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    state_rank: Option<usize>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code_for(&e) as u8)
        }
    }
}
