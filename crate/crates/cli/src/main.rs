//! `psts`: command-line front end for the triple-system toolkit.
//!
//! Every command prints a plain `key=value` report on stdout (or to
//! `--report`). Exit codes: 0 yes / success, 1 proved no, 2 unknown or
//! budget exhausted, 3 usage or input error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Failure;

#[derive(Debug, Parser)]
#[command(name = "psts", version, about = "Partial Steiner triple systems: solvers, colourings, reduction gadgets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every searching command.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed; every random stream is derived from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Node or iteration budget (defaults: PSTS_EXACT_BUDGET / PSTS_CLIMB_BUDGET, else built in).
    #[arg(long)]
    pub budget: Option<u64>,
    /// Worker threads for the exact solver.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Named {
    Petersen,
    K4,
    K33,
    Prism,
    Moebius,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a triple system, graph or colouring file.
    Verify {
        file: PathBuf,
        /// Graph the colouring belongs to (for `ecol` files).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Also require the file to be a complete system containing this one.
        #[arg(long)]
        contains: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Write the leave of a triple system as a graph.
    Leave {
        psts: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether a system embeds in Steiner triple systems of the listed orders.
    Embed {
        #[arg(long)]
        psts: PathBuf,
        /// Comma-separated admissible orders.
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
        /// Directory for `embedding-<v>.psts` witnesses.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Decompose a graph into triangles.
    Decompose {
        graph: PathBuf,
        /// Points no triple may lie inside, e.g. `0..6` or `1,4,9`. Repeatable.
        #[arg(long)]
        hole: Vec<String>,
        /// Complete search (default).
        #[arg(long, conflicts_with = "climb")]
        exact: bool,
        /// Hill climbing; never answers "no" except on divisibility.
        #[arg(long)]
        climb: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Compute the chromatic index, or decide colourability with `--colors`.
    ChromaticIndex {
        graph: PathBuf,
        #[arg(long)]
        colors: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Build a background for a cubic graph.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short = 'u', long = "u")]
        u: u64,
        #[arg(short = 'v', long = "v")]
        v: u64,
        /// Run below the orders where the construction is guaranteed.
        #[arg(long)]
        best_effort: bool,
        /// Output prefix: writes `<out>.psts` and `<out>.meta`.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Complete a background to a Steiner triple system of order v from a 3-edge-colouring.
    Certify {
        #[command(flatten)]
        background: BackgroundFiles,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Read a 3-edge-colouring back off an order-v embedding of a background.
    Extract {
        #[command(flatten)]
        background: BackgroundFiles,
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Build the leave L1 ∪ L2 ∪ L3 of the counterexample family.
    Family {
        #[arg(long)]
        w: u32,
        /// Order; defaults to the smallest valid one.
        #[arg(long)]
        u: Option<u32>,
        /// Output prefix: writes `<out>.graph`, `<out>.ecol` and `<out>.meta`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Emit and check the counterexample for `w`.
    Counterexample {
        #[arg(long)]
        w: u32,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the small-embedding conjecture's conditions for a leave.
    CheckConjecture {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        w: u32,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Find a partial triple system whose leave is the given graph.
    RealizeLeave {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Write a named graph, optionally with a 3-edge-colouring from a Hamilton cycle.
    Generate {
        #[arg(value_enum)]
        name: Named,
        /// Size parameter for prisms and Möbius ladders.
        #[arg(long, default_value_t = 5)]
        k: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        hamiltonian_coloring: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Quick end-to-end checks on small instances.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BackgroundFiles {
    /// The background system.
    #[arg(long)]
    pub background: PathBuf,
    /// Its metadata; defaults to the background path with extension `.meta`.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
