//! Command-line driver for the trade toolkit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod analyze;
mod classify;
mod construct;
mod error;
mod io;
mod report;
mod verify;

#[derive(Parser, Debug)]
#[command(name = "trades", version, about = "Classify and analyse extended 1-perfect and Steiner trades")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustive classification of primary extended 1-perfect trades.
    Classify(ClassifyArgs),
    /// Structural reports for the trades in a record file.
    Analyze(AnalyzeArgs),
    /// Checks the trade conditions for every record of a file.
    Verify(VerifyArgs),
    /// Builds trades and designs from smaller objects.
    Construct {
        #[command(subcommand)]
        what: ConstructCommand,
    },
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Word length n (even).
    #[arg(long)]
    pub length: usize,
    /// Only trades whose words all have weight n/2.
    #[arg(long)]
    pub constant_weight: bool,
    /// Comma-separated root-expansion counts at which partial states are merged.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<usize>>,
    /// Word-set file; every word of T0 must belong to it.
    #[arg(long)]
    pub restrict_t0: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, env = "TRADES_WORKERS", default_value_t = 1)]
    pub workers: usize,
    /// Record file for the class representatives; a manifest goes next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Writes the search state after every checkpoint.
    #[arg(long)]
    pub checkpoint_file: Option<PathBuf>,
    /// Continues from a checkpoint file of an earlier run.
    #[arg(long)]
    pub resume: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Trade record file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Dual space size and standard basis.
    #[arg(long)]
    pub dual: bool,
    /// Affine rank of T0 and the increase from T1.
    #[arg(long)]
    pub rank: bool,
    /// Kernel decomposition of both parts.
    #[arg(long)]
    pub kernel: bool,
    /// Girth of the distance graph on T0 ∪ T1.
    #[arg(long)]
    pub girth: bool,
    /// Catalog of Steiner trades derived from centres at this distance.
    #[arg(long, value_name = "K")]
    pub derived: Option<usize>,
    /// Whether T0 lies in a copy of S(5,6,12).
    #[arg(long)]
    pub witt: bool,
    /// Third parts extending the trade to a 3-way trade.
    #[arg(long)]
    pub third_mate: bool,
    /// Automorphism group order, coordinate orbits and word orbits.
    #[arg(long)]
    pub orbits: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Trade record file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Overrides the kind in the records: ext, perf or steiner:k.
    #[arg(long)]
    pub kind: Option<String>,
    /// Also require each trade to be primary.
    #[arg(long)]
    pub primary: bool,
    /// Also check the eigenfunction property.
    #[arg(long)]
    pub eigen: bool,
}

#[derive(Subcommand, Debug)]
pub enum ConstructCommand {
    /// (T0·00 ∪ T1·11, T0·11 ∪ T1·00) for every record.
    Double {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Concatenation of k-way component trades along a parity latin trade.
    Concat {
        /// `m,q`: length and alphabet of the parity latin trade.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        latin: Vec<usize>,
        /// One record file per latin coordinate.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        components: Vec<PathBuf>,
    },
    /// All GF(2) combinations of a generator matrix.
    Span {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The trade (C \ D, D \ C) of two linear codes given by generators.
    Diff {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value = "ext")]
        kind: String,
    },
    /// The 132 blocks of the small Witt design S(5,6,12).
    Witt,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let res = match cli.command {
        Command::Classify(a) => classify::run(&a, &mut out),
        Command::Analyze(a) => analyze::run(&a, &mut out),
        Command::Verify(a) => verify::run(&a, &mut out),
        Command::Construct { what } => construct::run(&what, &mut out),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
