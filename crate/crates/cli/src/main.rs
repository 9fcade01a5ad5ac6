//! `cspace`: build, inspect and audit consistency spaces from the shell.
//!
//! Exit status is 0 on success, 1 when the input is well formed but the
//! answer is a failure (invalid space, refused cap, unsatisfiable formula),
//! and 2 when the invocation itself is wrong (bad flag, unknown label).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cspace::connectives::ZMode;

#[derive(Parser, Debug)]
#[command(name = "cspace", version, about = "Finite consistency spaces: build, query, audit")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Write output to FILE instead of stdout.
    #[arg(short = 'o', long = "output", global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Machine-readable JSON output with sorted keys.
    #[arg(long, global = true)]
    pub json: bool,
    /// Range of z in the negation conditions.
    #[arg(long, global = true, value_enum, default_value_t = ZModeArg::Subsets)]
    pub z_mode: ZModeArg,
    /// Seed for random spaces and campaigns.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest universe for operations that walk every subset.
    #[arg(long, global = true, env = "CSPACE_MAX_POINTS", default_value_t = 20)]
    pub max_points: usize,
    /// Load space files even when they violate the axioms.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZModeArg {
    Elements,
    Subsets,
}

impl From<ZModeArg> for ZMode {
    fn from(m: ZModeArg) -> Self {
        match m {
            ZModeArg::Elements => ZMode::Elements,
            ZModeArg::Subsets => ZMode::Subsets,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a space and write it as a space file.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Check a space file against the axioms.
    Validate { file: PathBuf },
    /// Partition subsets into equivalence classes.
    Classes {
        file: PathBuf,
        /// Only subsets with at most this many points.
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Search the points for negations of a set.
    Negate {
        file: PathBuf,
        /// Comma-separated point labels.
        #[arg(long, value_name = "LABELS", allow_hyphen_values = true)]
        set: String,
    },
    /// Decide whether one set implies another.
    Implies {
        file: PathBuf,
        #[arg(long, value_name = "LABELS", allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, value_name = "LABELS", allow_hyphen_values = true)]
        rhs: String,
    },
    /// The join of two points.
    Join {
        file: PathBuf,
        #[arg(long, value_name = "LABEL", allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_name = "LABEL", allow_hyphen_values = true)]
        y: String,
    },
    /// The meet of two sets.
    Meet {
        file: PathBuf,
        #[arg(long, value_name = "LABELS", allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, value_name = "LABELS", allow_hyphen_values = true)]
        rhs: String,
    },
    /// List the minimal inconsistent sets.
    MinimalInconsistent {
        file: PathBuf,
        /// Beyond the cap, search as many size layers as the cap affords.
        #[arg(long)]
        partial: bool,
    },
    /// Decide whether the space is a Boolean consistency space.
    DetectBoolean { file: PathBuf },
    /// Audit the propositions on a space file, or run the default campaign.
    Audit {
        /// Space file; omit with --campaign.
        file: Option<PathBuf>,
        /// Comma-separated proposition ids (default: all).
        #[arg(long, value_name = "IDS")]
        props: Option<String>,
        /// Audit the built-in corpus instead of a file.
        #[arg(long, conflicts_with = "file")]
        campaign: bool,
        /// Number of random spaces in the campaign corpus.
        #[arg(long, default_value_t = 50, requires = "campaign")]
        random_spaces: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum BuildKind {
    /// Literals of n variables.
    Literal {
        #[arg(long)]
        vars: usize,
    },
    /// Nonzero elements of the free Boolean algebra on n variables.
    Boolean {
        #[arg(long)]
        vars: usize,
    },
    /// One point per formula in a formula list file.
    Formulas { file: PathBuf },
    /// A seeded random space (seed from --seed).
    Random {
        #[arg(long)]
        points: usize,
        #[arg(long)]
        maximal: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprint!("cspace: {}", e.message);
            if !e.message.ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(e.code)
        }
    }
}
