use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ksbg_core::GroupTag;

#[derive(Debug, Parser)]
#[command(name = "ksbg", version, about = "Verify K(s)*(BG) presentations for G38-G41")]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    G38,
    G39,
    G40,
    G41,
    All,
}

impl GroupArg {
    pub fn tags(self) -> Vec<GroupTag> {
        match self {
            GroupArg::G38 => vec![GroupTag::G38],
            GroupArg::G39 => vec![GroupTag::G39],
            GroupArg::G40 => vec![GroupTag::G40],
            GroupArg::G41 => vec![GroupTag::G41],
            GroupArg::All => GroupTag::ALL.to_vec(),
        }
    }
}

/// Where the presentation comes from.
#[derive(Debug, Args)]
pub struct Source {
    /// Group tag, or `all` where several groups make sense.
    #[arg(long, value_enum, required_unless_present = "input")]
    pub group: Option<GroupArg>,

    /// Height of the Morava K-theory.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12), required_unless_present = "input")]
    pub s: Option<u32>,

    /// Read the presentation from a file written by `presentation --dump` instead.
    #[arg(long, conflicts_with_all = ["group", "s"])]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Budget {
    /// Abort a Gröbner computation once the basis grows beyond this size.
    #[arg(long)]
    pub max_basis: Option<usize>,

    /// Abort a Gröbner computation once this many S-pairs are pending.
    #[arg(long)]
    pub max_pairs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every check and print a summary table.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Also write the reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Comma-separated phases to skip: restriction, relations, nilsolve, homogeneity, census, fgl.
        #[arg(long, value_delimiter = ',')]
        skip: Vec<String>,
        /// Directory for cached Gröbner bases.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Print the quotient dimension.
    Dim {
        #[command(flatten)]
        source: Source,
        /// Specialize c = 0 first.
        #[arg(long)]
        restrict_c0: bool,
        /// Largest staircase degree to enumerate (default: derived from the basis).
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Compute the reduced Gröbner basis.
    Gb {
        #[command(flatten)]
        source: Source,
        /// Write the basis in cache format instead of printing it.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Monomial order, e.g. `degrevlex`, `degrevlex(T,x1,y1,x2,y2,a,b,c)` or `elim(x1,y1)`.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Print the normal form of a polynomial.
    Nf {
        #[command(flatten)]
        source: Source,
        /// Polynomial in the presentation's variables, e.g. "a^2*c + a*c^2".
        #[arg(long)]
        poly: String,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Check the rank bookkeeping for heights 1..=s-max.
    Census {
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..=4096))]
        s_max: u32,
        /// Also write the rows as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the Honda formal group law and its 2-series mod 2.
    Fgl {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=8))]
        height: u32,
        /// Total-degree truncation (default 2^(height+1)).
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=64))]
        truncate: Option<u32>,
    },
    /// Print or dump the named relations.
    Presentation {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        restrict_c0: bool,
        /// Write the presentation to a file instead of printing it.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}
