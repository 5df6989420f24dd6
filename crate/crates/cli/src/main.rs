//! Command-line front end. Every subcommand parses its inputs, calls one
//! library routine and serializes the result.

mod input;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unitdist::qlinalg::Rational;

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "unitdist",
    version = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)"),
    about = "Unit and distinct distance experiments in normed spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for float-mode distance comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Count with exact rational arithmetic (needs exact points and a polytope norm).
    #[arg(long, global = true)]
    pub exact: bool,
    /// Write the primary output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a point set with many unit distances.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Count unit distances or distinct distances.
    Count {
        #[command(subcommand)]
        what: Count,
    },
    /// Exact checks on direction vectors and point sets.
    Audit {
        #[command(subcommand)]
        what: Audit,
    },
    /// Split vectors into d independent classes plus at most m leftovers.
    Partition {
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
    },
    /// Graph colorings.
    Color {
        #[command(subcommand)]
        what: Color,
    },
    /// Approximate a strictly convex norm by a polytope with small facets.
    Approx {
        #[arg(long)]
        norm: PathBuf,
        #[arg(long)]
        mu: f64,
    },
    /// Offset hyperplane families and generic polytope sampling.
    Generic {
        #[command(subcommand)]
        what: Generic,
    },
    /// Hausdorff distance between two unit balls.
    Hausdorff {
        #[arg(long)]
        norm: PathBuf,
        #[arg(long)]
        other: PathBuf,
        /// Boundary samples when one ball is not a polytope.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
    },
    /// Standalone SVG of a planar point set with its unit-distance edges.
    Plot {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        norm: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long)]
    pub norm: PathBuf,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Subset sums of k random unit vectors.
    Hypercube {
        #[command(flatten)]
        common: ConstructArgs,
        #[arg(long)]
        k: u32,
    },
    /// k-fold Minkowski sum of a unit triangle {0, x, y}.
    Trianglepower {
        #[command(flatten)]
        common: ConstructArgs,
        #[arg(long)]
        k: u32,
    },
    /// n points from translated triangle powers.
    Base3 {
        #[command(flatten)]
        common: ConstructArgs,
        #[arg(long)]
        n: u64,
    },
    /// Chains plus pairs with a promised bipartite unit-distance count.
    Bipartite {
        #[command(flatten)]
        common: ConstructArgs,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum Count {
    /// Unit-distance graph summary with the ceiling check.
    Unit {
        #[arg(long)]
        norm: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Distance spectrum.
    Distinct {
        #[arg(long)]
        norm: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exhaustive,
    Partition,
}

#[derive(Subcommand, Debug)]
pub enum Audit {
    /// Look for a subset I whose span holds more than d|I| + m vectors.
    Span {
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// `partition` has no size limit.
        #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
        method: Method,
    },
    /// Certify the ½·n·log₂ n edge bound for a forest-per-direction graph.
    Forest {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long)]
        edges: PathBuf,
    },
    /// Count the distinct directions spanned by a point set.
    Ungar {
        #[arg(long)]
        points: PathBuf,
    },
    /// Compare both sides of the entropy inequality for sizes n1 ≥ n2 ≥ ...
    Entropy {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
    },
    /// Greedy independent subset of large total weight.
    Greedy {
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_rational, required = true)]
        weights: Vec<Rational>,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, value_parser = parse_rational)]
        max_weight: Rational,
    },
}

#[derive(Subcommand, Debug)]
pub enum Color {
    /// Color points so that none at odd-integer distance share a color.
    Odd {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        norm: PathBuf,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Generic {
    /// All planes of one dependency scheme over a polytope's normals.
    Family {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        norm: PathBuf,
    },
    /// Perturb a polytope's offsets off the planes of the given schemes.
    Sample {
        #[arg(long)]
        norm: PathBuf,
        /// One scheme or a list of schemes.
        #[arg(long)]
        schemes: Option<PathBuf>,
        #[arg(long, value_parser = parse_rational, default_value = "1/100")]
        eps: Rational,
        /// Also certify every scheme whose entries have this height or less.
        #[arg(long)]
        height: Option<u64>,
        #[arg(long, default_value_t = 2)]
        max_l: usize,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
