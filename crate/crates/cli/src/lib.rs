//! Library side of the `skewreduce` binary: argument definitions, command
//! implementations and the property checks shared with the acceptance suite.

pub mod bench;
pub mod checks;
pub mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skewreduce::{FieldContext, MulStrategy};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] skewreduce::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    /// A command ran but its outcome did not meet the requested bar.
    #[error("{0}")]
    Unmet(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Csv(_) | CliError::Unmet(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "skewreduce",
    version,
    about = "Skew polynomial row reduction and interleaved Gabidulin decoding"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode, corrupt and decode random messages.
    Roundtrip(RoundtripArgs),
    /// Reduce a matrix file to weak Popov form.
    Reduce(ReduceArgs),
    /// Time the reducers or the decoder over a range of sizes.
    Bench(BenchArgs),
    /// Decode a received word from an instance file.
    Decode(DecodeArgs),
    /// Run the randomized property checks.
    Check(CheckArgs),
    /// Write a random matrix or decoding instance file.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Size of the base field (a prime power).
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    /// Extension degree.
    #[arg(long, default_value_t = 24)]
    pub m: u32,
}

impl FieldArgs {
    pub fn context(&self) -> CliResult<FieldContext> {
        let (p, u) = split_prime_power(self.q)
            .ok_or_else(|| CliError::Usage(format!("q = {} is not a prime power", self.q)))?;
        Ok(FieldContext::new(p, u, self.m, None)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct RoundtripArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = 24)]
    pub n: usize,
    /// Message length of every interleaved codeword.
    #[arg(long, default_value_t = 12)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    /// Rank of the error.
    #[arg(long, default_value_t = 6)]
    pub tau: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, env = "SKEWREDUCE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Exit with status 1 if the success rate falls below this.
    #[arg(long, default_value_t = 1.0)]
    pub min_rate: f64,
    /// Worker threads; trial results are reported in index order.
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
    #[arg(long, value_enum, default_value_t = Strategy::Naive)]
    pub mul: Strategy,
    /// Include every trial in the report.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Naive,
    Karatsuba,
}

impl From<Strategy> for MulStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Naive => MulStrategy::Naive,
            Strategy::Karatsuba => MulStrategy::Karatsuba,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Dc,
    Iterated,
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Target::Auto);
        }
        s.parse()
            .map(Target::Fixed)
            .map_err(|_| format!("expected an integer or 'auto', got '{s}'"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ReduceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Degree drop to aim for; `auto` uses the orthogonality defect and
    /// continues until weak Popov form.
    #[arg(long, default_value = "auto")]
    pub t: Target,
    #[arg(long, value_enum, default_value_t = Algorithm::Dc)]
    pub algo: Algorithm,
    #[arg(long, value_enum, default_value_t = Strategy::Naive)]
    pub mul: Strategy,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Reduce,
    Decode,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Suite::Reduce)]
    pub suite: Suite,
    /// Ascending list of code lengths.
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    #[arg(long, env = "SKEWREDUCE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Reducers to time (reduce suite): dc, dc-karatsuba, iterated, naive.
    #[arg(long, value_delimiter = ',', default_value = "dc,naive")]
    pub algos: Vec<String>,
    /// Also write the records as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DecodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Strategy::Naive)]
    pub mul: Strategy,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Random cases per property.
    #[arg(long, default_value_t = 50)]
    pub cases: usize,
    #[arg(long, env = "SKEWREDUCE_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(subcommand)]
    pub kind: SampleKind,
}

#[derive(Debug, Clone, Subcommand)]
pub enum SampleKind {
    /// Random square matrix.
    Matrix {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, env = "SKEWREDUCE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Received word of a random interleaved code with a rank error.
    Instance {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 6)]
        tau: usize,
        #[arg(long, env = "SKEWREDUCE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Key-equation matrix of a random instance.
    KeyMatrix {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, default_value_t = 6)]
        tau: usize,
        #[arg(long, env = "SKEWREDUCE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `q = p^u` with `p` prime.
pub fn split_prime_power(q: u64) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut u = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        u += 1;
    }
    (rest == 1).then_some((u32::try_from(p).ok()?, u))
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Roundtrip(a) => commands::roundtrip(&a),
        Command::Reduce(a) => commands::reduce(&a),
        Command::Bench(a) => bench::command(&a),
        Command::Decode(a) => commands::decode(&a),
        Command::Check(a) => checks::command(&a),
        Command::Sample(a) => commands::sample(&a),
    }
}
