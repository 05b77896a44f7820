use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psl_core::harness::THREADS_ENV;

#[derive(Debug, Parser)]
#[command(name = "pslsearch", version, about = "Search and analyse binary sequences with low peak sidelobe level")]
pub struct Cli {
    /// Output format: plain text, or JSON lines after a versioned header line
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Peak sidelobe level of a hex-encoded sequence
    Psl(SequenceInput),
    /// Encode a +/- sign string as hex
    Encode(SignInput),
    /// Decode hex into a +/- sign string
    Decode(SequenceInput),
    /// Run the hill-climbing search from random or given starts
    Optimize(OptimizeArgs),
    /// Run one experiment per fitness exponent and print a summary table
    Sweep(SweepArgs),
    /// PSL of every cyclic rotation and the best rotation
    RotateScan(RotateScanArgs),
    /// Generate m-sequences, Legendre sequences or random sequences
    #[command(subcommand)]
    Gen(GenCommand),
    /// Optimal PSL by exhaustive enumeration
    Exhaustive(ExhaustiveArgs),
    /// Check every embedded known sequence against its stated PSL
    VerifyTable(VerifyTableArgs),
    /// Best rotation of a structured sequence, then the search seeded with it
    #[command(subcommand)]
    Hybrid(HybridCommand),
}

/// A hex sequence from `--hex`, from `--file`, or from standard input.
///
/// File and stdin text holds the hex digits, optionally followed by the length.
#[derive(Debug, Args)]
pub struct SequenceInput {
    /// Hex-encoded sequence (MSB first, bit 1 is +1)
    #[arg(long, conflicts_with = "file")]
    pub hex: Option<String>,
    /// Sequence length; defaults to four elements per hex digit
    #[arg(long)]
    pub n: Option<usize>,
    /// Read the sequence from this file ("-" for standard input)
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SignInput {
    /// Sequence as '+' and '-' characters
    #[arg(long, conflicts_with = "file")]
    pub signs: Option<String>,
    /// Read the sign string from this file ("-" for standard input)
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AcceptanceArg {
    /// Probes must beat the current sequence; a quake resets it
    Current,
    /// Probes must beat the best fitness seen so far in the run
    OverallBest,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Fitness exponent; defaults by length (≤500: 3, ≤1500: 4, ≤3000: 5, else 6)
    #[arg(long)]
    pub alpha: Option<u32>,
    /// Iteration budget per restart
    #[arg(long, default_value_t = 10_000)]
    pub threshold: u64,
    /// Master seed; generated and printed when omitted
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    /// Worker threads for restarts
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Stop a restart once its PSL is at most this value
    #[arg(long)]
    pub target_psl: Option<u32>,
    /// Stop a restart after this many seconds
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long, value_enum, default_value_t = AcceptanceArg::Current)]
    pub acceptance: AcceptanceArg,
    /// Append the result record to this JSON Lines file
    #[arg(long)]
    pub results: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub n: usize,
    /// Start every restart from this hex sequence instead of a random one
    #[arg(long)]
    pub init_hex: Option<String>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    /// Comma-separated fitness exponents
    #[arg(long, value_delimiter = ',', required = true)]
    pub alphas: Vec<u32>,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 10_000)]
    pub threshold: u64,
    /// Master seed; generated and printed when omitted
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Append every record to this JSON Lines file
    #[arg(long)]
    pub results: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RotateScanArgs {
    #[command(flatten)]
    pub input: SequenceInput,
    /// Write the profile as `rotation,psl` lines to this file
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Split the scan over this many threads
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Maximal-length LFSR sequence
    Mseq(MseqArgs),
    /// Legendre sequence of an odd prime length
    Legendre(LegendreArgs),
    /// Uniformly random sequence
    Random(RandomArgs),
}

#[derive(Debug, Args)]
pub struct MseqArgs {
    /// Feedback polynomial in hex, bit k is the coefficient of x^k
    #[arg(long)]
    pub poly: String,
    /// Initial register state in hex, bit j is output j
    #[arg(long, default_value = "1")]
    pub state: String,
}

#[derive(Debug, Args)]
pub struct LegendreArgs {
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long)]
    pub n: usize,
    /// Seed; generated and printed when omitted
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ExhaustiveArgs {
    #[arg(long)]
    pub n: usize,
    /// Largest length accepted
    #[arg(long, default_value_t = psl_core::harness::DEFAULT_EXHAUSTIVE_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct VerifyTableArgs {
    /// Print one line per entry
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum HybridCommand {
    Mseq {
        #[command(flatten)]
        generator: MseqArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    Legendre {
        #[command(flatten)]
        generator: LegendreArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
}
