//! Command-line surface for the code-anchoring library. Every command
//! prints (or writes) one self-describing JSON document; exit codes keep
//! scripted pipelines honest: 0 success, 2 usage, 3 unreadable or
//! inconsistent files, 4 degraded construction or rejected device,
//! 5 decoder failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ldpc_anchor::puf::Scheme;

#[derive(Parser)]
#[command(
    name = "ldpc-anchor",
    version,
    about = "Build and analyze finite-geometry LDPC codes anchored on a chosen word",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a base decoding matrix; write alist plus provenance.
    Gen(GenArgs),
    /// Keep the base rows orthogonal to a word and report the result.
    Anchor(AnchorArgs),
    /// Reprint the uncertainty certificate stored in an anchor report.
    Certify(CertifyArgs),
    /// Run the majority bit-flipping decoder on one word.
    Decode(DecodeArgs),
    /// Seeded Monte-Carlo experiments.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Helper-data workflows for noisy secrets.
    #[command(subcommand)]
    Puf(PufCommand),
}

/// Geometries to stack, in the order given within each family
/// (Euclidean parts first, then projective).
#[derive(Args)]
struct GeometryArgs {
    /// Lines of EG(m,2^s); pass as m,s (repeatable).
    #[arg(long, value_name = "M,S", value_parser = parse_pair)]
    eg: Vec<(u32, u32)>,
    /// Lines of PG(m,2^s); pass as m,s (repeatable).
    #[arg(long, value_name = "M,S", value_parser = parse_pair)]
    pg: Vec<(u32, u32)>,
    /// Drop the origin and every line through it (Euclidean parts only).
    #[arg(long)]
    type1: bool,
    /// Largest admissible point count per geometry.
    #[arg(long)]
    ceiling: Option<usize>,
}

/// Where the base matrix comes from: an alist file (with its provenance
/// sidecar when present) or geometry parameters.
#[derive(Args)]
struct SourceArgs {
    /// Base matrix as an alist file.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[command(flatten)]
    geometry: GeometryArgs,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Output alist path; the provenance sidecar lands next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnchorArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Word to anchor, hex, most significant bit first.
    #[arg(long)]
    r: String,
    /// Stop scanning once the code dimension reaches this target.
    #[arg(long)]
    k_target: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Report produced by the anchor command.
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    /// Decoding matrix as an alist file.
    #[arg(long)]
    matrix: PathBuf,
    /// Received word, hex.
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = ldpc_anchor::decode::DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Flip positions failing at least this many checks, instead of a
    /// strict majority.
    #[arg(long)]
    threshold: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SimulateCommand {
    /// Distribution of the kept-row count over uniform words.
    Rowcount(RowcountArgs),
    /// How often the kept rows span enough of the base row space.
    Success(TrialArgs),
    /// Certified bound chain over the same per-trial selections.
    Entropy(TrialArgs),
    /// Enroll, re-extract, reproduce; tally key outcomes.
    Endtoend(EndtoendArgs),
}

#[derive(Args)]
struct RowcountArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the cumulative-distribution table here instead of stdout.
    #[arg(long)]
    cdf_out: Option<PathBuf>,
}

#[derive(Args)]
struct TrialArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 1_000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EndtoendArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// code-offset or codeword-anchor.
    #[arg(long, value_parser = parse_scheme)]
    scheme: Scheme,
    /// Crossover probability of the re-extraction channel.
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long, default_value_t = 1_000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PufCommand {
    /// Create helper data for a response and persist the device record.
    Enroll(EnrollArgs),
    /// Reproduce the enrolled response from a noisy re-extraction.
    Reproduce(ReproduceArgs),
    /// Accept or reject an enrolled device by its certificate.
    Screen(ScreenArgs),
}

#[derive(Args)]
struct EnrollArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// code-offset or codeword-anchor.
    #[arg(long, value_parser = parse_scheme)]
    scheme: Scheme,
    /// Response hex; sampled from the seed when omitted.
    #[arg(long)]
    response: Option<String>,
    /// Stop the codeword-anchor selection at this code dimension.
    #[arg(long)]
    k_target: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Device record written by enroll.
    #[arg(long)]
    record: PathBuf,
    /// Re-extracted response, hex.
    #[arg(long)]
    response: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScreenArgs {
    /// Device record written by enroll.
    #[arg(long)]
    record: PathBuf,
    /// Enrolled response, hex; degenerate responses are rejected.
    #[arg(long)]
    response: String,
    /// Smallest acceptable certified uncertainty, in bits.
    #[arg(long, default_value_t = 128)]
    k_min: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (m, rest) = s
        .split_once(',')
        .ok_or_else(|| format!("expected m,s but got {s:?}"))?;
    let m = m.trim().parse().map_err(|e| format!("bad m: {e}"))?;
    let s = rest.trim().parse().map_err(|e| format!("bad s: {e}"))?;
    Ok((m, s))
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|_| {
        format!("expected code-offset or codeword-anchor, got {s:?}")
    })
}

/// One failure channel per documented exit code.
pub enum Failure {
    Usage(String),
    Format(String),
    Degraded(String),
    Decode(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Format(_) => 3,
            Failure::Degraded(_) => 4,
            Failure::Decode(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Format(m) | Failure::Degraded(m) | Failure::Decode(m) => m,
        }
    }
}

impl From<ldpc_anchor::Error> for Failure {
    fn from(e: ldpc_anchor::Error) -> Failure {
        use ldpc_anchor::Error as E;
        match e {
            E::DecodeFailed { .. } => Failure::Decode(e.to_string()),
            E::BadAlist(_) | E::BadReport(_) | E::Io(_) | E::HelperVariantMismatch { .. } => {
                Failure::Format(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen(args) => commands::gen(&args),
        Command::Anchor(args) => commands::anchor(&args),
        Command::Certify(args) => commands::certify(&args),
        Command::Decode(args) => commands::decode(&args),
        Command::Simulate(SimulateCommand::Rowcount(args)) => commands::simulate_rowcount(&args),
        Command::Simulate(SimulateCommand::Success(args)) => commands::simulate_success(&args),
        Command::Simulate(SimulateCommand::Entropy(args)) => commands::simulate_entropy(&args),
        Command::Simulate(SimulateCommand::Endtoend(args)) => commands::simulate_endtoend(&args),
        Command::Puf(PufCommand::Enroll(args)) => commands::puf_enroll(&args),
        Command::Puf(PufCommand::Reproduce(args)) => commands::puf_reproduce(&args),
        Command::Puf(PufCommand::Screen(args)) => commands::puf_screen(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
