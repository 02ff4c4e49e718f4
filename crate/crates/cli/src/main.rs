//! `geopack` — batch command-line surface over the storage-geometry library.
//!
//! Exit codes: 0 success; 2 validation error (bad flags, unreadable input,
//! malformed documents); 3 degeneracy error (the exact-geometry layer
//! rejected the data). Every randomized command requires an explicit
//! `--seed`, and every report embeds its full configuration, so a rerun
//! with the same flags reproduces the output byte for byte.

mod codec_cmd;
mod common;
mod errors;
mod experiment_cmd;
mod hier_cmd;
mod pointloc_cmd;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use errors::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "geopack",
    version,
    about = "Slope-pencil codecs, packed hierarchies, and planar point location",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Arithmetic configuration shared by every pipeline.
#[derive(Args, Debug, Clone)]
struct ArithOpts {
    /// Arithmetic backend: "exact" or "p=BITS" correctly-rounded floats.
    #[arg(long, default_value = "exact", value_name = "MODE")]
    mode: String,
    /// Denominator bound for stored rational digits (decimal).
    #[arg(long, default_value = "18446744073709551616", value_name = "N")]
    max_den: String,
}

/// Where the machine-readable document goes (default: stdout).
#[derive(Args, Debug, Clone)]
struct OutOpt {
    /// Write the report/document to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Six-slope pencil codec: encode, decode, collision search.
    #[command(subcommand)]
    Codec(CodecCmd),
    /// Pack eighteen values into one bundle document.
    Pack(PackArgs),
    /// Unpack a bundle document back to eighteen values.
    Unpack(UnpackArgs),
    /// Recursive bundle hierarchy over an array.
    #[command(subcommand)]
    Hier(HierCmd),
    /// Planar point location over a polygonal subdivision.
    #[command(subcommand)]
    Pointloc(PointlocCmd),
    /// Deterministic experiment reports.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand, Debug)]
enum CodecCmd {
    /// Encode six slopes into a pencil record.
    Encode(EncodeArgs),
    /// Decode a pencil record back to six slopes.
    Decode(DecodeArgs),
    /// Randomized search for literal-record collisions.
    Collide(CollideArgs),
}

#[derive(Args, Debug)]
struct EncodeArgs {
    /// Six slopes, comma- or space-separated rationals (e.g. "1,2,3,-1,-2,-3").
    slopes: Option<String>,
    /// File holding the six slopes instead.
    #[arg(long, value_name = "PATH")]
    input: Option<std::path::PathBuf>,
    /// Emit the literal (5-scalar) record instead of the strict one.
    #[arg(long)]
    literal: bool,
    #[command(flatten)]
    arith: ArithOpts,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    /// Encoded record document.
    #[arg(long, value_name = "PATH")]
    input: std::path::PathBuf,
    /// Transversal-slope hypothesis for literal records (rational).
    #[arg(long, value_name = "RAT", default_value = "0")]
    s_hypothesis: String,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Args, Debug)]
struct CollideArgs {
    /// RNG seed (required: the search is randomized).
    #[arg(long)]
    seed: u64,
    /// Number of sampled six-tuples.
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[command(flatten)]
    arith: ArithOpts,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Args, Debug)]
struct PackArgs {
    /// Eighteen values, comma- or space-separated rationals.
    values: Option<String>,
    /// File holding the eighteen values instead.
    #[arg(long, value_name = "PATH")]
    input: Option<std::path::PathBuf>,
    /// Bundle mode: "literal" (17 stored) or "strict" (20 stored).
    #[arg(long, default_value = "strict", value_name = "MODE")]
    pack_mode: String,
    #[command(flatten)]
    arith: ArithOpts,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Args, Debug)]
struct UnpackArgs {
    /// Bundle document.
    #[arg(long, value_name = "PATH")]
    input: std::path::PathBuf,
    /// Transversal-slope hypothesis for literal bundles (rational).
    #[arg(long, value_name = "RAT", default_value = "0")]
    s_hypothesis: String,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Subcommand, Debug)]
enum HierCmd {
    /// Pack an array into a hierarchy file.
    Pack(HierPackArgs),
    /// Fetch one element from a hierarchy file.
    Fetch(HierFetchArgs),
    /// Report level-by-level storage statistics.
    Stats(HierStatsArgs),
}

#[derive(Args, Debug)]
struct HierPackArgs {
    /// Values, comma- or space-separated rationals.
    values: Option<String>,
    /// File holding the values instead.
    #[arg(long, value_name = "PATH")]
    input: Option<std::path::PathBuf>,
    /// Generate N random values instead (requires --seed).
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    /// RNG seed for --n.
    #[arg(long)]
    seed: Option<u64>,
    /// Hierarchy mode: "literal" or "strict".
    #[arg(long, default_value = "strict", value_name = "MODE")]
    pack_mode: String,
    /// Degenerate-group policy: "fail", "perturb", or "raw-carry".
    #[arg(long, default_value = "raw-carry", value_name = "POLICY")]
    policy: String,
    #[command(flatten)]
    arith: ArithOpts,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Args, Debug)]
struct HierFetchArgs {
    /// Hierarchy file (GPAK1).
    #[arg(long, value_name = "PATH")]
    input: std::path::PathBuf,
    /// Element index to fetch.
    #[arg(long)]
    index: usize,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Args, Debug)]
struct HierStatsArgs {
    /// Hierarchy file (GPAK1); alternatively generate with --n/--seed.
    #[arg(long, value_name = "PATH")]
    input: Option<std::path::PathBuf>,
    /// Generate and pack N random values instead (requires --seed).
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    /// RNG seed for --n.
    #[arg(long)]
    seed: Option<u64>,
    /// Hierarchy mode for --n: "literal" or "strict".
    #[arg(long, default_value = "literal", value_name = "MODE")]
    pack_mode: String,
    /// Degenerate-group policy for --n.
    #[arg(long, default_value = "raw-carry", value_name = "POLICY")]
    policy: String,
    #[command(flatten)]
    arith: ArithOpts,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Subcommand, Debug)]
enum PointlocCmd {
    /// Build a locator file from a subdivision document.
    Build(PointlocBuildArgs),
    /// Locate one query point in a locator file.
    Query(PointlocQueryArgs),
    /// Randomized agreement check against the brute-force oracle.
    Verify(PointlocVerifyArgs),
}

#[derive(Args, Debug)]
struct PointlocBuildArgs {
    /// Subdivision document ("vertices", "edges", optional "faces").
    #[arg(long, value_name = "PATH")]
    input: std::path::PathBuf,
    /// Backend: "flat", "packed-strict", or "packed-literal".
    #[arg(long, default_value = "flat", value_name = "BACKEND")]
    backend: String,
    #[command(flatten)]
    arith: ArithOpts,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Args, Debug)]
struct PointlocQueryArgs {
    /// Locator file (GLOC1).
    #[arg(long, value_name = "PATH")]
    input: std::path::PathBuf,
    /// Query x coordinate (rational).
    #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
    x: String,
    /// Query y coordinate (rational).
    #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
    y: String,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Args, Debug)]
struct PointlocVerifyArgs {
    /// Subdivision document to verify against.
    #[arg(long, value_name = "PATH")]
    input: std::path::PathBuf,
    /// Backend under test: "flat", "packed-strict", or "packed-literal".
    #[arg(long, default_value = "flat", value_name = "BACKEND")]
    backend: String,
    /// Number of random queries.
    #[arg(long, default_value_t = 1000)]
    queries: usize,
    /// RNG seed (required: queries are randomized).
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    arith: ArithOpts,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Subcommand, Debug)]
enum ExperimentCmd {
    /// Literal-record collision search report.
    Collision(CollideArgs),
    /// Hierarchy storage growth across n ∈ {18, 324, 1000, 10000}.
    PrecisionGrowth(PrecisionGrowthArgs),
    /// Locator depth/decay table across Delaunay sizes.
    Depth(DepthArgs),
}

#[derive(Args, Debug)]
struct PrecisionGrowthArgs {
    /// RNG seed for the generated arrays.
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    arith: ArithOpts,
    #[command(flatten)]
    out: OutOpt,
}

#[derive(Args, Debug)]
struct DepthArgs {
    /// RNG seed for the generated subdivisions.
    #[arg(long)]
    seed: u64,
    /// Comma-separated Delaunay sizes.
    #[arg(long, default_value = "100,1000,10000", value_name = "LIST")]
    sizes: String,
    #[command(flatten)]
    out: OutOpt,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are successful outputs; everything else is a
            // usage problem → validation exit code
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    std::process::exit(0);
                }
                _ => {
                    eprint!("{e}");
                    std::process::exit(2);
                }
            }
        }
    };
    let result: Result<(), CliError> = match cli.command {
        Command::Codec(CodecCmd::Encode(a)) => codec_cmd::encode(a),
        Command::Codec(CodecCmd::Decode(a)) => codec_cmd::decode(a),
        Command::Codec(CodecCmd::Collide(a)) => codec_cmd::collide(a),
        Command::Pack(a) => codec_cmd::pack(a),
        Command::Unpack(a) => codec_cmd::unpack(a),
        Command::Hier(HierCmd::Pack(a)) => hier_cmd::pack(a),
        Command::Hier(HierCmd::Fetch(a)) => hier_cmd::fetch_cmd(a),
        Command::Hier(HierCmd::Stats(a)) => hier_cmd::stats(a),
        Command::Pointloc(PointlocCmd::Build(a)) => pointloc_cmd::build(a),
        Command::Pointloc(PointlocCmd::Query(a)) => pointloc_cmd::query(a),
        Command::Pointloc(PointlocCmd::Verify(a)) => pointloc_cmd::verify(a),
        Command::Experiment(ExperimentCmd::Collision(a)) => experiment_cmd::collision(a),
        Command::Experiment(ExperimentCmd::PrecisionGrowth(a)) => experiment_cmd::precision_growth(a),
        Command::Experiment(ExperimentCmd::Depth(a)) => experiment_cmd::depth(a),
    };
    match result {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
