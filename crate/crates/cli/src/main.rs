//! Command line front end: builds representation files, certifies singular
//! value gaps over word balls, runs boundary pairing / hyperconvexity /
//! wedge-compatibility scans, and pretty-prints stored reports.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit codes: 0 success or pass verdict, 1 usage or validation error,
/// 2 fail verdict, 3 inconclusive verdict, 4 size guard exceeded,
/// 5 scan degraded (more than 10% of items skipped).
#[derive(Parser)]
#[command(
    name = "anosov",
    version,
    about = "Singular value gap certification and boundary scans for matrix representations of free and surface groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a representation file.
    Gen(GenArgs),
    /// Certify the singular value gap criterion over a word ball.
    Certify(CertifyArgs),
    /// Scan limit map diagnostics over sampled boundary rays.
    Scan(ScanArgs),
    /// Pretty-print a stored report or representation file.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    construction: GenCommand,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Ping-pong generators for a free group: rotated diagonal expansions.
    Schottky {
        /// Free group rank (>= 2).
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Diagonal expansion factor (>= 2).
        #[arg(long, default_value_t = 4.0)]
        lambda: f64,
        /// Optional angle perturbation seed; omitted means the exact schedule.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Ping-pong generators pushed through the symmetric power into the
    /// target dimension, with the recovered invariant form attached when one
    /// exists.
    Pipeline {
        /// Ping-pong parameters as RANK,LAMBDA.
        #[arg(long, value_parser = parse_rank_lambda, default_value = "2,4")]
        schottky: (usize, f64),
        /// Target dimension of the symmetric power.
        #[arg(long)]
        sym: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Exterior power of an existing representation file.
    Exterior {
        #[arg(long, short)]
        input: PathBuf,
        /// Exterior power degree (1 <= k <= dim/2).
        #[arg(long, short)]
        k: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Reinterpret a real representation file over the complex field.
    Complexify {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
    },
}

fn parse_rank_lambda(s: &str) -> Result<(usize, f64), String> {
    let (rank, lambda) = s
        .split_once(',')
        .ok_or_else(|| "expected RANK,LAMBDA".to_string())?;
    Ok((
        rank.trim().parse().map_err(|e| format!("bad rank: {e}"))?,
        lambda
            .trim()
            .parse()
            .map_err(|e| format!("bad lambda: {e}"))?,
    ))
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long, short)]
    input: PathBuf,
    /// Gap index (1 <= k <= dim/2).
    #[arg(long, short, default_value_t = 1)]
    k: usize,
    /// Word ball radius.
    #[arg(long, short, default_value_t = 6)]
    radius: usize,
    /// Minimal acceptable fitted growth rate.
    #[arg(long, default_value_t = 0.05)]
    mu_min: f64,
    /// Radii below this yield an inconclusive verdict.
    #[arg(long, default_value_t = 4)]
    min_radius: usize,
    /// Lengths below this are excluded from the fit.
    #[arg(long, default_value_t = 2)]
    burn_in: usize,
    /// Sphere size guard.
    #[arg(long, default_value_t = 1_000_000)]
    cap: usize,
    /// Certificate report path.
    #[arg(long, short, default_value = "certificate.json")]
    output: PathBuf,
    /// Per-length statistics table.
    #[arg(long, default_value = "profile.csv")]
    csv: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ScanMode {
    Pairing,
    Hyperconvex,
    Plucker,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: ScanMode,
    /// Number of boundary rays to sample.
    #[arg(long, default_value_t = 20)]
    rays: usize,
    /// Maximal period length of sampled rays.
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    /// Depth budget for the flag approximation.
    #[arg(long, short, default_value_t = 16)]
    depth: usize,
    /// Ray sampling seed.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Flag convergence tolerance; defaults per mode.
    #[arg(long)]
    tol: Option<f64>,
    /// Flag degree for plucker mode.
    #[arg(long, short, default_value_t = 2)]
    k: usize,
    /// Hyperconvexity degrees.
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 1)]
    q: usize,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Report path.
    #[arg(long, short, default_value = "scan.json")]
    output: PathBuf,
    /// Value table path.
    #[arg(long, default_value = "scan.csv")]
    csv: PathBuf,
    /// Plot data path: index,value pairs.
    #[arg(long, default_value = "scan_plot.csv")]
    plot: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, short)]
    input: PathBuf,
}

fn main() -> ExitCode {
    // die quietly when a pager closes the pipe instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => commands::run_gen(args.construction),
        Command::Certify(args) => commands::run_certify(args),
        Command::Scan(args) => commands::run_scan(args),
        Command::Report(args) => commands::run_report(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
