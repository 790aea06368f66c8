mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zakframe::{HermiteWindow, Precision, RationalDensity, ZakParameter};

/// Zak transforms and Gabor frame bounds for Hermite windows.
#[derive(Debug, Parser)]
#[command(name = "zakframe", version)]
struct Cli {
    /// `key = value` file with defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a Hermite window at a point.
    Eval(EvalArgs),
    /// Evaluate the Zak transform of a window.
    Zak(ZakArgs),
    /// Sweep frame-bound estimates along the hyperbola ab = p/q.
    Scan(ScanArgs),
    /// h2 along ab = 1/2 for b in [1/8, 4].
    Fig2(FigArgs),
    /// h4 along ab = 1/2 and h5 along ab = 1/3.
    Fig3(FigArgs),
    /// Verify catalog identities; one JSON line per case.
    Verify(VerifyArgs),
    /// Certify the obstruction points that apply to a window.
    Obstructions(ObstructionArgs),
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// `n` or `n0:c0,n1:c1,...`
    #[arg(long)]
    window: HermiteWindow,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, default_value = "53", value_parser = parse_precision)]
    precision: Precision,
}

#[derive(Debug, Args)]
struct ZakArgs {
    #[arg(long)]
    window: HermiteWindow,
    /// Dilation, e.g. `sqrt(2)`, `3^(1/4)` or a decimal.
    #[arg(long)]
    lambda: ZakParameter,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
    #[arg(long, default_value = "53", value_parser = parse_precision)]
    precision: Precision,
    /// Truncation tolerance; defaults to a small multiple of the rounding level.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = 51)]
    nx: usize,
    #[arg(long, default_value_t = 51)]
    ngamma: usize,
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
    /// Do not add registered probe values of b and witness points.
    #[arg(long)]
    no_probes: bool,
    /// Extra grid point `x,gamma`, repeatable.
    #[arg(long = "probe", value_name = "X,GAMMA")]
    probes: Vec<String>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    window: HermiteWindow,
    #[arg(long)]
    density: RationalDensity,
    #[arg(long)]
    b_min: f64,
    #[arg(long)]
    b_max: f64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Additional exact values of b, repeatable.
    #[arg(long = "b", value_name = "B")]
    extra_b: Vec<ZakParameter>,
    #[command(flatten)]
    grid: GridArgs,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FigArgs {
    /// Directory for the CSV files and gnuplot scripts.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Identity ids (`I1` … `I7`) or `all`.
    #[arg(default_value = "all")]
    cases: Vec<String>,
    #[arg(long, default_value = "212", value_parser = parse_precision)]
    precision: Precision,
    /// Defaults to 1e-30, 1e-25 or 1e-12 by precision.
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated values of m.
    #[arg(long, default_value = "0,1,2", value_delimiter = ',')]
    m: Vec<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 10)]
    class_windows: usize,
}

#[derive(Debug, Args)]
struct ObstructionArgs {
    #[arg(long)]
    window: HermiteWindow,
    #[arg(long, default_value = "106", value_parser = parse_precision)]
    precision: Precision,
    #[arg(long, default_value_t = 1e-25)]
    tol: f64,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    let bits: u32 = s.parse().map_err(|_| format!("invalid precision `{s}`"))?;
    Precision::from_bits(bits).map_err(|e| e.to_string())
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    /// A verification or certification did not pass; already reported.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("ZAKFRAME_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("ZAKFRAME_THREADS must be a number, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run() -> Result<(), CliError> {
    let args = config::merged_args(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            std::process::exit(code);
        }
    };
    configure_threads()?;
    match cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Zak(a) => commands::zak(a),
        Command::Scan(a) => commands::scan(a),
        Command::Fig2(a) => commands::fig2(a),
        Command::Fig3(a) => commands::fig3(a),
        Command::Verify(a) => commands::verify(a),
        Command::Obstructions(a) => commands::obstructions(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zakframe: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
