mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{digest, RunReport};

#[derive(Parser)]
#[command(name = "gmx", version, about = "Graphings, machines, entropy and algebraic lower-bound certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized oracles.
    #[arg(long, global = true, default_value_t = 0xB10B)]
    seed: u64,
    /// Step or enumeration budget.
    #[arg(long, global = true, default_value_t = 100_000)]
    budget: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Sram,
    Pram,
    Adt,
    Act,
    Graphing,
}

#[derive(Args, Clone)]
pub struct Source {
    /// Input file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Input kind; inferred from the extension when absent.
    #[arg(long, value_enum)]
    kind: Option<Kind>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a program or tree and print its normal form.
    Parse(Source),
    /// Compile a program or tree to a graphing.
    Compile(Source),
    /// Run the interpreter and the compiled graphing side by side.
    Simulate {
        #[command(flatten)]
        src: Source,
        /// Comma-separated rational inputs.
        #[arg(long = "input", id = "values")]
        input: String,
    },
    /// Admissible sequences, entropies, cells and co-tree statistics.
    Analyze {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value = "symbolic")]
        oracle: String,
    },
    /// Component-count bounds against exact oracle counts.
    Bounds {
        #[command(flatten)]
        src: BoundsSource,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Polynomial systems along edge paths.
    Extract {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Comma-separated edge ids; all paths of length at most k otherwise.
        #[arg(long)]
        path: Option<String>,
    },
    /// Real-mate certificate for a program using euclidean division.
    Certify {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Number of inputs read by the program.
        #[arg(long, default_value_t = 2)]
        inputs: usize,
    },
    /// Parametric maxflow and fan geometry.
    #[command(subcommand)]
    Fan(FanCommand),
}

#[derive(Args, Clone)]
pub struct BoundsSource {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Built-in family: `intervals:N` or `kth-bit:M:K`.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Subcommand)]
pub enum FanCommand {
    /// Exact breakpoints of a parametric maxflow network.
    Profile {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "edmonds-karp")]
        solver: String,
    },
    /// Whether surfaces separate a fan on the integer points of K.
    Separate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        surfaces: PathBuf,
        #[arg(long, default_value = "1")]
        mu: String,
        #[arg(long = "mu-xy", default_value = "1")]
        mu_xy: String,
    },
    /// Sample points of a fan and their spacing check.
    Sample {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        ds: usize,
    },
    /// Extrema of the second derivative of a polynomial.
    Volatility {
        /// Comma-separated coefficients, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Interval `lo,hi`.
        #[arg(long = "box", default_value = "-1,1", allow_hyphen_values = true)]
        domain: String,
        /// Cross-check against dense sampling up to this many points.
        #[arg(long, default_value_t = 0)]
        resolution: usize,
    },
    /// Silhouette, intersection and dividing-plane systems.
    Collins {
        #[arg(long)]
        surfaces: PathBuf,
        #[arg(long, default_value = "1")]
        mu: String,
        #[arg(long = "mu-xy", default_value = "1")]
        mu_xy: String,
    },
    /// Stated certificate sizes, with measured counts for a PRAM.
    Certify {
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        inputs: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("GMX_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let start = Instant::now();
    let result = commands::run(&cli.command, &cli.common);
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.common.format {
        Format::Json => {
            let inputs = outcome.inputs.iter().map(Vec::as_slice).collect::<Vec<_>>();
            let report = RunReport::new(
                outcome.name,
                digest(&inputs),
                cli.common.seed,
                outcome.outputs,
                start.elapsed().as_millis() as u64,
            );
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        Format::Csv => match outcome.csv {
            Some(t) => t,
            None => {
                eprintln!("error: `{}` has no csv form", outcome.name);
                return ExitCode::from(2);
            }
        },
        Format::Dot => match outcome.dot {
            Some(t) => t,
            None => {
                eprintln!("error: `{}` has no dot form", outcome.name);
                return ExitCode::from(2);
            }
        },
    };
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
        }
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
