//! Command-line front end for the positivity criteria and census campaigns.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use posfourier::experiments::{GridPlacement, Sampler};
use posfourier::numeric::RGrid;
use serde_json::Value;

use config::{Command, RunConfig};

/// Environment variable that may set the worker thread count.
const THREADS_ENV: &str = "POSFOURIER_THREADS";

#[derive(Parser, Debug)]
#[command(name = "posfourier", version, about = "Detect negativity of Fourier transforms without computing them")]
struct Cli {
    /// Replay a run from a RunConfig or a previous summary.json.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores, or $POSFOURIER_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the checklist on one function.
    Analyze(Opts),
    /// Deterministic three-component grid census.
    Grid3(Opts),
    /// Random five-component census in 1D with ten associates.
    Random1d(Opts),
    /// Random five-component census in 2D (and its 1D counterpart), maximum at the origin.
    Random2d(Opts),
    /// The worked example: transform, first moment, cosh margin and Toeplitz curves.
    Fig1(Opts),
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Dimension, 1 or 2.
    #[arg(long)]
    dim: Option<u8>,
    /// Basis mixing coefficients, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<f64>>,
    /// Polynomial coefficients in r², comma separated (instead of --coeffs).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    poly: Option<Vec<f64>>,
    /// Gaussian width a for --poly.
    #[arg(long)]
    a: Option<f64>,
    /// Criteria to run (analyze), e.g. maximality,toeplitz(4),cosh.
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<String>>,
    /// Toeplitz orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<usize>>,
    /// Convolution widths, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of φ-negative functions to collect.
    #[arg(long)]
    n: Option<usize>,
    /// Upper limit on random draws.
    #[arg(long)]
    max_draws: Option<usize>,
    #[arg(long, value_parser = parse_sampler)]
    sampler: Option<Sampler>,
    #[arg(long, value_parser = parse_placement)]
    placement: Option<GridPlacement>,
    /// End of the Toeplitz r-scan.
    #[arg(long, allow_hyphen_values = true)]
    rmax: Option<f64>,
    /// Step (and start) of the Toeplitz r-scan.
    #[arg(long, allow_hyphen_values = true)]
    rstep: Option<f64>,
    /// End of the imaginary-axis scan.
    #[arg(long, allow_hyphen_values = true)]
    imax: Option<f64>,
    /// Step of the imaginary-axis scan.
    #[arg(long, allow_hyphen_values = true)]
    istep: Option<f64>,
}

fn parse_sampler(s: &str) -> Result<Sampler, String> {
    match s {
        "uniform_sphere" => Ok(Sampler::UniformSphere),
        "hyper_angles" => Ok(Sampler::HyperAngles),
        _ => Err(format!("unknown sampler {s:?} (uniform_sphere, hyper_angles)")),
    }
}

fn parse_placement(s: &str) -> Result<GridPlacement, String> {
    match s {
        "cell_centred" => Ok(GridPlacement::CellCentred),
        "vertex" => Ok(GridPlacement::Vertex),
        _ => Err(format!("unknown placement {s:?} (cell_centred, vertex)")),
    }
}

fn build_config(command: Command, o: Opts) -> RunConfig {
    let mut c = RunConfig::defaults(command);
    if let Some(d) = o.dim {
        c.dim = d;
    }
    c.coeffs = o.coeffs;
    c.poly = o.poly;
    if let Some(a) = o.a {
        c.a = a;
    }
    if let Some(v) = o.criteria {
        c.criteria = v;
    }
    if let Some(v) = o.orders {
        c.orders = v;
    }
    if let Some(v) = o.b {
        c.b = v;
    }
    if let Some(v) = o.seed {
        c.seed = v;
    }
    if let Some(v) = o.n {
        c.n = v;
    }
    if let Some(v) = o.max_draws {
        c.max_draws = v;
    }
    if let Some(v) = o.sampler {
        c.sampler = v;
    }
    if let Some(v) = o.placement {
        c.placement = v;
    }
    if o.rmax.is_some() || o.rstep.is_some() {
        let step = o.rstep.unwrap_or(c.toeplitz_grid.step);
        c.toeplitz_grid = RGrid { start: step, stop: o.rmax.unwrap_or(c.toeplitz_grid.stop), step };
    }
    if o.imax.is_some() || o.istep.is_some() {
        c.imaginary_grid = RGrid {
            start: 0.0,
            stop: o.imax.unwrap_or(c.imaginary_grid.stop),
            step: o.istep.unwrap_or(c.imaginary_grid.step),
        };
    }
    c
}

fn load_config(path: &PathBuf) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let inner = value.get("config").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = match (&cli.config, cli.command) {
        (Some(path), None) => match load_config(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        (Some(_), Some(_)) => {
            eprintln!("error: --config replays a run; do not combine it with a command");
            return ExitCode::from(2);
        }
        (None, None) => {
            eprintln!("error: a command or --config is required (see --help)");
            return ExitCode::from(2);
        }
        (None, Some(cmd)) => match cmd {
            Cmd::Analyze(o) => build_config(Command::Analyze, o),
            Cmd::Grid3(o) => build_config(Command::Grid3, o),
            Cmd::Random1d(o) => build_config(Command::Random1d, o),
            Cmd::Random2d(o) => build_config(Command::Random2d, o),
            Cmd::Fig1(o) => build_config(Command::Fig1, o),
        },
    };
    if let Some(out) = cli.out {
        config.out = out;
    }
    if let Some(t) = cli.threads {
        config.threads = Some(t);
    }
    let threads = match config.threads {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => match v.parse::<usize>() {
                Ok(t) if t > 0 => Some(t),
                _ => {
                    eprintln!("error: {THREADS_ENV} must be a positive integer, got {v:?}");
                    return ExitCode::from(2);
                }
            },
            Err(_) => None,
        },
    };
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(3);
        }
    }
    match run::run(&config) {
        Ok(outcome) => {
            println!("{}", outcome.message);
            println!("wrote {}", config.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() || matches!(e, posfourier::Error::Output(_)) {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
