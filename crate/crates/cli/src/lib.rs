//! `temporal-bell`: sweeps, verifications and protocol simulations for
//! temporal Bell inequalities.
//!
//! Exit codes: 0 success, 1 a checked equality or inequality failed,
//! 2 usage error, 3 capacity exceeded.

mod commands;
mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use temporal_bell::quantum::{BlochState, Direction, Vec3};

pub use commands::SWEEP_MAX_N;
pub use output::{Format, SCHEMA};

use commands::{CliError, Outcome, Timing};
use output::write_records;

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "TEMPORAL_BELL_THREADS";

pub const EXIT_OK: u8 = 0;
pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "temporal-bell",
    version,
    about = "Temporal Bell inequalities: classical bounds, quantum protocol, correlators"
)]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads [env: TEMPORAL_BELL_THREADS; default: available cores].
    #[arg(long, global = true)]
    threads: Option<NonZeroUsize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Default Monte-Carlo sample count.
    #[arg(long, global = true, default_value_t = 10_000)]
    mc_samples: u64,
    /// Report elapsed_ms as 0, making output reproducible byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduced-strategy classical maximum, bound, quantum fidelity and
    /// violation ratio for each n in a range.
    BoundSweep {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Brute force over every general strategy, compared with the reduced
    /// maximum and the bound.
    Verify {
        #[arg(long)]
        n: usize,
        /// Permit the n = 4 scan (2·256^4 machines, about half a core-minute).
        #[arg(long)]
        allow_long: bool,
        /// Checkpoint file to save progress to and resume from.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Monte-Carlo run of the quantum protocol and the best classical
    /// strategy on the same promise inputs.
    Protocol {
        #[arg(long)]
        n: usize,
        /// Samples (defaults to --mc-samples; 0 for exact values only).
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Sequential-measurement correlator by chain rule and closed form.
    Correlators {
        /// Initial Bloch vector `x,y,z` with |s| <= 1.
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        s: Vec3,
        /// Measurement directions `x1,y1,z1;x2,y2,z2;...`.
        #[arg(long, value_parser = parse_dirs, allow_hyphen_values = true)]
        dirs: DirList,
        /// Rescale directions to unit length instead of rejecting them.
        #[arg(long)]
        normalize: bool,
    },
    /// Maximize the two-time CHSH and three-time expressions.
    Chsh,
}

#[derive(Clone, Debug)]
struct DirList(Vec<Vec3>);

fn parse_vec3(text: &str) -> Result<Vec3, String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok([x, y, z]),
        _ => Err(format!("expected three finite components, got {text:?}")),
    }
}

fn parse_dirs(text: &str) -> Result<DirList, String> {
    text.split(';').map(parse_vec3).collect::<Result<_, _>>().map(DirList)
}

fn threads(flag: Option<NonZeroUsize>, env: Option<&str>) -> Result<usize, CliError> {
    if let Some(t) = flag {
        return Ok(t.get());
    }
    match env {
        Some(v) => v
            .trim()
            .parse::<NonZeroUsize>()
            .map(NonZeroUsize::get)
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        None => Ok(std::thread::available_parallelism().map_or(1, NonZeroUsize::get)),
    }
}

fn run_command(cli: &Cli) -> Result<Outcome, CliError> {
    let timing = Timing(!cli.no_timing);
    match &cli.command {
        Command::BoundSweep { n_min, n_max } => commands::bound_sweep(*n_min, *n_max, timing),
        Command::Verify {
            n,
            allow_long,
            checkpoint,
        } => commands::verify(*n, *allow_long, checkpoint.as_deref(), timing),
        Command::Protocol { n, samples } => commands::protocol(*n, samples.unwrap_or(cli.mc_samples), cli.seed),
        Command::Correlators { s, dirs, normalize } => {
            let s = BlochState::new(*s).map_err(|e| CliError::Usage(e.to_string()))?;
            let dirs = dirs
                .0
                .iter()
                .map(|&d| {
                    if *normalize {
                        Direction::normalized(d)
                    } else {
                        Direction::new(d)
                    }
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            commands::correlators(&s, &dirs)
        }
        Command::Chsh => commands::chsh(),
    }
}

fn emit(cli: &Cli, outcome: &Outcome, stdout: &mut dyn Write) -> io::Result<()> {
    let result = match &cli.out {
        Some(path) => write_records(BufWriter::new(File::create(path)?), cli.format, &outcome.records),
        None => write_records(stdout, cli.format, &outcome.records),
    };
    result.map_err(io::Error::other)
}

/// Runs one invocation: parses `args` (program name first), computes on a
/// pool of the requested size, writes the report and returns the exit code.
/// `env_threads` is the value of [`THREADS_ENV`], if set.
pub fn run<I, T>(args: I, env_threads: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = threads(cli.threads, env_threads).and_then(|t| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        pool.install(|| run_command(&cli))
    });
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome, stdout) {
                let _ = writeln!(stderr, "error: writing report: {e}");
                return EXIT_ASSERTION;
            }
            for f in &outcome.failures {
                let _ = writeln!(stderr, "check failed: {f}");
            }
            if outcome.capacity_exceeded {
                EXIT_CAPACITY
            } else if !outcome.failures.is_empty() {
                EXIT_ASSERTION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let (code, msg) = match e {
                CliError::Usage(m) => (EXIT_USAGE, m),
                CliError::Capacity(m) => (EXIT_CAPACITY, m),
                CliError::Runtime(m) => (EXIT_ASSERTION, m),
            };
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

#[cfg(test)]
mod tests;
