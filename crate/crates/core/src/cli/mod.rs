//! The `boltz` command line: experiment runners, benchmarks and checks.

mod commands;
mod manifest;
mod settings;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use commands::{cmd_bench, cmd_bkw, cmd_moments, loglog_slope, time_application, BenchRow, BkwSummary, MomentsSummary};
pub use manifest::{PhaseTimes, RunManifest};
pub use settings::{resolve, CommonArgs, FileConfig, RunOptions, THREADS_ENV};
pub use verify::{run_checks, Check};

use crate::kernel::CollisionKernel;

/// Failures of a command, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0} invariant check(s) failed")]
    Verify(usize),
    #[error(transparent)]
    Lib(#[from] crate::Error),
}

impl CliError {
    /// 1 usage, 2 numerical failure, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        use crate::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Verify(_) => 2,
            CliError::Lib(e) => match e {
                E::InvalidArgument(_) | E::Domain(_) | E::DimensionMismatch { .. } => 1,
                E::NonFinite(_) | E::Numerical { .. } => 2,
                E::Io(_) | E::Cache(_) => 3,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "boltz", version, about = "Spectral solver for the homogeneous Boltzmann equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the BKW profile and report errors against the exact solution.
    Bkw {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Two-Maxwellian relaxation with moment trajectories.
    Moments {
        #[command(flatten)]
        common: CommonArgs,
        /// Trajectory CSV to compare against.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Time single collision applications and fit the scaling.
    Bench {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated trial degrees.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Comma-separated worker counts.
        #[arg(long = "thread-counts", value_delimiter = ',')]
        thread_counts: Vec<usize>,
        /// Timed repetitions per configuration (the fastest is kept).
        #[arg(long, default_value_t = 1)]
        repeats: usize,
    },
    /// Run the invariant checks and the oracle comparison.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
}

pub(crate) fn with_threads<T>(threads: usize, f: impl FnOnce() -> Result<T, CliError> + Send) -> Result<T, CliError>
where
    T: Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))?;
    pool.install(f)
}

fn cmd_verify(common: &CommonArgs) -> Result<(), CliError> {
    let (_, options) = resolve(common, None, crate::dynamics::ExperimentConfig::bkw())?;
    let kernel: CollisionKernel = common
        .kernel
        .as_deref()
        .unwrap_or("maxwell")
        .parse()
        .map_err(commands::usage)?;
    let checks = with_threads(options.threads, || {
        run_checks(&kernel, options.seed, options.cache_dir.as_deref()).map_err(CliError::from)
    })?;
    let mut failed = 0;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed > 0 {
        Err(CliError::Verify(failed))
    } else {
        Ok(())
    }
}

/// Run a parsed command.
pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bkw { common } => cmd_bkw(&common).map(|_| ()),
        Command::Moments { common, reference } => cmd_moments(&common, reference).map(|_| ()),
        Command::Bench {
            common,
            sizes,
            thread_counts,
            repeats,
        } => cmd_bench(&common, &sizes, &thread_counts, repeats).map(|_| ()),
        Command::Verify { common } => cmd_verify(&common),
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
