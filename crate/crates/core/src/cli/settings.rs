use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;

use super::CliError;
use crate::dynamics::{ExperimentConfig, Projection};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "BOLTZ_THREADS";

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Trial polynomial degree per axis.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Outer Gauss–Hermite points per axis (defaults to N).
    #[arg(long)]
    pub nip: Option<usize>,
    /// Time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Start time.
    #[arg(long)]
    pub t0: Option<f64>,
    /// End time.
    #[arg(long)]
    pub tend: Option<f64>,
    /// Kernel tag: maxwell, hardsphere, vhs:beta=<x>, angular[:beta=..,p=..,c=..].
    #[arg(long)]
    pub kernel: Option<String>,
    /// Worker threads (overrides BOLTZ_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output CSV path; the manifest is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for transform and oracle caches.
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<PathBuf>,
    /// Start projection: weighted or collocation.
    #[arg(long)]
    pub projection: Option<String>,
    /// Config file (JSON object or key=value lines) below the flags in precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const KEYS: [&str; 12] = [
    "N", "nip", "dt", "t0", "tend", "kernel", "threads", "out", "seed", "cache-dir", "projection", "reference",
];

/// Key/value pairs from a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig(BTreeMap<String, String>);

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        if text.trim_start().starts_with('{') {
            let value: serde_json::Map<String, serde_json::Value> =
                serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config file: {e}")))?;
            for (k, v) in value {
                let v = match v {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                map.insert(k, v);
            }
        } else {
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("unknown config key {k:?}")));
        }
        Ok(FileConfig(map))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::parse(&std::fs::read_to_string(path).map_err(crate::Error::from)?)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.0
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("config value for {key} is invalid: {v:?}")))
            })
            .transpose()
    }
}

/// Options that are not part of the experiment itself.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub threads: usize,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub reference: Option<PathBuf>,
}

fn pick<T: std::str::FromStr>(flag: Option<T>, file: &FileConfig, key: &str) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

fn parse_projection(text: &str) -> Result<Projection, CliError> {
    match text {
        "weighted" => Ok(Projection::Weighted),
        "collocation" => Ok(Projection::Collocation),
        other => Err(CliError::Usage(format!("unknown projection {other:?}"))),
    }
}

fn default_threads() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Flags over config file over `defaults`.
pub fn resolve(
    args: &CommonArgs,
    reference: Option<PathBuf>,
    defaults: ExperimentConfig,
) -> Result<(ExperimentConfig, RunOptions), CliError> {
    let file = match &args.config {
        Some(path) => FileConfig::read(path)?,
        None => FileConfig::default(),
    };
    let mut config = defaults;
    if let Some(kernel) = pick(args.kernel.clone(), &file, "kernel")? {
        config.kernel = kernel;
    }
    let n = pick(args.n, &file, "N")?;
    if let Some(n) = n {
        config.n = n;
        config.n_ip = n;
    }
    if let Some(nip) = pick(args.nip, &file, "nip")? {
        config.n_ip = nip;
    }
    if let Some(dt) = pick(args.dt, &file, "dt")? {
        config.dt = dt;
    }
    if let Some(t0) = pick(args.t0, &file, "t0")? {
        config.t0 = t0;
    }
    if let Some(tend) = pick(args.tend, &file, "tend")? {
        config.t_end = tend;
    }
    if let Some(p) = pick(args.projection.clone(), &file, "projection")? {
        config.projection = parse_projection(&p)?;
    }
    let out = pick(args.out.clone(), &file, "out")?;
    config.output = out.clone();
    let threads = match pick(args.threads, &file, "threads")? {
        Some(t) => t,
        None => default_threads()?,
    };
    if threads == 0 {
        return Err(CliError::Usage("thread count must be positive".into()));
    }
    let options = RunOptions {
        threads,
        seed: pick(args.seed, &file, "seed")?.unwrap_or(7),
        cache_dir: pick(args.cache_dir.clone(), &file, "cache-dir")?,
        out,
        reference: match reference {
            Some(r) => Some(r),
            None => file.get("reference")?,
        },
    };
    Ok((config, options))
}
