use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use super::manifest::{PhaseTimes, RunManifest};
use super::settings::{resolve, CommonArgs, FileConfig, RunOptions};
use super::CliError;
use crate::bases::TransformSet;
use crate::collision::{CollisionOperator, SpectralDensity};
use crate::dynamics::{
    analytic_moments_maxwell, bkw_eval, max_moment_deviation, rk4_integrate, ErrorLattice, ExperimentConfig,
    InitialCondition, MomentSet, TrajectoryTable,
};
use crate::kernel::CollisionKernel;

pub(crate) fn usage(e: crate::Error) -> CliError {
    match e {
        crate::Error::InvalidArgument(m) | crate::Error::Domain(m) => CliError::Usage(m),
        other => CliError::Lib(other),
    }
}

pub(crate) fn transforms(n: usize, cache_dir: Option<&Path>) -> crate::Result<Arc<TransformSet>> {
    Ok(Arc::new(match cache_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            TransformSet::cached(n, n, dir)?
        }
        None => TransformSet::new(n)?,
    }))
}

fn output_path(options: &RunOptions, default: String) -> PathBuf {
    options
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("results").join(default))
}

/// Collision work and the rest of the run, timed separately.
struct Timer {
    start: Instant,
    build: f64,
    other: f64,
    steps: usize,
}

impl Timer {
    fn times(&self) -> PhaseTimes {
        let total = self.start.elapsed().as_secs_f64();
        let stepping = (total - self.build - self.other).max(0.0);
        PhaseTimes {
            build_transforms: self.build,
            per_step_collision: stepping / self.steps.max(1) as f64,
            total,
        }
    }
}

fn setup(config: &ExperimentConfig, options: &RunOptions) -> Result<(CollisionOperator, Timer), CliError> {
    config.validate().map_err(usage)?;
    let start = Instant::now();
    let kernel = config.collision_kernel().map_err(usage)?;
    let t = transforms(config.n, options.cache_dir.as_deref())?;
    let op = CollisionOperator::new(t, &kernel, config.n_ip)?;
    let build = start.elapsed().as_secs_f64();
    Ok((
        op,
        Timer {
            start,
            build,
            other: 0.0,
            steps: 0,
        },
    ))
}

fn finish(
    command: &str,
    config: &ExperimentConfig,
    options: &RunOptions,
    table: &TrajectoryTable,
    path: &Path,
    timer: &Timer,
) -> Result<(), CliError> {
    table.write(path)?;
    let manifest_path = RunManifest::path_for(path);
    let manifest = RunManifest {
        command: command.into(),
        config: serde_json::to_value(config).expect("config is serializable"),
        version: env!("CARGO_PKG_VERSION").into(),
        threads: options.threads,
        seed: options.seed,
        times: timer.times(),
        outputs: vec![path.to_path_buf(), manifest_path.clone()],
    };
    manifest.write(&manifest_path)?;
    println!("wrote {} and {}", path.display(), manifest_path.display());
    Ok(())
}

/// Summary of a BKW run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BkwSummary {
    pub max_l2: f64,
    pub max_linf: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
}

pub fn cmd_bkw(args: &CommonArgs) -> Result<BkwSummary, CliError> {
    let (config, options) = resolve(args, None, ExperimentConfig::bkw())?;
    if config.kernel != "maxwell" {
        return Err(CliError::Usage("the BKW solution exists only for the maxwell kernel".into()));
    }
    let path = output_path(&options, format!("bkw_N{}_nip{}.csv", config.n, config.n_ip));
    super::with_threads(options.threads, || {
        let (op, mut timer) = setup(&config, &options)?;
        let lattice = ErrorLattice::new(config.n, config.tbar, config.vbar)?;
        let mut table = TrajectoryTable::new(&["err_L2", "err_Linf"]);
        let mut errors = Vec::new();
        let traj = rk4_integrate(&op, config.initial_density()?, config.dt, config.t0, config.t_end, |f, t, step| {
            let clock = Instant::now();
            let norms = lattice.distance(f, &lattice.reference(|v| bkw_eval(t, v))?)?;
            errors.push((norms.l2, norms.linf));
            timer.other += clock.elapsed().as_secs_f64();
            timer.steps = step;
            Ok(())
        })?;
        for (m, (l2, linf)) in traj.moments.iter().zip(&errors) {
            table.push(*m, vec![*l2, *linf])?;
        }
        let first = traj.moments[0];
        let summary = BkwSummary {
            max_l2: errors.iter().fold(0.0f64, |m, e| m.max(e.0)),
            max_linf: errors.iter().fold(0.0f64, |m, e| m.max(e.1)),
            mass_drift: traj.moments.iter().fold(0.0f64, |m, x| m.max((x.rho / first.rho - 1.0).abs())),
            energy_drift: traj
                .moments
                .iter()
                .fold(0.0f64, |m, x| m.max((x.energy / first.energy - 1.0).abs())),
        };
        println!(
            "bkw N={} n_ip={}: max_t e_L2 = {:.6e}, max_t e_Linf = {:.6e}, mass drift {:.2e}, energy drift {:.2e}",
            config.n, config.n_ip, summary.max_l2, summary.max_linf, summary.mass_drift, summary.energy_drift
        );
        finish("bkw", &config, &options, &table, &path, &timer)?;
        Ok(summary)
    })
}

/// Summary of a moments run.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentsSummary {
    pub moments: Vec<MomentSet>,
    /// Largest deviation from the closed forms (constant kernel only).
    pub analytic_error: Option<f64>,
    /// Largest deviation from a reference trajectory, when one was given.
    pub reference_error: Option<f64>,
}

pub fn cmd_moments(args: &CommonArgs, reference: Option<PathBuf>) -> Result<MomentsSummary, CliError> {
    let file = match &args.config {
        Some(p) => FileConfig::read(p)?,
        None => FileConfig::default(),
    };
    let tag = match &args.kernel {
        Some(k) => k.clone(),
        None => file.get("kernel")?.unwrap_or_else(|| "maxwell".to_string()),
    };
    let kernel: CollisionKernel = tag.parse().map_err(usage)?;
    let (mut config, options) = resolve(args, reference, ExperimentConfig::two_maxwellians(&kernel))?;
    config.kernel = kernel.to_string();
    let closed_form = config.kernel == "maxwell" && config.initial == InitialCondition::two_maxwellians();
    let path = output_path(&options, format!("moments_{}_N{}.csv", tag.split(':').next().unwrap_or("kernel"), config.n));
    let reference_table = match &options.reference {
        Some(p) => Some(TrajectoryTable::read(p)?),
        None => None,
    };
    super::with_threads(options.threads, || {
        let (op, mut timer) = setup(&config, &options)?;
        let traj = rk4_integrate(&op, config.initial_density()?, config.dt, config.t0, config.t_end, |_, _, step| {
            timer.steps = step;
            Ok(())
        })?;
        let extra: &[&str] = if closed_form {
            &["err_P11", "err_P22", "err_P33", "err_P12", "err_q1", "err_q2"]
        } else {
            &[]
        };
        let mut table = TrajectoryTable::new(extra);
        let mut analytic_error: Option<f64> = None;
        for m in &traj.moments {
            if closed_form {
                let exact = analytic_moments_maxwell(m.time).flow_entries();
                let diffs: Vec<f64> = m.flow_entries().iter().zip(&exact).map(|(a, b)| a - b).collect();
                let worst = diffs.iter().fold(0.0f64, |w, d| w.max(d.abs()));
                analytic_error = Some(analytic_error.map_or(worst, |w| w.max(worst)));
                table.push(*m, diffs)?;
            } else {
                table.push(*m, Vec::new())?;
            }
        }
        let reference_error = reference_table
            .as_ref()
            .and_then(|r| max_moment_deviation(&traj.moments, &r.moments(), 1e-6));
        print!("moments kernel={} N={} dt={}", config.kernel, config.n, config.dt);
        if let Some(e) = analytic_error {
            print!(": max_t deviation from closed forms = {e:.6e}");
        }
        if let Some(e) = reference_error {
            print!(": max_t deviation from reference = {e:.6e}");
        } else if reference_table.is_some() {
            print!(": reference shares no time levels");
        }
        println!();
        finish("moments", &config, &options, &table, &path, &timer)?;
        Ok(MomentsSummary {
            moments: traj.moments,
            analytic_error,
            reference_error,
        })
    })
}

/// One timed collision application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub threads: usize,
    pub n_ip: usize,
    pub build_seconds: f64,
    pub apply_seconds: f64,
    pub storage_bytes: usize,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Times one collision application of a seeded density.
pub fn time_application(n: usize, n_ip: usize, kernel: &CollisionKernel, seed: u64, repeats: usize) -> crate::Result<BenchRow> {
    let start = Instant::now();
    let op = CollisionOperator::new(Arc::new(TransformSet::new(n)?), kernel, n_ip)?;
    let build_seconds = start.elapsed().as_secs_f64();
    let f = SpectralDensity::perturbed_maxwellian(n, 2.0, [0.0; 3], 0.3, seed)?;
    let mut best = f64::INFINITY;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        std::hint::black_box(op.evaluate(&f)?);
        best = best.min(start.elapsed().as_secs_f64());
    }
    Ok(BenchRow {
        n,
        threads: rayon::current_num_threads(),
        n_ip,
        build_seconds,
        apply_seconds: best,
        storage_bytes: op.storage_bytes(),
    })
}

pub fn cmd_bench(args: &CommonArgs, sizes: &[usize], thread_counts: &[usize], repeats: usize) -> Result<Vec<BenchRow>, CliError> {
    let (config, options) = resolve(args, None, ExperimentConfig::bkw())?;
    let kernel: CollisionKernel = args.kernel.as_deref().unwrap_or("hardsphere").parse().map_err(usage)?;
    let sizes = if sizes.is_empty() { vec![8, 16, 24] } else { sizes.to_vec() };
    let thread_counts = if thread_counts.is_empty() { vec![options.threads] } else { thread_counts.to_vec() };
    if sizes.iter().any(|&n| n < 2) || thread_counts.contains(&0) {
        return Err(CliError::Usage("sizes must be at least 2 and thread counts positive".into()));
    }
    let start = Instant::now();
    let mut rows = Vec::new();
    println!("{:>4} {:>8} {:>5} {:>10} {:>12} {:>9} {:>12}", "N", "threads", "n_ip", "build [s]", "apply [s]", "speedup", "storage [B]");
    for &n in &sizes {
        let n_ip = args.nip.unwrap_or(n);
        let mut base = None;
        for &t in &thread_counts {
            let row = super::with_threads(t, || time_application(n, n_ip, &kernel, options.seed, repeats).map_err(CliError::from))?;
            if t == 1 {
                base = Some(row.apply_seconds);
            }
            let speedup = base.map_or(String::from("-"), |b| format!("{:.2}", b / row.apply_seconds));
            println!(
                "{:>4} {:>8} {:>5} {:>10.4} {:>12.6} {:>9} {:>12}",
                n, t, n_ip, row.build_seconds, row.apply_seconds, speedup, row.storage_bytes
            );
            rows.push(row);
        }
    }
    if sizes.len() >= 2 {
        let first = thread_counts[0];
        let chosen: Vec<&BenchRow> = rows.iter().filter(|r| r.threads == first).collect();
        let x: Vec<f64> = chosen.iter().map(|r| r.n as f64).collect();
        let time: Vec<f64> = chosen.iter().map(|r| r.apply_seconds).collect();
        let storage: Vec<f64> = chosen.iter().map(|r| r.storage_bytes as f64).collect();
        println!(
            "fitted log-log slope ({first} threads): time {:.3}, storage {:.3}",
            loglog_slope(&x, &time),
            loglog_slope(&x, &storage)
        );
    }
    let path = output_path(&options, "bench.csv".into());
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(crate::Error::from)?;
    }
    let mut csv = String::from("N,threads,n_ip,build_s,apply_s,storage_bytes\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{:?},{:?},{}\n",
            r.n, r.threads, r.n_ip, r.build_seconds, r.apply_seconds, r.storage_bytes
        ));
    }
    std::fs::write(&path, csv).map_err(crate::Error::from)?;
    let manifest_path = RunManifest::path_for(&path);
    let manifest = RunManifest {
        command: "bench".into(),
        config: serde_json::json!({
            "kernel": kernel.to_string(),
            "sizes": sizes,
            "thread_counts": thread_counts,
            "repeats": repeats,
            "nip": args.nip,
            "defaults": serde_json::to_value(&config).expect("config is serializable"),
        }),
        version: env!("CARGO_PKG_VERSION").into(),
        threads: options.threads,
        seed: options.seed,
        times: PhaseTimes {
            build_transforms: rows.iter().map(|r| r.build_seconds).sum(),
            per_step_collision: rows.iter().map(|r| r.apply_seconds).sum::<f64>() / rows.len().max(1) as f64,
            total: start.elapsed().as_secs_f64(),
        },
        outputs: vec![path.clone(), manifest_path.clone()],
    };
    manifest.write(&manifest_path)?;
    println!("wrote {} and {}", path.display(), manifest_path.display());
    Ok(rows)
}
