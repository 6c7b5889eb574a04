//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero on any
//! failure.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use boltz_spectral::bases::{hier_dim, TransformSet};
use boltz_spectral::cli::{self, loglog_slope, time_application, BkwSummary, CommonArgs};
use boltz_spectral::collision::{invariant_residuals, CollisionOperator, SpectralDensity};
use boltz_spectral::dynamics::{
    analytic_moments_maxwell, max_moment_deviation, rk4_integrate, ExperimentConfig, MomentSet,
};
use boltz_spectral::kernel::CollisionKernel;
use boltz_spectral::oracle::{build_oracle_refined, OracleConfig};
use rand::rngs::ChaCha8Rng;
use rand::{RngExt, SeedableRng};

type Outcome = boltz_spectral::Result<(bool, String)>;

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", items.join(", "))
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("boltz-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

fn maxwellian_annihilation() -> Outcome {
    let mut worst = 0.0f64;
    for n in [4, 8] {
        let t = Arc::new(TransformSet::new(n)?);
        for kernel in [CollisionKernel::maxwell(), CollisionKernel::hard_spheres()] {
            let op = CollisionOperator::new(t.clone(), &kernel, n)?;
            let f = SpectralDensity::maxwellian(n, 2.0, [0.0; 3], 1.0)?;
            worst = worst.max(max_abs(&op.evaluate(&f)?) / max_abs(f.coeffs()));
        }
    }
    Ok((worst <= 1e-10, format!("max |Q(M)|/|M| = {worst:.2e} (tol 1e-10)")))
}

fn discrete_conservation() -> Outcome {
    let n = 8;
    let t = Arc::new(TransformSet::new(n)?);
    let mut worst = 0.0f64;
    for kernel in [CollisionKernel::maxwell(), CollisionKernel::hard_spheres()] {
        let op = CollisionOperator::new(t.clone(), &kernel, 8)?;
        for seed in 0..20 {
            let f = SpectralDensity::perturbed_maxwellian(n, 1.8, [0.3, -0.4, 0.2], 0.3, seed)?;
            let r = invariant_residuals(&op.evaluate(&f)?, &t)?;
            worst = r.iter().fold(worst, |w, x| w.max(*x));
        }
    }
    Ok((worst <= 1e-10, format!("20 densities x 2 kernels, worst relative moment {worst:.2e} (tol 1e-10)")))
}

fn oracle_equivalence() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, kernel, base_tol) in [(2, CollisionKernel::maxwell(), 1e-8f64), (3, CollisionKernel::hard_spheres(), 1e-7)] {
        let oracle = build_oracle_refined(n, &kernel, OracleConfig::exact(n), 1e-9, 1)?;
        let tol = base_tol.max(oracle.tolerance());
        let op = CollisionOperator::new(Arc::new(TransformSet::with_degree(n, 6 * n)?), &kernel, (3 * n + 2) / 2)?;
        let mut worst = 0.0f64;
        for seed in 0..5 {
            let f = SpectralDensity::perturbed_maxwellian(n, 1.7, [0.3, -0.2, 0.1], 0.5, 100 + seed)?;
            let slow = oracle.apply(&f)?;
            worst = worst.max(max_diff(&op.evaluate(&f)?, &slow) / max_abs(&slow));
        }
        ok &= worst <= tol;
        detail.push(format!("N={n} {kernel}: {worst:.2e} (tol {tol:.0e})"));
    }
    Ok((ok, detail.join(", ")))
}

fn bkw(n: usize, nip: usize) -> Result<BkwSummary, cli::CliError> {
    let args = CommonArgs {
        n: Some(n),
        nip: Some(nip),
        dt: Some(0.1),
        t0: Some(5.5),
        tend: Some(8.5),
        threads: Some(1),
        out: Some(scratch().join(format!("bkw_{n}_{nip}.csv"))),
        ..Default::default()
    };
    cli::cmd_bkw(&args)
}

fn bkw_convergence(runs: &mut Vec<(usize, usize, BkwSummary)>) -> Outcome {
    for n in [8, 12, 16] {
        let s = bkw(n, n).map_err(|e| boltz_spectral::Error::InvalidArgument(e.to_string()))?;
        runs.push((n, n, s));
    }
    let l2: Vec<f64> = runs.iter().map(|r| r.2.max_l2).collect();
    let linf: Vec<f64> = runs.iter().map(|r| r.2.max_linf).collect();
    let ok = l2[0] > l2[1] && l2[1] > l2[2] && linf[0] > linf[1] && linf[1] > linf[2]
        && l2[2] <= 0.2 * l2[0]
        && linf[2] <= 0.2 * linf[0];
    Ok((
        ok,
        format!("max_t L2 {}, Linf {} for N = 8, 12, 16 (need strict decrease and N=16 <= 0.2 N=8)", list(&l2), list(&linf)),
    ))
}

fn maxwell_moments() -> Outcome {
    let kernel = CollisionKernel::maxwell();
    let config = ExperimentConfig::two_maxwellians(&kernel);
    assert_eq!((config.n, config.dt, config.t0, config.t_end), (8, 0.1, 0.0, 12.0));
    let op = CollisionOperator::new(Arc::new(TransformSet::new(config.n)?), &kernel, config.n_ip)?;
    let traj = rk4_integrate(&op, config.initial_density()?, config.dt, config.t0, config.t_end, |_, _, _| Ok(()))?;
    let worst = traj
        .moments
        .iter()
        .map(|m| m.max_flow_deviation(&analytic_moments_maxwell(m.time)))
        .fold(0.0f64, f64::max);
    Ok((worst <= 5e-4, format!("N=8 dt=0.1 t in [0,12]: max deviation {worst:.3e} (tol 5e-4)")))
}

fn reduced_quadrature(full: &BkwSummary) -> Outcome {
    let run = |nip| bkw(16, nip).map_err(|e| boltz_spectral::Error::InvalidArgument(e.to_string()));
    let three_quarters = run(12)?;
    let half = run(8)?;
    let ok = three_quarters.max_l2 <= 3.0 * full.max_l2
        && three_quarters.max_linf <= 3.0 * full.max_linf
        && half.max_l2 > three_quarters.max_l2
        && half.max_linf > three_quarters.max_linf;
    Ok((
        ok,
        format!(
            "N=16 max_t L2/Linf: n_ip=16 {:.3e}/{:.3e}, n_ip=12 {:.3e}/{:.3e}, n_ip=8 {:.3e}/{:.3e}",
            full.max_l2, full.max_linf, three_quarters.max_l2, three_quarters.max_linf, half.max_l2, half.max_linf
        ),
    ))
}

fn complexity_scaling() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
    let kernel = CollisionKernel::hard_spheres();
    let sizes = [8usize, 16, 24];
    // Best of k; small sizes get more repeats since their times are noise-dominated.
    let repeats = [20usize, 5, 2];
    let times = pool.install(|| {
        sizes
            .iter()
            .zip(repeats)
            .map(|(&n, r)| time_application(n, n, &kernel, 1, r).map(|b| b.apply_seconds))
            .collect::<boltz_spectral::Result<Vec<f64>>>()
    })?;
    let x: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let slope = loglog_slope(&x, &times);
    Ok((
        (5.5..=8.0).contains(&slope),
        format!("single-thread times {} s for N = 8, 16, 24: slope {slope:.3} (range [5.5, 8.0])", list(&times)),
    ))
}

fn memory_scaling() -> Outcome {
    let sizes = [8usize, 16, 32];
    let mut bytes = Vec::new();
    for &n in &sizes {
        let op = CollisionOperator::new(Arc::new(TransformSet::new(n)?), &CollisionKernel::hard_spheres(), n)?;
        bytes.push(op.storage_bytes() as f64);
    }
    let x: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let slope = loglog_slope(&x, &bytes);
    let total = bytes[2] / 1e6;
    Ok((
        slope <= 4.5 && total < 100.0,
        format!("storage {} B for N = 8, 16, 32: slope {slope:.3} (<= 4.5), N=32 total {total:.2} MB (< 100)", list(&bytes)),
    ))
}

fn transform_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut orth, mut trip, mut iso, mut counts) = (0.0f64, 0.0f64, 0.0f64, true);
    for n in 2..=16 {
        let t = TransformSet::new(n)?;
        let maps = t.maps();
        counts &= maps.hermite().len() == hier_dim(n)
            && maps.cylinder().len() == hier_dim(n)
            && maps.spherical().len() == hier_dim(n)
            && t.nodal_dim() == (n + 1).pow(3)
            && t.fine_dim() == (2 * n + 1).pow(3);
        orth = t
            .planar_blocks()
            .iter()
            .chain(t.angular_blocks())
            .map(|b| b.orthogonality_defect())
            .fold(orth, f64::max);
        let h: Vec<f64> = (0..t.hier_dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let phi = t.cylinder_to_spherical(&t.hermite_to_cylinder(&h)?)?;
        let back = t.cylinder_to_hermite(&t.spherical_to_cylinder(&phi)?)?;
        trip = trip.max(max_diff(&h, &back));
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        iso = iso.max((norm(&phi) / norm(&h) - 1.0).abs());
    }
    Ok((
        counts && orth <= 1e-11 && trip <= 1e-11 && iso <= 1e-11,
        format!("N = 2..16: counts ok = {counts}, orthogonality {orth:.2e}, round trip {trip:.2e}, isometry {iso:.2e} (tol 1e-11)"),
    ))
}

/// Reference horizon for the hard-sphere self-convergence study.
const HARD_SPHERE_HORIZON: f64 = 0.5;

fn hard_sphere_self_convergence() -> Outcome {
    let kernel = CollisionKernel::hard_spheres();
    let run = |n: usize, dt: f64| -> boltz_spectral::Result<Vec<MomentSet>> {
        let mut config = ExperimentConfig::two_maxwellians(&kernel);
        config.n = n;
        config.n_ip = n;
        let op = CollisionOperator::new(Arc::new(TransformSet::new(n)?), &kernel, n)?;
        Ok(rk4_integrate(&op, config.initial_density()?, dt, 0.0, HARD_SPHERE_HORIZON, |_, _, _| Ok(()))?.moments)
    };
    let reference = run(20, 0.005)?;
    let coarse = run(8, 0.01)?;
    let fine = run(16, 0.01)?;
    let e8 = max_moment_deviation(&coarse, &reference, 1e-9).unwrap_or(f64::NAN);
    let e16 = max_moment_deviation(&fine, &reference, 1e-9).unwrap_or(f64::NAN);
    Ok((
        e8 >= 5.0 * e16,
        format!(
            "t in [0, {HARD_SPHERE_HORIZON}] vs N=20 dt=0.005: N=8 {e8:.3e}, N=16 {e16:.3e}, ratio {:.1} (need >= 5)",
            e8 / e16
        ),
    ))
}

fn report(id: usize, name: &str, outcome: Outcome, start: Instant, failures: &mut usize) {
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok((true, detail)) => println!("PASS {id:2} {name}: {detail} [{seconds:.1} s]"),
        Ok((false, detail)) => {
            *failures += 1;
            println!("FAIL {id:2} {name}: {detail} [{seconds:.1} s]");
        }
        Err(e) => {
            *failures += 1;
            println!("FAIL {id:2} {name}: error {e} [{seconds:.1} s]");
        }
    }
}

fn main() {
    let mut failures = 0;
    let mut bkw_runs = Vec::new();
    let clock = Instant::now;

    let t = clock();
    report(1, "Maxwellian annihilation", maxwellian_annihilation(), t, &mut failures);
    let t = clock();
    report(2, "discrete conservation", discrete_conservation(), t, &mut failures);
    let t = clock();
    report(3, "oracle equivalence", oracle_equivalence(), t, &mut failures);
    let t = clock();
    report(4, "BKW convergence", bkw_convergence(&mut bkw_runs), t, &mut failures);
    let t = clock();
    report(5, "Maxwell-molecule moments", maxwell_moments(), t, &mut failures);
    let t = clock();
    let reduced = match bkw_runs.iter().find(|r| r.0 == 16) {
        Some((_, _, full)) => reduced_quadrature(full),
        None => Err(boltz_spectral::Error::InvalidArgument("the N=16 BKW run is missing".into())),
    };
    report(6, "reduced outer quadrature", reduced, t, &mut failures);
    let t = clock();
    report(7, "complexity scaling", complexity_scaling(), t, &mut failures);
    let t = clock();
    report(8, "memory scaling", memory_scaling(), t, &mut failures);
    let t = clock();
    report(9, "transform suite", transform_suite(), t, &mut failures);
    let t = clock();
    report(10, "hard-sphere self-convergence", hard_sphere_self_convergence(), t, &mut failures);

    println!("{} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
