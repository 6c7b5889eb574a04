//! Two-Maxwellian relaxation of hard spheres at two degrees, compared with
//! each other. Usage: `hard_spheres [t_end]`.

use std::sync::Arc;

use boltz_spectral::bases::TransformSet;
use boltz_spectral::collision::CollisionOperator;
use boltz_spectral::dynamics::{max_moment_deviation, rk4_integrate, ExperimentConfig, MomentSet};
use boltz_spectral::kernel::CollisionKernel;

fn run(n: usize, dt: f64, t_end: f64) -> boltz_spectral::Result<Vec<MomentSet>> {
    let kernel = CollisionKernel::hard_spheres();
    let mut config = ExperimentConfig::two_maxwellians(&kernel);
    config.n = n;
    config.n_ip = n;
    config.dt = dt;
    config.t_end = t_end;
    let op = CollisionOperator::new(Arc::new(TransformSet::new(n)?), &kernel, n)?;
    Ok(rk4_integrate(&op, config.initial_density()?, dt, 0.0, t_end, |_, _, _| Ok(()))?.moments)
}

fn main() -> boltz_spectral::Result<()> {
    let t_end: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.5);
    let coarse = run(6, 0.01, t_end)?;
    let fine = run(10, 0.01, t_end)?;
    for m in fine.iter().step_by(10) {
        println!("t = {:4.2}  P11 {:.6}  P12 {:+.6}  q1 {:+.6}", m.time, m.stress[0][0], m.stress[0][1], m.heat_flux[0]);
    }
    let gap = max_moment_deviation(&coarse, &fine, 1e-9).unwrap_or(f64::NAN);
    println!("max deviation N=6 vs N=10 over [0, {t_end}]: {gap:.3e}");
    Ok(())
}
