//! BKW benchmark: evolve the projected BKW profile and report the distance to
//! the exact solution. Usage: `bkw [N] [n_ip]`.

use std::sync::Arc;

use boltz_spectral::bases::TransformSet;
use boltz_spectral::collision::CollisionOperator;
use boltz_spectral::dynamics::{bkw_eval, rk4_integrate, ErrorLattice, ExperimentConfig};

fn main() -> boltz_spectral::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut config = ExperimentConfig::bkw();
    config.n = args.first().copied().unwrap_or(8);
    config.n_ip = args.get(1).copied().unwrap_or(config.n);
    config.validate()?;
    let transforms = Arc::new(TransformSet::new(config.n)?);
    let op = CollisionOperator::new(transforms, &config.collision_kernel()?, config.n_ip)?;
    let lattice = ErrorLattice::new(config.n, config.tbar, config.vbar)?;
    let (mut worst_l2, mut worst_linf) = (0.0f64, 0.0f64);
    rk4_integrate(&op, config.initial_density()?, config.dt, config.t0, config.t_end, |f, t, step| {
        let norms = lattice.distance(f, &lattice.reference(|v| bkw_eval(t, v))?)?;
        worst_l2 = worst_l2.max(norms.l2);
        worst_linf = worst_linf.max(norms.linf);
        if step % 10 == 0 {
            println!("t = {t:5.2}  L2 {:.3e}  Linf {:.3e}", norms.l2, norms.linf);
        }
        Ok(())
    })?;
    println!("N = {}, n_ip = {}: max L2 {worst_l2:.3e}, max Linf {worst_linf:.3e}", config.n, config.n_ip);
    Ok(())
}
