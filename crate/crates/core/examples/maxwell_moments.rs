//! Two-Maxwellian relaxation under the constant kernel, compared with the
//! closed-form stress and heat-flux evolution. Usage: `maxwell_moments [N] [dt]`.

use std::sync::Arc;

use boltz_spectral::bases::TransformSet;
use boltz_spectral::collision::CollisionOperator;
use boltz_spectral::dynamics::{analytic_moments_maxwell, rk4_integrate, ExperimentConfig};
use boltz_spectral::kernel::CollisionKernel;

fn main() -> boltz_spectral::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut config = ExperimentConfig::two_maxwellians(&CollisionKernel::maxwell());
    if let Some(n) = args.first().and_then(|a| a.parse().ok()) {
        config.n = n;
        config.n_ip = n;
    }
    if let Some(dt) = args.get(1).and_then(|a| a.parse().ok()) {
        config.dt = dt;
    }
    config.validate()?;
    let transforms = Arc::new(TransformSet::new(config.n)?);
    let op = CollisionOperator::new(transforms, &config.collision_kernel()?, config.n_ip)?;
    let traj = rk4_integrate(&op, config.initial_density()?, config.dt, config.t0, config.t_end, |_, _, _| Ok(()))?;
    let mut worst = 0.0f64;
    for m in &traj.moments {
        let exact = analytic_moments_maxwell(m.time);
        worst = worst.max(m.max_flow_deviation(&exact));
        if (m.time.round() - m.time).abs() < 1e-9 && m.time.round() as i64 % 2 == 0 {
            println!(
                "t = {:4.1}  P11 {:.6}  P12 {:.6}  q2 {:.6}  deviation {:.2e}",
                m.time,
                m.stress[0][0],
                m.stress[0][1],
                m.heat_flux[1],
                m.max_flow_deviation(&exact)
            );
        }
    }
    println!("N = {}, dt = {}: max deviation from closed forms {worst:.3e}", config.n, config.dt);
    Ok(())
}
