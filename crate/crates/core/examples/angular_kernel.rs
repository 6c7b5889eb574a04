//! Angle-dependent kernel `|v-w|^0.38 (1+cos)^0.4 / (4 pi)` on the
//! two-Maxwellian start. Usage: `angular_kernel [N] [t_end]`.

use std::sync::Arc;

use boltz_spectral::bases::TransformSet;
use boltz_spectral::collision::CollisionOperator;
use boltz_spectral::dynamics::{rk4_integrate, ExperimentConfig};
use boltz_spectral::kernel::CollisionKernel;

fn main() -> boltz_spectral::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kernel: CollisionKernel = "angular".parse()?;
    let mut config = ExperimentConfig::two_maxwellians(&kernel);
    config.n = args.first().and_then(|a| a.parse().ok()).unwrap_or(8);
    config.n_ip = config.n;
    config.t_end = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(1.0);
    config.validate()?;
    let op = CollisionOperator::new(Arc::new(TransformSet::new(config.n)?), &kernel, config.n_ip)?;
    println!("kernel {kernel}, collision eigenvalues lambda_0..3: {:.5?}", &op.kernel().lambdas()[..4]);
    let traj = rk4_integrate(&op, config.initial_density()?, config.dt, config.t0, config.t_end, |_, _, _| Ok(()))?;
    for m in traj.moments.iter().step_by(10) {
        println!(
            "t = {:4.2}  P11 {:.6}  P22 {:.6}  P12 {:+.6}  q2 {:.6}",
            m.time, m.stress[0][0], m.stress[1][1], m.stress[0][1], m.heat_flux[1]
        );
    }
    Ok(())
}
