//! One collision evaluation: conservation, Maxwellian annihilation and a
//! single explicit step.

use std::sync::Arc;

use boltz_spectral::bases::TransformSet;
use boltz_spectral::collision::{invariant_residuals, CollisionOperator, SpectralDensity};
use boltz_spectral::dynamics::compute_moments;
use boltz_spectral::kernel::CollisionKernel;

fn main() -> boltz_spectral::Result<()> {
    let n = 8;
    let transforms = Arc::new(TransformSet::new(n)?);
    let op = CollisionOperator::new(transforms.clone(), &CollisionKernel::hard_spheres(), n)?;

    let maxwellian = SpectralDensity::maxwellian(n, 2.0, [0.0; 3], 1.0)?;
    let q = op.evaluate(&maxwellian)?;
    println!("|Q(M)|_inf = {:.2e}", q.iter().fold(0.0f64, |m, x| m.max(x.abs())));

    let f = SpectralDensity::perturbed_maxwellian(n, 2.0, [0.0; 3], 0.3, 42)?;
    let q = op.evaluate(&f)?;
    let r = invariant_residuals(&q, &transforms)?;
    println!("relative tested moments against 1, v, |v|^2: {:?}", r.map(|x| format!("{x:.1e}")));

    let dt = 0.01;
    let rate = op.rhs(&f)?;
    let next = f.with_coeffs(f.coeffs().iter().zip(&rate).map(|(c, d)| c + dt * d).collect())?;
    let (a, b) = (compute_moments(&f, 0.0)?, compute_moments(&next, dt)?);
    println!("after one Euler step: mass {:.15} -> {:.15}, energy {:.15} -> {:.15}", a.rho, b.rho, a.energy, b.energy);
    println!("stored matrices and workspace: {} bytes", op.storage_bytes());
    Ok(())
}
