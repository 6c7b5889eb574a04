//! Brute-force quadrature of the collision form against the fast pipeline.

use std::sync::Arc;

use boltz_spectral::bases::TransformSet;
use boltz_spectral::collision::{CollisionOperator, SpectralDensity};
use boltz_spectral::kernel::CollisionKernel;
use boltz_spectral::oracle::{build_oracle_refined, OracleConfig};

fn main() -> boltz_spectral::Result<()> {
    for (n, kernel) in [(2, CollisionKernel::maxwell()), (3, CollisionKernel::hard_spheres())] {
        let oracle = build_oracle_refined(n, &kernel, OracleConfig::exact(n), 1e-9, 1)?;
        // enough hierarchical degree and outer points to make the fast path exact
        let op = CollisionOperator::new(Arc::new(TransformSet::with_degree(n, 6 * n)?), &kernel, (3 * n + 2) / 2)?;
        let f = SpectralDensity::perturbed_maxwellian(n, 1.7, [0.3, -0.2, 0.1], 0.5, 5)?;
        let fast = op.evaluate(&f)?;
        let slow = oracle.apply(&f)?;
        let scale = slow.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let err = fast.iter().zip(&slow).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale;
        println!("N = {n}, {kernel}: oracle refinement change {:.1e}, relative difference {err:.2e}", oracle.tolerance());
    }
    Ok(())
}
