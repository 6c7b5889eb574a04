use std::path::Path;
use std::sync::Arc;

use rand::rngs::ChaCha8Rng;
use rand::{RngExt, SeedableRng};

use crate::bases::{hier_dim, TransformSet};
use crate::collision::{invariant_residuals, CollisionOperator, SpectralDensity};
use crate::error::Result;
use crate::kernel::CollisionKernel;
use crate::oracle::{build_oracle, cached_oracle, OracleConfig};

/// Outcome of one invariant check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn bound(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            passed: value <= tol,
            detail: format!("{value:.3e} <= {tol:.0e}"),
        }
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn transform_checks(rng: &mut ChaCha8Rng, checks: &mut Vec<Check>) -> Result<()> {
    for n in 2..=8 {
        let t = TransformSet::new(n)?;
        let maps = t.maps();
        let counts_match = maps.hermite().len() == hier_dim(n)
            && maps.cylinder().len() == hier_dim(n)
            && maps.spherical().len() == hier_dim(n);
        checks.push(Check {
            name: format!("transforms N={n}: dimension counts"),
            passed: counts_match,
            detail: format!("{} modes", hier_dim(n)),
        });
        let defect = t
            .planar_blocks()
            .iter()
            .chain(t.angular_blocks())
            .map(|b| b.orthogonality_defect())
            .fold(0.0f64, f64::max);
        checks.push(Check::bound(format!("transforms N={n}: block orthogonality"), defect, 1e-11));
        let h: Vec<f64> = (0..t.hier_dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let theta = t.hermite_to_cylinder(&h)?;
        let phi = t.cylinder_to_spherical(&theta)?;
        let back = t.cylinder_to_hermite(&t.spherical_to_cylinder(&phi)?)?;
        checks.push(Check::bound(format!("transforms N={n}: round trip"), max_diff(&h, &back), 1e-12));
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let isometry = (norm(&phi) / norm(&h) - 1.0).abs();
        checks.push(Check::bound(format!("transforms N={n}: isometry"), isometry, 1e-12));
        let constant = t.nodal_to_hermite(&vec![1.0; t.fine_dim()])?;
        let mut expected = vec![0.0; t.hier_dim()];
        expected[0] = std::f64::consts::PI.powf(0.75);
        checks.push(Check::bound(format!("transforms N={n}: Maxwellian to Hermite"), max_diff(&constant, &expected), 1e-12));
    }
    Ok(())
}

fn collision_checks(kernel: &CollisionKernel, seed: u64, checks: &mut Vec<Check>) -> Result<()> {
    let n = 6;
    let op = CollisionOperator::new(Arc::new(TransformSet::new(n)?), kernel, n)?;
    let symmetry = op
        .kernel()
        .radial()
        .iter()
        .map(|r| r.max_abs_diff(&r.transpose()))
        .fold(0.0f64, f64::max);
    checks.push(Check::bound(format!("{kernel}: radial matrices symmetric"), symmetry, 1e-13));
    let m = SpectralDensity::maxwellian(n, 2.0, [0.1, 0.0, -0.2], 1.0)?;
    let q = op.evaluate(&m)?;
    checks.push(Check::bound(format!("{kernel}: Maxwellian annihilated"), max_abs(&q), 1e-10));
    let mut worst = 0.0f64;
    for i in 0..5 {
        let f = SpectralDensity::perturbed_maxwellian(n, 1.5, [0.2, -0.1, 0.3], 0.3, seed.wrapping_add(i))?;
        let r = invariant_residuals(&op.evaluate(&f)?, op.transforms())?;
        worst = r.iter().fold(worst, |w, x| w.max(*x));
    }
    checks.push(Check::bound(format!("{kernel}: mass, momentum and energy conserved"), worst, 1e-10));
    Ok(())
}

fn oracle_checks(seed: u64, cache_dir: Option<&Path>, checks: &mut Vec<Check>) -> Result<()> {
    for (n, kernel, tol) in [(2, CollisionKernel::maxwell(), 1e-8), (3, CollisionKernel::hard_spheres(), 1e-7)] {
        let oracle = match cache_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                cached_oracle(n, &kernel, dir)?
            }
            None => build_oracle(n, &kernel, &OracleConfig::exact(n))?,
        };
        let op = CollisionOperator::new(Arc::new(TransformSet::with_degree(n, 6 * n)?), &kernel, (3 * n + 2) / 2)?;
        let mut worst = 0.0f64;
        for i in 0..5 {
            let f = SpectralDensity::perturbed_maxwellian(n, 1.7, [0.3, -0.2, 0.1], 0.5, seed.wrapping_add(100 + i))?;
            let fast = op.evaluate(&f)?;
            let slow = oracle.apply(&f)?;
            worst = worst.max(max_diff(&fast, &slow) / max_abs(&slow));
        }
        checks.push(Check::bound(format!("oracle N={n} {kernel}: fast path agrees"), worst, tol));
    }
    Ok(())
}

/// Transform, collision and oracle invariants; randomized inputs come from `seed`.
pub fn run_checks(kernel: &CollisionKernel, seed: u64, cache_dir: Option<&Path>) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    transform_checks(&mut rng, &mut checks)?;
    collision_checks(kernel, seed, &mut checks)?;
    oracle_checks(seed, cache_dir, &mut checks)?;
    Ok(checks)
}
