//! Wall time of one collision application for a few trial degrees.

use std::sync::Arc;
use std::time::Instant;

use boltz_spectral::bases::TransformSet;
use boltz_spectral::collision::{CollisionOperator, SpectralDensity};
use boltz_spectral::kernel::CollisionKernel;

fn main() -> boltz_spectral::Result<()> {
    let degrees: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let degrees = if degrees.is_empty() { vec![4, 8, 12] } else { degrees };
    let kernel = CollisionKernel::hard_spheres();
    for n in degrees {
        let start = Instant::now();
        let transforms = Arc::new(TransformSet::new(n)?);
        let op = CollisionOperator::new(transforms, &kernel, n)?;
        let build = start.elapsed().as_secs_f64();
        let f = SpectralDensity::maxwellian(n, 2.0, [0.0; 3], 1.0)?;
        let start = Instant::now();
        let q = op.evaluate(&f)?;
        let apply = start.elapsed().as_secs_f64();
        let residual = q.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        println!("N={n:3} build {build:8.3} s  apply {apply:8.3} s  |Q(M)| {residual:.2e}");
    }
    Ok(())
}
