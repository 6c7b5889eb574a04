use std::sync::Arc;

use boltz_spectral::bases::TransformSet;
use boltz_spectral::collision::{CollisionOperator, SpectralDensity};
use boltz_spectral::kernel::CollisionKernel;
use boltz_spectral::oracle::{build_oracle, OracleConfig};
use rand::rngs::ChaCha8Rng;
use rand::{RngExt, SeedableRng};

fn compare(n: usize, kernel: CollisionKernel, seed: u64) -> f64 {
    let oracle = build_oracle(n, &kernel, &OracleConfig::exact(n)).unwrap();
    let transforms = Arc::new(TransformSet::with_degree(n, 6 * n).unwrap());
    let op = CollisionOperator::new(transforms, &kernel, (3 * n + 2) / 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (0..(n + 1).pow(3)).map(|_| rng.random_range(-1.0..1.0)).collect();
    let f = SpectralDensity::new(n, 1.7, [0.3, -0.2, 0.1], coeffs).unwrap();
    let fast = op.evaluate(&f).unwrap();
    let slow = oracle.apply(&f).unwrap();
    let scale = slow.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    fast.iter().zip(&slow).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale
}

#[test]
fn fast_path_matches_oracle_for_maxwell_molecules() {
    let err = compare(2, CollisionKernel::maxwell(), 1);
    assert!(err < 1e-8, "relative error {err:e}");
}

#[test]
fn fast_path_matches_oracle_for_hard_spheres() {
    let err = compare(3, CollisionKernel::hard_spheres(), 2);
    assert!(err < 1e-8, "relative error {err:e}");
}
