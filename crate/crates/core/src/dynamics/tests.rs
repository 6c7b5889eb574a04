use std::sync::Arc;

use super::*;
use crate::bases::TransformSet;
use crate::collision::CollisionOperator;

fn operator(n: usize, kernel: &CollisionKernel) -> CollisionOperator {
    CollisionOperator::new(Arc::new(TransformSet::new(n).unwrap()), kernel, n).unwrap()
}

#[test]
fn bkw_constants() {
    assert!((bkw_threshold() - 5.497744).abs() < 1e-6);
    assert!(bkw_threshold() < 5.5);
    assert!((bkw_k(5.5) - 0.6001503).abs() < 1e-7);
}

#[test]
fn projected_bkw_has_unit_moments() {
    let config = ExperimentConfig::bkw();
    let mut config16 = config.clone();
    config16.n = 16;
    let m = compute_moments(&config16.initial_density().unwrap(), config.t0).unwrap();
    assert!((m.rho - 1.0).abs() < 1e-8, "{}", m.rho);
    assert!(m.velocity.iter().all(|v| v.abs() < 1e-8));
    assert!((m.temperature - 1.0).abs() < 1e-8, "{}", m.temperature);
}

#[test]
fn projected_two_maxwellians_match_closed_forms() {
    let mut config = ExperimentConfig::two_maxwellians(&CollisionKernel::maxwell());
    assert!((config.tbar - 16.0 / 3.0).abs() < 1e-15);
    assert_eq!(config.vbar, [0.0, 1.0, 0.0]);
    config.n = 16;
    let m = compute_moments(&config.initial_density().unwrap(), 0.0).unwrap();
    assert!((m.rho - 1.0).abs() < 1e-8);
    assert!((m.velocity[1] - 1.0).abs() < 1e-8 && m.velocity[0].abs() < 1e-8);
    assert!((m.temperature - 8.0 / 3.0).abs() < 1e-8);
    let exact = analytic_moments_maxwell(0.0);
    assert!(m.max_flow_deviation(&exact) < 1e-8, "{}", m.max_flow_deviation(&exact));
    assert!((m.stress[0][0] - 5.0).abs() < 1e-8);
    assert!((m.heat_flux[1] - 6.5).abs() < 1e-8);
}

#[test]
fn trial_maxwellian_moments() {
    let f = SpectralDensity::maxwellian(6, 2.0, [0.0; 3], 1.0).unwrap();
    let m = compute_moments(&f, 0.0).unwrap();
    assert!((m.rho - 15.7496099).abs() < 1e-6);
    assert!((m.temperature - 1.0).abs() < 1e-13);
    let trace = m.stress[0][0] + m.stress[1][1] + m.stress[2][2];
    assert!((trace - 2.0 * m.energy).abs() < 1e-12 * trace);
}

#[test]
fn analytic_moment_identities() {
    let m = analytic_moments_maxwell(0.0);
    assert!((m.stress[2][2] - 1.0).abs() < 1e-15);
    assert!((m.energy - 4.5).abs() < 1e-14);
    assert!((m.temperature - 8.0 / 3.0).abs() < 1e-14);
    let late = analytic_moments_maxwell(200.0);
    assert!(late.stress[0][1].abs() < 1e-40);
    assert!((late.stress[0][0] - 8.0 / 3.0).abs() < 1e-14);
}

#[test]
fn moment_consistency_identity() {
    let config = ExperimentConfig::two_maxwellians(&CollisionKernel::maxwell());
    let m = compute_moments(&config.initial_density().unwrap(), 0.0).unwrap();
    let speed2: f64 = m.velocity.iter().map(|u| u * u).sum();
    assert!((m.temperature - (2.0 * m.energy / m.rho - speed2) / 3.0).abs() < 1e-12);
    for a in 0..3 {
        for b in 0..3 {
            assert_eq!(m.stress[a][b], m.stress[b][a]);
        }
    }
}

#[test]
fn galilean_shift_coherence() {
    let shift = [0.7, -0.3, 1.1];
    let f = |v: [f64; 3]| (-(v[0] * v[0] + 2.0 * v[1] * v[1] + v[2] * v[2]) / 3.0).exp() * (1.0 + v[0]);
    let a = project_initial(f, 6, 2.5, [0.1, 0.2, 0.3]).unwrap();
    let g = |v: [f64; 3]| f([v[0] - shift[0], v[1] - shift[1], v[2] - shift[2]]);
    let b = project_initial(g, 6, 2.5, [0.8, -0.1, 1.4]).unwrap();
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        assert!((x - y).abs() <= 1e-13 * x.abs().max(1.0));
    }
}

#[test]
fn projection_rejects_non_finite() {
    assert!(project_initial(|_| f64::NAN, 4, 2.0, [0.0; 3]).is_err());
    assert!(project_initial(|_| 1.0, 1, 2.0, [0.0; 3]).is_err());
}

#[test]
fn maxwellian_is_stationary() {
    let op = operator(4, &CollisionKernel::hard_spheres());
    let f0 = SpectralDensity::maxwellian(4, 2.0, [0.0; 3], 0.3).unwrap();
    let traj = rk4_integrate(&op, f0.clone(), 0.1, 0.0, 1.0, |_, _, _| Ok(())).unwrap();
    let drift = traj
        .last
        .coeffs()
        .iter()
        .zip(f0.coeffs())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(drift <= 1e-9, "{drift:e}");
    assert_eq!(traj.moments.len(), 11);
}

#[test]
fn conservation_along_a_trajectory() {
    let mut config = ExperimentConfig::bkw();
    config.n = 6;
    config.n_ip = 6;
    let op = operator(6, &CollisionKernel::maxwell());
    let traj = rk4_integrate(&op, config.initial_density().unwrap(), 0.1, 5.5, 7.0, |_, _, _| Ok(())).unwrap();
    let first = traj.moments[0];
    for m in &traj.moments {
        assert!((m.rho - first.rho).abs() <= 1e-8 * first.rho);
        assert!(m.velocity.iter().all(|v| v.abs() <= 1e-8));
        assert!((m.energy - first.energy).abs() <= 1e-8 * first.energy);
    }
}

#[test]
fn rk4_is_fourth_order() {
    let mut config = ExperimentConfig::two_maxwellians(&CollisionKernel::maxwell());
    config.n = 4;
    let op = operator(4, &CollisionKernel::maxwell());
    let f0 = config.initial_density().unwrap();
    let p11 = |dt: f64| {
        let traj = rk4_integrate(&op, f0.clone(), dt, 0.0, 2.0, |_, _, _| Ok(())).unwrap();
        traj.moments.last().unwrap().stress[0][0]
    };
    let reference = p11(0.4 / 8.0);
    let coarse = (p11(0.4) - reference).abs();
    let fine = (p11(0.2) - reference).abs();
    let ratio = coarse / fine;
    assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn error_norms_vanish_on_self() {
    let config = ExperimentConfig::bkw();
    let f = config.initial_density().unwrap();
    let norms = error_norms(&f, |v| f.eval(v).unwrap()).unwrap();
    assert!(norms.l2 < 1e-14 && norms.linf < 1e-14, "{norms:?}");
    let far = error_norms(&SpectralDensity::maxwellian(8, 2.0, [0.0; 3], 1.0).unwrap(), |v| bkw_eval(50.0, v)).unwrap();
    assert!(far.l2.is_finite() && far.linf.is_finite());
}

#[test]
fn projected_bkw_error_decreases_with_degree() {
    let errors: Vec<f64> = [8, 12, 16]
        .iter()
        .map(|&n| {
            let mut config = ExperimentConfig::bkw();
            config.n = n;
            let f = config.initial_density().unwrap();
            error_norms(&f, |v| bkw_eval(5.5, v)).unwrap().linf
        })
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
}

#[test]
fn csv_round_trip() {
    let mut table = TrajectoryTable::new(&["err_L2", "err_Linf"]);
    table.push(analytic_moments_maxwell(0.0), vec![1e-5, 0.1]).unwrap();
    table.push(analytic_moments_maxwell(0.1), vec![2e-5, 0.3]).unwrap();
    let text = table.to_csv();
    assert!(text.starts_with("t,rho,Vx,Vy,Vz,E,T,P11,P22,P33,P12,P13,P23,q1,q2,q3,err_L2,err_Linf\n"));
    let back = TrajectoryTable::from_csv(&text).unwrap();
    assert_eq!(back, table);
    assert!(table.push(analytic_moments_maxwell(0.2), vec![]).is_err());
}

#[test]
fn config_validation() {
    let mut config = ExperimentConfig::bkw();
    assert!(config.validate().is_ok());
    config.n = 0;
    assert!(config.validate().is_err());
    let mut config = ExperimentConfig::bkw();
    config.dt = -1.0;
    assert!(config.validate().is_err());
    let mut config = ExperimentConfig::bkw();
    config.kernel = "nonsense".into();
    assert!(config.validate().is_err());
    let json = serde_json::to_string(&ExperimentConfig::two_maxwellians(&CollisionKernel::hard_spheres())).unwrap();
    let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
    assert_eq!(back.n, 16);
    assert_eq!(back.kernel, "hardsphere");
}

#[test]
fn both_projections_reproduce_trial_members() {
    let tbar: f64 = 2.0;
    let f = |v: [f64; 3]| {
        let x: [f64; 3] = v.map(|a| a / tbar.sqrt());
        (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp() * (1.0 + x[0] * x[1] - 0.5 * x[2].powi(3))
    };
    let a = project_initial(f, 5, tbar, [0.0; 3]).unwrap();
    let b = project_weighted(f, 5, tbar, [0.0; 3], 20).unwrap();
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        assert!((x - y).abs() < 1e-12, "{x} {y}");
    }
    let ones = project_initial(|v| (-(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) / tbar).exp(), 4, tbar, [0.0; 3]).unwrap();
    assert!(ones.coeffs().iter().all(|c| (c - 1.0).abs() < 1e-13));
}

#[test]
fn weighted_projection_keeps_low_moments_at_low_degree() {
    let config = ExperimentConfig::two_maxwellians(&CollisionKernel::maxwell());
    assert_eq!(config.n, 8);
    let m = compute_moments(&config.initial_density().unwrap(), 0.0).unwrap();
    assert!(m.max_flow_deviation(&analytic_moments_maxwell(0.0)) < 1e-11);
    let mut collocated = config.clone();
    collocated.projection = Projection::Collocation;
    let c = compute_moments(&collocated.initial_density().unwrap(), 0.0).unwrap();
    assert!(c.max_flow_deviation(&analytic_moments_maxwell(0.0)) > 1e-6);
}

#[test]
fn collocated_bkw_moments_at_degree_sixteen() {
    let mut config = ExperimentConfig::bkw();
    config.n = 16;
    config.projection = Projection::Collocation;
    let m = compute_moments(&config.initial_density().unwrap(), config.t0).unwrap();
    assert!((m.rho - 1.0).abs() < 1e-7, "{}", m.rho);
    assert!((m.temperature - 1.0).abs() < 1e-7, "{}", m.temperature);
}
