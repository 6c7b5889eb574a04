use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::analytic::{bkw_eval, bkw_threshold};
use crate::collision::SpectralDensity;
use crate::error::{invalid, Error, Result};
use crate::linalg::{apply_tensor3, Matrix};
use crate::specfun::{eval_hermite_all, gauss_hermite};

/// Start distributions of the experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    /// The BKW profile at the start time.
    Bkw,
    /// `sum_i rho_i (2 pi T_i)^{-3/2} e^{-|v - V_i|^2 / (2 T_i)}`.
    TwoMaxwellians {
        rho: [f64; 2],
        velocity: [[f64; 3]; 2],
        temperature: [f64; 2],
    },
}

impl InitialCondition {
    /// Two unit-temperature halves with mean velocity `(0, 1, 0)` and
    /// temperature `8/3`.
    pub fn two_maxwellians() -> Self {
        InitialCondition::TwoMaxwellians {
            rho: [0.5, 0.5],
            velocity: [[-2.0, 2.0, 0.0], [2.0, 0.0, 0.0]],
            temperature: [1.0, 1.0],
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            InitialCondition::Bkw => "bkw",
            InitialCondition::TwoMaxwellians { .. } => "two_maxwellians",
        }
    }

    /// Density value at `v` for start time `t0`.
    pub fn eval(&self, t0: f64, v: [f64; 3]) -> f64 {
        match self {
            InitialCondition::Bkw => bkw_eval(t0, v),
            InitialCondition::TwoMaxwellians {
                rho,
                velocity,
                temperature,
            } => (0..2)
                .map(|i| {
                    let d2: f64 = (0..3).map(|a| (v[a] - velocity[i][a]).powi(2)).sum();
                    rho[i] * (2.0 * PI * temperature[i]).powf(-1.5) * (-d2 / (2.0 * temperature[i])).exp()
                })
                .sum(),
        }
    }

    /// Frame `(tbar, vbar)` with `tbar` twice the physical temperature.
    pub fn frame(&self) -> (f64, [f64; 3]) {
        match self {
            InitialCondition::Bkw => (2.0, [0.0; 3]),
            InitialCondition::TwoMaxwellians {
                rho,
                velocity,
                temperature,
            } => {
                let mass = rho[0] + rho[1];
                let mean: [f64; 3] = std::array::from_fn(|a| (rho[0] * velocity[0][a] + rho[1] * velocity[1][a]) / mass);
                let temp = (0..2)
                    .map(|i| {
                        let d2: f64 = (0..3).map(|a| (velocity[i][a] - mean[a]).powi(2)).sum();
                        rho[i] * (temperature[i] + d2 / 3.0)
                    })
                    .sum::<f64>()
                    / mass;
                (2.0 * temp, mean)
            }
        }
    }

    pub fn validate(&self, t0: f64) -> Result<()> {
        match self {
            InitialCondition::Bkw => {
                if t0 <= bkw_threshold() {
                    eprintln!(
                        "warning: BKW start time {t0} is below {:.4}; the profile has negative values",
                        bkw_threshold()
                    );
                }
                Ok(())
            }
            InitialCondition::TwoMaxwellians { rho, temperature, .. } => {
                if rho.iter().chain(temperature).any(|x| !(*x > 0.0 && x.is_finite())) {
                    return Err(invalid("densities and temperatures must be positive"));
                }
                Ok(())
            }
        }
    }
}

/// How a start distribution enters the trial space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Projection {
    /// Nodal values of `e^{|x|^2} f`.
    Collocation,
    /// Orthogonal projection in the weighted space; every moment of degree
    /// at most `N` per axis is kept.
    #[default]
    Weighted,
}

/// Collocation projection: the nodal values are `e^{|x|^2} f(sqrt(tbar) x + vbar)`
/// at the trial nodes, exact for members of the trial space.
pub fn project_initial(f: impl Fn([f64; 3]) -> f64, n: usize, tbar: f64, vbar: [f64; 3]) -> Result<SpectralDensity> {
    if n < 2 {
        return Err(invalid(format!("trial degree must be at least 2, got {n}")));
    }
    if !(tbar > 0.0 && tbar.is_finite()) {
        return Err(invalid(format!("frame temperature must be positive, got {tbar}")));
    }
    let rule = gauss_hermite(n + 1)?;
    let x = rule.nodes();
    let scale = tbar.sqrt();
    let mut coeffs = Vec::with_capacity((n + 1).pow(3));
    for &a in x {
        for &b in x {
            for &c in x {
                let v = [scale * a + vbar[0], scale * b + vbar[1], scale * c + vbar[2]];
                let value = f(v);
                if !value.is_finite() {
                    return Err(Error::NonFinite(format!("initial density at {v:?}")));
                }
                coeffs.push((a * a + b * b + c * c).exp() * value);
            }
        }
    }
    SpectralDensity::new(n, tbar, vbar, coeffs)
}

/// Orthogonal projection for the inner product `int e^{|x|^2} u w dx`: the
/// Hermite coefficients are `a_k = int f h_k dx`, computed with a
/// `quad_order`-point Gauss–Hermite rule per axis, then converted to nodal
/// values. Moments of degree at most `N` per axis are reproduced up to the
/// accuracy of that rule.
pub fn project_weighted(
    f: impl Fn([f64; 3]) -> f64,
    n: usize,
    tbar: f64,
    vbar: [f64; 3],
    quad_order: usize,
) -> Result<SpectralDensity> {
    if n < 2 {
        return Err(invalid(format!("trial degree must be at least 2, got {n}")));
    }
    if !(tbar > 0.0 && tbar.is_finite()) {
        return Err(invalid(format!("frame temperature must be positive, got {tbar}")));
    }
    if quad_order <= n {
        return Err(invalid("the projection rule must have more points than the trial degree"));
    }
    let rule = gauss_hermite(quad_order)?;
    let trial = gauss_hermite(n + 1)?;
    let x = rule.nodes();
    // per-axis map from samples of e^{|x|^2} f to nodal values
    let at_nodes: Vec<Vec<f64>> = trial.nodes().iter().map(|&y| eval_hermite_all(n, y)).collect();
    let at_rule: Vec<Vec<f64>> = x.iter().map(|&y| eval_hermite_all(n, y)).collect();
    let map = Matrix::from_fn(n + 1, quad_order, |i, q| {
        let w = rule.weights()[q] * (x[q] * x[q]).exp();
        w * (0..=n).map(|k| at_nodes[i][k] * at_rule[q][k]).sum::<f64>()
    });
    let scale = tbar.sqrt();
    let mut samples = Vec::with_capacity(quad_order.pow(3));
    for &a in x {
        for &b in x {
            for &c in x {
                let v = [scale * a + vbar[0], scale * b + vbar[1], scale * c + vbar[2]];
                let value = f(v);
                if !value.is_finite() {
                    return Err(Error::NonFinite(format!("initial density at {v:?}")));
                }
                samples.push(value);
            }
        }
    }
    let (mut s1, mut s2, mut coeffs) = (Vec::new(), Vec::new(), Vec::new());
    apply_tensor3(
        &samples,
        [quad_order; 3],
        [&map, &map, &map],
        false,
        &mut s1,
        &mut s2,
        &mut coeffs,
    );
    SpectralDensity::new(n, tbar, vbar, coeffs)
}

/// Points per axis used by experiments for [`project_weighted`].
pub fn default_projection_order(n: usize) -> usize {
    3 * n + 24
}
