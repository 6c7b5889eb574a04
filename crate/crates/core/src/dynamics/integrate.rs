use super::moments::{compute_moments, MomentSet};
use crate::collision::{CollisionOperator, SpectralDensity};
use crate::error::{invalid, Error, Result};

/// Recorded moments (start included) and the final state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub moments: Vec<MomentSet>,
    pub last: SpectralDensity,
}

/// Number of steps of size `dt` covering `[t0, t_end]`.
pub fn step_count(dt: f64, t0: f64, t_end: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("time step must be positive, got {dt}")));
    }
    if !(t_end > t0) {
        return Err(invalid(format!("end time {t_end} must exceed start time {t0}")));
    }
    Ok(((t_end - t0) / dt).round().max(1.0) as usize)
}

fn axpy(f: &SpectralDensity, h: f64, k: &[f64]) -> Result<SpectralDensity> {
    f.with_coeffs(f.coeffs().iter().zip(k).map(|(c, d)| c + h * d).collect())
}

fn stage(op: &CollisionOperator, f: &SpectralDensity, time: f64, step: usize) -> Result<Vec<f64>> {
    let numerical = |message: String| Error::Numerical { time, step, message };
    let k = op.rhs(f).map_err(|e| match e {
        Error::NonFinite(m) => numerical(m),
        other => other,
    })?;
    if k.iter().any(|x| !x.is_finite()) {
        return Err(numerical("non-finite time derivative".into()));
    }
    Ok(k)
}

/// Classical fourth-order Runge–Kutta on the nodal coefficients. `on_step`
/// sees each accepted state (the start included) with its time and step
/// index.
pub fn rk4_integrate(
    op: &CollisionOperator,
    f0: SpectralDensity,
    dt: f64,
    t0: f64,
    t_end: f64,
    mut on_step: impl FnMut(&SpectralDensity, f64, usize) -> Result<()>,
) -> Result<Trajectory> {
    let steps = step_count(dt, t0, t_end)?;
    let mut f = f0;
    let mut moments = Vec::with_capacity(steps + 1);
    moments.push(compute_moments(&f, t0)?);
    on_step(&f, t0, 0)?;
    for step in 1..=steps {
        let t = t0 + (step - 1) as f64 * dt;
        let k1 = stage(op, &f, t, step)?;
        let k2 = stage(op, &axpy(&f, 0.5 * dt, &k1)?, t, step)?;
        let k3 = stage(op, &axpy(&f, 0.5 * dt, &k2)?, t, step)?;
        let k4 = stage(op, &axpy(&f, dt, &k3)?, t, step)?;
        let next: Vec<f64> = (0..k1.len())
            .map(|i| f.coeffs()[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        let time = t0 + step as f64 * dt;
        if next.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical {
                time,
                step,
                message: "non-finite coefficients after the step".into(),
            });
        }
        f = f.with_coeffs(next)?;
        moments.push(compute_moments(&f, time)?);
        on_step(&f, time, step)?;
    }
    Ok(Trajectory { moments, last: f })
}
