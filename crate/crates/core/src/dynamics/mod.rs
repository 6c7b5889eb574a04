//! Initial projection, time integration, moments and reference solutions.

mod analytic;
mod initial;
mod integrate;
mod moments;
mod norms;
mod output;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use analytic::{analytic_moments_maxwell, bkw_eval, bkw_k, bkw_threshold};
pub use initial::{default_projection_order, project_initial, project_weighted, InitialCondition, Projection};
pub use integrate::{rk4_integrate, step_count, Trajectory};
pub use moments::{compute_moments, MomentSet};
pub use norms::{error_norms, ErrorLattice, ErrorNorms};
pub use output::{max_moment_deviation, TrajectoryTable, MOMENT_COLUMNS};

use crate::collision::SpectralDensity;
use crate::error::{invalid, Result};
use crate::kernel::CollisionKernel;

/// Everything that defines one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kernel: String,
    pub n: usize,
    pub n_ip: usize,
    pub dt: f64,
    pub t0: f64,
    pub t_end: f64,
    pub initial: InitialCondition,
    #[serde(default)]
    pub projection: Projection,
    pub tbar: f64,
    pub vbar: [f64; 3],
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// BKW benchmark: constant kernel, `N = 8`, `dt = 0.1`, `t in [5.5, 8.5]`.
    pub fn bkw() -> Self {
        let initial = InitialCondition::Bkw;
        let (tbar, vbar) = initial.frame();
        ExperimentConfig {
            kernel: CollisionKernel::maxwell().to_string(),
            n: 8,
            n_ip: 8,
            dt: 0.1,
            t0: 5.5,
            t_end: 8.5,
            initial,
            projection: Projection::Weighted,
            tbar,
            vbar,
            output: None,
        }
    }

    /// Two-Maxwellian relaxation on `[0, 12]`; `N = 8, dt = 0.1` for the
    /// constant kernel and `N = 16, dt = 0.01` otherwise.
    pub fn two_maxwellians(kernel: &CollisionKernel) -> Self {
        let initial = InitialCondition::two_maxwellians();
        let (tbar, vbar) = initial.frame();
        let (n, dt) = if kernel.to_string() == "maxwell" {
            (8, 0.1)
        } else {
            (16, 0.01)
        };
        ExperimentConfig {
            kernel: kernel.to_string(),
            n,
            n_ip: n,
            dt,
            t0: 0.0,
            t_end: 12.0,
            initial,
            projection: Projection::Weighted,
            tbar,
            vbar,
            output: None,
        }
    }

    pub fn collision_kernel(&self) -> Result<CollisionKernel> {
        self.kernel.parse()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid(format!("trial degree must be at least 2, got {}", self.n)));
        }
        if self.n_ip == 0 {
            return Err(invalid("the outer rule needs at least one point"));
        }
        step_count(self.dt, self.t0, self.t_end)?;
        if !(self.tbar > 0.0 && self.tbar.is_finite()) || self.vbar.iter().any(|v| !v.is_finite()) {
            return Err(invalid("frame must be finite with positive temperature"));
        }
        self.collision_kernel()?;
        self.initial.validate(self.t0)
    }

    /// The projected start density.
    pub fn initial_density(&self) -> Result<SpectralDensity> {
        let t0 = self.t0;
        let ic = &self.initial;
        match self.projection {
            Projection::Collocation => project_initial(|v| ic.eval(t0, v), self.n, self.tbar, self.vbar),
            Projection::Weighted => project_weighted(
                |v| ic.eval(t0, v),
                self.n,
                self.tbar,
                self.vbar,
                default_projection_order(self.n),
            ),
        }
    }
}

#[cfg(test)]
mod tests;
