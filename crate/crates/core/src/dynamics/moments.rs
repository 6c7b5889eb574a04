use serde::{Deserialize, Serialize};

use crate::collision::SpectralDensity;
use crate::error::Result;
use crate::specfun::gauss_hermite;

/// Velocity moments of a density at one instant.
///
/// `stress[i][j] = int v_i v_j f` (not centred) and
/// `heat_flux[i] = 1/2 int v_i |v|^2 f`, so that `trace(stress) = 2 energy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub time: f64,
    pub rho: f64,
    pub velocity: [f64; 3],
    pub energy: f64,
    pub temperature: f64,
    pub stress: [[f64; 3]; 3],
    pub heat_flux: [f64; 3],
}

impl MomentSet {
    /// Moments from raw integrals of `1`, `v`, `v v^T` and `v |v|^2 / 2`.
    pub fn from_integrals(time: f64, mass: f64, momentum: [f64; 3], stress: [[f64; 3]; 3], flux: [f64; 3]) -> Self {
        let velocity = momentum.map(|m| m / mass);
        let energy = 0.5 * (stress[0][0] + stress[1][1] + stress[2][2]);
        let speed2: f64 = velocity.iter().map(|u| u * u).sum();
        MomentSet {
            time,
            rho: mass,
            velocity,
            energy,
            temperature: (2.0 * energy / mass - speed2) / 3.0,
            stress,
            heat_flux: flux,
        }
    }

    /// Largest deviation among the entries that have closed forms for the
    /// two-Maxwellian problem.
    pub fn max_flow_deviation(&self, other: &MomentSet) -> f64 {
        let a = self.flow_entries();
        let b = other.flow_entries();
        a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    /// `P11, P22, P33, P12, q1, q2`.
    pub fn flow_entries(&self) -> [f64; 6] {
        [
            self.stress[0][0],
            self.stress[1][1],
            self.stress[2][2],
            self.stress[0][1],
            self.heat_flux[0],
            self.heat_flux[1],
        ]
    }
}

/// Moments of a density by the collocation rule of its own nodes, which is
/// exact for every moment up to third order (`N >= 2`).
pub fn compute_moments(f: &SpectralDensity, time: f64) -> Result<MomentSet> {
    let n = f.degree();
    let k = n + 1;
    let rule = gauss_hermite(k)?;
    let scale = f.tbar().sqrt();
    let volume = f.tbar().powf(1.5);
    let vbar = f.vbar();
    let c = f.coeffs();
    let mut mass = 0.0;
    let mut momentum = [0.0; 3];
    let mut stress = [[0.0; 3]; 3];
    let mut flux = [0.0; 3];
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let idx = (i * k + j) * k + l;
                let w = volume * rule.weights()[i] * rule.weights()[j] * rule.weights()[l] * c[idx];
                let x = [rule.nodes()[i], rule.nodes()[j], rule.nodes()[l]];
                let v: [f64; 3] = std::array::from_fn(|d| scale * x[d] + vbar[d]);
                let speed2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
                mass += w;
                for a in 0..3 {
                    momentum[a] += w * v[a];
                    flux[a] += 0.5 * w * v[a] * speed2;
                    for b in a..3 {
                        stress[a][b] += w * v[a] * v[b];
                    }
                }
            }
        }
    }
    for a in 0..3 {
        for b in 0..a {
            stress[a][b] = stress[b][a];
        }
    }
    Ok(MomentSet::from_integrals(time, mass, momentum, stress, flux))
}
