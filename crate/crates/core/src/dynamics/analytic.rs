use std::f64::consts::PI;

use super::moments::MomentSet;

/// Smallest start time for which the BKW profile is nonnegative.
pub fn bkw_threshold() -> f64 {
    6.0 * 2.5f64.ln()
}

/// `K(t) = 1 - e^{-t/6}`.
pub fn bkw_k(t: f64) -> f64 {
    1.0 - (-t / 6.0).exp()
}

/// The BKW solution for the constant kernel `1/(4 pi)`: unit density, zero
/// mean velocity and unit temperature at every time. Below
/// [`bkw_threshold`] the profile takes negative values; it is still returned.
pub fn bkw_eval(t: f64, v: [f64; 3]) -> f64 {
    let k = bkw_k(t);
    let speed2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let amplitude = 1.0 / (2.0 * (2.0 * PI * k).powf(1.5));
    amplitude * ((5.0 * k - 3.0) / k + (1.0 - k) / (k * k) * speed2) * (-speed2 / (2.0 * k)).exp()
}

/// Closed-form moments for the default two-Maxwellian start under the
/// constant kernel `1/(4 pi)`. Mass, velocity, energy and the stationary
/// entries are constant.
pub fn analytic_moments_maxwell(t: f64) -> MomentSet {
    let e = (-t / 2.0).exp();
    let mut stress = [[0.0; 3]; 3];
    stress[0][0] = 7.0 / 3.0 * e + 8.0 / 3.0;
    stress[1][1] = -2.0 / 3.0 * e + 11.0 / 3.0;
    stress[2][2] = -5.0 / 3.0 * e + 8.0 / 3.0;
    stress[0][1] = -2.0 * e;
    stress[1][0] = stress[0][1];
    let flux = [-2.0 * e, -2.0 / 3.0 * e + 43.0 / 6.0, 0.0];
    MomentSet::from_integrals(t, 1.0, [0.0, 1.0, 0.0], stress, flux)
}
