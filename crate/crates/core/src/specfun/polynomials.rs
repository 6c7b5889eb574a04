//! Orthonormal polynomial families evaluated by forward recurrence.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// `pi^{-1/4}`, the constant orthonormal Hermite function.
pub const HERMITE_H0: f64 = 0.751_125_544_464_942_5;

/// Fills `out[i] = h_i(v)` for `i < out.len()`, where `h_i` are the Hermite
/// polynomials scaled so that `int e^{-v^2} h_i h_j dv = delta_ij`.
pub fn hermite_into(v: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = HERMITE_H0;
    if out.len() > 1 {
        out[1] = SQRT_2 * v * HERMITE_H0;
    }
    for n in 1..out.len().saturating_sub(1) {
        let nf = n as f64;
        out[n + 1] = (2.0 / (nf + 1.0)).sqrt() * v * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
}

/// `[h_0(v), ..., h_n(v)]`.
pub fn eval_hermite_all(n: usize, v: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    hermite_into(v, &mut out);
    out
}

/// Fills `out[k] = L_k^alpha(x)` scaled so that
/// `int_0^inf e^{-x} x^alpha L_i L_j dx = delta_ij`. The sign follows the
/// classical convention `L_k^alpha(0) > 0`. No domain check.
pub fn laguerre_into(alpha: f64, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = (-0.5 * libm::lgamma(alpha + 1.0)).exp();
    if out.len() > 1 {
        out[1] = (alpha + 1.0 - x) * out[0] / (alpha + 1.0).sqrt();
    }
    for n in 1..out.len().saturating_sub(1) {
        let nf = n as f64;
        out[n + 1] = ((2.0 * nf + alpha + 1.0 - x) * out[n]
            - (nf * (nf + alpha)).sqrt() * out[n - 1])
            / ((nf + 1.0) * (nf + alpha + 1.0)).sqrt();
    }
}

/// `[L_0^alpha(x), ..., L_k^alpha(x)]`, orthonormal against `e^{-x} x^alpha`.
pub fn eval_assoc_laguerre_all(k: usize, alpha: f64, x: f64) -> Result<Vec<f64>> {
    if !(alpha > -1.0) {
        return Err(Error::InvalidArgument(format!(
            "Laguerre parameter must exceed -1, got {alpha}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "Laguerre argument must be non-negative, got {x}"
        )));
    }
    let mut out = vec![0.0; k + 1];
    laguerre_into(alpha, x, &mut out);
    Ok(out)
}

/// Classical Legendre polynomials `[P_0(x), ..., P_l(x)]`.
pub fn legendre_all(l: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; l + 1];
    out[0] = 1.0;
    if l >= 1 {
        out[1] = x;
    }
    for n in 1..l {
        let nf = n as f64;
        out[n + 1] = ((2.0 * nf + 1.0) * x * out[n] - nf * out[n - 1]) / (nf + 1.0);
    }
    out
}

/// Sphere-normalized associated Legendre functions
/// `sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(x)` for `0 <= m <= l <= lmax`,
/// without the Condon–Shortley phase (all values non-negative at `x = 1`
/// for `m = 0`, and `P_m^m >= 0`).
#[derive(Debug, Clone)]
pub struct NormalizedLegendre {
    lmax: usize,
    data: Vec<f64>,
}

impl NormalizedLegendre {
    pub fn new(lmax: usize, x: f64) -> Self {
        let sin_theta = (1.0 - x * x).max(0.0).sqrt();
        Self::with_sin(lmax, x, sin_theta)
    }

    /// Same as [`NormalizedLegendre::new`] with an externally supplied
    /// `sin(theta) >= 0`.
    pub fn with_sin(lmax: usize, x: f64, sin_theta: f64) -> Self {
        let mut table = NormalizedLegendre {
            lmax,
            data: vec![0.0; (lmax + 1) * (lmax + 2) / 2],
        };
        let mut diag = (0.25 / PI).sqrt();
        for m in 0..=lmax {
            if m > 0 {
                let mf = m as f64;
                diag *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_theta;
            }
            table.set(m, m, diag);
            if m + 1 <= lmax {
                table.set(m + 1, m, (2.0 * m as f64 + 3.0).sqrt() * x * diag);
            }
            for l in m + 2..=lmax {
                let lf = l as f64;
                let mf = m as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                    .sqrt();
                let v = a * (x * table.get(l - 1, m) - b * table.get(l - 2, m));
                table.set(l, m, v);
            }
        }
        table
    }

    #[inline]
    fn index(l: usize, m: usize) -> usize {
        l * (l + 1) / 2 + m
    }

    #[inline]
    pub fn get(&self, l: usize, m: usize) -> f64 {
        debug_assert!(m <= l && l <= self.lmax);
        self.data[Self::index(l, m)]
    }

    #[inline]
    fn set(&mut self, l: usize, m: usize, v: f64) {
        self.data[Self::index(l, m)] = v;
    }
}

/// Position of `Y_l^{m,t}` in the output of [`eval_real_sph_harm`]: degrees
/// are stored consecutively, each as `cos m=0, cos m=1, sin m=1, cos m=2, ...`.
pub fn sph_harm_index(l: usize, m: usize, sine: bool) -> usize {
    debug_assert!(m <= l && !(sine && m == 0));
    let start = l * l;
    if m == 0 {
        start
    } else {
        start + 2 * m - 1 + usize::from(sine)
    }
}

/// Real spherical harmonics `Y_l^{m,t}(theta, phi) = s_m N_l^m(cos theta) t(m phi)`
/// with `s_0 = 1`, `s_m = sqrt(2)`, for all `l <= lmax`. Orthonormal on the
/// unit sphere.
pub fn eval_real_sph_harm(lmax: usize, theta: f64, phi: f64) -> Result<Vec<f64>> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!(
            "polar angle must lie in [0, pi], got {theta}"
        )));
    }
    let legendre = NormalizedLegendre::with_sin(lmax, theta.cos(), theta.sin());
    let mut out = vec![0.0; (lmax + 1) * (lmax + 1)];
    for l in 0..=lmax {
        out[sph_harm_index(l, 0, false)] = legendre.get(l, 0);
        for m in 1..=l {
            let (s, c) = (m as f64 * phi).sin_cos();
            let p = SQRT_2 * legendre.get(l, m);
            out[sph_harm_index(l, m, false)] = p * c;
            out[sph_harm_index(l, m, true)] = p * s;
        }
    }
    Ok(out)
}

/// `(x + i y)^m` split into real and imaginary part, i.e.
/// `(r^m cos(m phi), r^m sin(m phi))` for polar coordinates of `(x, y)`.
pub fn polar_power(x: f64, y: f64, m: usize) -> (f64, f64) {
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..m {
        let r = re * x - im * y;
        im = re * y + im * x;
        re = r;
    }
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quadrature::{gauss_hermite, gauss_laguerre, gauss_legendre};

    #[test]
    fn hermite_values() {
        assert!((eval_hermite_all(0, 3.7)[0] - PI.powf(-0.25)).abs() < 1e-16);
        assert!((eval_hermite_all(1, 1.0)[1] - 1.062_251_932_027_197).abs() < 1e-15);
        assert!((eval_hermite_all(2, 0.0)[2] + 0.531_125_966_013_598_5).abs() < 1e-15);
    }

    #[test]
    fn hermite_gram_is_identity() {
        let n = 30;
        let rule = gauss_hermite(n + 2).unwrap();
        let mut gram = vec![0.0; (n + 1) * (n + 1)];
        for (&v, &w) in rule.nodes().iter().zip(rule.weights()) {
            let h = eval_hermite_all(n, v);
            for i in 0..=n {
                for j in 0..=n {
                    gram[i * (n + 1) + j] += w * h[i] * h[j];
                }
            }
        }
        for i in 0..=n {
            for j in 0..=n {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i * (n + 1) + j] - expect).abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn laguerre_values_and_domain() {
        assert_eq!(eval_assoc_laguerre_all(0, 0.0, 4.2).unwrap(), vec![1.0]);
        assert!((eval_assoc_laguerre_all(1, 0.0, 0.0).unwrap()[1] - 1.0).abs() < 1e-15);
        let v = eval_assoc_laguerre_all(0, 0.5, 2.0).unwrap()[0];
        assert!((v - 1.062_251_932_027_197).abs() < 1e-14);
        assert!(matches!(
            eval_assoc_laguerre_all(3, 0.0, -1.0),
            Err(Error::Domain(_))
        ));
        assert!(eval_assoc_laguerre_all(3, -1.5, 1.0).is_err());
    }

    #[test]
    fn laguerre_gram_is_identity() {
        for alpha in [0.0, 0.5, 2.5, 7.5, 16.5] {
            let k = 20;
            let rule = gauss_laguerre(k + 2, alpha).unwrap();
            let mut gram = vec![0.0; (k + 1) * (k + 1)];
            for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
                let l = eval_assoc_laguerre_all(k, alpha, x).unwrap();
                for i in 0..=k {
                    for j in 0..=k {
                        gram[i * (k + 1) + j] += w * l[i] * l[j];
                    }
                }
            }
            for i in 0..=k {
                for j in 0..=k {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (gram[i * (k + 1) + j] - expect).abs() < 1e-12,
                        "alpha={alpha} ({i},{j}) {}",
                        gram[i * (k + 1) + j]
                    );
                }
            }
        }
    }

    #[test]
    fn legendre_normalization() {
        let rule = gauss_legendre(12).unwrap();
        for l in 0..8 {
            let s = rule.integrate(|x| legendre_all(l, x)[l].powi(2));
            assert!((s - 2.0 / (2.0 * l as f64 + 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn spherical_harmonic_values() {
        let y = eval_real_sph_harm(0, 0.3, 1.0).unwrap();
        assert!((y[0] - 0.282_094_791_773_878_14).abs() < 1e-15);
        let y = eval_real_sph_harm(1, 0.0, 0.0).unwrap();
        assert!((y[sph_harm_index(1, 0, false)] - 0.488_602_511_902_919_9).abs() < 1e-15);
        assert!(eval_real_sph_harm(2, -0.1, 0.0).is_err());
        assert!(eval_real_sph_harm(2, 3.2, 0.0).is_err());
    }

    #[test]
    fn spherical_harmonics_gram_is_identity() {
        let lmax = 10;
        let n_theta = lmax + 2;
        let n_phi = 2 * lmax + 4;
        let gl = gauss_legendre(n_theta).unwrap();
        let dim = (lmax + 1) * (lmax + 1);
        let mut gram = vec![0.0; dim * dim];
        for (&x, &w) in gl.nodes().iter().zip(gl.weights()) {
            for p in 0..n_phi {
                let phi = 2.0 * PI * p as f64 / n_phi as f64;
                let wt = w * 2.0 * PI / n_phi as f64;
                let y = eval_real_sph_harm(lmax, x.acos(), phi).unwrap();
                for a in 0..dim {
                    for b in 0..dim {
                        gram[a * dim + b] += wt * y[a] * y[b];
                    }
                }
            }
        }
        for a in 0..dim {
            for b in 0..dim {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((gram[a * dim + b] - expect).abs() < 1e-12, "({a},{b})");
            }
        }
    }

    #[test]
    fn polar_power_matches_trig() {
        let (x, y) = (0.7, -1.3);
        let r = (x * x + y * y as f64).sqrt();
        let phi = y.atan2(x);
        for m in 0..7 {
            let (c, s) = polar_power(x, y, m);
            assert!((c - r.powi(m as i32) * (m as f64 * phi).cos()).abs() < 1e-13);
            assert!((s - r.powi(m as i32) * (m as f64 * phi).sin()).abs() < 1e-13);
        }
    }
}
