use rand::rngs::ChaCha8Rng;
use rand::{RngExt, SeedableRng};

use crate::error::{check_len, invalid, Error, Result};
use crate::specfun::LagrangeBasis;

/// `f(v) = e^{-|x|^2} p(x)` with `x = (v - V) / sqrt(T)` and `p` given by its
/// values on the `(N+1)^3` Gauss–Hermite tensor nodes (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    n: usize,
    tbar: f64,
    vbar: [f64; 3],
    coeffs: Vec<f64>,
}

impl SpectralDensity {
    pub fn new(n: usize, tbar: f64, vbar: [f64; 3], coeffs: Vec<f64>) -> Result<Self> {
        if !(tbar > 0.0 && tbar.is_finite()) {
            return Err(invalid(format!("frame temperature must be positive, got {tbar}")));
        }
        if vbar.iter().any(|v| !v.is_finite()) {
            return Err(invalid("frame velocity must be finite"));
        }
        check_len("nodal coefficients", (n + 1).pow(3), coeffs.len())?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("nodal coefficients".into()));
        }
        Ok(SpectralDensity {
            n,
            tbar,
            vbar,
            coeffs,
        })
    }

    /// The frame Maxwellian scaled by `level` (`p` constant).
    pub fn maxwellian(n: usize, tbar: f64, vbar: [f64; 3], level: f64) -> Result<Self> {
        Self::new(n, tbar, vbar, vec![level; (n + 1).pow(3)])
    }

    /// Nodal values `1 + amplitude * u` with `u` uniform in `[-1, 1)` from a
    /// seeded stream.
    pub fn perturbed_maxwellian(n: usize, tbar: f64, vbar: [f64; 3], amplitude: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = (0..(n + 1).pow(3))
            .map(|_| 1.0 + amplitude * rng.random_range(-1.0..1.0))
            .collect();
        Self::new(n, tbar, vbar, c)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn tbar(&self) -> f64 {
        self.tbar
    }

    pub fn vbar(&self) -> [f64; 3] {
        self.vbar
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Same frame, new coefficients.
    pub fn with_coeffs(&self, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(self.n, self.tbar, self.vbar, coeffs)
    }

    /// Density values at physical velocities.
    pub fn eval_many(&self, points: &[[f64; 3]]) -> Result<Vec<f64>> {
        let basis = LagrangeBasis::gauss_hermite(self.n)?;
        let k = self.n + 1;
        let scale = self.tbar.sqrt();
        let mut l = [vec![0.0; k], vec![0.0; k], vec![0.0; k]];
        Ok(points
            .iter()
            .map(|v| {
                let x: [f64; 3] = std::array::from_fn(|d| (v[d] - self.vbar[d]) / scale);
                for d in 0..3 {
                    basis.eval_into(x[d], &mut l[d]);
                }
                let mut p = 0.0;
                for (i, li) in l[0].iter().enumerate() {
                    for (j, lj) in l[1].iter().enumerate() {
                        let row = &self.coeffs[(i * k + j) * k..(i * k + j + 1) * k];
                        let inner: f64 = row.iter().zip(&l[2]).map(|(c, lk)| c * lk).sum();
                        p += li * lj * inner;
                    }
                }
                (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp() * p
            })
            .collect())
    }

    pub fn eval(&self, v: [f64; 3]) -> Result<f64> {
        Ok(self.eval_many(&[v])?[0])
    }
}
