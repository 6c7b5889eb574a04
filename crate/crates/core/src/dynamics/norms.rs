use crate::collision::SpectralDensity;
use crate::error::{Error, Result};
use crate::linalg::{apply_tensor3, Matrix};
use crate::specfun::{gauss_hermite, LagrangeBasis};

/// Discrete `L2` and `Linf` distances between a density and a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    pub linf: f64,
}

/// The `(2N+1)^3` Gauss–Hermite lattice of a frame, with the interpolation
/// matrix from the trial nodes.
#[derive(Debug, Clone)]
pub struct ErrorLattice {
    n: usize,
    tbar: f64,
    vbar: [f64; 3],
    nodes: Vec<f64>,
    weights: Vec<f64>,
    interp: Matrix,
}

impl ErrorLattice {
    pub fn new(n: usize, tbar: f64, vbar: [f64; 3]) -> Result<Self> {
        let rule = gauss_hermite(2 * n + 1)?;
        let basis = LagrangeBasis::gauss_hermite(n)?;
        let nodes = rule.nodes().to_vec();
        let interp = Matrix::from_fn(nodes.len(), n + 1, |a, i| basis.eval(nodes[a])[i]);
        // weights for int g dv, undoing the Gaussian factor of the rule
        let weights = rule
            .weights()
            .iter()
            .zip(&nodes)
            .map(|(w, x)| w * (x * x).exp() * tbar.sqrt())
            .collect();
        Ok(ErrorLattice {
            n,
            tbar,
            vbar,
            nodes,
            weights,
            interp,
        })
    }

    /// Physical lattice points, last axis fastest.
    pub fn points(&self) -> Vec<[f64; 3]> {
        let s = self.tbar.sqrt();
        let mut out = Vec::with_capacity(self.nodes.len().pow(3));
        for &a in &self.nodes {
            for &b in &self.nodes {
                for &c in &self.nodes {
                    out.push([s * a + self.vbar[0], s * b + self.vbar[1], s * c + self.vbar[2]]);
                }
            }
        }
        out
    }

    /// Density values on the lattice.
    pub fn values(&self, f: &SpectralDensity) -> Result<Vec<f64>> {
        if f.degree() != self.n || f.tbar() != self.tbar || f.vbar() != self.vbar {
            return Err(crate::error::invalid("density frame does not match the lattice"));
        }
        let k = self.n + 1;
        let (mut a, mut b, mut p) = (Vec::new(), Vec::new(), Vec::new());
        apply_tensor3(
            f.coeffs(),
            [k, k, k],
            [&self.interp, &self.interp, &self.interp],
            false,
            &mut a,
            &mut b,
            &mut p,
        );
        let m = self.nodes.len();
        for i in 0..m {
            for j in 0..m {
                for l in 0..m {
                    let x2 = self.nodes[i].powi(2) + self.nodes[j].powi(2) + self.nodes[l].powi(2);
                    p[(i * m + j) * m + l] *= (-x2).exp();
                }
            }
        }
        Ok(p)
    }

    /// Reference values on the lattice; non-finite samples are an error.
    pub fn reference(&self, reference: impl Fn([f64; 3]) -> f64) -> Result<Vec<f64>> {
        self.points()
            .into_iter()
            .map(|v| {
                let r = reference(v);
                if r.is_finite() {
                    Ok(r)
                } else {
                    Err(Error::NonFinite(format!("reference at {v:?}")))
                }
            })
            .collect()
    }

    pub fn distance(&self, f: &SpectralDensity, reference: &[f64]) -> Result<ErrorNorms> {
        let values = self.values(f)?;
        crate::error::check_len("reference values", values.len(), reference.len())?;
        let m = self.nodes.len();
        let mut l2 = 0.0;
        let mut linf = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                for l in 0..m {
                    let idx = (i * m + j) * m + l;
                    let d = values[idx] - reference[idx];
                    linf = linf.max(d.abs());
                    l2 += self.weights[i] * self.weights[j] * self.weights[l] * d * d;
                }
            }
        }
        Ok(ErrorNorms { l2: l2.sqrt(), linf })
    }
}

/// Distances of `f` to `reference` on the `(2N+1)^3` lattice of its frame.
pub fn error_norms(f: &SpectralDensity, reference: impl Fn([f64; 3]) -> f64) -> Result<ErrorNorms> {
    let lattice = ErrorLattice::new(f.degree(), f.tbar(), f.vbar())?;
    let r = lattice.reference(reference)?;
    lattice.distance(f, &r)
}
