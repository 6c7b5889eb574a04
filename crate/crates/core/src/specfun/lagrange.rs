//! Lagrange collocation polynomials on Gauss–Hermite nodes, evaluated in
//! barycentric form.

use super::quadrature::gauss_hermite;
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
    bary: Vec<f64>,
}

impl LagrangeBasis {
    /// Basis interpolating on the given (distinct) nodes.
    pub fn new(nodes: &[f64]) -> Self {
        let n = nodes.len();
        let mut bary = vec![1.0; n];
        for j in 0..n {
            for k in 0..n {
                if k != j {
                    bary[j] /= nodes[j] - nodes[k];
                }
            }
        }
        let scale = bary.iter().fold(0.0f64, |m, w| m.max(w.abs()));
        for w in &mut bary {
            *w /= scale;
        }
        LagrangeBasis {
            nodes: nodes.to_vec(),
            bary,
        }
    }

    /// Basis on the `n + 1` Gauss–Hermite nodes (polynomial degree `n`).
    pub fn gauss_hermite(n: usize) -> Result<Self> {
        Ok(Self::new(gauss_hermite(n + 1)?.nodes()))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `out[j] = l_j(x)`.
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.nodes.len());
        if let Some(hit) = self.nodes.iter().position(|&xj| xj == x) {
            out.fill(0.0);
            out[hit] = 1.0;
            return;
        }
        let mut denom = 0.0;
        for ((o, &xj), &wj) in out.iter_mut().zip(&self.nodes).zip(&self.bary) {
            let t = wj / (x - xj);
            *o = t;
            denom += t;
        }
        for o in out.iter_mut() {
            *o /= denom;
        }
    }

    pub fn eval(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.nodes.len()];
        self.eval_into(x, &mut out);
        out
    }
}

/// `[l_0(v / scale), ..., l_n(v / scale)]` for the Lagrange polynomials on the
/// `n + 1` Gauss–Hermite nodes.
pub fn eval_lagrange_all(n: usize, scale: f64, v: f64) -> Result<Vec<f64>> {
    if !(scale > 0.0) {
        return Err(crate::error::invalid(format!(
            "Lagrange argument scale must be positive, got {scale}"
        )));
    }
    Ok(LagrangeBasis::gauss_hermite(n)?.eval(v / scale))
}
