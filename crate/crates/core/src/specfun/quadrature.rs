//! One-dimensional Gauss rules built with the Golub–Welsch algorithm.
//!
//! Nodes are the eigenvalues of the symmetric Jacobi matrix of the weight's
//! orthonormal three-term recurrence. Each node gets one Newton polish on the
//! degree-`n` orthonormal polynomial, and weights come from the Christoffel
//! function `1 / sum_k p_k(x)^2`, which keeps tiny tail weights accurate to
//! full relative precision (the eigenvector route loses them).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Result};

/// Weight function a rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    /// `e^{-v^2}` on the real line.
    Hermite,
    /// `e^{-x} x^alpha` on `(0, inf)`.
    GeneralizedLaguerre { alpha: f64 },
    /// `1` on `[-1, 1]`.
    Legendre,
}

impl RuleKind {
    /// Integral of the weight function itself.
    pub fn total_mass(&self) -> f64 {
        match *self {
            RuleKind::Hermite => std::f64::consts::PI.sqrt(),
            RuleKind::GeneralizedLaguerre { alpha } => libm::tgamma(alpha + 1.0),
            RuleKind::Legendre => 2.0,
        }
    }
}

/// Nodes and weights of an `n`-point Gauss rule. The weights include the
/// weight function, so `sum w_i p(x_i)` approximates `int w(x) p(x) dx`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: RuleKind,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Orthonormal three-term recurrence
/// `x p_k = a_{k+1} p_{k+1} + b_k p_k + a_k p_{k-1}`, `p_0 = mu0^{-1/2}`.
#[derive(Debug, Clone)]
pub(crate) struct Recurrence {
    /// `b_k` for `k = 0..n`
    pub diag: Vec<f64>,
    /// `a_k` for `k = 0..=n` (`a_0` unused)
    pub off: Vec<f64>,
    /// `ln` of the weight's total mass
    pub ln_mu0: f64,
}

impl Recurrence {
    fn hermite(n: usize) -> Self {
        Recurrence {
            diag: vec![0.0; n],
            off: (0..=n).map(|k| (0.5 * k as f64).sqrt()).collect(),
            ln_mu0: 0.5 * std::f64::consts::PI.ln(),
        }
    }

    fn laguerre(n: usize, alpha: f64) -> Self {
        Recurrence {
            diag: (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect(),
            off: (0..=n)
                .map(|k| (k as f64 * (k as f64 + alpha)).sqrt())
                .collect(),
            ln_mu0: libm::lgamma(alpha + 1.0),
        }
    }

    fn legendre(n: usize) -> Self {
        Recurrence {
            diag: vec![0.0; n],
            off: (0..=n)
                .map(|k| {
                    if k == 0 {
                        return 0.0;
                    }
                    let k = k as f64;
                    k / (4.0 * k * k - 1.0).sqrt()
                })
                .collect(),
            ln_mu0: 2f64.ln(),
        }
    }

    /// Returns `(p_n(x), p_n'(x), sum_{k<n} p_k(x)^2)`.
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.diag.len();
        let mut p_prev = 0.0;
        let mut d_prev = 0.0;
        let mut p = (-0.5 * self.ln_mu0).exp();
        let mut d = 0.0;
        let mut christoffel = 0.0;
        for k in 0..n {
            christoffel += p * p;
            let a_next = self.off[k + 1];
            let shift = x - self.diag[k];
            let p_next = (shift * p - self.off[k] * p_prev) / a_next;
            let d_next = (p + shift * d - self.off[k] * d_prev) / a_next;
            p_prev = p;
            d_prev = d;
            p = p_next;
            d = d_next;
        }
        (p, d, christoffel)
    }

    fn rule(&self, kind: RuleKind) -> QuadratureRule {
        let n = self.diag.len();
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            jacobi[(k, k)] = self.diag[k];
            if k + 1 < n {
                jacobi[(k, k + 1)] = self.off[k + 1];
                jacobi[(k + 1, k)] = self.off[k + 1];
            }
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

        let weights = nodes
            .iter_mut()
            .map(|x| {
                let (p, d, _) = self.eval(*x);
                if d != 0.0 && p.is_finite() && d.is_finite() {
                    let step = p / d;
                    if step.abs() < 1e-6 * (1.0 + x.abs()) {
                        *x -= step;
                    }
                }
                1.0 / self.eval(*x).2
            })
            .collect();
        QuadratureRule {
            nodes,
            weights,
            kind,
        }
    }
}

fn symmetrize(rule: &mut QuadratureRule) {
    let n = rule.nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        let w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if n % 2 == 1 {
        rule.nodes[n / 2] = 0.0;
    }
}

/// `n`-point Gauss–Hermite rule for the weight `e^{-v^2}`.
///
/// Nodes and weights are exactly mirror-symmetric about zero.
pub fn gauss_hermite(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(invalid("gauss_hermite needs at least one node"));
    }
    let mut rule = Recurrence::hermite(n).rule(RuleKind::Hermite);
    symmetrize(&mut rule);
    Ok(rule)
}

/// `n`-point generalized Gauss–Laguerre rule for the weight `e^{-x} x^alpha`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(invalid("gauss_laguerre needs at least one node"));
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(invalid(format!(
            "gauss_laguerre needs alpha > -1, got {alpha}"
        )));
    }
    Ok(Recurrence::laguerre(n, alpha).rule(RuleKind::GeneralizedLaguerre { alpha }))
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(invalid("gauss_legendre needs at least one node"));
    }
    let mut rule = Recurrence::legendre(n).rule(RuleKind::Legendre);
    symmetrize(&mut rule);
    Ok(rule)
}

/// Tensor product of a 1D rule with itself in three dimensions.
///
/// Points are ordered with the last axis fastest: index `(i*n + j)*n + k`.
#[derive(Debug, Clone)]
pub struct TensorRule3 {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl TensorRule3 {
    pub fn new(rule: &QuadratureRule) -> Self {
        let n = rule.order();
        let mut points = Vec::with_capacity(n * n * n);
        let mut weights = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    points.push([rule.nodes[i], rule.nodes[j], rule.nodes[k]]);
                    weights.push(rule.weights[i] * rule.weights[j] * rule.weights[k]);
                }
            }
        }
        TensorRule3 { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}


/// Product rule on the unit sphere: `n` Gauss–Legendre points in `cos theta`
/// times `2n` equispaced azimuths. Exact for spherical polynomials of degree
/// at most `2n - 1`; weights sum to `4 pi`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(n: usize) -> Result<Self> {
        let polar = gauss_legendre(n)?;
        let n_phi = 2 * n;
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut points = Vec::with_capacity(n * n_phi);
        let mut weights = Vec::with_capacity(n * n_phi);
        for (&x, &w) in polar.nodes().iter().zip(polar.weights()) {
            let s = (1.0 - x * x).max(0.0).sqrt();
            for k in 0..n_phi {
                let (sp, cp) = (k as f64 * dphi).sin_cos();
                points.push([s * cp, s * sp, x]);
                weights.push(w * dphi);
            }
        }
        Ok(SphereRule { points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
