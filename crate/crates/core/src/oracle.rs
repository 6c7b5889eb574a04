//! Brute-force reference for the tested collision form at small degree.
//!
//! `q[n, m, j] = int int e^{-|v|^2 - |w|^2} L_n(v) L_m(w)
//!   int B (L_j(v') - L_j(v)) de' dw dv` in the centred frame, integrated in
//! mean/relative velocity `v = c + r e`, `w = c - r e` with a Gauss–Hermite
//! rule in `c`, a generalized Gauss–Laguerre rule in `2 r^2` (which absorbs
//! `|v - w|^beta`), and product sphere rules in `e` and `e'`. For polynomial
//! angular laws every stage is exact once the orders reach
//! [`OracleConfig::exact`].

use std::f64::consts::SQRT_2;
use std::path::Path;

use rayon::prelude::*;

use crate::collision::SpectralDensity;
use crate::error::{check_len, invalid, Error, Result};
use crate::kernel::{prefactor, CollisionKernel};
use crate::linalg::{gemm, Matrix};
use crate::specfun::{gauss_hermite, gauss_laguerre, LagrangeBasis, SphereRule};

/// Largest trial degree the oracle accepts.
pub const MAX_ORACLE_DEGREE: usize = 4;

const MAGIC: &[u8; 4] = b"BGOR";

/// Quadrature orders of the four integration stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Gauss–Hermite points per axis for the mean velocity.
    pub mean_order: usize,
    /// Gauss–Laguerre points for the relative speed.
    pub radial_order: usize,
    /// Legendre points of the sphere rule for the relative direction.
    pub sphere_order: usize,
    /// Legendre points of the sphere rule for the post-collision direction.
    pub scatter_order: usize,
}

impl OracleConfig {
    /// Smallest orders that integrate every stage exactly for degree `n`
    /// and a polynomial (in particular constant) angular law.
    pub fn exact(n: usize) -> Self {
        OracleConfig {
            mean_order: (3 * n + 2) / 2,
            radial_order: (9 * n / 2 + 2) / 2,
            sphere_order: (9 * n + 2) / 2,
            scatter_order: (3 * n + 2) / 2,
        }
    }

    /// Every order raised by `by`.
    pub fn raised(&self, by: usize) -> Self {
        OracleConfig {
            mean_order: self.mean_order + by,
            radial_order: self.radial_order + by,
            sphere_order: self.sphere_order + by,
            scatter_order: self.scatter_order + by,
        }
    }
}

/// `q[n, m, j]` stored with `j` fastest, plus the kernel exponent and the
/// estimated accuracy of the entries.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleTensor {
    n: usize,
    beta: f64,
    tolerance: f64,
    data: Vec<f64>,
}

impl OracleTensor {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Largest entry change between the final and the previous refinement,
    /// relative to the largest entry; `NaN` if no refinement was run.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, n: usize, m: usize, j: usize) -> f64 {
        let k3 = (self.n + 1).pow(3);
        self.data[(n * k3 + m) * k3 + j]
    }

    /// Tested collision vector of a density, including the frame prefactor.
    pub fn apply(&self, f: &SpectralDensity) -> Result<Vec<f64>> {
        if f.degree() != self.n {
            return Err(invalid("density degree does not match the oracle"));
        }
        let mut q = oracle_apply(self, f.coeffs())?;
        let scale = prefactor(f.tbar(), self.beta);
        for v in &mut q {
            *v *= scale;
        }
        Ok(q)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let k3 = (self.n + 1).pow(3);
        let tensor = Matrix::from_vec(k3 * k3, k3, self.data.clone())?;
        let meta = Matrix::from_vec(1, 2, vec![self.beta, self.tolerance])?;
        crate::cache::write(path, MAGIC, &[self.n as u32], &[&meta, &tensor])
    }

    pub fn load(path: &Path) -> Result<Self> {
        let (header, mut mats) = crate::cache::read(path, MAGIC, 1)?;
        let n = header[0] as usize;
        let k3 = (n + 1).pow(3);
        if mats.len() != 2 || mats[0].cols() != 2 || mats[1].rows() != k3 * k3 || mats[1].cols() != k3 {
            return Err(Error::Cache(format!("{}: unexpected oracle layout", path.display())));
        }
        let tensor = mats.pop().expect("two matrices");
        let meta = mats.pop().expect("two matrices");
        Ok(OracleTensor {
            n,
            beta: meta.get(0, 0),
            tolerance: meta.get(0, 1),
            data: tensor.as_slice().to_vec(),
        })
    }
}

/// `q_j = sum_{n,m} c_n c_m q[n, m, j]` (centred frame, no prefactor).
pub fn oracle_apply(tensor: &OracleTensor, c: &[f64]) -> Result<Vec<f64>> {
    let k3 = (tensor.n + 1).pow(3);
    check_len("nodal coefficients", k3, c.len())?;
    let mut out = vec![0.0; k3];
    for (n, cn) in c.iter().enumerate() {
        if *cn == 0.0 {
            continue;
        }
        for (m, cm) in c.iter().enumerate() {
            let row = &tensor.data[(n * k3 + m) * k3..(n * k3 + m + 1) * k3];
            let w = cn * cm;
            for (o, q) in out.iter_mut().zip(row) {
                *o += w * q;
            }
        }
    }
    Ok(out)
}

fn tensor_lagrange(basis: &LagrangeBasis, x: [f64; 3], axes: &mut [Vec<f64>; 3], out: &mut [f64]) {
    for d in 0..3 {
        basis.eval_into(x[d], &mut axes[d]);
    }
    let k = basis.len();
    for i in 0..k {
        for j in 0..k {
            let a = axes[0][i] * axes[1][j];
            for l in 0..k {
                out[(i * k + j) * k + l] = a * axes[2][l];
            }
        }
    }
}

/// Build the tensor with fixed quadrature orders.
pub fn build_oracle(n: usize, kernel: &CollisionKernel, config: &OracleConfig) -> Result<OracleTensor> {
    if n > MAX_ORACLE_DEGREE {
        return Err(invalid(format!(
            "oracle refused for degree {n}: the dense tensor is limited to degree {MAX_ORACLE_DEGREE}"
        )));
    }
    let beta = kernel.beta();
    let k3 = (n + 1).pow(3);
    let k6 = k3 * k3;
    let basis = LagrangeBasis::gauss_hermite(n)?;

    // mean velocity: weight e^{-2|c|^2}
    let mean = gauss_hermite(config.mean_order)?;
    let mean_nodes: Vec<f64> = mean.nodes().iter().map(|x| x / SQRT_2).collect();
    let mean_weights: Vec<f64> = mean.weights().iter().map(|w| w / SQRT_2).collect();
    // relative speed: r^{2+beta} e^{-2 r^2} dr with y = 2 r^2
    let radial = gauss_laguerre(config.radial_order, 0.5 * (1.0 + beta))?;
    let radial_const = 2f64.powf(-0.5 * (2.0 + beta)) / (2.0 * SQRT_2);
    let dirs = SphereRule::new(config.sphere_order)?;
    let scatter = SphereRule::new(config.scatter_order)?;
    // pair Jacobian 8 and |v - w|^beta = 2^beta r^beta
    let global = 8.0 * 2f64.powf(beta);
    // b(e . e') for every direction pair, and its row sums
    let n_dir = dirs.len();
    let n_sc = scatter.len();
    let mut b_table = vec![0.0; n_dir * n_sc];
    let mut b_sum = vec![0.0; n_dir];
    for p in 0..n_dir {
        let e = dirs.points[p];
        for s in 0..n_sc {
            let e2 = scatter.points[s];
            let b = scatter.weights[s] * kernel.b_theta(e[0] * e2[0] + e[1] * e2[1] + e[2] * e2[2]);
            b_table[p * n_sc + s] = b;
            b_sum[p] += b;
        }
    }

    let nm = config.mean_order;
    let partials: Vec<Vec<f64>> = (0..nm)
        .into_par_iter()
        .map(|i0| {
            let mut acc = vec![0.0; k6 * k3];
            let mut axes = [vec![0.0; n + 1], vec![0.0; n + 1], vec![0.0; n + 1]];
            let mut post = vec![0.0; n_sc * k3];
            let mut gain = vec![0.0; n_dir * k3];
            let mut xv = vec![0.0; k3];
            let mut xw = vec![0.0; k3];
            let mut pairs = vec![0.0; n_dir * k6];
            let mut z = vec![0.0; n_dir * k3];
            for i1 in 0..nm {
                for i2 in 0..nm {
                    let c = [mean_nodes[i0], mean_nodes[i1], mean_nodes[i2]];
                    let wc = mean_weights[i0] * mean_weights[i1] * mean_weights[i2];
                    for (&y, &wy) in radial.nodes().iter().zip(radial.weights()) {
                        let r = (0.5 * y).sqrt();
                        let w_outer = global * wc * radial_const * wy;
                        for (s, e2) in scatter.points.iter().enumerate() {
                            let x = [c[0] + r * e2[0], c[1] + r * e2[1], c[2] + r * e2[2]];
                            tensor_lagrange(&basis, x, &mut axes, &mut post[s * k3..(s + 1) * k3]);
                        }
                        // gain[p, j] = sum_s b(e_p . e'_s) L_j(c + r e'_s)
                        gemm(
                            n_dir,
                            n_sc,
                            k3,
                            1.0,
                            (&b_table, n_sc, 1),
                            (&post, k3, 1),
                            0.0,
                            (&mut gain, k3, 1),
                        );
                        for (p, e) in dirs.points.iter().enumerate() {
                            let v = [c[0] + r * e[0], c[1] + r * e[1], c[2] + r * e[2]];
                            let w = [c[0] - r * e[0], c[1] - r * e[1], c[2] - r * e[2]];
                            tensor_lagrange(&basis, v, &mut axes, &mut xv);
                            tensor_lagrange(&basis, w, &mut axes, &mut xw);
                            let wp = w_outer * dirs.weights[p];
                            for j in 0..k3 {
                                z[p * k3 + j] = wp * (gain[p * k3 + j] - b_sum[p] * xv[j]);
                            }
                            let row = &mut pairs[p * k6..(p + 1) * k6];
                            for (a, xa) in xv.iter().enumerate() {
                                for (b, xb) in xw.iter().enumerate() {
                                    row[a * k3 + b] = xa * xb;
                                }
                            }
                        }
                        // acc[(n,m), j] += sum_p pairs[p, (n,m)] z[p, j]
                        gemm(
                            k6,
                            n_dir,
                            k3,
                            1.0,
                            (&pairs, 1, k6),
                            (&z, k3, 1),
                            1.0,
                            (&mut acc, k3, 1),
                        );
                    }
                }
            }
            acc
        })
        .collect();
    let mut data = vec![0.0; k6 * k3];
    for part in &partials {
        for (a, b) in data.iter_mut().zip(part) {
            *a += b;
        }
    }
    Ok(OracleTensor {
        n,
        beta,
        tolerance: f64::NAN,
        data,
    })
}

/// Build at `start` and at successively raised orders until two consecutive
/// tensors differ by less than `tol` relative to the largest entry (at most
/// `max_rounds` refinements). The achieved difference is recorded.
pub fn build_oracle_refined(
    n: usize,
    kernel: &CollisionKernel,
    start: OracleConfig,
    tol: f64,
    max_rounds: usize,
) -> Result<OracleTensor> {
    let mut config = start;
    let mut current = build_oracle(n, kernel, &config)?;
    for _ in 0..max_rounds.max(1) {
        config = config.raised(2);
        let mut next = build_oracle(n, kernel, &config)?;
        let scale = next.data.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let change = current
            .data
            .iter()
            .zip(&next.data)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        next.tolerance = change / scale.max(f64::MIN_POSITIVE);
        current = next;
        if current.tolerance < tol {
            break;
        }
    }
    Ok(current)
}

/// Load from `dir` when a cache for this degree and exponent exists,
/// otherwise build with [`build_oracle_refined`] and store.
pub fn cached_oracle(n: usize, kernel: &CollisionKernel, dir: &Path) -> Result<OracleTensor> {
    let path = dir.join(format!("oracle_n{n}_{}.bgor", kernel.to_string().replace([':', '=', ','], "_")));
    if let Ok(t) = OracleTensor::load(&path) {
        if t.n == n && t.beta == kernel.beta() {
            return Ok(t);
        }
    }
    let t = build_oracle_refined(n, kernel, OracleConfig::exact(n), 1e-7, 1)?;
    t.save(&path)?;
    Ok(t)
}
