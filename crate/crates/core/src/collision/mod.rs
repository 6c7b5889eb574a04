//! The tested collision operator `q_n = int Q(f)(v) L_n(x) dv` of a
//! [`SpectralDensity`].
//!
//! For every node `a` of the outer Gauss–Hermite rule the pair product
//! `p(a/sqrt2 + u/sqrt2) p(a/sqrt2 - u/sqrt2)` is sampled on the fine grid,
//! projected onto Hermite modes, carried to the spherical basis where the
//! inner operator is diagonal, and tested against the shifted Lagrange
//! functions with the transposed chain.

mod density;

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use rayon::prelude::*;

pub use density::SpectralDensity;

use crate::bases::{TransformScratch, TransformSet};
use crate::error::{check_len, invalid, Error, Result};
use crate::kernel::{prefactor, CollisionKernel, KernelOperator};
use crate::linalg::{apply_tensor3, Matrix};
use crate::specfun::{gauss_hermite, hermite_into};

/// Per-worker scratch space, reused across outer nodes.
#[derive(Debug, Clone)]
pub struct CollisionWorkspace {
    shifted: Vec<f64>,
    pair: Vec<f64>,
    hermite: Vec<f64>,
    cylinder: Vec<f64>,
    spherical: Vec<f64>,
    inner: Vec<f64>,
    dense: Vec<f64>,
    tested: Vec<f64>,
    scratch: TransformScratch,
    acc: Vec<f64>,
}

impl CollisionWorkspace {
    pub fn new(transforms: &TransformSet) -> Self {
        let hd = transforms.hier_dim();
        let r = transforms.nodal_to_hermite_matrix().rows();
        let f = transforms.fine_dim();
        CollisionWorkspace {
            shifted: vec![0.0; f],
            pair: vec![0.0; f],
            hermite: vec![0.0; hd],
            cylinder: vec![0.0; hd],
            spherical: vec![0.0; hd],
            inner: vec![0.0; hd],
            dense: vec![0.0; r * r * r],
            tested: vec![0.0; transforms.nodal_dim()],
            scratch: TransformScratch::default(),
            acc: vec![0.0; transforms.nodal_dim()],
        }
    }

    /// Heap bytes held by the workspace once warmed up.
    pub fn bytes(&self) -> usize {
        let n = self.shifted.capacity()
            + self.pair.capacity()
            + self.hermite.capacity()
            + self.cylinder.capacity()
            + self.spherical.capacity()
            + self.inner.capacity()
            + self.dense.capacity()
            + self.tested.capacity()
            + self.acc.capacity()
            + self.scratch.a.capacity().max(self.fine_len())
            + self.scratch.b.capacity().max(self.fine_len())
            + self.scratch.c.capacity().max(self.dense.len());
        n * std::mem::size_of::<f64>()
    }

    fn fine_len(&self) -> usize {
        self.pair.len()
    }
}

/// `e_J = s_J s_{L-1-J}`: the reversed flat index is the mirrored node.
pub fn compute_f2(shifted: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; shifted.len()];
    compute_f2_into(shifted, &mut e);
    e
}

fn compute_f2_into(shifted: &[f64], e: &mut [f64]) {
    for (ej, (a, b)) in e.iter_mut().zip(shifted.iter().zip(shifted.iter().rev())) {
        *ej = a * b;
    }
}

/// Diagonal scaling of spherical coefficients by per-mode eigenvalues.
pub fn apply_inner_operator(phi: &[f64], eigenvalues: &[f64]) -> Result<Vec<f64>> {
    check_len("eigenvalue table", phi.len(), eigenvalues.len())?;
    Ok(phi.iter().zip(eigenvalues).map(|(p, d)| p * d).collect())
}

/// `dc_n/dt = q_n / (T^{3/2} w_n)` with `w_n` the tensor collocation weight.
pub fn galerkin_rhs(q: &[f64], tbar: f64, transforms: &TransformSet) -> Result<Vec<f64>> {
    check_len("tested collision vector", transforms.nodal_dim(), q.len())?;
    let w = transforms.trial_rule().weights();
    let k = w.len();
    let scale = tbar.powf(-1.5);
    Ok(q.iter()
        .enumerate()
        .map(|(idx, qn)| {
            let (i, j, l) = (idx / (k * k), (idx / k) % k, idx % k);
            qn * scale / (w[i] * w[j] * w[l])
        })
        .collect())
}

/// Tested vector against the tensor Hermite functions `H_abc(x)` of total
/// degree `<= N`, ordered like the hierarchical Hermite layout.
pub fn hermite_tested(q: &[f64], transforms: &TransformSet) -> Result<Vec<f64>> {
    check_len("tested collision vector", transforms.nodal_dim(), q.len())?;
    let n = transforms.trial_degree();
    let k = n + 1;
    let nodes = transforms.trial_rule().nodes();
    let h = Matrix::from_fn(k, k, |a, j| {
        let mut buf = vec![0.0; k];
        hermite_into(nodes[j], &mut buf);
        buf[a]
    });
    let (mut s1, mut s2, mut out) = (Vec::new(), Vec::new(), Vec::new());
    apply_tensor3(q, [k, k, k], [&h, &h, &h], false, &mut s1, &mut s2, &mut out);
    let maps = crate::bases::BasisIndexMaps::new(n);
    Ok(maps
        .hermite()
        .iter()
        .map(|m| out[(m.a * k + m.b) * k + m.c])
        .collect())
}

/// Tested moments `sum_n q_n phi(x_n)` for `phi` in `{1, x1, x2, x3, |x|^2}`
/// (frame coordinates), each relative to `sum_n |q_n phi(x_n)|`. These are
/// the collision invariants, exactly represented when `N >= 2`.
pub fn invariant_residuals(q: &[f64], transforms: &TransformSet) -> Result<[f64; 5]> {
    check_len("tested collision vector", transforms.nodal_dim(), q.len())?;
    let nodes = transforms.trial_rule().nodes();
    let k = nodes.len();
    let mut sums = [0.0; 5];
    let mut scales = [0.0; 5];
    for (idx, qn) in q.iter().enumerate() {
        let x = [nodes[idx / (k * k)], nodes[(idx / k) % k], nodes[idx % k]];
        let phi = [1.0, x[0], x[1], x[2], x[0] * x[0] + x[1] * x[1] + x[2] * x[2]];
        for m in 0..5 {
            sums[m] += qn * phi[m];
            scales[m] += (qn * phi[m]).abs();
        }
    }
    Ok(std::array::from_fn(|m| sums[m].abs() / scales[m].max(f64::MIN_POSITIVE)))
}

/// The collision operator for one trial degree, kernel and outer rule.
#[derive(Debug, Clone)]
pub struct CollisionOperator {
    transforms: Arc<TransformSet>,
    kernel: KernelOperator,
    n_ip: usize,
    weights: Vec<f64>,
    shifts: Vec<Matrix>,
    tests: Vec<Matrix>,
}

impl CollisionOperator {
    /// `n_ip` outer Gauss–Hermite points per axis.
    pub fn new(transforms: Arc<TransformSet>, kernel: &CollisionKernel, n_ip: usize) -> Result<Self> {
        if n_ip == 0 {
            return Err(invalid("the outer rule needs at least one point per axis"));
        }
        let rule = gauss_hermite(n_ip)?;
        let centres: Vec<f64> = rule.nodes().iter().map(|a| a / SQRT_2).collect();
        let shifts = centres.iter().map(|&c| transforms.shift_matrix(c)).collect();
        let tests = centres.iter().map(|&c| transforms.test_matrix(c)).collect();
        let kernel = KernelOperator::new(kernel, transforms.maps())?;
        Ok(CollisionOperator {
            transforms,
            kernel,
            n_ip,
            weights: rule.weights().to_vec(),
            shifts,
            tests,
        })
    }

    pub fn transforms(&self) -> &Arc<TransformSet> {
        &self.transforms
    }

    pub fn kernel(&self) -> &KernelOperator {
        &self.kernel
    }

    pub fn n_ip(&self) -> usize {
        self.n_ip
    }

    /// Stored matrix entries: transforms, kernel tables, shift and test matrices.
    pub fn stored_entries(&self) -> usize {
        let count = |m: &Matrix| m.rows() * m.cols();
        self.transforms.stored_entries()
            + self.kernel.stored_entries()
            + self.shifts.iter().map(count).sum::<usize>()
            + self.tests.iter().map(count).sum::<usize>()
    }

    /// Bytes of all stored matrices plus one warmed-up workspace.
    pub fn storage_bytes(&self) -> usize {
        self.stored_entries() * std::mem::size_of::<f64>() + CollisionWorkspace::new(&self.transforms).bytes()
    }

    fn check(&self, f: &SpectralDensity) -> Result<()> {
        if f.degree() != self.transforms.trial_degree() {
            return Err(invalid(format!(
                "density has degree {} but the operator was built for {}",
                f.degree(),
                self.transforms.trial_degree()
            )));
        }
        if f.coeffs().iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("density coefficients".into()));
        }
        Ok(())
    }

    /// Adds `weight` times the contribution of outer node `node` to `ws.acc`.
    fn accumulate(&self, ws: &mut CollisionWorkspace, c: &[f64], node: [usize; 3], weight: f64) {
        let t = &*self.transforms;
        let k = t.trial_degree() + 1;
        let r = t.nodal_to_hermite_matrix().rows();
        let [i0, i1, i2] = node;
        let TransformScratch { a, b, .. } = &mut ws.scratch;
        apply_tensor3(
            c,
            [k, k, k],
            [&self.shifts[i0], &self.shifts[i1], &self.shifts[i2]],
            false,
            a,
            b,
            &mut ws.shifted,
        );
        compute_f2_into(&ws.shifted, &mut ws.pair);
        t.nodal_to_hermite_into(&ws.pair, &mut ws.hermite, &mut ws.scratch);
        t.hermite_to_cylinder_into(&ws.hermite, &mut ws.cylinder);
        t.cylinder_to_spherical_into(&ws.cylinder, &mut ws.spherical);
        self.kernel.apply_into(t.maps(), &ws.spherical, &mut ws.inner);
        t.spherical_to_cylinder_into(&ws.inner, &mut ws.cylinder);
        t.cylinder_to_hermite_into(&ws.cylinder, &mut ws.hermite);
        t.scatter_dense(&ws.hermite, &mut ws.dense);
        let TransformScratch { a, b, .. } = &mut ws.scratch;
        apply_tensor3(
            &ws.dense,
            [r, r, r],
            [&self.tests[i0], &self.tests[i1], &self.tests[i2]],
            false,
            a,
            b,
            &mut ws.tested,
        );
        for (acc, v) in ws.acc.iter_mut().zip(&ws.tested) {
            *acc += weight * v;
        }
    }

    /// Contribution of a single outer node, without the outer weight and the
    /// frame prefactor.
    pub fn node_contribution(&self, f: &SpectralDensity, node: [usize; 3]) -> Result<Vec<f64>> {
        self.check(f)?;
        if node.iter().any(|&i| i >= self.n_ip) {
            return Err(invalid(format!("outer node {node:?} out of range")));
        }
        let mut ws = CollisionWorkspace::new(&self.transforms);
        self.accumulate(&mut ws, f.coeffs(), node, 1.0);
        Ok(ws.acc)
    }

    /// `q_n = int Q(f) L_n(x) dv`.
    ///
    /// The outer loop is split by first-axis node; each chunk is summed in
    /// node order and chunks are added in index order, so the result does not
    /// depend on the number of worker threads.
    pub fn evaluate(&self, f: &SpectralDensity) -> Result<Vec<f64>> {
        self.check(f)?;
        let c = f.coeffs();
        let partials: Vec<Vec<f64>> = (0..self.n_ip)
            .into_par_iter()
            .map_init(
                || CollisionWorkspace::new(&self.transforms),
                |ws, i0| {
                    ws.acc.fill(0.0);
                    for i1 in 0..self.n_ip {
                        for i2 in 0..self.n_ip {
                            let w = self.weights[i0] * self.weights[i1] * self.weights[i2];
                            self.accumulate(ws, c, [i0, i1, i2], w);
                        }
                    }
                    ws.acc.clone()
                },
            )
            .collect();
        let mut q = vec![0.0; self.transforms.nodal_dim()];
        for part in &partials {
            for (a, b) in q.iter_mut().zip(part) {
                *a += b;
            }
        }
        let scale = prefactor(f.tbar(), self.kernel.kernel().beta());
        for v in &mut q {
            *v *= scale;
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("collision output".into()));
        }
        Ok(q)
    }

    /// Time derivative of the nodal coefficients.
    pub fn rhs(&self, f: &SpectralDensity) -> Result<Vec<f64>> {
        let q = self.evaluate(f)?;
        galerkin_rhs(&q, f.tbar(), &self.transforms)
    }
}

/// One-shot evaluation; build a [`CollisionOperator`] to evaluate repeatedly.
pub fn evaluate_collision(
    f: &SpectralDensity,
    kernel: &CollisionKernel,
    transforms: Arc<TransformSet>,
    n_ip: usize,
) -> Result<Vec<f64>> {
    CollisionOperator::new(transforms, kernel, n_ip)?.evaluate(f)
}
