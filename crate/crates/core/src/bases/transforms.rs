//! The nodal -> Hermite -> cylinder -> spherical transform chain, its
//! transposes, and the 1D shift matrices.

use std::f64::consts::{PI, SQRT_2};

use super::functions::{polar_laguerre, polar_norm};
use super::index::{planar_offset, BasisIndexMaps, Trig};
use crate::error::{check_len, invalid, Result};
use crate::linalg::{apply_tensor3, Matrix};
use crate::specfun::{
    gauss_hermite, gauss_laguerre, gauss_legendre, hermite_into, laguerre_into, LagrangeBasis,
    NormalizedLegendre, QuadratureRule,
};

/// Precomputed transforms for trial degree `N` and hierarchical degree `M`.
///
/// Immutable after construction and shared read-only between threads.
#[derive(Debug, Clone)]
pub struct TransformSet {
    n: usize,
    maps: BasisIndexMaps,
    fine: QuadratureRule,
    fine_shift: Vec<f64>,
    lagrange: LagrangeBasis,
    trial: QuadratureRule,
    nodal_to_hermite: Matrix,
    dense_of_flat: Vec<Option<usize>>,
    planar_blocks: Vec<Matrix>,
    angular_blocks: Vec<Matrix>,
}

/// Scratch buffers for the allocation-free transform entry points.
#[derive(Debug, Default, Clone)]
pub struct TransformScratch {
    pub(crate) a: Vec<f64>,
    pub(crate) b: Vec<f64>,
    pub(crate) c: Vec<f64>,
}

impl TransformSet {
    /// Transforms that truncate the pair product to total degree `N`.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_degree(n, n)
    }

    /// Transforms that keep the pair product up to total degree `m`.
    ///
    /// The pair product of a trial polynomial has degree at most `2N` per
    /// axis and `6N` in total, so `m >= 6N` removes the truncation entirely.
    pub fn with_degree(n: usize, m: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!(
                "trial degree must be at least 2 to hold the collision invariants, got {n}"
            )));
        }
        if m < 2 {
            return Err(invalid(format!("hierarchical degree must be at least 2, got {m}")));
        }
        let mut set = Self::skeleton(n, m)?;
        set.nodal_to_hermite = build_nodal_to_hermite(&set.fine, m.min(2 * n));
        set.planar_blocks = (0..=m).map(build_planar_block).collect::<Result<_>>()?;
        set.angular_blocks = build_angular_blocks(&set.maps)?;
        Ok(set)
    }

    pub(crate) fn from_parts(
        n: usize,
        m: usize,
        nodal_to_hermite: Matrix,
        planar_blocks: Vec<Matrix>,
        angular_blocks: Vec<Matrix>,
    ) -> Result<Self> {
        let mut set = Self::skeleton(n, m)?;
        let expect = |what: &str, a: &Matrix, rows: usize, cols: usize| {
            if a.rows() == rows && a.cols() == cols {
                Ok(())
            } else {
                Err(crate::Error::Cache(format!(
                    "{what}: expected {rows}x{cols}, found {}x{}",
                    a.rows(),
                    a.cols()
                )))
            }
        };
        expect("nodal-to-Hermite", &nodal_to_hermite, m.min(2 * n) + 1, 2 * n + 1)?;
        if planar_blocks.len() != m + 1 || angular_blocks.len() != set.maps.groups().len() {
            return Err(crate::Error::Cache("block count does not match the degree".into()));
        }
        for (i, b) in planar_blocks.iter().enumerate() {
            expect("planar block", b, i + 1, i + 1)?;
        }
        for (g, b) in set.maps.groups().iter().zip(&angular_blocks) {
            expect("angular block", b, g.len(), g.len())?;
        }
        set.nodal_to_hermite = nodal_to_hermite;
        set.planar_blocks = planar_blocks;
        set.angular_blocks = angular_blocks;
        Ok(set)
    }

    /// Everything except the three transform families.
    fn skeleton(n: usize, m: usize) -> Result<Self> {
        if n < 2 || m < 2 {
            return Err(invalid("trial and hierarchical degree must be at least 2"));
        }
        let maps = BasisIndexMaps::new(m);
        let fine = gauss_hermite(2 * n + 1)?;
        let trial = gauss_hermite(n + 1)?;
        let r = m.min(2 * n) + 1;
        let dense_of_flat = maps
            .hermite()
            .iter()
            .map(|h| (h.a < r && h.b < r && h.c < r).then(|| (h.a * r + h.b) * r + h.c))
            .collect();
        Ok(TransformSet {
            n,
            lagrange: LagrangeBasis::new(trial.nodes()),
            fine_shift: fine.nodes().iter().map(|v| v / SQRT_2).collect(),
            maps,
            fine,
            trial,
            nodal_to_hermite: Matrix::zeros(0, 0),
            dense_of_flat,
            planar_blocks: Vec::new(),
            angular_blocks: Vec::new(),
        })
    }

    /// Trial degree `N`.
    pub fn trial_degree(&self) -> usize {
        self.n
    }

    /// Hierarchical truncation degree `M`.
    pub fn degree(&self) -> usize {
        self.maps.degree()
    }

    pub fn maps(&self) -> &BasisIndexMaps {
        &self.maps
    }

    /// `(N+1)^3`.
    pub fn nodal_dim(&self) -> usize {
        (self.n + 1).pow(3)
    }

    /// `(2N+1)^3`.
    pub fn fine_dim(&self) -> usize {
        (2 * self.n + 1).pow(3)
    }

    pub fn hier_dim(&self) -> usize {
        self.maps.hier_dim()
    }

    /// The `(N+1)`-point collocation rule of the trial space.
    pub fn trial_rule(&self) -> &QuadratureRule {
        &self.trial
    }

    /// The `(2N+1)`-point rule carrying the pair product.
    pub fn fine_rule(&self) -> &QuadratureRule {
        &self.fine
    }

    pub fn lagrange(&self) -> &LagrangeBasis {
        &self.lagrange
    }

    /// Rows `i <= min(M, 2N)` of `w_j h_i(v_j)`.
    pub fn nodal_to_hermite_matrix(&self) -> &Matrix {
        &self.nodal_to_hermite
    }

    /// Block of planar degree `i`: rows are cylinder modes, columns `h_a h_{i-a}`.
    pub fn planar_block(&self, i: usize) -> &Matrix {
        &self.planar_blocks[i]
    }

    pub fn planar_blocks(&self) -> &[Matrix] {
        &self.planar_blocks
    }

    /// Blocks in the order of [`BasisIndexMaps::groups`]; rows are spherical
    /// modes (ascending `ell`), columns cylinder modes (ascending planar degree).
    pub fn angular_blocks(&self) -> &[Matrix] {
        &self.angular_blocks
    }

    /// Number of stored matrix entries.
    pub fn stored_entries(&self) -> usize {
        let count = |m: &Matrix| m.rows() * m.cols();
        count(&self.nodal_to_hermite)
            + self.planar_blocks.iter().map(count).sum::<usize>()
            + self.angular_blocks.iter().map(count).sum::<usize>()
    }

    /// `S_{ji} = l_i(shift + mu_j)`, of size `(2N+1) x (N+1)`.
    pub fn shift_matrix(&self, shift: f64) -> Matrix {
        let cols = self.n + 1;
        let mut s = Matrix::zeros(self.fine_shift.len(), cols);
        for (j, mu) in self.fine_shift.iter().enumerate() {
            self.lagrange
                .eval_into(shift + mu, &mut s.as_mut_slice()[j * cols..(j + 1) * cols]);
        }
        s
    }

    /// Shift followed by the Hermite projection, transposed:
    /// `(P S)^T`, of size `(N+1) x R`.
    pub fn test_matrix(&self, shift: f64) -> Matrix {
        self.nodal_to_hermite.matmul(&self.shift_matrix(shift)).transpose()
    }

    fn dense_len(&self) -> usize {
        self.nodal_to_hermite.rows()
    }

    pub(crate) fn gather_dense(&self, dense: &[f64], flat: &mut [f64]) {
        for (out, idx) in flat.iter_mut().zip(&self.dense_of_flat) {
            *out = idx.map_or(0.0, |d| dense[d]);
        }
    }

    pub(crate) fn scatter_dense(&self, flat: &[f64], dense: &mut [f64]) {
        dense.fill(0.0);
        for (x, idx) in flat.iter().zip(&self.dense_of_flat) {
            if let Some(d) = idx {
                dense[*d] = *x;
            }
        }
    }

    /// Nodal values on the fine grid -> Hermite coefficients of total degree `<= M`.
    pub fn nodal_to_hermite(&self, e: &[f64]) -> Result<Vec<f64>> {
        check_len("fine nodal tensor", self.fine_dim(), e.len())?;
        let mut out = vec![0.0; self.hier_dim()];
        self.nodal_to_hermite_into(e, &mut out, &mut TransformScratch::default());
        Ok(out)
    }

    pub(crate) fn nodal_to_hermite_into(
        &self,
        e: &[f64],
        out: &mut [f64],
        scratch: &mut TransformScratch,
    ) {
        let f = 2 * self.n + 1;
        let p = &self.nodal_to_hermite;
        let TransformScratch { a, b, c } = scratch;
        apply_tensor3(e, [f, f, f], [p, p, p], false, a, b, c);
        self.gather_dense(c, out);
    }

    /// Adjoint of [`TransformSet::nodal_to_hermite`].
    pub fn nodal_to_hermite_transpose(&self, h: &[f64]) -> Result<Vec<f64>> {
        check_len("Hermite coefficients", self.hier_dim(), h.len())?;
        let r = self.dense_len();
        let mut dense = vec![0.0; r * r * r];
        self.scatter_dense(h, &mut dense);
        let p = &self.nodal_to_hermite;
        let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
        apply_tensor3(&dense, [r, r, r], [p, p, p], true, &mut a, &mut b, &mut c);
        Ok(c)
    }

    pub fn hermite_to_cylinder(&self, h: &[f64]) -> Result<Vec<f64>> {
        check_len("Hermite coefficients", self.hier_dim(), h.len())?;
        let mut out = vec![0.0; h.len()];
        self.hermite_to_cylinder_into(h, &mut out);
        Ok(out)
    }

    pub(crate) fn hermite_to_cylinder_into(&self, h: &[f64], out: &mut [f64]) {
        for k in 0..=self.degree() {
            for i in 0..=k {
                let off = planar_offset(k, i);
                self.planar_blocks[i].apply_into(&h[off..off + i + 1], &mut out[off..off + i + 1]);
            }
        }
    }

    /// Adjoint (and inverse) of [`TransformSet::hermite_to_cylinder`].
    pub fn cylinder_to_hermite(&self, theta: &[f64]) -> Result<Vec<f64>> {
        check_len("cylinder coefficients", self.hier_dim(), theta.len())?;
        let mut out = vec![0.0; theta.len()];
        self.cylinder_to_hermite_into(theta, &mut out);
        Ok(out)
    }

    pub(crate) fn cylinder_to_hermite_into(&self, theta: &[f64], out: &mut [f64]) {
        for k in 0..=self.degree() {
            for i in 0..=k {
                let off = planar_offset(k, i);
                self.planar_blocks[i]
                    .apply_transpose_into(&theta[off..off + i + 1], &mut out[off..off + i + 1]);
            }
        }
    }

    pub fn cylinder_to_spherical(&self, theta: &[f64]) -> Result<Vec<f64>> {
        check_len("cylinder coefficients", self.hier_dim(), theta.len())?;
        let mut out = vec![0.0; theta.len()];
        self.cylinder_to_spherical_into(theta, &mut out);
        Ok(out)
    }

    pub(crate) fn cylinder_to_spherical_into(&self, theta: &[f64], out: &mut [f64]) {
        let mut x = [0.0; 64];
        for (g, block) in self.maps.groups().iter().zip(&self.angular_blocks) {
            let s = g.len();
            let x = if s <= 64 { &mut x[..s] } else { &mut vec![0.0; s][..] };
            for (src, dst_start) in [(Some(&g.cyl_cos), Some(g.sph_cos)), (g.cyl_sin.as_ref(), g.sph_sin)] {
                if let (Some(src), Some(start)) = (src, dst_start) {
                    for (xv, &idx) in x.iter_mut().zip(src) {
                        *xv = theta[idx];
                    }
                    block.apply_into(x, &mut out[start..start + s]);
                }
            }
        }
    }

    /// Adjoint (and inverse) of [`TransformSet::cylinder_to_spherical`].
    pub fn spherical_to_cylinder(&self, phi: &[f64]) -> Result<Vec<f64>> {
        check_len("spherical coefficients", self.hier_dim(), phi.len())?;
        let mut out = vec![0.0; phi.len()];
        self.spherical_to_cylinder_into(phi, &mut out);
        Ok(out)
    }

    pub(crate) fn spherical_to_cylinder_into(&self, phi: &[f64], out: &mut [f64]) {
        let mut y = [0.0; 64];
        for (g, block) in self.maps.groups().iter().zip(&self.angular_blocks) {
            let s = g.len();
            let y = if s <= 64 { &mut y[..s] } else { &mut vec![0.0; s][..] };
            for (dst, src_start) in [(Some(&g.cyl_cos), Some(g.sph_cos)), (g.cyl_sin.as_ref(), g.sph_sin)] {
                if let (Some(dst), Some(start)) = (dst, src_start) {
                    block.apply_transpose_into(&phi[start..start + s], y);
                    for (yv, &idx) in y.iter().zip(dst) {
                        out[idx] = *yv;
                    }
                }
            }
        }
    }

    /// Values `p(shift + mu_J)` on the fine tensor grid of the trial
    /// polynomial with nodal coefficients `c`.
    pub fn shift_3d(&self, c: &[f64], shift: [f64; 3]) -> Result<Vec<f64>> {
        check_len("nodal coefficients", self.nodal_dim(), c.len())?;
        let s = shift.map(|x| self.shift_matrix(x));
        let k = self.n + 1;
        let (mut a, mut b, mut out) = (Vec::new(), Vec::new(), Vec::new());
        apply_tensor3(c, [k, k, k], [&s[0], &s[1], &s[2]], false, &mut a, &mut b, &mut out);
        Ok(out)
    }

    /// Adjoint of [`TransformSet::shift_3d`].
    pub fn shift_3d_transpose(&self, x: &[f64], shift: [f64; 3]) -> Result<Vec<f64>> {
        check_len("fine nodal tensor", self.fine_dim(), x.len())?;
        let s = shift.map(|v| self.shift_matrix(v));
        let f = 2 * self.n + 1;
        let (mut a, mut b, mut out) = (Vec::new(), Vec::new(), Vec::new());
        apply_tensor3(x, [f, f, f], [&s[0], &s[1], &s[2]], true, &mut a, &mut b, &mut out);
        Ok(out)
    }

    /// Hermite coefficients (total degree `<= M`) tested against the shifted
    /// Lagrange functions: the composition of the Hermite-projection adjoint
    /// and the shift adjoint, applied with one matrix per axis.
    pub fn test_hermite(&self, h: &[f64], shift: [f64; 3]) -> Result<Vec<f64>> {
        check_len("Hermite coefficients", self.hier_dim(), h.len())?;
        let c = shift.map(|x| self.test_matrix(x));
        let r = self.dense_len();
        let mut dense = vec![0.0; r * r * r];
        self.scatter_dense(h, &mut dense);
        let (mut a, mut b, mut out) = (Vec::new(), Vec::new(), Vec::new());
        apply_tensor3(&dense, [r, r, r], [&c[0], &c[1], &c[2]], false, &mut a, &mut b, &mut out);
        Ok(out)
    }
}

/// `P_{ij} = w_j h_i(v_j)` for `i <= max_degree`.
fn build_nodal_to_hermite(fine: &QuadratureRule, max_degree: usize) -> Matrix {
    let f = fine.order();
    let mut p = Matrix::zeros(max_degree + 1, f);
    let mut h = vec![0.0; max_degree + 1];
    for (j, (&v, &w)) in fine.nodes().iter().zip(fine.weights()).enumerate() {
        hermite_into(v, &mut h);
        for (i, hi) in h.iter().enumerate() {
            p.set(i, j, w * hi);
        }
    }
    p
}

/// Planar block of degree `i`: rows follow the cylinder layout (cos modes
/// `j = 0..=i/2`, then sin modes with nonzero order), columns `h_a(x) h_{i-a}(y)`.
fn build_planar_block(i: usize) -> Result<Matrix> {
    let rule = gauss_hermite(i + 2)?;
    let mut rows: Vec<(usize, Trig)> = (0..=i / 2).map(|j| (j, Trig::Cos)).collect();
    rows.extend((0..=i / 2).filter(|&j| 2 * j + i % 2 > 0).map(|j| (j, Trig::Sin)));
    debug_assert_eq!(rows.len(), i + 1);
    let mut block = Matrix::zeros(i + 1, i + 1);
    let mut hx = vec![0.0; i + 1];
    let mut hy = vec![0.0; i + 1];
    for (&x, &wx) in rule.nodes().iter().zip(rule.weights()) {
        hermite_into(x, &mut hx);
        for (&y, &wy) in rule.nodes().iter().zip(rule.weights()) {
            hermite_into(y, &mut hy);
            let w = wx * wy;
            for (row, &(j, trig)) in rows.iter().enumerate() {
                let psi = w * polar_laguerre(i, j, trig, x, y);
                for a in 0..=i {
                    let v = block.get(row, a) + psi * hx[a] * hy[i - a];
                    block.set(row, a, v);
                }
            }
        }
    }
    Ok(block)
}

/// One block per `(degree, order)` group, integrated in `(r^2, cos theta)`.
fn build_angular_blocks(maps: &BasisIndexMaps) -> Result<Vec<Matrix>> {
    let mut blocks = Vec::with_capacity(maps.groups().len());
    let mut groups = maps.groups().iter().peekable();
    let mut hv = Vec::new();
    let mut lag_cyl = Vec::new();
    let mut lag_sph = Vec::new();
    while let Some(first) = groups.peek() {
        let d = first.degree;
        let radial = gauss_laguerre(d / 2 + 2, 0.5)?;
        let polar = gauss_legendre(d + 2)?;
        let legendre: Vec<NormalizedLegendre> =
            polar.nodes().iter().map(|&x| NormalizedLegendre::new(d, x)).collect();
        hv.resize(d + 1, 0.0);
        while let Some(g) = groups.next_if(|g| g.degree == d) {
            let mu = g.order;
            let s = g.len();
            let azimuth = if mu == 0 { 2.0 * PI } else { PI };
            let sph_scale = SQRT_2 * if mu == 0 { 1.0 } else { SQRT_2 };
            let mut block = Matrix::zeros(s, s);
            let mut a_vals = vec![0.0; s];
            let mut b_vals = vec![0.0; s];
            for (&rt, &wt) in radial.nodes().iter().zip(radial.weights()) {
                let r = rt.sqrt();
                for ((&x, &wx), leg) in polar.nodes().iter().zip(polar.weights()).zip(&legendre) {
                    let sin = (1.0 - x * x).max(0.0).sqrt();
                    let rho = r * sin;
                    hermite_into(r * x, &mut hv);
                    lag_cyl.resize((d - mu) / 2 + 1, 0.0);
                    laguerre_into(mu as f64, rho * rho, &mut lag_cyl);
                    let rho_mu = rho.powi(mu as i32);
                    for (p, &i) in g.planar.iter().enumerate() {
                        a_vals[p] =
                            polar_norm(mu) * rho_mu * lag_cyl[(i - mu) / 2] * hv[d - i];
                    }
                    for (p, &ell) in g.ells.iter().enumerate() {
                        lag_sph.resize((d - ell) / 2 + 1, 0.0);
                        laguerre_into(ell as f64 + 0.5, rt, &mut lag_sph);
                        b_vals[p] = sph_scale
                            * leg.get(ell, mu)
                            * r.powi(ell as i32)
                            * lag_sph[(d - ell) / 2];
                    }
                    let w = 0.5 * wt * wx * azimuth;
                    for (row, bv) in b_vals.iter().enumerate() {
                        for (col, av) in a_vals.iter().enumerate() {
                            let v = block.get(row, col) + w * bv * av;
                            block.set(row, col, v);
                        }
                    }
                }
            }
            blocks.push(block);
        }
    }
    debug_assert_eq!(blocks.len(), maps.groups().len());
    Ok(blocks)
}
