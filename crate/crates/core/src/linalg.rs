//! Dense row-major matrices and axis-wise contractions of 3D tensors.

use crate::error::{check_len, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_len("matrix data", rows * cols, data.len())?;
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        gemm(
            self.rows,
            self.cols,
            other.cols,
            1.0,
            (&self.data, self.cols, 1),
            (&other.data, other.cols, 1),
            0.0,
            (&mut out.data, other.cols, 1),
        );
        out
    }

    /// `y = A x`.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for (yi, row) in y.iter_mut().zip(self.data.chunks_exact(self.cols.max(1))) {
            *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// `y = A^T x`.
    pub fn apply_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        y.fill(0.0);
        for (&xi, row) in x.iter().zip(self.data.chunks_exact(self.cols.max(1))) {
            for (yj, a) in y.iter_mut().zip(row) {
                *yj += a * xi;
            }
        }
    }

    /// Largest entry of `|A^T A - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let gram = self.transpose().matmul(self);
        let mut worst = 0.0f64;
        for i in 0..gram.rows {
            for j in 0..gram.cols {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram.get(i, j) - expect).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// `C = alpha * A B + beta * C` on strided views `(slice, row_stride, col_stride)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn gemm(
    m: usize,
    k: usize,
    n: usize,
    alpha: f64,
    a: (&[f64], usize, usize),
    b: (&[f64], usize, usize),
    beta: f64,
    c: (&mut [f64], usize, usize),
) {
    if m == 0 || n == 0 {
        return;
    }
    let span = |rows: usize, cols: usize, rs: usize, cs: usize| {
        if rows == 0 || cols == 0 {
            0
        } else {
            (rows - 1) * rs + (cols - 1) * cs + 1
        }
    };
    assert!(a.0.len() >= span(m, k, a.1, a.2), "gemm: A too short");
    assert!(b.0.len() >= span(k, n, b.1, b.2), "gemm: B too short");
    assert!(c.0.len() >= span(m, n, c.1, c.2), "gemm: C too short");
    // SAFETY: the asserts above keep every strided access inside the slices.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.0.as_ptr(),
            a.1 as isize,
            a.2 as isize,
            b.0.as_ptr(),
            b.1 as isize,
            b.2 as isize,
            beta,
            c.0.as_mut_ptr(),
            c.1 as isize,
            c.2 as isize,
        );
    }
}

/// Contract one axis of the row-major tensor `t` (shape `dims`) with `a`.
///
/// With `transpose == false`, `a` is `m x dims[axis]` and the result has that
/// axis replaced by `m`. With `transpose == true`, `a` is `dims[axis] x m` and
/// `a^T` is applied. `out` must hold the contracted shape exactly.
pub(crate) fn contract_axis(
    t: &[f64],
    dims: [usize; 3],
    axis: usize,
    a: &Matrix,
    transpose: bool,
    out: &mut [f64],
) -> [usize; 3] {
    let (m, q) = if transpose {
        (a.cols, a.rows)
    } else {
        (a.rows, a.cols)
    };
    assert_eq!(q, dims[axis], "contract_axis: axis length");
    // element (p, q) of the applied operator
    let (ars, acs) = if transpose { (1, a.cols) } else { (a.cols, 1) };
    let mut od = dims;
    od[axis] = m;
    assert_eq!(t.len(), dims[0] * dims[1] * dims[2]);
    assert_eq!(out.len(), od[0] * od[1] * od[2]);
    let [n0, n1, n2] = dims;
    match axis {
        0 => gemm(
            m,
            n0,
            n1 * n2,
            1.0,
            (&a.data, ars, acs),
            (t, n1 * n2, 1),
            0.0,
            (out, n1 * n2, 1),
        ),
        1 => {
            for i in 0..n0 {
                gemm(
                    m,
                    n1,
                    n2,
                    1.0,
                    (&a.data, ars, acs),
                    (&t[i * n1 * n2..(i + 1) * n1 * n2], n2, 1),
                    0.0,
                    (&mut out[i * m * n2..(i + 1) * m * n2], n2, 1),
                );
            }
        }
        2 => gemm(
            n0 * n1,
            n2,
            m,
            1.0,
            (t, n2, 1),
            (&a.data, acs, ars),
            0.0,
            (out, m, 1),
        ),
        _ => panic!("contract_axis: axis {axis} out of range"),
    }
    od
}

/// Apply `a0 (x) a1 (x) a2` to `t`, using `s1`, `s2` as scratch; the result
/// lands in `out`. Axis 2 is contracted first.
#[allow(clippy::too_many_arguments)]
pub(crate) fn apply_tensor3(
    t: &[f64],
    dims: [usize; 3],
    mats: [&Matrix; 3],
    transpose: bool,
    s1: &mut Vec<f64>,
    s2: &mut Vec<f64>,
    out: &mut Vec<f64>,
) -> [usize; 3] {
    let len_after = |d: [usize; 3], axis: usize, mat: &Matrix| {
        let mut d = d;
        d[axis] = if transpose { mat.cols } else { mat.rows };
        d
    };
    let d2 = len_after(dims, 2, mats[2]);
    s1.resize(d2.iter().product(), 0.0);
    contract_axis(t, dims, 2, mats[2], transpose, s1);
    let d1 = len_after(d2, 1, mats[1]);
    s2.resize(d1.iter().product(), 0.0);
    contract_axis(s1, d2, 1, mats[1], transpose, s2);
    let d0 = len_after(d1, 0, mats[0]);
    out.resize(d0.iter().product(), 0.0);
    contract_axis(s2, d1, 0, mats[0], transpose, out);
    d0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(t: &[f64], dims: [usize; 3], axis: usize, a: &Matrix) -> Vec<f64> {
        let mut od = dims;
        od[axis] = a.rows();
        let mut out = vec![0.0; od.iter().product()];
        for i in 0..od[0] {
            for j in 0..od[1] {
                for k in 0..od[2] {
                    let mut s = 0.0;
                    for q in 0..dims[axis] {
                        let mut idx = [i, j, k];
                        let p = idx[axis];
                        idx[axis] = q;
                        s += a.get(p, q) * t[(idx[0] * dims[1] + idx[1]) * dims[2] + idx[2]];
                    }
                    out[(i * od[1] + j) * od[2] + k] = s;
                }
            }
        }
        out
    }

    #[test]
    fn axis_contraction_matches_naive_loops() {
        let dims = [3, 4, 5];
        let t: Vec<f64> = (0..60).map(|i| (i as f64 * 0.37).sin()).collect();
        for axis in 0..3 {
            let a = Matrix::from_fn(2, dims[axis], |i, j| (i as f64 + 1.3 * j as f64).cos());
            let mut od = dims;
            od[axis] = 2;
            let mut out = vec![0.0; od.iter().product()];
            contract_axis(&t, dims, axis, &a, false, &mut out);
            let expect = naive(&t, dims, axis, &a);
            for (x, y) in out.iter().zip(&expect) {
                assert!((x - y).abs() < 1e-13);
            }
            let at = a.transpose();
            contract_axis(&t, dims, axis, &at, true, &mut out);
            for (x, y) in out.iter().zip(&expect) {
                assert!((x - y).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn matvec_and_transpose_agree() {
        let a = Matrix::from_fn(3, 2, |i, j| (i * 2 + j) as f64);
        let mut y = [0.0; 3];
        a.apply_into(&[1.0, -1.0], &mut y);
        assert_eq!(y, [-1.0, -1.0, -1.0]);
        let mut z = [0.0; 2];
        a.apply_transpose_into(&[1.0, 0.0, 1.0], &mut z);
        assert_eq!(z, [4.0, 6.0]);
        assert!(Matrix::identity(4).orthogonality_defect() == 0.0);
    }
}
