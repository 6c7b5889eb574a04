//! Pointwise evaluation of the hierarchical basis functions.
//!
//! All bases are orthonormal with respect to `e^{-|v|^2}` (the polar family
//! with respect to `e^{-x^2-y^2}` in the plane).

use std::f64::consts::{PI, SQRT_2};

use super::index::{azimuthal_order, CylinderIndex, HermiteIndex, SphericalIndex, Trig};
use crate::specfun::{hermite_into, laguerre_into, polar_power, NormalizedLegendre};

/// Normalization of the polar family for azimuthal order `order`.
pub(crate) fn polar_norm(order: usize) -> f64 {
    if order == 0 {
        1.0 / PI.sqrt()
    } else {
        (2.0 / PI).sqrt()
    }
}

/// `out[n] = L^{alpha}_n(x)` for `n < out.len()`; empty output is allowed.
fn laguerre_upto(alpha: f64, x: f64, out: &mut [f64]) {
    if !out.is_empty() {
        laguerre_into(alpha, x, out);
    }
}

fn hermite(n: usize, v: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    hermite_into(v, &mut buf);
    buf[n]
}

/// Polar Laguerre function of planar degree `i` and radial slot `j` at `(x, y)`.
pub fn polar_laguerre(i: usize, j: usize, trig: Trig, x: f64, y: f64) -> f64 {
    let order = azimuthal_order(i, j);
    let (re, im) = polar_power(x, y, order);
    let angular = match trig {
        Trig::Cos => re,
        Trig::Sin => im,
    };
    let k = (i - order) / 2;
    let mut lag = vec![0.0; k + 1];
    laguerre_upto(order as f64, x * x + y * y, &mut lag);
    polar_norm(order) * angular * lag[k]
}

pub fn hermite_tensor(idx: HermiteIndex, v: [f64; 3]) -> f64 {
    hermite(idx.a, v[0]) * hermite(idx.b, v[1]) * hermite(idx.c, v[2])
}

pub fn cylinder_hermite(idx: CylinderIndex, v: [f64; 3]) -> f64 {
    polar_laguerre(idx.planar, idx.j, idx.trig, v[0], v[1]) * hermite(idx.degree - idx.planar, v[2])
}

pub fn spherical_laguerre(idx: SphericalIndex, v: [f64; 3]) -> f64 {
    let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let r = r2.sqrt();
    let (re, im) = polar_power(v[0], v[1], idx.order);
    let angular = match idx.trig {
        Trig::Cos => re,
        Trig::Sin => im,
    };
    // N_l^m(x) / sin^m is a polynomial in x of degree l - m
    let x = if r > 0.0 { v[2] / r } else { 1.0 };
    let legendre = NormalizedLegendre::with_sin(idx.ell, x, 1.0);
    let s = if idx.order == 0 { 1.0 } else { SQRT_2 };
    let k = (idx.degree - idx.ell) / 2;
    let mut lag = vec![0.0; k + 1];
    laguerre_upto(idx.ell as f64 + 0.5, r2, &mut lag);
    SQRT_2
        * s
        * legendre.get(idx.ell, idx.order)
        * r.powi((idx.ell - idx.order) as i32)
        * angular
        * lag[k]
}
