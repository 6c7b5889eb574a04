//! Gauss quadrature and the special functions used throughout the crate.

mod lagrange;
mod polynomials;
mod quadrature;

pub use lagrange::{eval_lagrange_all, LagrangeBasis};
pub use polynomials::{
    eval_assoc_laguerre_all, eval_hermite_all, eval_real_sph_harm, hermite_into, laguerre_into,
    legendre_all, polar_power, sph_harm_index, NormalizedLegendre, HERMITE_H0,
};
pub use quadrature::{
    gauss_hermite, gauss_laguerre, gauss_legendre, QuadratureRule, RuleKind, SphereRule,
    TensorRule3,
};
