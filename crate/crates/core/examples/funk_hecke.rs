//! Eigenvalues of the spherical convolution for several angular laws.

use std::f64::consts::PI;
use std::sync::Arc;

use boltz_spectral::kernel::{funk_hecke_lambdas, lambdas_by_quadrature, AngularLaw};

fn main() {
    let isotropic = funk_hecke_lambdas(&AngularLaw::Isotropic, 4);
    println!("isotropic 1/(4 pi): {isotropic:.6?}");

    let power = AngularLaw::Power { c: 0.25 / PI, p: 0.4 };
    println!("(1+mu)^0.4 / (4 pi), closed form: {:.7?}", funk_hecke_lambdas(&power, 4));
    println!("(1+mu)^0.4 / (4 pi), quadrature:  {:.7?}", lambdas_by_quadrature(&power, 4, 64, 1e-12));

    let forward = AngularLaw::Custom(Arc::new(|mu: f64| (2.0 * mu).exp() / (4.0 * PI)));
    let lambdas = funk_hecke_lambdas(&forward, 6);
    let gaps: Vec<f64> = lambdas.iter().map(|l| l - lambdas[0]).collect();
    println!("forward-peaked law, collision eigenvalues lambda_l - lambda_0: {gaps:.5?}");
}
