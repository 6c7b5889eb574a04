//! Gauss rules: exactness on monomial moments and the sphere rule.

use boltz_spectral::specfun::{gauss_hermite, gauss_laguerre, gauss_legendre, SphereRule};

fn main() -> boltz_spectral::Result<()> {
    let hermite = gauss_hermite(5)?;
    // int e^{-v^2} v^8 dv = Gamma(4.5)
    println!("hermite n=5, v^8: {:.10} (exact 11.6317283966)", hermite.integrate(|v| v.powi(8)));

    let laguerre = gauss_laguerre(3, 2.5)?;
    // int e^{-x} x^{2.5} x^3 dx = Gamma(6.5)
    println!("laguerre n=3 alpha=2.5, x^3: {:.7} (exact 287.8852778)", laguerre.integrate(|x| x.powi(3)));

    let legendre = gauss_legendre(4)?;
    println!("legendre n=4, x^6: {:.15} (exact {:.15})", legendre.integrate(|x| x.powi(6)), 2.0 / 7.0);

    let sphere = SphereRule::new(6)?;
    let area: f64 = sphere.weights.iter().sum();
    let z4: f64 = sphere.points.iter().zip(&sphere.weights).map(|(p, w)| w * p[2].powi(4)).sum();
    println!("sphere rule with {} points: area {area:.12}, int z^4 = {z4:.12} (exact {:.12})", sphere.len(), 4.0 * std::f64::consts::PI / 5.0);
    Ok(())
}
