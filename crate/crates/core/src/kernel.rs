//! Collision kernels `B = |v - w|^beta b(cos theta)` and the tables derived
//! from them: Legendre eigenvalues of the angular law, the eigenvalues of
//! the inner collision operator, and the radial multiplication matrices.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::bases::BasisIndexMaps;
use crate::error::{invalid, Error, Result};
use crate::linalg::Matrix;
use crate::specfun::{gauss_laguerre, gauss_legendre, laguerre_into, legendre_all};

/// Angular part `b(mu)` of a kernel, `mu` the cosine of the deflection angle.
#[derive(Clone)]
pub enum AngularLaw {
    /// `b = 1 / (4 pi)`.
    Isotropic,
    /// `b = c (1 + mu)^p`.
    Power { c: f64, p: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for AngularLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngularLaw::Isotropic => write!(f, "Isotropic"),
            AngularLaw::Power { c, p } => write!(f, "Power {{ c: {c}, p: {p} }}"),
            AngularLaw::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl AngularLaw {
    pub fn eval(&self, mu: f64) -> f64 {
        match self {
            AngularLaw::Isotropic => 0.25 / PI,
            AngularLaw::Power { c, p } => c * (1.0 + mu).max(0.0).powf(*p),
            AngularLaw::Custom(b) => b(mu),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CollisionKernel {
    beta: f64,
    angular: AngularLaw,
}

impl CollisionKernel {
    pub fn new(beta: f64, angular: AngularLaw) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(invalid(format!(
                "radial exponent must lie in [0, 1], got {beta}"
            )));
        }
        if let AngularLaw::Power { c, p } = angular {
            if !(c >= 0.0 && c.is_finite()) || !(p > -1.0 && p.is_finite()) {
                return Err(invalid(format!(
                    "angular power law needs c >= 0 and p > -1, got c = {c}, p = {p}"
                )));
            }
        }
        Ok(CollisionKernel { beta, angular })
    }

    /// Maxwell molecules: `B = 1 / (4 pi)`.
    pub fn maxwell() -> Self {
        CollisionKernel {
            beta: 0.0,
            angular: AngularLaw::Isotropic,
        }
    }

    /// Hard spheres: `B = |v - w| / (4 pi)`.
    pub fn hard_spheres() -> Self {
        CollisionKernel {
            beta: 1.0,
            angular: AngularLaw::Isotropic,
        }
    }

    /// Variable hard spheres with isotropic scattering.
    pub fn vhs(beta: f64) -> Result<Self> {
        Self::new(beta, AngularLaw::Isotropic)
    }

    /// `|v - w|^beta c (1 + cos theta)^p`.
    pub fn angular_power(beta: f64, c: f64, p: f64) -> Result<Self> {
        Self::new(beta, AngularLaw::Power { c, p })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn angular(&self) -> &AngularLaw {
        &self.angular
    }

    pub fn b_theta(&self, mu: f64) -> f64 {
        self.angular.eval(mu)
    }

    /// Scalar from the argument scaling of the radial factor: `2^{beta/2}`.
    pub fn radial_scale(&self) -> f64 {
        2f64.powf(0.5 * self.beta)
    }
}

impl fmt::Display for CollisionKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.angular {
            AngularLaw::Isotropic if self.beta == 0.0 => write!(f, "maxwell"),
            AngularLaw::Isotropic if self.beta == 1.0 => write!(f, "hardsphere"),
            AngularLaw::Isotropic => write!(f, "vhs:beta={}", self.beta),
            AngularLaw::Power { c, p } => write!(f, "angular:beta={},p={p},c={c}", self.beta),
            AngularLaw::Custom(_) => write!(f, "custom:beta={}", self.beta),
        }
    }
}

fn parse_number(key: &str, text: &str) -> Result<f64> {
    let t = text.trim().replace(' ', "");
    let lowered = t.to_ascii_lowercase().replace('π', "pi");
    let value = match lowered.as_str() {
        "1/4pi" | "1/(4pi)" => Some(0.25 / PI),
        _ => lowered.parse::<f64>().ok(),
    };
    value.ok_or_else(|| invalid(format!("cannot parse {key} = {text:?}")))
}

impl FromStr for CollisionKernel {
    type Err = Error;

    /// Accepts `maxwell`, `hardsphere`, `vhs:beta=<x>` and
    /// `angular[:beta=<x>,p=<x>,c=<x>]` (defaults `0.38`, `0.4`, `1/4pi`).
    fn from_str(tag: &str) -> Result<Self> {
        let tag = tag.trim();
        let (name, args) = tag.split_once(':').unwrap_or((tag, ""));
        let mut params = Vec::new();
        for item in args.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| invalid(format!("expected key=value in kernel tag, got {item:?}")))?;
            params.push((k.trim().to_ascii_lowercase(), v.to_string()));
        }
        let get = |key: &str, default: Option<f64>| -> Result<f64> {
            match params.iter().find(|(k, _)| k == key) {
                Some((_, v)) => parse_number(key, v),
                None => default.ok_or_else(|| invalid(format!("kernel tag {tag:?} needs {key}"))),
            }
        };
        let allow = |keys: &[&str]| -> Result<()> {
            match params.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
                Some((k, _)) => Err(invalid(format!("unknown kernel parameter {k:?} in {tag:?}"))),
                None => Ok(()),
            }
        };
        match name.to_ascii_lowercase().as_str() {
            "maxwell" => {
                allow(&[])?;
                Ok(Self::maxwell())
            }
            "hardsphere" | "hardspheres" | "hard-sphere" => {
                allow(&[])?;
                Ok(Self::hard_spheres())
            }
            "vhs" => {
                allow(&["beta"])?;
                Self::vhs(get("beta", None)?)
            }
            "angular" => {
                allow(&["beta", "p", "c"])?;
                Self::angular_power(
                    get("beta", Some(0.38))?,
                    get("c", Some(0.25 / PI))?,
                    get("p", Some(0.4))?,
                )
            }
            other => Err(invalid(format!("unknown kernel {other:?}"))),
        }
    }
}

const MAX_ANGULAR_ORDER: usize = 1024;

/// `lambda_l = 2 pi int_{-1}^{1} b(mu) P_l(mu) dmu` for `l = 0..=l_max`.
pub fn funk_hecke_lambdas(law: &AngularLaw, l_max: usize) -> Vec<f64> {
    match law {
        AngularLaw::Power { c, p } => {
            // int_{-1}^{1} (1+mu)^p P_l = 2^{p+1}/(p+1) prod_{k=1}^{l} (p-k+1)/(p+k+1)
            let mut value = 2f64.powf(p + 1.0) / (p + 1.0);
            let mut out = Vec::with_capacity(l_max + 1);
            for l in 0..=l_max {
                if l > 0 {
                    let k = l as f64;
                    value *= (p - k + 1.0) / (p + k + 1.0);
                }
                out.push(2.0 * PI * c * value);
            }
            out
        }
        _ => lambdas_by_quadrature(law, l_max, (l_max + 8).max(64), 1e-12),
    }
}

/// Gauss–Legendre evaluation, doubling the order (up to 1024 points) until
/// successive results agree to `tol`.
pub fn lambdas_by_quadrature(law: &AngularLaw, l_max: usize, order: usize, tol: f64) -> Vec<f64> {
    let eval = |order: usize| {
        let rule = gauss_legendre(order).expect("positive order");
        let mut out = vec![0.0; l_max + 1];
        for (&mu, &w) in rule.nodes().iter().zip(rule.weights()) {
            let b = law.eval(mu);
            for (o, p) in out.iter_mut().zip(legendre_all(l_max, mu)) {
                *o += 2.0 * PI * w * b * p;
            }
        }
        out
    };
    let mut order = order.clamp(1, MAX_ANGULAR_ORDER);
    let mut current = eval(order);
    while order < MAX_ANGULAR_ORDER {
        order = (2 * order).min(MAX_ANGULAR_ORDER);
        let next = eval(order);
        let change = current
            .iter()
            .zip(&next)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        current = next;
        if change < tol {
            break;
        }
    }
    current
}

/// Eigenvalue of the inner operator for every spherical mode:
/// `lambda_ell - lambda_0` with `ell` the mode's angular degree.
pub fn build_collision_eigenvalues(kernel: &CollisionKernel, maps: &BasisIndexMaps) -> Vec<f64> {
    let lambdas = funk_hecke_lambdas(kernel.angular(), maps.degree());
    maps.spherical()
        .iter()
        .map(|s| if s.ell == 0 { 0.0 } else { lambdas[s.ell] - lambdas[0] })
        .collect()
}

/// Radial multiplication by `|u|^beta` on each Laguerre chain, one matrix per
/// angular degree `ell = 0..=degree`:
/// `R_{n',n} = int e^{-s} s^{ell + 1/2 + beta/2} L_n L_{n'} ds` with
/// `L = L^{ell + 1/2}`, for `n, n' <= (degree - ell) / 2`.
pub fn build_radial_mult(beta: f64, degree: usize) -> Result<Vec<Matrix>> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(invalid(format!("radial exponent must lie in [0, 1], got {beta}")));
    }
    let mut mats = Vec::with_capacity(degree + 1);
    for ell in 0..=degree {
        let len = (degree - ell) / 2 + 1;
        let alpha = ell as f64 + 0.5;
        let rule = gauss_laguerre(len + 1, alpha + 0.5 * beta)?;
        let mut r = Matrix::zeros(len, len);
        let mut lag = vec![0.0; len];
        for (&s, &w) in rule.nodes().iter().zip(rule.weights()) {
            laguerre_into(alpha, s, &mut lag);
            for a in 0..len {
                for b in 0..len {
                    let v = r.get(a, b) + w * lag[a] * lag[b];
                    r.set(a, b, v);
                }
            }
        }
        mats.push(r);
    }
    Ok(mats)
}

/// Global factor `T^{3 + beta/2}` from rescaling to the centred frame.
pub fn prefactor(tbar: f64, beta: f64) -> f64 {
    tbar.powf(3.0 + 0.5 * beta)
}

/// Inner collision operator on spherical coefficients, precomputed for one
/// hierarchical degree.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    kernel: CollisionKernel,
    lambdas: Vec<f64>,
    eigenvalues: Vec<f64>,
    radial: Vec<Matrix>,
}

impl KernelOperator {
    pub fn new(kernel: &CollisionKernel, maps: &BasisIndexMaps) -> Result<Self> {
        Ok(KernelOperator {
            kernel: kernel.clone(),
            lambdas: funk_hecke_lambdas(kernel.angular(), maps.degree()),
            eigenvalues: build_collision_eigenvalues(kernel, maps),
            radial: build_radial_mult(kernel.beta(), maps.degree())?,
        })
    }

    pub fn kernel(&self) -> &CollisionKernel {
        &self.kernel
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Eigenvalue per spherical mode.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn radial(&self) -> &[Matrix] {
        &self.radial
    }

    pub fn stored_entries(&self) -> usize {
        self.eigenvalues.len() + self.radial.iter().map(|m| m.rows() * m.cols()).sum::<usize>()
    }

    /// `out = d * (2^{beta/2} R phi)` chain by chain.
    pub(crate) fn apply_into(&self, maps: &BasisIndexMaps, phi: &[f64], out: &mut [f64]) {
        let scale = self.kernel.radial_scale();
        let identity = self.kernel.beta() == 0.0;
        let mut x = [0.0; 64];
        let mut y = [0.0; 64];
        for chain in maps.chains() {
            let d = self.lambdas[chain.ell] - self.lambdas[0];
            if chain.ell == 0 {
                for &idx in &chain.members {
                    out[idx] = 0.0;
                }
                continue;
            }
            if identity {
                for &idx in &chain.members {
                    out[idx] = d * phi[idx];
                }
                continue;
            }
            let len = chain.members.len();
            let mut big;
            let (x, y) = if len <= 64 {
                (&mut x[..len], &mut y[..len])
            } else {
                big = (vec![0.0; len], vec![0.0; len]);
                (&mut big.0[..], &mut big.1[..])
            };
            for (xv, &idx) in x.iter_mut().zip(&chain.members) {
                *xv = phi[idx];
            }
            self.radial[chain.ell].apply_into(x, y);
            for (yv, &idx) in y.iter().zip(&chain.members) {
                out[idx] = d * scale * yv;
            }
        }
    }

    pub fn apply(&self, maps: &BasisIndexMaps, phi: &[f64]) -> Result<Vec<f64>> {
        crate::error::check_len("spherical coefficients", maps.hier_dim(), phi.len())?;
        let mut out = vec![0.0; phi.len()];
        self.apply_into(maps, phi, &mut out);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::eval_real_sph_harm;
    use crate::specfun::sph_harm_index;

    #[test]
    fn isotropic_lambdas() {
        let l = funk_hecke_lambdas(&AngularLaw::Isotropic, 6);
        assert!((l[0] - 1.0).abs() < 1e-14);
        assert!(l[1..].iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn power_law_closed_form_matches_quadrature() {
        let law = AngularLaw::Power { c: 0.25 / PI, p: 0.4 };
        let closed = funk_hecke_lambdas(&law, 12);
        assert!((closed[0] - 0.942_505_650_552_067_4).abs() < 1e-12);
        let quad = lambdas_by_quadrature(&law, 12, 64, 1e-12);
        for (a, b) in closed.iter().zip(&quad) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
        let smooth = AngularLaw::Power { c: 1.0, p: 3.0 };
        let closed = funk_hecke_lambdas(&smooth, 6);
        let quad = lambdas_by_quadrature(&smooth, 6, 8, 1e-14);
        for (a, b) in closed.iter().zip(&quad) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(closed[4].abs() < 1e-12);
    }

    #[test]
    fn eigenvalue_table() {
        let maps = BasisIndexMaps::new(5);
        let d = build_collision_eigenvalues(&CollisionKernel::maxwell(), &maps);
        for (s, v) in maps.spherical().iter().zip(&d) {
            if s.ell == 0 {
                assert_eq!(*v, 0.0);
            } else {
                assert!((v + 1.0).abs() < 1e-14);
            }
        }
        let hs = build_collision_eigenvalues(&CollisionKernel::hard_spheres(), &maps);
        assert_eq!(d, hs);
        let ang: CollisionKernel = "angular".parse().unwrap();
        for v in build_collision_eigenvalues(&ang, &maps) {
            assert!(v <= 0.0);
        }
    }

    #[test]
    fn radial_matrices() {
        for r in build_radial_mult(0.0, 8).unwrap() {
            assert!(r.max_abs_diff(&Matrix::identity(r.rows())) < 1e-13);
        }
        let r = build_radial_mult(1.0, 8).unwrap();
        // int e^{-|u|^2} |u| pi^{-3/2} du = 2 / sqrt(pi)
        assert!((r[0].get(0, 0) - 2.0 / PI.sqrt()).abs() < 1e-13);
        for m in &r {
            assert!(m.max_abs_diff(&m.transpose()) < 1e-12);
        }
        assert!(build_radial_mult(1.5, 4).is_err());
    }

    #[test]
    fn tags() {
        let k: CollisionKernel = "maxwell".parse().unwrap();
        assert_eq!(k.beta(), 0.0);
        let k: CollisionKernel = "hardsphere".parse().unwrap();
        assert_eq!(k.beta(), 1.0);
        let k: CollisionKernel = "vhs:beta=0.5".parse().unwrap();
        assert_eq!(k.beta(), 0.5);
        let k: CollisionKernel = "angular:beta=0.38,p=0.4,c=1/4π".parse().unwrap();
        match k.angular() {
            AngularLaw::Power { c, p } => {
                assert!((c - 0.25 / PI).abs() < 1e-16);
                assert_eq!(*p, 0.4);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(k.to_string().parse::<CollisionKernel>().unwrap().beta(), 0.38);
        assert!("vhs:beta=2".parse::<CollisionKernel>().is_err());
        assert!("vhs".parse::<CollisionKernel>().is_err());
        assert!("coulomb".parse::<CollisionKernel>().is_err());
        assert!("maxwell:beta=1".parse::<CollisionKernel>().is_err());
    }

    #[test]
    fn eigenvalues_match_double_sphere_quadrature() {
        // int int b(e.e') Y(e) (Y(e') - Y(e)) de' de over the sphere pair
        let law = AngularLaw::Custom(Arc::new(|mu: f64| (0.8 * mu).exp() / (4.0 * PI)));
        let kernel = CollisionKernel::new(0.0, law).unwrap();
        let maps = BasisIndexMaps::new(4);
        let op = KernelOperator::new(&kernel, &maps).unwrap();
        let rule = gauss_legendre(24).unwrap();
        let n_phi = 48;
        let mut pts = Vec::new();
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            for k in 0..n_phi {
                let phi = 2.0 * PI * k as f64 / n_phi as f64;
                pts.push((x.acos(), phi, w * 2.0 * PI / n_phi as f64));
            }
        }
        let dir = |t: f64, p: f64| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
        let harm: Vec<Vec<f64>> = pts.iter().map(|&(t, p, _)| eval_real_sph_harm(4, t, p).unwrap()).collect();
        for ell in 0..=4 {
            for m in 0..=ell {
                let idx = sph_harm_index(ell, m, false);
                let mut total = 0.0;
                for (a, &(ta, pa, wa)) in pts.iter().enumerate() {
                    let ea = dir(ta, pa);
                    let mut inner = 0.0;
                    for (b, &(tb, pb, wb)) in pts.iter().enumerate() {
                        let eb = dir(tb, pb);
                        let mu = ea[0] * eb[0] + ea[1] * eb[1] + ea[2] * eb[2];
                        inner += wb * kernel.b_theta(mu) * (harm[b][idx] - harm[a][idx]);
                    }
                    total += wa * harm[a][idx] * inner;
                }
                let expect = op.lambdas()[ell] - op.lambdas()[0];
                assert!((total - expect).abs() < 1e-8, "ell={ell} m={m}: {total} vs {expect}");
            }
        }
    }
}
