//! Hierarchical polynomial bases and the transforms between them.

mod functions;
mod index;
mod transforms;

use std::path::Path;

pub use functions::{cylinder_hermite, hermite_tensor, polar_laguerre, spherical_laguerre};
pub use index::{
    azimuthal_order, degree_offset, hier_dim, planar_offset, AngularGroup, BasisIndexMaps,
    CylinderIndex, HermiteIndex, RadialChain, SphericalIndex, Trig,
};
pub use transforms::{TransformScratch, TransformSet};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

const MAGIC: &[u8; 4] = b"BGTS";

/// `(2N+1) x (N+1)` matrix `S_{ji} = l_i(shift + v_j / sqrt 2)`.
pub fn build_shift_1d(n: usize, shift: f64) -> Result<Matrix> {
    if n < 2 {
        return Err(crate::error::invalid(format!("trial degree must be at least 2, got {n}")));
    }
    let fine = crate::specfun::gauss_hermite(2 * n + 1)?;
    let lagrange = crate::specfun::LagrangeBasis::gauss_hermite(n)?;
    let mut s = Matrix::zeros(2 * n + 1, n + 1);
    for (j, v) in fine.nodes().iter().enumerate() {
        let row = lagrange.eval(shift + v / std::f64::consts::SQRT_2);
        for (i, x) in row.into_iter().enumerate() {
            s.set(j, i, x);
        }
    }
    Ok(s)
}

impl TransformSet {
    /// Write the matrices to a cache file.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut mats: Vec<&Matrix> = vec![self.nodal_to_hermite_matrix()];
        mats.extend(self.planar_blocks());
        mats.extend(self.angular_blocks());
        crate::cache::write(
            path,
            MAGIC,
            &[self.trial_degree() as u32, self.degree() as u32],
            &mats,
        )
    }

    /// Read a cache file written by [`TransformSet::save`].
    pub fn load(path: &Path) -> Result<Self> {
        let (header, mats) = crate::cache::read(path, MAGIC, 2)?;
        let (n, m) = (header[0] as usize, header[1] as usize);
        if mats.len() < m + 2 {
            return Err(Error::Cache(format!("{}: too few matrices", path.display())));
        }
        let mut mats = mats.into_iter();
        let p = mats.next().expect("checked length");
        let planar: Vec<Matrix> = mats.by_ref().take(m + 1).collect();
        let angular: Vec<Matrix> = mats.collect();
        TransformSet::from_parts(n, m, p, planar, angular)
    }

    /// Load from `dir` when a matching cache exists, otherwise build and store.
    pub fn cached(n: usize, m: usize, dir: &Path) -> Result<Self> {
        let path = dir.join(format!("transforms_n{n}_m{m}.bgts"));
        if path.exists() {
            if let Ok(set) = Self::load(&path) {
                if set.trial_degree() == n && set.degree() == m {
                    return Ok(set);
                }
            }
        }
        let set = Self::with_degree(n, m)?;
        set.save(&path)?;
        Ok(set)
    }
}
