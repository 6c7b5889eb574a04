//! Flat index layouts of the hierarchical bases.
//!
//! All three hierarchical bases (tensor Hermite, cylinder Hermite, spherical
//! Laguerre) span the polynomials of total degree at most `M` and are stored
//! degree by degree, so a degree-`k` block always starts at `k(k+1)(k+2)/6`.

/// Trigonometric factor of an azimuthal basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trig {
    Cos,
    Sin,
}

/// Number of polynomials of total degree at most `m` in three variables.
pub fn hier_dim(m: usize) -> usize {
    (m + 1) * (m + 2) * (m + 3) / 6
}

/// Offset of the degree-`k` block in any hierarchical layout.
pub fn degree_offset(k: usize) -> usize {
    k * (k + 1) * (k + 2) / 6
}

/// Offset of the `(k, i)` sub-block (planar degree `i` within total degree `k`)
/// shared by the Hermite and cylinder layouts.
pub fn planar_offset(k: usize, i: usize) -> usize {
    degree_offset(k) + i * (i + 1) / 2
}

/// Azimuthal order `2j + (i mod 2)` of a polar function.
pub fn azimuthal_order(i: usize, j: usize) -> usize {
    2 * j + (i % 2)
}

/// Tensor Hermite mode `h_a(v1) h_b(v2) h_c(v3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteIndex {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

/// Cylinder mode: total degree `k`, planar degree `i`, radial slot `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CylinderIndex {
    pub degree: usize,
    pub planar: usize,
    pub j: usize,
    pub trig: Trig,
}

impl CylinderIndex {
    pub fn order(&self) -> usize {
        azimuthal_order(self.planar, self.j)
    }
}

/// Spherical Laguerre mode: total degree, angular degree `ell`, azimuthal
/// order `order <= ell`, and trig factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphericalIndex {
    pub degree: usize,
    pub ell: usize,
    pub order: usize,
    pub trig: Trig,
}

/// One `(degree, order)` group linking cylinder and spherical modes.
///
/// The cylinder members have planar degree `i = order, order + 2, ..., <= degree`
/// and the spherical members have `ell` of the degree's parity with
/// `order <= ell <= degree`. Both lists have the same length.
#[derive(Debug, Clone)]
pub struct AngularGroup {
    pub degree: usize,
    pub order: usize,
    /// planar degrees of the cylinder members, ascending
    pub planar: Vec<usize>,
    /// angular degrees of the spherical members, ascending
    pub ells: Vec<usize>,
    /// flat cylinder indices of the cos members, then the sin members
    pub cyl_cos: Vec<usize>,
    pub cyl_sin: Option<Vec<usize>>,
    /// start of the contiguous spherical cos run, then the sin run
    pub sph_cos: usize,
    pub sph_sin: Option<usize>,
}

impl AngularGroup {
    pub fn len(&self) -> usize {
        self.planar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planar.is_empty()
    }
}

/// Spherical modes sharing `(ell, order, trig)` across degrees
/// `ell, ell + 2, ...`: the radial multiplication acts down such a chain.
#[derive(Debug, Clone)]
pub struct RadialChain {
    pub ell: usize,
    pub order: usize,
    pub trig: Trig,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BasisIndexMaps {
    degree: usize,
    hermite: Vec<HermiteIndex>,
    cylinder: Vec<CylinderIndex>,
    spherical: Vec<SphericalIndex>,
    groups: Vec<AngularGroup>,
    chains: Vec<RadialChain>,
}

impl BasisIndexMaps {
    /// Index maps for hierarchical degree `m`.
    pub fn new(m: usize) -> Self {
        let mut hermite = Vec::with_capacity(hier_dim(m));
        let mut cylinder = Vec::with_capacity(hier_dim(m));
        for k in 0..=m {
            for i in 0..=k {
                for a in 0..=i {
                    hermite.push(HermiteIndex {
                        a,
                        b: i - a,
                        c: k - i,
                    });
                }
                for j in 0..=i / 2 {
                    cylinder.push(CylinderIndex {
                        degree: k,
                        planar: i,
                        j,
                        trig: Trig::Cos,
                    });
                }
                for j in 0..=i / 2 {
                    if azimuthal_order(i, j) > 0 {
                        cylinder.push(CylinderIndex {
                            degree: k,
                            planar: i,
                            j,
                            trig: Trig::Sin,
                        });
                    }
                }
            }
        }

        let cyl_flat = |k: usize, i: usize, j: usize, trig: Trig| -> usize {
            let base = planar_offset(k, i);
            match trig {
                Trig::Cos => base + j,
                Trig::Sin => base + i / 2 + 1 + j - usize::from(i % 2 == 0),
            }
        };

        let mut spherical = Vec::with_capacity(hier_dim(m));
        let mut groups = Vec::new();
        for d in 0..=m {
            for mu in 0..=d {
                let planar: Vec<usize> = (mu..=d).step_by(2).collect();
                let ell_start = if (d - mu) % 2 == 0 { mu } else { mu + 1 };
                let ells: Vec<usize> = (ell_start..=d).step_by(2).collect();
                debug_assert_eq!(planar.len(), ells.len());
                let j = mu / 2;
                let cyl_cos = planar.iter().map(|&i| cyl_flat(d, i, j, Trig::Cos)).collect();
                let cyl_sin = (mu > 0)
                    .then(|| planar.iter().map(|&i| cyl_flat(d, i, j, Trig::Sin)).collect());
                let sph_cos = spherical.len();
                for &ell in &ells {
                    spherical.push(SphericalIndex {
                        degree: d,
                        ell,
                        order: mu,
                        trig: Trig::Cos,
                    });
                }
                let sph_sin = (mu > 0).then(|| {
                    let start = spherical.len();
                    for &ell in &ells {
                        spherical.push(SphericalIndex {
                            degree: d,
                            ell,
                            order: mu,
                            trig: Trig::Sin,
                        });
                    }
                    start
                });
                groups.push(AngularGroup {
                    degree: d,
                    order: mu,
                    planar,
                    ells,
                    cyl_cos,
                    cyl_sin,
                    sph_cos,
                    sph_sin,
                });
            }
        }

        let mut chains = Vec::new();
        for ell in 0..=m {
            for mu in 0..=ell {
                for trig in [Trig::Cos, Trig::Sin] {
                    if mu == 0 && trig == Trig::Sin {
                        continue;
                    }
                    let members = spherical
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| s.ell == ell && s.order == mu && s.trig == trig)
                        .map(|(idx, _)| idx)
                        .collect();
                    chains.push(RadialChain {
                        ell,
                        order: mu,
                        trig,
                        members,
                    });
                }
            }
        }

        BasisIndexMaps {
            degree: m,
            hermite,
            cylinder,
            spherical,
            groups,
            chains,
        }
    }

    /// Hierarchical degree `M`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn hier_dim(&self) -> usize {
        self.hermite.len()
    }

    pub fn hermite(&self) -> &[HermiteIndex] {
        &self.hermite
    }

    pub fn cylinder(&self) -> &[CylinderIndex] {
        &self.cylinder
    }

    pub fn spherical(&self) -> &[SphericalIndex] {
        &self.spherical
    }

    pub fn groups(&self) -> &[AngularGroup] {
        &self.groups
    }

    pub fn chains(&self) -> &[RadialChain] {
        &self.chains
    }

    /// Flat position of a Hermite mode of total degree at most `M`.
    pub fn hermite_flat(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let k = a + b + c;
        (k <= self.degree).then(|| planar_offset(k, a + b) + a)
    }
}
