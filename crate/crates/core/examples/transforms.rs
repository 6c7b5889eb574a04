//! Basis changes from nodal values to Hermite, cylinder and spherical modes.

use boltz_spectral::bases::TransformSet;

fn main() -> boltz_spectral::Result<()> {
    let n = 6;
    let t = TransformSet::new(n)?;
    println!(
        "N = {n}: {} trial nodes, {} fine nodes, {} hierarchical modes, {} stored entries",
        t.nodal_dim(),
        t.fine_dim(),
        t.hier_dim(),
        t.stored_entries()
    );

    // a Maxwellian on the fine grid is the single mode h_0 h_0 h_0
    let h = t.nodal_to_hermite(&vec![1.0; t.fine_dim()])?;
    println!("Maxwellian -> Hermite: first coefficient {:.12} (pi^(3/4) = {:.12})", h[0], std::f64::consts::PI.powf(0.75));

    let mut h = vec![0.0; t.hier_dim()];
    for (i, v) in h.iter_mut().enumerate() {
        *v = ((i * 7919) % 13) as f64 / 13.0 - 0.5;
    }
    let spherical = t.cylinder_to_spherical(&t.hermite_to_cylinder(&h)?)?;
    let back = t.cylinder_to_hermite(&t.spherical_to_cylinder(&spherical)?)?;
    let err = h.iter().zip(&back).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    println!("Hermite -> spherical -> Hermite: max error {err:.2e}, norm ratio {:.15}", norm(&spherical) / norm(&h));

    let worst = t
        .planar_blocks()
        .iter()
        .chain(t.angular_blocks())
        .map(|b| b.orthogonality_defect())
        .fold(0.0f64, f64::max);
    println!("{} planar and {} angular blocks, worst orthogonality defect {worst:.2e}", t.planar_blocks().len(), t.angular_blocks().len());
    Ok(())
}
