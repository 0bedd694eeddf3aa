//! Split the derivative of the spinor field induced by a round sphere into
//! its channels and read off mean curvature and the Willmore energy.
//!
//! cargo run --example dirac_channels -- [subdivisions]

use std::f64::consts::PI;

use spinshape::dirac::{DiracOperator, EnergyWeights};
use spinshape::reconstruct::derive_spinor_from_embedding;
use spinshape::shapes;

fn main() -> spinshape::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3);
    let sphere = shapes::icosphere(n);
    let (psi, spin, metric) = derive_spinor_from_embedding(&sphere.mesh, &sphere.positions)?;
    let op = DiracOperator::new(metric, spin)?;
    let channels = op.channels(&psi)?;
    let mut h: Vec<f64> = channels.faces.iter().map(|c| c.mean_curvature()).collect();
    h.sort_by(f64::total_cmp);
    println!(
        "faces {}, median H {:.5} (unit sphere: 1)",
        h.len(),
        h[h.len() / 2]
    );

    let e = op.energy(&psi, &EnergyWeights::new(1.0, 1.0, 1.0, 0.0))?;
    println!(
        "e_alpha {:.3e}  e_V {:.3e}  e_willmore {:.5}",
        e.e_alpha, e.e_v, e.e_willmore
    );
    println!(
        "Willmore 4·e_willmore = {:.5} (4π = {:.5})",
        4.0 * e.e_willmore,
        4.0 * PI
    );
    println!("max edge mismatch {:.2e}", op.max_edge_mismatch(&psi));
    Ok(())
}
