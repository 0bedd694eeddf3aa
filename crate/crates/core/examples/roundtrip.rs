//! Embedded torus → spinor field → integrated positions, and the error of
//! the reconstruction.
//!
//! cargo run --example roundtrip

use spinshape::dirac::DiracOperator;
use spinshape::reconstruct::{derive_spinor_from_embedding, diagnostics, integrate};
use spinshape::shapes;

fn main() -> spinshape::Result<()> {
    let torus = shapes::torus_of_revolution(32, 16, 1.0, 0.4);
    let (psi, spin, metric) = derive_spinor_from_embedding(&torus.mesh, &torus.positions)?;
    println!("induced spin class {:?}", spin.label());
    let op = DiracOperator::new(metric, spin)?;
    let rec = integrate(&op, &psi)?;
    let shift = torus.positions[0] - rec.positions[0];
    let err = torus
        .positions
        .iter()
        .zip(&rec.positions)
        .map(|(p, q)| (*p - *q - shift).norm())
        .fold(0.0, f64::max);
    println!(
        "max position error {err:.2e}, closure residual {:.2e}",
        rec.closure_max
    );
    for (i, p) in op.periods(&psi).iter().enumerate() {
        println!("period {i}: {:.2e}", p.norm());
    }
    let d = diagnostics(op.metric(), &rec.positions, Some(&op.channels(&psi)?))?;
    println!(
        "Willmore: channel {:.4}, dihedral {:.4}",
        d.willmore_channel.unwrap_or(f64::NAN),
        d.willmore_dihedral
    );
    Ok(())
}
