//! Enumerate the spin structures of a torus and a genus-2 surface.
//!
//! cargo run --example spin_classes

use spinshape::mesh::HomologyBasis;
use spinshape::shapes;
use spinshape::spin::{
    base_spin_structure, build_face_charts, enumerate_spin_classes, transition_lifts,
    vertex_lift_check,
};

fn main() -> spinshape::Result<()> {
    for (name, shape) in [
        ("torus", shapes::torus_of_revolution(12, 8, 1.0, 0.4)),
        ("double torus", shapes::double_torus()),
    ] {
        let m = shape.metric();
        let lifts = transition_lifts(&m, &build_face_charts(&m)?);
        let base = base_spin_structure(&m, &lifts)?;
        let hb = HomologyBasis::new(m.mesh());
        println!("{name} (genus {}):", m.mesh().genus());
        for s in enumerate_spin_classes(&m, &base, &hb) {
            let valid = vertex_lift_check(&m, &lifts, &s).iter().all(|&ok| ok);
            println!(
                "  class {} flips {:3} edges, valid {valid}",
                s.label(),
                s.flipped_count()
            );
        }
    }
    Ok(())
}
