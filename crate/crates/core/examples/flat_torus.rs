//! Isometric solve on a flat square torus: the planar layout is a zero of
//! the channel energy whose periods are the lattice vectors; a period
//! penalty pushes the solver off that branch.
//!
//! cargo run --release --example flat_torus

use spinshape::dirac::{DiracOperator, SpinorField};
use spinshape::reconstruct::spinor_from_layout;
use spinshape::shapes;
use spinshape::solve::{minimize, Init, Mode, SolveConfig};

fn main() -> spinshape::Result<()> {
    let flat = shapes::flat_torus(8, 8, 1.0, 1.0);
    let metric = flat.metric();
    let (planar, spin) = spinor_from_layout(&metric, flat.layout.as_ref().expect("flat layout"))?;
    println!("layout spin class {:?}", spin.label());
    let op = DiracOperator::new(metric, spin)?;
    let norms = |psi: &SpinorField| op.periods(psi).iter().map(|p| p.norm()).collect::<Vec<_>>();
    println!("planar periods {:?}", norms(&planar));

    for period_weight in [0.0, 1.0] {
        let cfg = SolveConfig {
            mode: Mode::Isometric,
            init: Init::Ones,
            period_weight,
            ..Default::default()
        };
        let r = minimize(&op, &cfg)?;
        println!(
            "period weight {period_weight}: {:?}, channel residual {:.2e}, periods {:?}, max edge mismatch {:.2e}",
            r.termination,
            r.channel_residual,
            norms(&r.psi),
            op.max_edge_mismatch(&r.psi)
        );
    }
    Ok(())
}
