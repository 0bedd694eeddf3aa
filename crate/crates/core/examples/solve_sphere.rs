//! Conformal solve on the intrinsic metric of an icosphere from a random
//! spinor field, with the energy trace and reconstruction diagnostics.
//!
//! cargo run --release --example solve_sphere -- [seed]

use spinshape::dirac::DiracOperator;
use spinshape::mesh::io::write_obj;
use spinshape::reconstruct::integrate;
use spinshape::shapes;
use spinshape::solve::{minimize, Init, SolveConfig};
use spinshape::spin::{base_spin_structure, build_face_charts, transition_lifts};

fn main() -> spinshape::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let metric = shapes::icosphere(2).metric();
    let lifts = transition_lifts(&metric, &build_face_charts(&metric)?);
    let spin = base_spin_structure(&metric, &lifts)?;
    let op = DiracOperator::new(metric, spin)?;

    let cfg = SolveConfig {
        init: Init::Random,
        rng_seed: seed,
        ..Default::default()
    };
    let result = minimize(&op, &cfg)?;
    for (i, t) in result.trace.iter().enumerate() {
        println!(
            "{i:2} eps3 {:.1e} e_alpha {:.2e} e_V {:.2e} e_willmore {:.3e} steps {}",
            t.eps3, t.e_alpha, t.e_v, t.e_willmore, t.inner_iterations
        );
    }
    println!(
        "{:?}, channel residual {:.2e}",
        result.termination, result.channel_residual
    );

    let rec = integrate(&op, &result.psi)?;
    println!(
        "max edge mismatch {:.3e}, closure residual {:.3e}",
        op.max_edge_mismatch(&result.psi),
        rec.closure_max
    );
    let path = std::env::temp_dir().join("solve_sphere.obj");
    std::fs::write(&path, write_obj(&rec.positions, op.metric().mesh().faces()))?;
    println!("wrote {}", path.display());
    Ok(())
}
