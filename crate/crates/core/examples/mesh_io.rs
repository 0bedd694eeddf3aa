//! Load a mesh (OBJ or metricmesh) or fall back to a bundled torus, check its
//! invariants, and print its topology and metric statistics.
//!
//! cargo run --example mesh_io -- [path]

use spinshape::mesh::io::{load, write_metricmesh};
use spinshape::mesh::HomologyBasis;
use spinshape::shapes;

fn main() -> spinshape::Result<()> {
    let metric = match std::env::args().nth(1) {
        Some(path) => load(path.as_ref())?.metric,
        None => shapes::torus_of_revolution(16, 8, 1.0, 0.4).metric(),
    };
    let mesh = metric.mesh();
    println!(
        "V {} E {} F {} genus {}",
        mesh.vertex_count(),
        mesh.edge_count(),
        mesh.face_count(),
        mesh.genus()
    );
    println!(
        "total area {:.6}, mean edge {:.6}",
        metric.total_area(),
        metric.mean_edge_length()
    );
    let hb = HomologyBasis::new(mesh);
    for (i, cycle) in hb.cycles.iter().enumerate() {
        println!("homology loop {i}: {} edges", cycle.len());
    }
    let text = write_metricmesh(&metric);
    println!("metricmesh serialization: {} lines", text.lines().count());
    Ok(())
}
