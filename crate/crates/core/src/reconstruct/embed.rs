use std::collections::VecDeque;

use crate::dirac::SpinorField;
use crate::error::{Error, Result};
use crate::mesh::{metric_from_positions, HalfedgeMesh, HomologyBasis, MetricMesh};
use crate::quat::{Quat, Vec2, Vec3};
use crate::spin::{
    base_spin_structure, build_face_charts, classify, lift_into, transition_lifts, FaceChart,
    SpinStructure,
};

/// Quaternion `ψ` with `ψ̄ x ψ` mapping the chart triangle onto `world` by
/// an orientation-preserving similarity. The sign is arbitrary.
pub fn similarity_spinor(chart: &FaceChart, world: [Vec3; 3]) -> Option<Quat> {
    let edge = world[1] - world[0];
    let normal = edge.cross(world[2] - world[0]);
    if !(normal.norm() > 0.0) || !(edge.norm() > 0.0) {
        return None;
    }
    let e1 = edge.normalized();
    let e3 = normal.normalized();
    let e2 = e3.cross(e1);
    // chart frame is (i, j, k), so the rotation's columns are the world frame
    let m = [[e1.x, e2.x, e3.x], [e1.y, e2.y, e3.y], [e1.z, e2.z, e3.z]];
    let r = Quat::from_rotation_matrix(m);
    let scale = edge.norm() / chart.edges[0].norm();
    Some(r.conj() * scale.sqrt())
}

/// Spinor field and edge signs reproducing given world triangles, one per
/// face, over a fixed metric.
///
/// Face signs are fixed along a BFS of the dual graph from face 0 (neighbors
/// in edge index order) so that `r̂ ψ_g` is as close as possible to `ψ_f`;
/// edges off that tree take whichever sign makes the transported spinor
/// closer.
pub fn spinor_for_triangles(
    metric: &MetricMesh,
    charts: &[FaceChart],
    triangles: &[[Vec3; 3]],
) -> Result<(SpinorField, SpinStructure)> {
    let mesh = metric.mesh();
    let lifts = transition_lifts(metric, charts);
    let mut psi: Vec<Quat> = triangles
        .iter()
        .enumerate()
        .map(|(f, t)| similarity_spinor(&charts[f], *t).ok_or(Error::DegenerateFace { face: f }))
        .collect::<Result<_>>()?;

    let mut signs = vec![0i8; mesh.edge_count()];
    let mut seen = vec![false; mesh.face_count()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(f) = queue.pop_front() {
        let mut across: Vec<usize> = mesh.face_halfedges(f).to_vec();
        across.sort_by_key(|&h| mesh.edge_of(h));
        for h in across {
            let g = mesh.opposite_face(h);
            if seen[g] {
                continue;
            }
            seen[g] = true;
            let t = lift_into(metric, &lifts, h);
            if (t * psi[g] + psi[f]).norm2() < (t * psi[g] - psi[f]).norm2() {
                psi[g] = -psi[g];
            }
            signs[mesh.edge_of(h)] = 1;
            queue.push_back(g);
        }
    }
    for e in 0..mesh.edge_count() {
        if signs[e] == 0 {
            let h = mesh.edge_halfedges(e)[0];
            let (f, g) = (h / 3, mesh.opposite_face(h));
            let t = lift_into(metric, &lifts, h);
            signs[e] = if (t * psi[g] + psi[f]).norm2() < (t * psi[g] - psi[f]).norm2() {
                -1
            } else {
                1
            };
        }
    }

    let base = base_spin_structure(metric, &lifts)?;
    let hb = HomologyBasis::new(mesh);
    let class_bits = classify(&base, &hb, &signs);
    Ok((SpinorField(psi), SpinStructure { signs, class_bits }))
}

/// The spinor field induced by an embedding, with its spin structure and
/// induced metric.
pub fn derive_spinor_from_embedding(
    mesh: &HalfedgeMesh,
    positions: &[Vec3],
) -> Result<(SpinorField, SpinStructure, MetricMesh)> {
    let lengths = metric_from_positions(mesh, positions)?;
    let metric = MetricMesh::new(mesh.clone(), lengths)?;
    let charts = build_face_charts(&metric)?;
    let triangles: Vec<[Vec3; 3]> = mesh
        .faces()
        .iter()
        .map(|t| t.map(|v| positions[v]))
        .collect();
    let (psi, spin) = spinor_for_triangles(&metric, &charts, &triangles)?;
    Ok((psi, spin, metric))
}

/// The spinor field of a flat metric given a planar layout of every face.
pub fn spinor_from_layout(
    metric: &MetricMesh,
    layout: &[[Vec2; 3]],
) -> Result<(SpinorField, SpinStructure)> {
    let charts = build_face_charts(metric)?;
    let triangles: Vec<[Vec3; 3]> = layout
        .iter()
        .map(|t| t.map(|p| Vec3::new(p.x, p.y, 0.0)))
        .collect();
    spinor_for_triangles(metric, &charts, &triangles)
}
