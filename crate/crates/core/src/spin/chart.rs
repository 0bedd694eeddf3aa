//! Face charts and the lifted transition rotations between them.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::MetricMesh;
use crate::quat::{Quat, Vec2};

/// Relative area below which a face counts as degenerate.
pub const DEGENERATE_AREA_RATIO: f64 = 1e-12;

/// A face laid out in the `i`–`j` plane: corner 0 at the origin, corner 1 on
/// the positive `i` axis, corner 2 in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceChart {
    pub corners: [Vec2; 3],
    /// `edges[c]` runs from corner `c` to corner `c + 1`.
    pub edges: [Vec2; 3],
    pub area: f64,
}

impl FaceChart {
    /// Chart edge vector of halfedge slot `c` as an imaginary quaternion.
    pub fn edge(&self, c: usize) -> Quat {
        Quat::chart(self.edges[c])
    }

    pub fn centroid(&self) -> Vec2 {
        (self.corners[0] + self.corners[1] + self.corners[2]) * (1.0 / 3.0)
    }
}

pub fn build_face_charts(m: &MetricMesh) -> Result<Vec<FaceChart>> {
    let mesh = m.mesh();
    let mean_area = m.total_area() / mesh.face_count() as f64;
    (0..mesh.face_count())
        .into_par_iter()
        .map(|f| {
            let [h0, _, h2] = mesh.face_halfedges(f);
            let l01 = m.length(mesh.edge_of(h0));
            let l02 = m.length(mesh.edge_of(h2));
            let (s, c) = m.angle(f, 0).sin_cos();
            let p1 = Vec2::new(l01, 0.0);
            let p2 = Vec2::new(l02 * c, l02 * s);
            let e0 = p1;
            let e2 = -p2;
            let e1 = -(e0 + e2);
            let area = m.area(f);
            if !(area > DEGENERATE_AREA_RATIO * mean_area) {
                return Err(Error::DegenerateFace { face: f });
            }
            Ok(FaceChart {
                corners: [Vec2::new(0.0, 0.0), p1, p2],
                edges: [e0, e1, e2],
                area,
            })
        })
        .collect()
}

/// Rotation aligning the chart of the face right of an edge with the chart
/// of the face left of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionLift {
    /// Angle in `(-π, π]`.
    pub theta: f64,
    /// `cos(θ/2) + k sin(θ/2)`.
    pub rotor: Quat,
}

impl TransitionLift {
    pub fn new(theta: f64) -> Self {
        let theta = if theta <= -PI {
            theta + 2.0 * PI
        } else {
            theta
        };
        TransitionLift {
            theta,
            rotor: Quat::k_rotation(theta),
        }
    }
}

/// Chart vector of edge `e` oriented from its smaller to its larger vertex,
/// as seen in face `side` (0: left of that direction, 1: right of it).
pub fn oriented_edge(m: &MetricMesh, charts: &[FaceChart], e: usize, side: usize) -> Vec2 {
    let h = m.mesh().edge_halfedges(e)[side];
    let v = charts[h / 3].edges[h % 3];
    if side == 0 {
        v
    } else {
        -v
    }
}

/// For every edge `e` with faces `[f, g]` (see [`crate::mesh::HalfedgeMesh::edge_faces`]),
/// the lift `r̂` with `r̂ Ê^g r̂⁻¹ = Ê^f`; it carries spinors from `g` into `f`.
pub fn transition_lifts(m: &MetricMesh, charts: &[FaceChart]) -> Vec<TransitionLift> {
    (0..m.mesh().edge_count())
        .into_par_iter()
        .map(|e| {
            let ef = oriented_edge(m, charts, e, 0);
            let eg = oriented_edge(m, charts, e, 1);
            TransitionLift::new(eg.cross(ef).atan2(eg.dot(ef)))
        })
        .collect()
}

/// Lift carrying a spinor across halfedge `h`'s edge from the opposite face
/// into the face of `h`.
pub fn lift_into(m: &MetricMesh, lifts: &[TransitionLift], h: usize) -> Quat {
    let r = lifts[m.mesh().edge_of(h)].rotor;
    if m.mesh().is_forward(h) {
        r
    } else {
        r.conj()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::HalfedgeMesh;
    use crate::shapes;

    #[test]
    fn equilateral_chart() {
        let m = MetricMesh::new(shapes::tetrahedron().mesh, vec![1.0; 6]).unwrap();
        let charts = build_face_charts(&m).unwrap();
        let c = charts[0];
        assert_eq!(c.corners[1], Vec2::new(1.0, 0.0));
        assert!((c.corners[2].x - 0.5).abs() < 1e-15);
        assert!((c.corners[2].y - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((c.area - 3f64.sqrt() / 4.0).abs() < 1e-15);
    }

    fn tetra_with_base(a: f64, b: f64, c: f64, apex: f64) -> MetricMesh {
        let mesh = shapes::tetrahedron().mesh;
        let f0 = mesh.face(0);
        let mut lengths = vec![apex; 6];
        for (k, l) in [a, b, c].into_iter().enumerate() {
            lengths[mesh.find_edge(f0[k], f0[(k + 1) % 3]).unwrap()] = l;
        }
        MetricMesh::new(mesh, lengths).unwrap()
    }

    #[test]
    fn right_triangle_area() {
        let m = tetra_with_base(3.0, 4.0, 5.0, 4.0);
        let charts = build_face_charts(&m).unwrap();
        assert!((charts[0].area - 6.0).abs() < 1e-12);
    }

    #[test]
    fn near_degenerate_face_is_flagged() {
        let m = tetra_with_base(1.0, 1.0, 1.9999999, 1.5);
        match build_face_charts(&m) {
            Err(Error::DegenerateFace { face }) => assert_eq!(face, 0),
            Ok(charts) => assert!(charts[0].area < 1e-3),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn chart_invariants() {
        let s = shapes::torus_of_revolution(11, 7, 1.0, 0.4);
        let m = s.metric();
        let charts = build_face_charts(&m).unwrap();
        for (f, chart) in charts.iter().enumerate() {
            let sum = chart.edges[0] + chart.edges[1] + chart.edges[2];
            assert!(sum.norm() < 1e-15);
            assert!(chart.corners[2].y > 0.0);
            for (c, &h) in m.mesh().face_halfedges(f).iter().enumerate() {
                assert!((chart.edges[c].norm() - m.length(m.mesh().edge_of(h))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn half_angle_lifts() {
        let r = TransitionLift::new(PI / 2.0).rotor;
        let h = 2f64.sqrt() / 2.0;
        assert!((r - Quat::new(h, 0.0, 0.0, h)).norm() < 1e-15);
        let r = TransitionLift::new(PI).rotor;
        assert!((r - Quat::K).norm() < 1e-15);
        assert_eq!(TransitionLift::new(-PI).theta, PI);
    }

    fn check_conjugation(m: &MetricMesh) {
        let charts = build_face_charts(m).unwrap();
        let lifts = transition_lifts(m, &charts);
        for (e, lift) in lifts.iter().enumerate() {
            let ef = Quat::chart(oriented_edge(m, &charts, e, 0));
            let eg = Quat::chart(oriented_edge(m, &charts, e, 1));
            let r = lift.rotor;
            assert!((r * eg * r.inverse() - ef).norm() < 1e-10);
            assert!((r.conj() * ef * r.conj().inverse() - eg).norm() < 1e-10);
            assert!(lift.theta > -PI && lift.theta <= PI);
        }
    }

    #[test]
    fn conjugation_property() {
        check_conjugation(&MetricMesh::new(shapes::tetrahedron().mesh, vec![1.0; 6]).unwrap());
        check_conjugation(&shapes::icosphere(2).metric());
        check_conjugation(&shapes::double_torus().metric());
        check_conjugation(&shapes::seven_vertex_torus().metric());
    }

    #[test]
    fn lift_into_matches_edge_orientation() {
        let m = shapes::icosphere(1).metric();
        let charts = build_face_charts(&m).unwrap();
        let lifts = transition_lifts(&m, &charts);
        let mesh: &HalfedgeMesh = m.mesh();
        for h in 0..mesh.halfedge_count() {
            let t = mesh.twin(h);
            let here = Quat::chart(charts[h / 3].edges[h % 3]);
            let there = Quat::chart(-charts[t / 3].edges[t % 3]);
            let r = lift_into(&m, &lifts, h);
            assert!((r * there * r.conj() - here).norm() < 1e-12);
        }
    }
}
