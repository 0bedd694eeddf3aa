//! Discrete Riemannian metrics: positive edge lengths satisfying the strict
//! triangle inequality on every face.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mesh::HalfedgeMesh;
use crate::quat::Vec3;

/// Tolerance on `|angle sum - π|` per face.
pub const ANGLE_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricMesh {
    mesh: HalfedgeMesh,
    lengths: Vec<f64>,
    angles: Vec<[f64; 3]>,
    areas: Vec<f64>,
}

impl MetricMesh {
    /// Attaches per-edge lengths (indexed by canonical edge order).
    pub fn new(mesh: HalfedgeMesh, lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() != mesh.edge_count() {
            return Err(Error::SizeMismatch(format!(
                "{} lengths for {} edges",
                lengths.len(),
                mesh.edge_count()
            )));
        }
        if let Some(edge) = lengths.iter().position(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::NonPositiveLength { edge });
        }
        let mut angles = Vec::with_capacity(mesh.face_count());
        let mut areas = Vec::with_capacity(mesh.face_count());
        for f in 0..mesh.face_count() {
            // side c runs from corner c to corner c + 1
            let side = mesh.face_halfedges(f).map(|h| lengths[mesh.edge_of(h)]);
            let (a, b, c) = (side[0], side[1], side[2]);
            if !(a < b + c && b < c + a && c < a + b) {
                return Err(Error::TriangleInequality { face: f });
            }
            // corner k is opposite side k + 1
            let corner = [
                corner_angle(side[1], side[0], side[2]),
                corner_angle(side[2], side[1], side[0]),
                corner_angle(side[0], side[2], side[1]),
            ];
            let deviation = corner.iter().sum::<f64>() - PI;
            if deviation.abs() > ANGLE_SUM_TOLERANCE {
                return Err(Error::AngleSum { face: f, deviation });
            }
            angles.push(corner);
            areas.push(heron_area(a, b, c));
        }
        Ok(MetricMesh {
            mesh,
            lengths,
            angles,
            areas,
        })
    }

    pub fn mesh(&self) -> &HalfedgeMesh {
        &self.mesh
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn length(&self, e: usize) -> f64 {
        self.lengths[e]
    }

    /// Interior angle at corner `c` of face `f` (at vertex `faces[f][c]`).
    pub fn angle(&self, f: usize, c: usize) -> f64 {
        self.angles[f][c]
    }

    pub fn angles(&self) -> &[[f64; 3]] {
        &self.angles
    }

    pub fn area(&self, f: usize) -> f64 {
        self.areas[f]
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn mean_edge_length(&self) -> f64 {
        self.lengths.iter().sum::<f64>() / self.lengths.len() as f64
    }

    /// Angle defect `2π - Σ corner angles` at vertex `v`.
    pub fn angle_defect(&self, v: usize) -> f64 {
        let sum: f64 = self
            .mesh
            .outgoing_halfedges(v)
            .into_iter()
            .map(|h| self.angles[h / 3][h % 3])
            .sum();
        2.0 * PI - sum
    }
}

/// Angle opposite `opposite` in a triangle with adjacent sides `b`, `c`.
/// Law of cosines in half-angle form, accurate for needle triangles.
fn corner_angle(opposite: f64, b: f64, c: f64) -> f64 {
    let a = opposite;
    let s = 0.5 * (a + b + c);
    let num = ((s - b) * (s - c)).max(0.0).sqrt();
    let den = (s * (s - a)).max(0.0).sqrt();
    2.0 * num.atan2(den)
}

/// Kahan's numerically stable Heron formula.
pub fn heron_area(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

/// Euclidean edge lengths of an embedding.
pub fn metric_from_positions(mesh: &HalfedgeMesh, positions: &[Vec3]) -> Result<Vec<f64>> {
    if positions.len() != mesh.vertex_count() {
        return Err(Error::SizeMismatch(format!(
            "{} positions for {} vertices",
            positions.len(),
            mesh.vertex_count()
        )));
    }
    mesh.edges()
        .iter()
        .enumerate()
        .map(|(e, &[u, v])| {
            let l = (positions[v] - positions[u]).norm();
            if l > 0.0 && l.is_finite() {
                Ok(l)
            } else {
                Err(Error::DegenerateEdge { edge: e })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn equilateral_tetrahedron() {
        let mesh = shapes::tetrahedron().mesh;
        let m = MetricMesh::new(mesh, vec![1.0; 6]).unwrap();
        for f in 0..4 {
            assert!((m.area(f) - 3f64.sqrt() / 4.0).abs() < 1e-15);
            for c in 0..3 {
                assert!((m.angle(f, c) - PI / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn triangle_inequality_violation() {
        let mesh = shapes::tetrahedron().mesh;
        let f0 = mesh.face(0);
        let mut lengths = vec![1.0; 6];
        let e = mesh.find_edge(f0[0], f0[1]).unwrap();
        lengths[e] = 3.0;
        assert_eq!(
            MetricMesh::new(mesh, lengths).unwrap_err(),
            Error::TriangleInequality { face: 0 }
        );
    }

    #[test]
    fn non_positive_length() {
        let mesh = shapes::tetrahedron().mesh;
        let mut lengths = vec![1.0; 6];
        lengths[4] = 0.0;
        assert_eq!(
            MetricMesh::new(mesh, lengths).unwrap_err(),
            Error::NonPositiveLength { edge: 4 }
        );
    }

    #[test]
    fn cube_sphere_angles_match_embedding() {
        let s = shapes::cube_sphere(3);
        let lengths = metric_from_positions(&s.mesh, &s.positions).unwrap();
        let m = MetricMesh::new(s.mesh.clone(), lengths).unwrap();
        for (f, tri) in s.mesh.faces().iter().enumerate() {
            for c in 0..3 {
                let p = s.positions[tri[c]];
                let a = s.positions[tri[(c + 1) % 3]] - p;
                let b = s.positions[tri[(c + 2) % 3]] - p;
                let direct = a.cross(b).norm().atan2(a.dot(b));
                assert!((m.angle(f, c) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn icosahedron_edge_length_closed_form() {
        let s = shapes::icosahedron();
        let lengths = metric_from_positions(&s.mesh, &s.positions).unwrap();
        let expected = 4.0 / (10.0 + 2.0 * 5f64.sqrt()).sqrt();
        assert!(lengths.iter().all(|l| (l - expected).abs() < 1e-14));
    }

    #[test]
    fn scaling_positions_doubles_lengths() {
        let s = shapes::tetrahedron();
        let base = metric_from_positions(&s.mesh, &s.positions).unwrap();
        let scaled: Vec<Vec3> = s.positions.iter().map(|&p| p * 2.0).collect();
        let doubled = metric_from_positions(&s.mesh, &scaled).unwrap();
        for (a, b) in base.iter().zip(&doubled) {
            assert!((2.0 * a - b).abs() < 1e-15);
            assert!((a - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_edge() {
        let s = shapes::tetrahedron();
        let mut p = s.positions.clone();
        p[1] = p[0];
        assert!(matches!(
            metric_from_positions(&s.mesh, &p),
            Err(Error::DegenerateEdge { .. })
        ));
    }

    #[test]
    fn defects_sum_to_euler() {
        for s in [
            shapes::icosphere(2),
            shapes::torus_of_revolution(12, 8, 1.0, 0.4),
        ] {
            let lengths = metric_from_positions(&s.mesh, &s.positions).unwrap();
            let chi = s.mesh.euler_characteristic() as f64;
            let m = MetricMesh::new(s.mesh, lengths).unwrap();
            let total: f64 = (0..m.mesh().vertex_count())
                .map(|v| m.angle_defect(v))
                .sum();
            assert!((total - 2.0 * PI * chi).abs() < 1e-10);
        }
    }
}
