use serde::Serialize;
use sprs::{FillInReduction, SymmetryCheck, TriMat};
use sprs_ldl::Ldl;

use crate::dirac::{DiracOperator, SpinorField};
use crate::error::{Error, Result};
use crate::mesh::HalfedgeMesh;
use crate::quat::Vec3;

#[derive(Debug, Clone, Serialize)]
pub struct ImmersionResult {
    /// Vertex positions with vertex 0 at the origin.
    pub positions: Vec<Vec3>,
    /// Max and RMS over edges of `|f(hi) - f(lo) - ω̄_e|`.
    pub closure_max: f64,
    pub closure_rms: f64,
    pub normals: Vec<Vec3>,
    /// `H = 2U/|ψ|²` per face.
    pub mean_curvature: Vec<f64>,
}

/// Least-squares primitive of per-edge vectors (oriented from the smaller to
/// the larger vertex), with vertex 0 pinned at the origin.
pub fn integrate_edge_vectors(mesh: &HalfedgeMesh, edge_vectors: &[Vec3]) -> Result<Vec<Vec3>> {
    let n = mesh.vertex_count();
    if n == 1 {
        return Ok(vec![Vec3::ZERO]);
    }
    // unknowns are vertices 1..n
    let mut tri = TriMat::new((n - 1, n - 1));
    let mut rhs = vec![vec![0.0; n - 1]; 3];
    for (e, &[lo, hi]) in mesh.edges().iter().enumerate() {
        let w = edge_vectors[e].to_array();
        for (v, s) in [(lo, -1.0), (hi, 1.0)] {
            if v > 0 {
                tri.add_triplet(v - 1, v - 1, 1.0);
                for (c, r) in rhs.iter_mut().enumerate() {
                    r[v - 1] += s * w[c];
                }
            }
        }
        if lo > 0 {
            tri.add_triplet(lo - 1, hi - 1, -1.0);
            tri.add_triplet(hi - 1, lo - 1, -1.0);
        }
    }
    let mat = tri.to_csc::<usize>();
    let ldl = Ldl::new()
        .fill_in_reduction(FillInReduction::ReverseCuthillMcKee)
        .check_symmetry(SymmetryCheck::DontCheckSymmetry)
        .numeric(mat.view())
        .map_err(|e| Error::SolveFailure(format!("{e:?}")))?;
    if ldl.d().iter().any(|&d: &f64| !(d > 0.0 && d.is_finite())) {
        return Err(Error::SolveFailure(
            "Laplacian factorization lost definiteness".into(),
        ));
    }
    let cols: Vec<Vec<f64>> = rhs.iter().map(|r| ldl.solve(r)).collect();
    let mut positions = vec![Vec3::ZERO; n];
    for v in 1..n {
        positions[v] = Vec3::new(cols[0][v - 1], cols[1][v - 1], cols[2][v - 1]);
    }
    Ok(positions)
}

/// Primitive `f` with `df ≈ ω̄` in the least-squares sense.
pub fn integrate(op: &DiracOperator, psi: &SpinorField) -> Result<ImmersionResult> {
    let channels = op.channels(psi)?;
    let mesh = op.metric().mesh();
    let omega: Vec<Vec3> = (0..mesh.edge_count())
        .map(|e| op.averaged_one_form(psi, e))
        .collect();
    let positions = integrate_edge_vectors(mesh, &omega)?;
    let (mut max, mut sum2) = (0.0f64, 0.0);
    for (e, &[lo, hi]) in mesh.edges().iter().enumerate() {
        let r = (positions[hi] - positions[lo] - omega[e]).norm();
        max = max.max(r);
        sum2 += r * r;
    }
    Ok(ImmersionResult {
        positions,
        closure_max: max,
        closure_rms: (sum2 / mesh.edge_count() as f64).sqrt(),
        normals: channels.faces.iter().map(|c| c.normal).collect(),
        mean_curvature: channels.faces.iter().map(|c| c.mean_curvature()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quat;
    use crate::reconstruct::{derive_spinor_from_embedding, spinor_from_layout};
    use crate::shapes;

    fn max_offset(a: &[Vec3], b: &[Vec3]) -> f64 {
        let shift = b[0] - a[0];
        a.iter()
            .zip(b)
            .map(|(p, q)| (*q - *p - shift).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn exact_edge_vectors_recover_positions() {
        let s = shapes::torus_of_revolution(14, 9, 1.0, 0.3);
        let vectors: Vec<Vec3> = s
            .mesh
            .edges()
            .iter()
            .map(|&[lo, hi]| s.positions[hi] - s.positions[lo])
            .collect();
        let p = integrate_edge_vectors(&s.mesh, &vectors).unwrap();
        assert_eq!(p[0], Vec3::ZERO);
        assert!(max_offset(&s.positions, &p) <= 1e-10 * s.diameter());
    }

    #[test]
    fn embedded_roundtrip_closes() {
        let s = shapes::icosphere(2);
        let (psi, spin, m) = derive_spinor_from_embedding(&s.mesh, &s.positions).unwrap();
        let op = DiracOperator::new(m, spin).unwrap();
        let r = integrate(&op, &psi).unwrap();
        assert!(r.closure_max <= 1e-12 * s.diameter());
        assert!(max_offset(&s.positions, &r.positions) <= 1e-10 * s.diameter());
        let doubled = integrate(&op, &psi.scaled(2f64.sqrt())).unwrap();
        let twice: Vec<Vec3> = r.positions.iter().map(|&p| p * 2.0).collect();
        assert!(max_offset(&twice, &doubled.positions) <= 1e-10 * s.diameter());
    }

    #[test]
    fn rotated_field_rotates_positions() {
        let s = shapes::icosphere(1);
        let (psi, spin, m) = derive_spinor_from_embedding(&s.mesh, &s.positions).unwrap();
        let op = DiracOperator::new(m, spin).unwrap();
        let lambda = Quat::new(0.3, -0.5, 0.2, 0.7);
        let lambda = lambda * (1.0 / lambda.norm());
        let a = integrate(&op, &psi).unwrap().positions;
        let b = integrate(&op, &psi.times(lambda)).unwrap().positions;
        let rotated: Vec<Vec3> = a.iter().map(|&p| lambda.sandwich(p)).collect();
        assert!(max_offset(&rotated, &b) <= 1e-10);
    }

    #[test]
    fn flat_torus_residual_carries_the_periods() {
        let s = shapes::flat_torus(5, 4, 1.0, 1.0);
        let m = s.metric();
        let (psi, spin) = spinor_from_layout(&m, s.layout.as_ref().unwrap()).unwrap();
        let op = DiracOperator::new(m, spin).unwrap();
        let r = integrate(&op, &psi).unwrap();
        assert!(r.closure_max > 0.1);
        let mesh = op.metric().mesh();
        for (cycle, period) in op.homology().cycles.iter().zip(op.periods(&psi)) {
            let mut residual = Vec3::ZERO;
            for d in cycle {
                let [lo, hi] = mesh.edges()[d.edge];
                let rho = r.positions[hi] - r.positions[lo] - op.averaged_one_form(&psi, d.edge);
                residual += rho * d.sign();
            }
            assert!((residual + period).norm() < 1e-12);
        }
    }
}
