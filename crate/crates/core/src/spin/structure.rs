//! Discrete spin structures as Z/2 edge signs on the transition lifts.
//!
//! Around each vertex the signed product of lifts must equal the lift an
//! embedded surface induces, `exp(-k κ_v / 2)` with `κ_v` the angle defect.
//! Writing `x_e = 1` for `s_e = -1`, this is the linear system
//! `Σ_{e ∋ v} x_e = b_v (mod 2)`; solutions differ by Z/2 1-cycles, and two
//! solutions are equivalent when they differ by a sum of face boundaries.

use crate::error::{Error, Result};
use crate::mesh::{primal_bfs, HomologyBasis, MetricMesh};
use crate::quat::Quat;
use crate::spin::chart::{lift_into, TransitionLift};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinStructure {
    /// `+1` or `-1` per edge.
    pub signs: Vec<i8>,
    /// Class offset from the base structure, one bit per homology generator.
    pub class_bits: Vec<bool>,
}

impl SpinStructure {
    pub fn sign(&self, e: usize) -> f64 {
        f64::from(self.signs[e])
    }

    /// Class bits as a string of `0` and `1`.
    pub fn label(&self) -> String {
        bits_to_string(&self.class_bits)
    }

    pub fn flipped_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    /// Multiplies the sign of every edge of face `f` by `-1`, the gauge
    /// change matching `ψ_f ↦ -ψ_f`.
    pub fn flip_face(&mut self, m: &MetricMesh, f: usize) {
        for h in m.mesh().face_halfedges(f) {
            let e = m.mesh().edge_of(h);
            self.signs[e] = -self.signs[e];
        }
    }
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// Target lift around `v`: `exp(-k κ_v / 2)`.
fn ring_target(m: &MetricMesh, v: usize) -> Quat {
    Quat::k_rotation(-m.angle_defect(v))
}

/// Product of the lifts around `v`, each multiplied by its edge sign when
/// `signs` is given.
fn ring_product(m: &MetricMesh, lifts: &[TransitionLift], signs: Option<&[i8]>, v: usize) -> Quat {
    let mesh = m.mesh();
    let mut p = Quat::ONE;
    for h in mesh.outgoing_halfedges(v) {
        let across = mesh.prev(h);
        let mut r = lift_into(m, lifts, across);
        if let Some(s) = signs {
            r = r * f64::from(s[mesh.edge_of(across)]);
        }
        p = p * r;
    }
    p
}

/// True at `v` iff the signed ring product equals the target lift.
pub fn vertex_lift_check(m: &MetricMesh, lifts: &[TransitionLift], s: &SpinStructure) -> Vec<bool> {
    (0..m.mesh().vertex_count())
        .map(|v| {
            let ratio = ring_product(m, lifts, Some(&s.signs), v) * ring_target(m, v).conj();
            ratio.w > 0.0
        })
        .collect()
}

/// Solves the vertex conditions by peeling a spanning tree from the leaves:
/// non-tree edges keep sign `+1`, each tree edge fixes the parity of its
/// child vertex.
pub fn base_spin_structure(m: &MetricMesh, lifts: &[TransitionLift]) -> Result<SpinStructure> {
    let mesh = m.mesh();
    let mut deficit: Vec<bool> = (0..mesh.vertex_count())
        .map(|v| (ring_product(m, lifts, None, v) * ring_target(m, v).conj()).w < 0.0)
        .collect();
    let (parent, _) = primal_bfs(mesh);
    let order = bfs_order(&parent);
    let mut x = vec![false; mesh.edge_count()];
    for &v in order.iter().rev() {
        if let Some((p, e)) = parent[v] {
            if deficit[v] {
                x[e] = true;
                deficit[v] = false;
                deficit[p] = !deficit[p];
            }
        }
    }
    if deficit[0] {
        return Err(Error::Unsolvable { vertex: 0 });
    }
    let genus = mesh.genus();
    Ok(SpinStructure {
        signs: x.iter().map(|&b| if b { -1 } else { 1 }).collect(),
        class_bits: vec![false; 2 * genus],
    })
}

/// Vertices in BFS discovery order given the parent table of a BFS tree
/// rooted at vertex 0.
fn bfs_order(parent: &[Option<(usize, usize)>]) -> Vec<usize> {
    let n = parent.len();
    let mut children = vec![Vec::new(); n];
    for (v, p) in parent.iter().enumerate() {
        if let Some((p, _)) = p {
            children[*p].push(v);
        }
    }
    let mut order = vec![0];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        order.extend(children[v].iter().copied());
        i += 1;
    }
    order
}

/// Edge flip set of generator `i`: the edges of its primal loop.
fn generator_flips(hb: &HomologyBasis, edge_count: usize, i: usize) -> Vec<bool> {
    let mut flips = vec![false; edge_count];
    for d in &hb.cycles[i] {
        flips[d.edge] = !flips[d.edge];
    }
    flips
}

/// All `2^{2p}` classes in lexicographic order of their bit strings.
pub fn enumerate_spin_classes(
    m: &MetricMesh,
    base: &SpinStructure,
    hb: &HomologyBasis,
) -> Vec<SpinStructure> {
    let n = hb.len();
    (0..1usize << n)
        .map(|index| {
            let bits: Vec<bool> = (0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect();
            structure_for_bits(m, base, hb, &bits)
        })
        .collect()
}

/// The representative of class `bits`: the base with the loops of the set
/// generators flipped.
pub fn structure_for_bits(
    m: &MetricMesh,
    base: &SpinStructure,
    hb: &HomologyBasis,
    bits: &[bool],
) -> SpinStructure {
    let edge_count = m.mesh().edge_count();
    let mut signs = base.signs.clone();
    for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
        for (e, flip) in generator_flips(hb, edge_count, i).into_iter().enumerate() {
            if flip {
                signs[e] = -signs[e];
            }
        }
    }
    SpinStructure {
        signs,
        class_bits: bits.to_vec(),
    }
}

/// Class bits of an arbitrary valid sign vector relative to `base`: the
/// parity of the flip set's crossings with each dual loop.
pub fn classify(base: &SpinStructure, hb: &HomologyBasis, signs: &[i8]) -> Vec<bool> {
    hb.dual_cycles
        .iter()
        .map(|dual| dual.iter().filter(|&&e| signs[e] != base.signs[e]).count() % 2 == 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;
    use crate::spin::{build_face_charts, transition_lifts};

    fn setup(m: &MetricMesh) -> Vec<TransitionLift> {
        transition_lifts(m, &build_face_charts(m).unwrap())
    }

    #[test]
    fn icosahedron_base_structure() {
        let m = shapes::icosahedron().metric();
        let lifts = setup(&m);
        let s = base_spin_structure(&m, &lifts).unwrap();
        assert!(vertex_lift_check(&m, &lifts, &s).iter().all(|&b| b));
        assert_eq!(s.label(), "");
    }

    #[test]
    fn single_flip_breaks_both_endpoints() {
        let m = shapes::icosahedron().metric();
        let lifts = setup(&m);
        let base = base_spin_structure(&m, &lifts).unwrap();
        for e in 0..m.mesh().edge_count() {
            let mut s = base.clone();
            s.signs[e] = -s.signs[e];
            let bad: Vec<usize> = vertex_lift_check(&m, &lifts, &s)
                .iter()
                .enumerate()
                .filter(|(_, ok)| !**ok)
                .map(|(v, _)| v)
                .collect();
            assert_eq!(bad, m.mesh().edge(e).to_vec());
        }
    }

    #[test]
    fn face_flips_preserve_check_and_class() {
        let m = shapes::torus_of_revolution(8, 6, 1.0, 0.35).metric();
        let lifts = setup(&m);
        let base = base_spin_structure(&m, &lifts).unwrap();
        let hb = HomologyBasis::new(m.mesh());
        for s in enumerate_spin_classes(&m, &base, &hb) {
            let mut t = s.clone();
            for f in [0, 5, 17, 40] {
                t.flip_face(&m, f);
            }
            assert!(vertex_lift_check(&m, &lifts, &t).iter().all(|&b| b));
            assert_eq!(classify(&base, &hb, &t.signs), s.class_bits);
        }
    }

    #[test]
    fn torus_enumeration_order() {
        let m = shapes::seven_vertex_torus().metric();
        let lifts = setup(&m);
        let base = base_spin_structure(&m, &lifts).unwrap();
        let hb = HomologyBasis::new(m.mesh());
        let labels: Vec<String> = enumerate_spin_classes(&m, &base, &hb)
            .iter()
            .map(SpinStructure::label)
            .collect();
        assert_eq!(labels, ["00", "01", "10", "11"]);
    }

    #[test]
    fn bit_strings() {
        assert_eq!(parse_bits("0110"), Some(vec![false, true, true, false]));
        assert_eq!(parse_bits("01x"), None);
        assert_eq!(bits_to_string(&[true, false]), "10");
    }
}
