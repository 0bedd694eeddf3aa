//! Homology generators by tree–cotree decomposition.
//!
//! A BFS spanning tree on vertices (root 0) and a BFS spanning cotree on the
//! dual graph (root face 0, avoiding primal tree edges) leave exactly `2p`
//! edges. Each leftover edge closes one primal loop through the tree and one
//! dual loop through the cotree; the loop of generator `i` crosses the dual
//! loop of generator `j` an odd number of times iff `i == j`.

use std::collections::VecDeque;

use crate::mesh::HalfedgeMesh;

/// An edge traversed in a given direction; `forward` means smaller to larger
/// vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirectedEdge {
    pub edge: usize,
    pub forward: bool,
}

impl DirectedEdge {
    pub fn sign(self) -> f64 {
        if self.forward {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeCotree {
    /// Edge to parent in the primal tree, per vertex (`None` at the root).
    pub vertex_parent: Vec<Option<(usize, usize)>>,
    /// Edge to parent in the dual cotree, per face (`None` at the root).
    pub face_parent: Vec<Option<(usize, usize)>>,
    pub in_tree: Vec<bool>,
    pub in_cotree: Vec<bool>,
    /// Leftover edges in canonical order.
    pub generators: Vec<usize>,
}

impl TreeCotree {
    pub fn new(mesh: &HalfedgeMesh) -> Self {
        let (vertex_parent, in_tree) = primal_bfs(mesh);
        let (face_parent, in_cotree) = dual_bfs(mesh, &in_tree);
        let generators = (0..mesh.edge_count())
            .filter(|&e| !in_tree[e] && !in_cotree[e])
            .collect();
        TreeCotree {
            vertex_parent,
            face_parent,
            in_tree,
            in_cotree,
            generators,
        }
    }
}

/// BFS from vertex 0 visiting neighbors in ascending index order.
pub fn primal_bfs(mesh: &HalfedgeMesh) -> (Vec<Option<(usize, usize)>>, Vec<bool>) {
    let mut parent = vec![None; mesh.vertex_count()];
    let mut in_tree = vec![false; mesh.edge_count()];
    let mut seen = vec![false; mesh.vertex_count()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for w in mesh.sorted_neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                let e = mesh.find_edge(v, w).expect("neighbor edge");
                parent[w] = Some((v, e));
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    (parent, in_tree)
}

/// BFS over faces from face 0 across edges not excluded, neighbors in
/// ascending face index order.
pub fn dual_bfs(
    mesh: &HalfedgeMesh,
    excluded: &[bool],
) -> (Vec<Option<(usize, usize)>>, Vec<bool>) {
    let mut parent = vec![None; mesh.face_count()];
    let mut in_cotree = vec![false; mesh.edge_count()];
    let mut seen = vec![false; mesh.face_count()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(f) = queue.pop_front() {
        let mut nbrs: Vec<(usize, usize)> = mesh
            .face_halfedges(f)
            .iter()
            .filter(|&&h| !excluded[mesh.edge_of(h)])
            .map(|&h| (mesh.opposite_face(h), mesh.edge_of(h)))
            .collect();
        nbrs.sort_unstable();
        for (g, e) in nbrs {
            if !seen[g] {
                seen[g] = true;
                parent[g] = Some((f, e));
                in_cotree[e] = true;
                queue.push_back(g);
            }
        }
    }
    (parent, in_cotree)
}

/// `2p` closed edge loops generating the first homology.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyBasis {
    pub cycles: Vec<Vec<DirectedEdge>>,
    /// For each generator, the primal edges crossed by its dual loop.
    pub dual_cycles: Vec<Vec<usize>>,
}

impl HomologyBasis {
    pub fn new(mesh: &HalfedgeMesh) -> Self {
        let tc = TreeCotree::new(mesh);
        let mut cycles = Vec::with_capacity(tc.generators.len());
        let mut dual_cycles = Vec::with_capacity(tc.generators.len());
        for &g in &tc.generators {
            cycles.push(primal_loop(mesh, &tc, g));
            dual_cycles.push(dual_loop_edges(mesh, &tc, g));
        }
        HomologyBasis {
            cycles,
            dual_cycles,
        }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Z/2 intersection matrix `[i][j] = |cycle_i ∩ dual_cycle_j| mod 2`.
    pub fn intersection_parity(&self) -> Vec<Vec<bool>> {
        self.cycles
            .iter()
            .map(|c| {
                self.dual_cycles
                    .iter()
                    .map(|d| c.iter().filter(|de| d.contains(&de.edge)).count() % 2 == 1)
                    .collect()
            })
            .collect()
    }
}

fn ancestors(parent: &[Option<(usize, usize)>], start: usize) -> Vec<usize> {
    let mut out = vec![start];
    let mut v = start;
    while let Some((p, _)) = parent[v] {
        out.push(p);
        v = p;
    }
    out
}

fn lowest_common_ancestor(parent: &[Option<(usize, usize)>], a: usize, b: usize) -> usize {
    let pa = ancestors(parent, a);
    let pb = ancestors(parent, b);
    let mut lca = *pa.last().unwrap();
    for (x, y) in pa.iter().rev().zip(pb.iter().rev()) {
        if x == y {
            lca = *x;
        } else {
            break;
        }
    }
    lca
}

fn primal_loop(mesh: &HalfedgeMesh, tc: &TreeCotree, g: usize) -> Vec<DirectedEdge> {
    let [u, v] = mesh.edge(g);
    let lca = lowest_common_ancestor(&tc.vertex_parent, u, v);
    let step = |from: usize, to: usize, e: usize| DirectedEdge {
        edge: e,
        forward: from < to,
    };
    let mut cycle = vec![DirectedEdge {
        edge: g,
        forward: true,
    }];
    // v up to the common ancestor
    let mut w = v;
    while w != lca {
        let (p, e) = tc.vertex_parent[w].unwrap();
        cycle.push(step(w, p, e));
        w = p;
    }
    // common ancestor down to u
    let mut down = Vec::new();
    let mut w = u;
    while w != lca {
        let (p, e) = tc.vertex_parent[w].unwrap();
        down.push(step(p, w, e));
        w = p;
    }
    cycle.extend(down.into_iter().rev());
    cycle
}

fn dual_loop_edges(mesh: &HalfedgeMesh, tc: &TreeCotree, g: usize) -> Vec<usize> {
    let [f, h] = mesh.edge_faces(g);
    let lca = lowest_common_ancestor(&tc.face_parent, f, h);
    let mut edges = vec![g];
    for start in [f, h] {
        let mut x = start;
        while x != lca {
            let (p, e) = tc.face_parent[x].unwrap();
            edges.push(e);
            x = p;
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn assert_closed(mesh: &HalfedgeMesh, cycle: &[DirectedEdge]) {
        let ends: Vec<(usize, usize)> = cycle
            .iter()
            .map(|d| {
                let [a, b] = mesh.edge(d.edge);
                if d.forward {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        for i in 0..ends.len() {
            assert_eq!(ends[i].1, ends[(i + 1) % ends.len()].0);
        }
    }

    #[test]
    fn sphere_has_empty_basis() {
        let m = shapes::icosphere(1).mesh;
        assert!(HomologyBasis::new(&m).is_empty());
    }

    #[test]
    fn seven_vertex_torus_has_two_closed_loops() {
        let m = shapes::seven_vertex_torus().mesh;
        let hb = HomologyBasis::new(&m);
        assert_eq!(hb.len(), 2);
        for c in &hb.cycles {
            assert_closed(&m, c);
        }
    }

    #[test]
    fn genus_two_loops() {
        let m = shapes::double_torus().mesh;
        let hb = HomologyBasis::new(&m);
        assert_eq!(hb.len(), 4);
        for c in &hb.cycles {
            assert_closed(&m, c);
        }
    }

    /// Rank over Z/2 by elimination on small dense rows.
    fn rank_z2(mut rows: Vec<Vec<bool>>) -> usize {
        let n = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..n {
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r][col]) {
                rows.swap(rank, p);
                for r in 0..rows.len() {
                    if r != rank && rows[r][col] {
                        for c in 0..n {
                            let bit = rows[rank][c];
                            rows[r][c] ^= bit;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn grid_torus_parity_matrix_invertible() {
        let m = shapes::flat_torus(8, 8, 1.0, 1.0).mesh;
        let hb = HomologyBasis::new(&m);
        assert_eq!(hb.len(), 2);
        // brute-force count of shared edges
        let mut parity = vec![vec![false; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut count = 0;
                for d in &hb.cycles[i] {
                    for &e in &hb.dual_cycles[j] {
                        if d.edge == e {
                            count += 1;
                        }
                    }
                }
                parity[i][j] = count % 2 == 1;
            }
        }
        assert_eq!(rank_z2(parity.clone()), 2);
        assert_eq!(parity, hb.intersection_parity());
    }

    #[test]
    fn deterministic() {
        let m = shapes::torus_of_revolution(10, 6, 1.0, 0.3).mesh;
        assert_eq!(HomologyBasis::new(&m), HomologyBasis::new(&m));
    }

    #[test]
    fn edge_count_split() {
        for m in [
            shapes::icosphere(2).mesh,
            shapes::flat_torus(5, 4, 1.0, 1.0).mesh,
            shapes::double_torus().mesh,
        ] {
            let tc = TreeCotree::new(&m);
            assert_eq!(
                tc.in_tree.iter().filter(|&&b| b).count(),
                m.vertex_count() - 1
            );
            assert_eq!(
                tc.in_cotree.iter().filter(|&&b| b).count(),
                m.face_count() - 1
            );
            assert_eq!(tc.generators.len(), 2 * m.genus());
        }
    }
}
