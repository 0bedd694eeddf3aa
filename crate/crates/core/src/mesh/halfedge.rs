//! Halfedge connectivity for closed, oriented, connected triangle meshes.
//!
//! Halfedge `h = 3 f + c` runs from `faces[f][c]` to `faces[f][(c + 1) % 3]`.
//! Undirected edges are stored in canonical order: sorted by
//! `(smaller endpoint, larger endpoint)`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Halfedge index.
pub type HalfedgeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct HalfedgeMesh {
    vertex_count: usize,
    faces: Vec<[usize; 3]>,
    twin: Vec<HalfedgeId>,
    edge_of: Vec<usize>,
    edges: Vec<[usize; 2]>,
    // [halfedge lo -> hi, halfedge hi -> lo]
    edge_halfedges: Vec<[HalfedgeId; 2]>,
    vertex_halfedge: Vec<HalfedgeId>,
}

impl HalfedgeMesh {
    /// Builds and validates the connectivity of a closed oriented surface.
    pub fn new(vertex_count: usize, faces: Vec<[usize; 3]>) -> Result<Self> {
        if faces.is_empty() || vertex_count == 0 {
            return Err(Error::EmptyMesh);
        }
        for (f, tri) in faces.iter().enumerate() {
            for &v in tri {
                if v >= vertex_count {
                    return Err(Error::IndexOutOfRange {
                        face: f,
                        vertex: v,
                        vertex_count,
                    });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0] {
                return Err(Error::RepeatedVertex { face: f });
            }
        }

        let hcount = 3 * faces.len();
        let mut incident: HashMap<(usize, usize), Vec<HalfedgeId>> = HashMap::new();
        for h in 0..hcount {
            let (a, b) = (faces[h / 3][h % 3], faces[h / 3][(h % 3 + 1) % 3]);
            incident.entry((a.min(b), a.max(b))).or_default().push(h);
        }
        let mut keys: Vec<(usize, usize)> = incident.keys().copied().collect();
        keys.sort_unstable();

        let mut twin = vec![usize::MAX; hcount];
        let mut edge_of = vec![usize::MAX; hcount];
        let mut edges = Vec::with_capacity(keys.len());
        let mut edge_halfedges = Vec::with_capacity(keys.len());
        for (e, &(u, v)) in keys.iter().enumerate() {
            let hs = &incident[&(u, v)];
            match hs.len() {
                1 => return Err(Error::Boundary { u, v }),
                2 => {}
                count => return Err(Error::NonManifoldEdge { u, v, count }),
            }
            let tail = |h: HalfedgeId| faces[h / 3][h % 3];
            let (h0, h1) = (hs[0], hs[1]);
            if tail(h0) == tail(h1) {
                return Err(Error::NonOrientable { u, v });
            }
            let (fwd, bwd) = if tail(h0) == u { (h0, h1) } else { (h1, h0) };
            twin[fwd] = bwd;
            twin[bwd] = fwd;
            edge_of[fwd] = e;
            edge_of[bwd] = e;
            edges.push([u, v]);
            edge_halfedges.push([fwd, bwd]);
        }

        let mut vertex_halfedge = vec![usize::MAX; vertex_count];
        let mut outgoing = vec![0usize; vertex_count];
        for h in 0..hcount {
            let v = faces[h / 3][h % 3];
            outgoing[v] += 1;
            if vertex_halfedge[v] == usize::MAX {
                vertex_halfedge[v] = h;
            }
        }

        let mesh = HalfedgeMesh {
            vertex_count,
            faces,
            twin,
            edge_of,
            edges,
            edge_halfedges,
            vertex_halfedge,
        };

        for v in 0..vertex_count {
            if mesh.vertex_halfedge[v] == usize::MAX {
                return Err(Error::Disconnected { vertex: v });
            }
            if mesh.outgoing_halfedges(v).len() != outgoing[v] {
                return Err(Error::NonManifoldVertex { vertex: v });
            }
        }
        mesh.check_connected()?;
        Ok(mesh)
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for h in self.outgoing_halfedges(v) {
                let w = self.head(h);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(vertex) => Err(Error::Disconnected { vertex }),
            None => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn halfedge_count(&self) -> usize {
        3 * self.faces.len()
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> [usize; 3] {
        self.faces[f]
    }

    /// Canonical undirected edges `[lo, hi]`.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// `p = (2 - V + E - F) / 2`.
    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    pub fn twin(&self, h: HalfedgeId) -> HalfedgeId {
        self.twin[h]
    }

    pub fn next(&self, h: HalfedgeId) -> HalfedgeId {
        3 * (h / 3) + (h % 3 + 1) % 3
    }

    pub fn prev(&self, h: HalfedgeId) -> HalfedgeId {
        3 * (h / 3) + (h % 3 + 2) % 3
    }

    pub fn face_of(&self, h: HalfedgeId) -> usize {
        h / 3
    }

    pub fn tail(&self, h: HalfedgeId) -> usize {
        self.faces[h / 3][h % 3]
    }

    pub fn head(&self, h: HalfedgeId) -> usize {
        self.faces[h / 3][(h % 3 + 1) % 3]
    }

    pub fn edge_of(&self, h: HalfedgeId) -> usize {
        self.edge_of[h]
    }

    /// True when `h` traverses its edge from the smaller to the larger index.
    pub fn is_forward(&self, h: HalfedgeId) -> bool {
        self.edge_halfedges[self.edge_of[h]][0] == h
    }

    /// `[lo -> hi, hi -> lo]` halfedges of edge `e`.
    pub fn edge_halfedges(&self, e: usize) -> [HalfedgeId; 2] {
        self.edge_halfedges[e]
    }

    /// `[face left of lo -> hi, face left of hi -> lo]`.
    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        let [a, b] = self.edge_halfedges[e];
        [a / 3, b / 3]
    }

    /// Halfedges of face `f` in corner order.
    pub fn face_halfedges(&self, f: usize) -> [HalfedgeId; 3] {
        [3 * f, 3 * f + 1, 3 * f + 2]
    }

    /// Face across halfedge `h`.
    pub fn opposite_face(&self, h: HalfedgeId) -> usize {
        self.twin[h] / 3
    }

    /// Outgoing halfedges of `v` in counterclockwise order.
    pub fn outgoing_halfedges(&self, v: usize) -> Vec<HalfedgeId> {
        let start = self.vertex_halfedge[v];
        let mut ring = vec![start];
        let mut h = self.twin[self.prev(start)];
        while h != start {
            ring.push(h);
            if ring.len() > self.halfedge_count() {
                break;
            }
            h = self.twin[self.prev(h)];
        }
        ring
    }

    /// Neighboring vertices in ascending index order.
    pub fn sorted_neighbors(&self, v: usize) -> Vec<usize> {
        let mut n: Vec<usize> = self
            .outgoing_halfedges(v)
            .into_iter()
            .map(|h| self.head(h))
            .collect();
        n.sort_unstable();
        n
    }

    /// Edge joining `u` and `v`, if any.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        let key = [u.min(v), u.max(v)];
        self.edges.binary_search(&key).ok()
    }
}
