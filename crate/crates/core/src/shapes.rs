//! Analytic test shapes: spheres, flat and round tori, and a genus-2 surface.
//!
//! Embedded shapes are oriented with outward normals. Flat tori carry a
//! per-face planar layout instead of an embedding; their `positions` are
//! fundamental-domain coordinates in the plane `z = 0`.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::mesh::{metric_from_positions, HalfedgeMesh, MetricMesh};
use crate::quat::{Vec2, Vec3};

#[derive(Debug, Clone)]
pub struct Shape {
    pub mesh: HalfedgeMesh,
    pub positions: Vec<Vec3>,
    pub lengths: Vec<f64>,
    /// Planar coordinates of each face's corners, for intrinsically flat
    /// shapes.
    pub layout: Option<Vec<[Vec2; 3]>>,
}

impl Shape {
    fn embedded(positions: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Shape {
        let mesh = HalfedgeMesh::new(positions.len(), faces).expect("valid shape");
        let lengths = metric_from_positions(&mesh, &positions).expect("nondegenerate shape");
        Shape {
            mesh,
            positions,
            lengths,
            layout: None,
        }
    }

    fn flat(positions: Vec<Vec3>, faces: Vec<[usize; 3]>, layout: Vec<[Vec2; 3]>) -> Shape {
        let mesh = HalfedgeMesh::new(positions.len(), faces).expect("valid shape");
        let mut lengths = vec![0.0; mesh.edge_count()];
        for (f, corners) in layout.iter().enumerate() {
            for (c, &h) in mesh.face_halfedges(f).iter().enumerate() {
                lengths[mesh.edge_of(h)] = (corners[(c + 1) % 3] - corners[c]).norm();
            }
        }
        Shape {
            mesh,
            positions,
            lengths,
            layout: Some(layout),
        }
    }

    pub fn metric(&self) -> MetricMesh {
        MetricMesh::new(self.mesh.clone(), self.lengths.clone()).expect("valid metric")
    }

    /// Largest distance between two vertices (positions, brute force).
    pub fn diameter(&self) -> f64 {
        diameter(&self.positions)
    }
}

pub fn diameter(positions: &[Vec3]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in positions.iter().enumerate() {
        for q in &positions[i + 1..] {
            d = d.max((*p - *q).norm());
        }
    }
    d
}

/// Orients every triangle so that its normal points away from `center`.
fn orient_outward(positions: &[Vec3], faces: &mut [[usize; 3]], center: impl Fn(usize) -> Vec3) {
    for (f, tri) in faces.iter_mut().enumerate() {
        let [a, b, c] = tri.map(|v| positions[v]);
        let n = (b - a).cross(c - a);
        let centroid = (a + b + c) * (1.0 / 3.0);
        if n.dot(centroid - center(f)) < 0.0 {
            tri.swap(1, 2);
        }
    }
}

/// Regular tetrahedron with unit edges.
pub fn tetrahedron() -> Shape {
    let h = (2.0f64 / 3.0).sqrt();
    let positions = vec![
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.5, 3f64.sqrt() / 2.0, 0.0),
        Vec3::new(0.5, 3f64.sqrt() / 6.0, h),
    ];
    let mut faces = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    let center = positions.iter().fold(Vec3::ZERO, |s, &p| s + p) * 0.25;
    orient_outward(&positions, &mut faces, |_| center);
    Shape::embedded(positions, faces)
}

/// Regular icosahedron inscribed in the unit sphere.
pub fn icosahedron() -> Shape {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut positions = Vec::with_capacity(12);
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            positions.push(Vec3::new(0.0, s1, s2 * phi));
            positions.push(Vec3::new(s1, s2 * phi, 0.0));
            positions.push(Vec3::new(s2 * phi, 0.0, s1));
        }
    }
    let positions: Vec<Vec3> = positions.into_iter().map(Vec3::normalized).collect();
    let edge = 4.0 / (10.0 + 2.0 * 5f64.sqrt()).sqrt();
    let adjacent = |a: usize, b: usize| ((positions[a] - positions[b]).norm() - edge).abs() < 1e-9;
    let mut faces = Vec::with_capacity(20);
    for a in 0..12 {
        for b in a + 1..12 {
            for c in b + 1..12 {
                if adjacent(a, b) && adjacent(b, c) && adjacent(a, c) {
                    faces.push([a, b, c]);
                }
            }
        }
    }
    orient_outward(&positions, &mut faces, |_| Vec3::ZERO);
    Shape::embedded(positions, faces)
}

/// Icosahedron refined `n` times by midpoint subdivision, projected to the
/// unit sphere. Has `20 · 4ⁿ` faces.
pub fn icosphere(n: usize) -> Shape {
    let base = icosahedron();
    let mut positions = base.positions;
    let mut faces = base.mesh.faces().to_vec();
    for _ in 0..n {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(4 * faces.len());
        for [a, b, c] in faces {
            let mut mid = |u: usize, v: usize| {
                *midpoint.entry((u.min(v), u.max(v))).or_insert_with(|| {
                    positions.push((positions[u] + positions[v]).normalized());
                    positions.len() - 1
                })
            };
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    Shape::embedded(positions, faces)
}

/// Cube with an `n × n` grid per side, projected to the unit sphere.
pub fn cube_sphere(n: usize) -> Shape {
    assert!(n >= 1);
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut lattice: Vec<[i64; 3]> = Vec::new();
    let mut faces = Vec::new();
    let n = n as i64;
    let mut vid = |p: [i64; 3], lattice: &mut Vec<[i64; 3]>| {
        *index.entry(p).or_insert_with(|| {
            lattice.push(p);
            lattice.len() - 1
        })
    };
    for axis in 0..3 {
        for side in [0, n] {
            for a in 0..n {
                for b in 0..n {
                    let corner = |da: i64, db: i64| {
                        let mut p = [0i64; 3];
                        p[axis] = side;
                        p[(axis + 1) % 3] = a + da;
                        p[(axis + 2) % 3] = b + db;
                        p
                    };
                    let q = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)]
                        .map(|p| vid(p, &mut lattice));
                    faces.push([q[0], q[1], q[2]]);
                    faces.push([q[0], q[2], q[3]]);
                }
            }
        }
    }
    let half = n as f64 / 2.0;
    let positions: Vec<Vec3> = lattice
        .iter()
        .map(|p| Vec3::new(p[0] as f64 - half, p[1] as f64 - half, p[2] as f64 - half).normalized())
        .collect();
    orient_outward(&positions, &mut faces, |_| Vec3::ZERO);
    Shape::embedded(positions, faces)
}

/// Torus of revolution about the z-axis with `nu` segments around the axis
/// and `nv` around the tube.
pub fn torus_of_revolution(nu: usize, nv: usize, major: f64, minor: f64) -> Shape {
    assert!(nu >= 3 && nv >= 3 && major > minor && minor > 0.0);
    let id = |i: usize, j: usize| (i % nu) + nu * (j % nv);
    let mut positions = Vec::with_capacity(nu * nv);
    for j in 0..nv {
        let v = 2.0 * PI * j as f64 / nv as f64;
        for i in 0..nu {
            let u = 2.0 * PI * i as f64 / nu as f64;
            let rho = major + minor * v.cos();
            positions.push(Vec3::new(rho * u.cos(), rho * u.sin(), minor * v.sin()));
        }
    }
    let mut faces = Vec::with_capacity(2 * nu * nv);
    for j in 0..nv {
        for i in 0..nu {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    Shape::embedded(positions, faces)
}

/// Flat torus `R² / (width·Z × height·Z)` on an `nx × ny` grid, each cell
/// split along its rising diagonal.
pub fn flat_torus(nx: usize, ny: usize, width: f64, height: f64) -> Shape {
    assert!(nx >= 3 && ny >= 3);
    let (dx, dy) = (width / nx as f64, height / ny as f64);
    let id = |i: usize, j: usize| (i % nx) + nx * (j % ny);
    let at = |i: usize, j: usize| Vec2::new(i as f64 * dx, j as f64 * dy);
    let mut positions = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            positions.push(Vec3::new(i as f64 * dx, j as f64 * dy, 0.0));
        }
    }
    let mut faces = Vec::with_capacity(2 * nx * ny);
    let mut layout = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            layout.push([at(i, j), at(i + 1, j), at(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            layout.push([at(i, j), at(i + 1, j + 1), at(i, j + 1)]);
        }
    }
    Shape::flat(positions, faces, layout)
}

/// The minimal 7-vertex torus with the flat equilateral metric: the
/// triangular lattice modulo the map `(a, b) ↦ a + 3b (mod 7)`.
pub fn seven_vertex_torus() -> Shape {
    let e1 = Vec2::new(1.0, 0.0);
    let e2 = Vec2::new(0.5, 3f64.sqrt() / 2.0);
    let positions = (0..7).map(|v| Vec3::new(v as f64, 0.0, 0.0)).collect();
    let mut faces = Vec::with_capacity(14);
    let mut layout = Vec::with_capacity(14);
    for v in 0..7 {
        let p = e1 * v as f64;
        faces.push([v, (v + 1) % 7, (v + 3) % 7]);
        layout.push([p, p + e1, p + e2]);
        faces.push([(v + 1) % 7, (v + 4) % 7, (v + 3) % 7]);
        layout.push([p + e1, p + e1 + e2, p + e2]);
    }
    Shape::flat(positions, faces, layout)
}

/// Genus-2 surface: boundary of a 3 × 5 × 1 slab of unit voxels with two
/// voxel holes.
pub fn double_torus() -> Shape {
    let solid = |x: i64, y: i64, z: i64| {
        (0..3).contains(&x) && (0..5).contains(&y) && z == 0 && !(x == 1 && (y == 1 || y == 3))
    };
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut lattice = Vec::new();
    let mut faces = Vec::new();
    let mut centers = Vec::new();
    for x in 0..3 {
        for y in 0..5 {
            if !solid(x, y, 0) {
                continue;
            }
            for axis in 0..3 {
                for dir in [-1i64, 1] {
                    let mut nb = [x, y, 0];
                    nb[axis] += dir;
                    if solid(nb[0], nb[1], nb[2]) {
                        continue;
                    }
                    let side = if dir > 0 { 1 } else { 0 };
                    let corner = |da: i64, db: i64| {
                        let mut p = [x, y, 0];
                        p[axis] += side;
                        p[(axis + 1) % 3] += da;
                        p[(axis + 2) % 3] += db;
                        p
                    };
                    let q = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)].map(|p| {
                        *index.entry(p).or_insert_with(|| {
                            lattice.push(p);
                            lattice.len() - 1
                        })
                    });
                    faces.push([q[0], q[1], q[2]]);
                    faces.push([q[0], q[2], q[3]]);
                    let c = Vec3::new(x as f64 + 0.5, y as f64 + 0.5, 0.5);
                    centers.push(c);
                    centers.push(c);
                }
            }
        }
    }
    let positions: Vec<Vec3> = lattice
        .iter()
        .map(|p| Vec3::new(p[0] as f64, p[1] as f64, p[2] as f64))
        .collect();
    orient_outward(&positions, &mut faces, |f| centers[f]);
    Shape::embedded(positions, faces)
}
