//! Mesh file formats.
//!
//! The metric mesh format is line based:
//!
//! ```text
//! metricmesh 1
//! vertices <V>
//! faces <F>
//! f i j k            (F lines, 0-based, counterclockwise)
//! edges <E>
//! l i j <length>     (E lines, every undirected edge exactly once)
//! ```
//!
//! OBJ input understands `v` and `f` lines only (1-based, optional
//! `/`-separated attributes, negative indices are relative); anything else
//! is ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{metric_from_positions, HalfedgeMesh, MetricMesh};
use crate::quat::Vec3;

pub const METRICMESH_HEADER: &str = "metricmesh 1";

/// A loaded input: the metric, and positions when the source was OBJ.
#[derive(Debug, Clone)]
pub struct LoadedMesh {
    pub metric: MetricMesh,
    pub positions: Option<Vec<Vec3>>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }

    /// Next non-empty, non-comment line with its 1-based number.
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                return Some((i + 1, line.split_whitespace().collect()));
            }
        }
        None
    }

    fn expect(&mut self, keyword: &str, arity: usize) -> Result<(usize, Vec<&'a str>)> {
        let (n, tokens) = self
            .next_tokens()
            .ok_or_else(|| parse_err(0, format!("unexpected end of file, expected `{keyword}`")))?;
        if tokens[0] != keyword || tokens.len() != arity + 1 {
            return Err(parse_err(
                n,
                format!(
                    "expected `{keyword}` with {arity} fields, found `{}`",
                    tokens.join(" ")
                ),
            ));
        }
        Ok((n, tokens))
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| parse_err(line, format!("invalid number `{s}`")))
}

pub fn parse_metricmesh(text: &str) -> Result<MetricMesh> {
    let mut lines = Lines::new(text);
    match lines.next_tokens() {
        Some((_, t)) if t.join(" ") == METRICMESH_HEADER => {}
        Some((n, _)) => return Err(parse_err(n, "missing `metricmesh 1` header")),
        None => return Err(parse_err(0, "empty file")),
    }
    let (n, t) = lines.expect("vertices", 1)?;
    let vertex_count: usize = parse_num(n, t[1])?;
    let (n, t) = lines.expect("faces", 1)?;
    let face_count: usize = parse_num(n, t[1])?;
    let mut faces = Vec::with_capacity(face_count);
    for _ in 0..face_count {
        let (n, t) = lines.expect("f", 3)?;
        faces.push([
            parse_num(n, t[1])?,
            parse_num(n, t[2])?,
            parse_num(n, t[3])?,
        ]);
    }
    let mesh = HalfedgeMesh::new(vertex_count, faces)?;

    let (n, t) = lines.expect("edges", 1)?;
    let edge_count: usize = parse_num(n, t[1])?;
    if edge_count != mesh.edge_count() {
        return Err(parse_err(
            n,
            format!("{edge_count} edges listed, mesh has {}", mesh.edge_count()),
        ));
    }
    let mut lengths = vec![f64::NAN; edge_count];
    for _ in 0..edge_count {
        let (n, t) = lines.expect("l", 3)?;
        let (i, j): (usize, usize) = (parse_num(n, t[1])?, parse_num(n, t[2])?);
        let length: f64 = parse_num(n, t[3])?;
        let e = mesh
            .find_edge(i, j)
            .ok_or_else(|| parse_err(n, format!("{i}-{j} is not an edge of the mesh")))?;
        if !lengths[e].is_nan() {
            return Err(parse_err(n, format!("edge {i}-{j} listed twice")));
        }
        lengths[e] = length;
    }
    if let Some((n, _)) = lines.next_tokens() {
        return Err(parse_err(n, "trailing content"));
    }
    MetricMesh::new(mesh, lengths)
}

pub fn write_metricmesh(metric: &MetricMesh) -> String {
    let mesh = metric.mesh();
    let mut s = String::new();
    let _ = writeln!(s, "{METRICMESH_HEADER}");
    let _ = writeln!(s, "vertices {}", mesh.vertex_count());
    let _ = writeln!(s, "faces {}", mesh.face_count());
    for f in mesh.faces() {
        let _ = writeln!(s, "f {} {} {}", f[0], f[1], f[2]);
    }
    let _ = writeln!(s, "edges {}", mesh.edge_count());
    for (e, [i, j]) in mesh.edges().iter().enumerate() {
        let _ = writeln!(s, "l {} {} {:?}", i, j, metric.length(e));
    }
    s
}

fn obj_index(line: usize, token: &str, count: usize) -> Result<usize> {
    let head = token.split('/').next().unwrap_or("");
    let idx: i64 = parse_num(line, head)?;
    let resolved = if idx > 0 {
        idx - 1
    } else if idx < 0 {
        count as i64 + idx
    } else {
        -1
    };
    if resolved < 0 || resolved as usize >= count {
        return Err(parse_err(line, format!("vertex index {idx} out of range")));
    }
    Ok(resolved as usize)
}

/// Reads positions and triangles; polygons are fan-triangulated.
pub fn parse_obj(text: &str) -> Result<(Vec<Vec3>, Vec<[usize; 3]>)> {
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let mut t = line.split_whitespace();
        match t.next() {
            Some("v") => {
                let c: Vec<f64> = t.take(3).map(|s| parse_num(n, s)).collect::<Result<_>>()?;
                if c.len() != 3 {
                    return Err(parse_err(n, "vertex needs 3 coordinates"));
                }
                positions.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = t
                    .map(|s| obj_index(n, s, positions.len()))
                    .collect::<Result<_>>()?;
                if idx.len() < 3 {
                    return Err(parse_err(n, "face needs at least 3 vertices"));
                }
                for k in 1..idx.len() - 1 {
                    faces.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    Ok((positions, faces))
}

pub fn write_obj(positions: &[Vec3], faces: &[[usize; 3]]) -> String {
    let mut s = String::new();
    for p in positions {
        let _ = writeln!(s, "v {:?} {:?} {:?}", p.x, p.y, p.z);
    }
    for f in faces {
        let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    s
}

/// Builds a metric mesh from OBJ text, inducing the metric from positions.
pub fn metric_from_obj(text: &str) -> Result<LoadedMesh> {
    let (positions, faces) = parse_obj(text)?;
    let mesh = HalfedgeMesh::new(positions.len(), faces)?;
    let lengths = metric_from_positions(&mesh, &positions)?;
    let metric = MetricMesh::new(mesh, lengths)?;
    Ok(LoadedMesh {
        metric,
        positions: Some(positions),
    })
}

/// Loads by content: a `metricmesh 1` header selects the metric format,
/// anything else is read as OBJ.
pub fn load(path: &Path) -> Result<LoadedMesh> {
    let text = std::fs::read_to_string(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("metricmesh") {
        Ok(LoadedMesh {
            metric: parse_metricmesh(&text)?,
            positions: None,
        })
    } else {
        metric_from_obj(&text)
    }
}
