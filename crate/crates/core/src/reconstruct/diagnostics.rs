use serde::Serialize;

use crate::dirac::ChannelDensities;
use crate::error::{Error, Result};
use crate::mesh::MetricMesh;
use crate::quat::Vec3;
use crate::spin::build_face_charts;

#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport {
    /// `(σ₁, σ₂)` of the chart-to-world map per face, `σ₁ ≥ σ₂`.
    pub singular_values: Vec<[f64; 2]>,
    pub max_conformal_distortion: f64,
    pub median_conformal_distortion: f64,
    pub median_length_error: f64,
    pub max_length_error: f64,
    /// `∫H² dA` from the mean curvature channel, when channels are given.
    pub willmore_channel: Option<f64>,
    /// `∫H² dA` from dihedral angles of the positions.
    pub willmore_dihedral: f64,
}

impl DistortionReport {
    /// The channel estimate when available, the dihedral one otherwise.
    pub fn willmore(&self) -> f64 {
        self.willmore_channel.unwrap_or(self.willmore_dihedral)
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Singular values of the linear map taking the chart edge vectors `a, b`
/// to the world edge vectors `x, y`.
pub fn chart_singular_values(a: [f64; 2], b: [f64; 2], x: Vec3, y: Vec3) -> Option<[f64; 2]> {
    let det = a[0] * b[1] - a[1] * b[0];
    if det.abs() <= 0.0 {
        return None;
    }
    // columns of the map are images of the chart axes
    let ci = (x * b[1] - y * a[1]) * (1.0 / det);
    let cj = (y * a[0] - x * b[0]) * (1.0 / det);
    let (p, q, r) = (ci.norm2(), ci.dot(cj), cj.norm2());
    let mean = 0.5 * (p + r);
    let disc = (0.25 * (p - r) * (p - r) + q * q).sqrt();
    let s1 = (mean + disc).sqrt();
    let s2 = ((p * r - q * q).max(0.0) / (mean + disc)).sqrt();
    Some([s1, s2])
}

/// `Σ_v (¼ Σ_{e∋v} θ_e |e|)² / A_v` with `θ_e` the signed dihedral angle
/// (positive where convex) and `A_v` a third of the incident face areas.
pub fn willmore_dihedral(m: &MetricMesh, positions: &[Vec3]) -> f64 {
    let mesh = m.mesh();
    let normal_area = |f: usize| {
        let [a, b, c] = mesh.face(f).map(|v| positions[v]);
        (b - a).cross(c - a) * 0.5
    };
    let mut mean = vec![0.0; mesh.vertex_count()];
    let mut area = vec![0.0; mesh.vertex_count()];
    for f in 0..mesh.face_count() {
        let a = normal_area(f).norm() / 3.0;
        for v in mesh.face(f) {
            area[v] += a;
        }
    }
    for (e, &[lo, hi]) in mesh.edges().iter().enumerate() {
        let [f, g] = mesh.edge_faces(e);
        let (nf, ng) = (normal_area(f), normal_area(g));
        let edge = positions[hi] - positions[lo];
        // f lies left of lo→hi, so a convex fold turns nf towards ng about the edge
        let sin = nf.cross(ng).dot(edge.normalized());
        let theta = sin.atan2(nf.dot(ng));
        let h = 0.25 * theta * edge.norm();
        mean[lo] += h;
        mean[hi] += h;
    }
    mean.iter().zip(&area).map(|(h, a)| h * h / a).sum()
}

/// Metric and conformal distortion of `positions` relative to the metric.
pub fn diagnostics(
    m: &MetricMesh,
    positions: &[Vec3],
    channels: Option<&ChannelDensities>,
) -> Result<DistortionReport> {
    let mesh = m.mesh();
    if positions.len() != mesh.vertex_count() {
        return Err(Error::SizeMismatch(format!(
            "{} positions for {} vertices",
            positions.len(),
            mesh.vertex_count()
        )));
    }
    let charts = build_face_charts(m)?;
    let mut singular_values = Vec::with_capacity(mesh.face_count());
    for (f, chart) in charts.iter().enumerate() {
        let [p0, p1, p2] = mesh.face(f).map(|v| positions[v]);
        let [a, b] = [chart.corners[1], chart.corners[2]].map(|c| [c.x, c.y]);
        let sv = chart_singular_values(a, b, p1 - p0, p2 - p0)
            .filter(|s| s[1] > 0.0 && s[0].is_finite())
            .ok_or(Error::DegenerateFace { face: f })?;
        singular_values.push(sv);
    }
    let ratios: Vec<f64> = singular_values.iter().map(|s| s[0] / s[1]).collect();
    let length_errors: Vec<f64> = mesh
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &[lo, hi])| {
            ((positions[hi] - positions[lo]).norm() - m.length(e)).abs() / m.length(e)
        })
        .collect();
    let willmore_channel = channels.map(|c| {
        c.faces
            .iter()
            .zip(&charts)
            .map(|(ch, chart)| 4.0 * chart.area * ch.u * ch.u)
            .sum()
    });
    Ok(DistortionReport {
        max_conformal_distortion: ratios.iter().copied().fold(1.0, f64::max),
        median_conformal_distortion: median(ratios),
        median_length_error: median(length_errors.clone()),
        max_length_error: length_errors.iter().copied().fold(0.0, f64::max),
        singular_values,
        willmore_channel,
        willmore_dihedral: willmore_dihedral(m, positions),
    })
}
