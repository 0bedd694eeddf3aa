use rayon::prelude::*;
use serde::Serialize;

use crate::dirac::SpinorField;
use crate::error::{Error, Result};
use crate::mesh::{HomologyBasis, MetricMesh};
use crate::quat::{Quat, Vec2, Vec3};
use crate::spin::{
    build_face_charts, lift_into, oriented_edge, transition_lifts, FaceChart, SpinStructure,
    TransitionLift,
};

/// `ω = ψ̄ Ê ψ` for a chart edge vector `Ê`.
pub fn conformal_one_form(psi: Quat, edge: Vec2) -> Vec3 {
    psi.sandwich(Vec3::new(edge.x, edge.y, 0.0))
}

/// Per-face data for the least-squares derivative.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stencil {
    pub neighbors: [usize; 3],
    /// `s_e r̂`, carrying the neighbor's spinor into this face's chart.
    pub transport: [Quat; 3],
    /// Dual directions to the unfolded neighbor centroids.
    pub directions: [Vec2; 3],
    /// Rows of `(DᵀD)⁻¹Dᵀ`.
    pub fit: [[f64; 3]; 2],
    /// `G⁰¹(i) = Σ_c kappa[c] Δ_c`.
    pub kappa: [Quat; 3],
}

/// Channel coefficients of one face: `∂̄ψ(i) ψ⁻¹ = a - b k - U j - V i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FaceChannels {
    pub a: f64,
    pub b: f64,
    pub u: f64,
    pub v: f64,
    /// `|ψ_f|²`.
    pub scale: f64,
    /// World normal `ψ̄ k ψ / |ψ|²`.
    pub normal: Vec3,
}

impl FaceChannels {
    /// `H = 2U / |ψ|²`.
    pub fn mean_curvature(&self) -> f64 {
        2.0 * self.u / self.scale
    }

    pub fn alpha_norm(&self) -> f64 {
        self.a.hypot(self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelDensities {
    pub faces: Vec<FaceChannels>,
}

/// Discrete Dirac structure of a metric mesh with a chosen spin structure.
#[derive(Debug, Clone)]
pub struct DiracOperator {
    metric: MetricMesh,
    charts: Vec<FaceChart>,
    lifts: Vec<TransitionLift>,
    spin: SpinStructure,
    homology: HomologyBasis,
    pub(crate) stencils: Vec<Stencil>,
}

fn rotate(v: Vec2, theta: f64) -> Vec2 {
    let (s, c) = theta.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

impl DiracOperator {
    pub fn new(metric: MetricMesh, spin: SpinStructure) -> Result<Self> {
        let charts = build_face_charts(&metric)?;
        let lifts = transition_lifts(&metric, &charts);
        let homology = HomologyBasis::new(metric.mesh());
        Self::from_parts(metric, charts, lifts, spin, homology)
    }

    pub fn from_parts(
        metric: MetricMesh,
        charts: Vec<FaceChart>,
        lifts: Vec<TransitionLift>,
        spin: SpinStructure,
        homology: HomologyBasis,
    ) -> Result<Self> {
        if spin.signs.len() != metric.mesh().edge_count() {
            return Err(Error::SizeMismatch(format!(
                "{} signs for {} edges",
                spin.signs.len(),
                metric.mesh().edge_count()
            )));
        }
        let stencils = (0..metric.mesh().face_count())
            .into_par_iter()
            .map(|f| build_stencil(&metric, &charts, &lifts, &spin, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiracOperator {
            metric,
            charts,
            lifts,
            spin,
            homology,
            stencils,
        })
    }

    /// Same geometry with another spin structure.
    pub fn with_spin(&self, spin: SpinStructure) -> Result<Self> {
        Self::from_parts(
            self.metric.clone(),
            self.charts.clone(),
            self.lifts.clone(),
            spin,
            self.homology.clone(),
        )
    }

    pub fn metric(&self) -> &MetricMesh {
        &self.metric
    }

    pub fn charts(&self) -> &[FaceChart] {
        &self.charts
    }

    pub fn lifts(&self) -> &[TransitionLift] {
        &self.lifts
    }

    pub fn spin(&self) -> &SpinStructure {
        &self.spin
    }

    pub fn homology(&self) -> &HomologyBasis {
        &self.homology
    }

    pub fn face_count(&self) -> usize {
        self.charts.len()
    }

    /// Dual directions used by the derivative fit of face `f`.
    pub fn dual_directions(&self, f: usize) -> [Vec2; 3] {
        self.stencils[f].directions
    }

    /// `ω_e` seen from face `side` of edge `e` (0: left of lo→hi), with the
    /// edge oriented from its smaller to its larger vertex.
    pub fn one_form(&self, psi: &SpinorField, e: usize, side: usize) -> Vec3 {
        let f = self.metric.mesh().edge_faces(e)[side];
        conformal_one_form(psi.0[f], oriented_edge(&self.metric, &self.charts, e, side))
    }

    /// `ω̄_e = ½(ω_e^f + ω_e^g)`.
    pub fn averaged_one_form(&self, psi: &SpinorField, e: usize) -> Vec3 {
        (self.one_form(psi, e, 0) + self.one_form(psi, e, 1)) * 0.5
    }

    /// Sum of `ω` over the three edges of `f` in boundary order.
    pub fn face_closure(&self, psi: &SpinorField, f: usize) -> Vec3 {
        self.charts[f]
            .edges
            .iter()
            .fold(Vec3::ZERO, |s, &e| s + conformal_one_form(psi.0[f], e))
    }

    /// `r_e = ω_e^g - ω_e^f`.
    pub fn edge_mismatch(&self, psi: &SpinorField, e: usize) -> Vec3 {
        self.one_form(psi, e, 1) - self.one_form(psi, e, 0)
    }

    pub fn max_edge_mismatch(&self, psi: &SpinorField) -> f64 {
        (0..self.metric.mesh().edge_count())
            .map(|e| self.edge_mismatch(psi, e).norm())
            .fold(0.0, f64::max)
    }

    /// Integrals of `ω̄` along the homology loops.
    pub fn periods(&self, psi: &SpinorField) -> Vec<Vec3> {
        self.homology
            .cycles
            .iter()
            .map(|cycle| {
                cycle.iter().fold(Vec3::ZERO, |s, d| {
                    s + self.averaged_one_form(psi, d.edge) * d.sign()
                })
            })
            .collect()
    }

    /// Differences `Δ_c = s r̂ ψ_g - ψ_f` across the three edges of `f`.
    pub(crate) fn differences(&self, psi: &SpinorField, f: usize) -> [Quat; 3] {
        let st = &self.stencils[f];
        [0, 1, 2].map(|c| st.transport[c] * psi.0[st.neighbors[c]] - psi.0[f])
    }

    /// Least-squares derivative `(G(i), G(j))` of face `f`.
    pub fn derivative(&self, psi: &SpinorField, f: usize) -> (Quat, Quat) {
        let st = &self.stencils[f];
        let d = self.differences(psi, f);
        let gi = d[0] * st.fit[0][0] + d[1] * st.fit[0][1] + d[2] * st.fit[0][2];
        let gj = d[0] * st.fit[1][0] + d[1] * st.fit[1][1] + d[2] * st.fit[1][2];
        (gi, gj)
    }

    /// `∂̄ψ(i) = ½(G(i) + J G(𝚥 i))` with `J = -k·` and `𝚥 i = j`.
    pub fn dbar_i(&self, psi: &SpinorField, f: usize) -> Quat {
        let st = &self.stencils[f];
        let d = self.differences(psi, f);
        st.kappa[0] * d[0] + st.kappa[1] * d[1] + st.kappa[2] * d[2]
    }

    /// `q = ∂̄ψ(i) ψ_f⁻¹`.
    pub(crate) fn channel_quaternion(&self, psi: &SpinorField, f: usize) -> Quat {
        self.dbar_i(psi, f) * psi.0[f].inverse()
    }

    pub fn face_channels(&self, psi: &SpinorField, f: usize) -> FaceChannels {
        let q = self.channel_quaternion(psi, f);
        let p = psi.0[f];
        FaceChannels {
            a: q.w,
            b: -q.z,
            u: -q.y,
            v: -q.x,
            scale: p.norm2(),
            normal: p.sandwich(Vec3::new(0.0, 0.0, 1.0)) * (1.0 / p.norm2()),
        }
    }

    pub fn channels(&self, psi: &SpinorField) -> Result<ChannelDensities> {
        self.check_field(psi)?;
        Ok(ChannelDensities {
            faces: (0..self.face_count())
                .into_par_iter()
                .map(|f| self.face_channels(psi, f))
                .collect(),
        })
    }

    pub(crate) fn check_field(&self, psi: &SpinorField) -> Result<()> {
        if psi.len() != self.face_count() {
            return Err(Error::SizeMismatch(format!(
                "{} spinors for {} faces",
                psi.len(),
                self.face_count()
            )));
        }
        psi.check_nonvanishing()
    }
}

fn build_stencil(
    m: &MetricMesh,
    charts: &[FaceChart],
    lifts: &[TransitionLift],
    spin: &SpinStructure,
    f: usize,
) -> Result<Stencil> {
    let mesh = m.mesh();
    let chart = &charts[f];
    let mut neighbors = [0; 3];
    let mut transport = [Quat::ONE; 3];
    let mut directions = [Vec2::new(0.0, 0.0); 3];
    for c in 0..3 {
        let h = 3 * f + c;
        let t = mesh.twin(h);
        let (g, ct) = (t / 3, t % 3);
        let e = mesh.edge_of(h);
        let theta = if mesh.is_forward(h) {
            lifts[e].theta
        } else {
            -lifts[e].theta
        };
        let other = &charts[g];
        let apex = rotate(other.corners[(ct + 2) % 3] - other.corners[ct], theta);
        let unfolded = chart.corners[(c + 1) % 3] + apex;
        neighbors[c] = g;
        transport[c] = lift_into(m, lifts, h) * spin.sign(e);
        directions[c] = (unfolded - chart.corners[(c + 2) % 3]) * (1.0 / 3.0);
    }
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for d in &directions {
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    let det = sxx * syy - sxy * sxy;
    if !(det > 1e-12 * (sxx + syy) * (sxx + syy)) {
        return Err(Error::SingularFit { face: f });
    }
    let inv = [[syy / det, -sxy / det], [-sxy / det, sxx / det]];
    let mut fit = [[0.0; 3]; 2];
    for (r, row) in fit.iter_mut().enumerate() {
        for (c, w) in row.iter_mut().enumerate() {
            *w = inv[r][0] * directions[c].x + inv[r][1] * directions[c].y;
        }
    }
    let kappa = [0, 1, 2].map(|c| Quat::new(0.5 * fit[0][c], 0.0, 0.0, -0.5 * fit[1][c]));
    Ok(Stencil {
        neighbors,
        transport,
        directions,
        fit,
        kappa,
    })
}
