use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirac::{DiracOperator, SpinorField};
use crate::error::{Error, Result};
use crate::quat::{Quat, Vec2};

/// Channel weights `(ε₁, ε₂, ε₃)` and the period penalty weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyWeights {
    pub eps: [f64; 3],
    pub period_weight: f64,
}

impl EnergyWeights {
    pub fn new(eps1: f64, eps2: f64, eps3: f64, period_weight: f64) -> Self {
        EnergyWeights {
            eps: [eps1, eps2, eps3],
            period_weight,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self
            .eps
            .iter()
            .chain([&self.period_weight])
            .any(|w| !(*w >= 0.0 && w.is_finite()))
        {
            return Err(Error::InvalidConfig(format!(
                "energy weights must be finite and nonnegative, got {:?} and {}",
                self.eps, self.period_weight
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    /// `Σ_f A_f (a² + b²)`.
    pub e_alpha: f64,
    /// `Σ_f A_f V²`.
    pub e_v: f64,
    /// `Σ_f A_f U²`.
    pub e_willmore: f64,
    /// `Σ_γ |P_γ|²`.
    pub e_periods: f64,
    pub total: f64,
    pub weights: EnergyWeights,
    /// `∂E/∂ψ_f` per face, when requested.
    #[serde(skip)]
    pub gradient: Option<Vec<Quat>>,
}

impl EnergyBreakdown {
    /// `√(e_alpha + e_V) / total area`.
    pub fn channel_residual(&self, total_area: f64) -> f64 {
        (self.e_alpha + self.e_v).sqrt() / total_area
    }
}

struct FaceTerms {
    alpha: f64,
    v: f64,
    u: f64,
    own: Quat,
    neighbor: [Quat; 3],
}

impl DiracOperator {
    /// Energy and its gradient.
    pub fn energy(&self, psi: &SpinorField, w: &EnergyWeights) -> Result<EnergyBreakdown> {
        self.evaluate(psi, w, true)
    }

    /// Energy without the gradient.
    pub fn energy_value(&self, psi: &SpinorField, w: &EnergyWeights) -> Result<EnergyBreakdown> {
        self.evaluate(psi, w, false)
    }

    fn evaluate(
        &self,
        psi: &SpinorField,
        w: &EnergyWeights,
        gradient: bool,
    ) -> Result<EnergyBreakdown> {
        w.validate()?;
        self.check_field(psi)?;
        let [e1, e2, e3] = w.eps;
        let terms: Vec<FaceTerms> = (0..self.face_count())
            .into_par_iter()
            .map(|f| {
                let area = self.charts()[f].area;
                let q = self.channel_quaternion(psi, f);
                let (a, b, u, v) = (q.w, -q.z, -q.y, -q.x);
                let mut t = FaceTerms {
                    alpha: area * (a * a + b * b),
                    v: area * v * v,
                    u: area * u * u,
                    own: Quat::ZERO,
                    neighbor: [Quat::ZERO; 3],
                };
                if gradient {
                    // ∂E_f/∂q in components (w, x, y, z)
                    let p = Quat::new(e1 * q.w, e2 * q.x, e3 * q.y, e1 * q.z) * (2.0 * area);
                    let m = p * psi.0[f].inverse().conj();
                    let st = &self.stencils[f];
                    let ksum = st.kappa[0] + st.kappa[1] + st.kappa[2];
                    t.own = -((ksum.conj() + q.conj()) * m);
                    for c in 0..3 {
                        t.neighbor[c] = st.transport[c].conj() * st.kappa[c].conj() * m;
                    }
                }
                t
            })
            .collect();

        let (mut e_alpha, mut e_v, mut e_willmore) = (0.0, 0.0, 0.0);
        for t in &terms {
            e_alpha += t.alpha;
            e_v += t.v;
            e_willmore += t.u;
        }
        let periods = self.periods(psi);
        let e_periods = periods.iter().map(|p| p.norm2()).fold(0.0, |s, x| s + x);
        let total = e1 * e_alpha + e2 * e_v + e3 * e_willmore + w.period_weight * e_periods;

        let gradient = gradient.then(|| {
            let mut g = vec![Quat::ZERO; self.face_count()];
            for (f, t) in terms.iter().enumerate() {
                g[f] += t.own;
                for c in 0..3 {
                    g[self.stencils[f].neighbors[c]] += t.neighbor[c];
                }
            }
            if w.period_weight > 0.0 {
                let mesh = self.metric().mesh();
                for (cycle, p) in self.homology().cycles.iter().zip(&periods) {
                    let pq = Quat::imag(*p);
                    for d in cycle {
                        for side in 0..2 {
                            let f = mesh.edge_faces(d.edge)[side];
                            let edge = Quat::chart(crate::spin::oriented_edge(
                                self.metric(),
                                self.charts(),
                                d.edge,
                                side,
                            ));
                            g[f] += edge * psi.0[f] * pq * (-2.0 * w.period_weight * d.sign());
                        }
                    }
                }
            }
            g
        });

        Ok(EnergyBreakdown {
            e_alpha,
            e_v,
            e_willmore,
            e_periods,
            total,
            weights: *w,
            gradient,
        })
    }

    /// The energy written as three integrals of spin pairings,
    /// `ε₁ ∫|∂̄ψ|²/|ψ|² + (ε₂-ε₁) ∫⟨∂̄ψ, ψω⟩²/|ψ|⁸ + (ε₃-ε₁) ∫⟨∂̄ψ, Jψω⟩²/|ψ|⁸`,
    /// plus the period penalty. Evaluated from the raw least-squares
    /// derivative, independently of the channel extraction.
    pub fn three_integral_energy(&self, psi: &SpinorField, w: &EnergyWeights) -> Result<f64> {
        w.validate()?;
        self.check_field(psi)?;
        let [e1, e2, e3] = w.eps;
        let k = Quat::K;
        let pairing = |mu: (Quat, Quat), nu: (Quat, Quat)| 0.5 * (mu.0.dot(nu.0) + mu.1.dot(nu.1));
        let per_face: Vec<f64> = (0..self.face_count())
            .into_par_iter()
            .map(|f| {
                let p = psi.0[f];
                let (gi, gj) = self.derivative(psi, f);
                let dbar = (0.5 * (gi - k * gj), 0.5 * (gj + k * gi));
                let omega = |x: Vec2| p * (p.conj() * Quat::chart(x) * p);
                let psi_omega = (omega(Vec2::new(1.0, 0.0)), omega(Vec2::new(0.0, 1.0)));
                let j_psi_omega = (-(k * psi_omega.0), -(k * psi_omega.1));
                let n2 = p.norm2();
                let n8 = n2 * n2 * n2 * n2;
                let density = e1 * pairing(dbar, dbar) / n2
                    + (e2 - e1) * pairing(dbar, psi_omega).powi(2) / n8
                    + (e3 - e1) * pairing(dbar, j_psi_omega).powi(2) / n8;
                self.charts()[f].area * density
            })
            .collect();
        let channels: f64 = per_face.iter().sum();
        let periods: f64 = self.periods(psi).iter().map(|p| p.norm2()).sum();
        Ok(channels + w.period_weight * periods)
    }

    /// Largest deviation between the analytic gradient and central finite
    /// differences with step `h`, relative to the largest finite-difference
    /// component.
    pub fn gradient_check(&self, psi: &SpinorField, w: &EnergyWeights, h: f64) -> Result<f64> {
        let analytic = self.energy(psi, w)?.gradient.expect("gradient requested");
        let x = psi.to_flat();
        let fd: Vec<f64> = (0..x.len())
            .map(|i| {
                let mut plus = x.clone();
                let mut minus = x.clone();
                plus[i] += h;
                minus[i] -= h;
                let ep = self.energy_value(&SpinorField::from_flat(&plus), w)?.total;
                let em = self.energy_value(&SpinorField::from_flat(&minus), w)?.total;
                Ok((ep - em) / (2.0 * h))
            })
            .collect::<Result<_>>()?;
        let a = SpinorField(analytic).to_flat();
        let scale = fd.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let err = a
            .iter()
            .zip(&fd)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        Ok(if scale > 0.0 { err / scale } else { err })
    }
}
