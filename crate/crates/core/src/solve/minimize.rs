use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dirac::{DiracOperator, EnergyBreakdown, EnergyWeights, SpinorField};
use crate::error::{Error, Result};
use crate::quat::Quat;
use crate::solve::{Init, Mode, SolveConfig};

const ARMIJO: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;

/// `ψ_f / |ψ_f|` on every face.
pub fn project_isometric(psi: &SpinorField) -> Result<SpinorField> {
    psi.check_nonvanishing()?;
    Ok(SpinorField(
        psi.0.iter().map(|&q| q * (1.0 / q.norm())).collect(),
    ))
}

/// Uniform rescaling to `Σ_f A_f |ψ_f|⁴ = 1`.
pub fn normalize_l4(psi: &SpinorField, areas: &[f64]) -> Result<SpinorField> {
    psi.check_nonvanishing()?;
    let sum: f64 = psi
        .0
        .iter()
        .zip(areas)
        .map(|(q, a)| a * q.norm2() * q.norm2())
        .sum();
    Ok(psi.scaled(sum.powf(-0.25)))
}

/// One outer iteration: weights in force and the energy when it ended.
#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    pub eps3: f64,
    pub period_weight: f64,
    pub e_alpha: f64,
    pub e_v: f64,
    pub e_willmore: f64,
    pub e_periods: f64,
    pub total: f64,
    pub inner_iterations: usize,
    /// Totals of every accepted iterate, starting point first.
    #[serde(skip)]
    pub accepted_totals: Vec<f64>,
}

impl TraceEntry {
    pub fn is_monotone(&self) -> bool {
        self.accepted_totals.windows(2).all(|w| w[1] <= w[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Channel residual and period norms reached the target.
    Converged,
    /// Outer iteration limit reached first.
    MaxOuter,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    #[serde(skip)]
    pub psi: SpinorField,
    pub trace: Vec<TraceEntry>,
    pub converged: bool,
    pub termination: Termination,
    /// `√(e_alpha + e_V) / total area` at the end.
    pub channel_residual: f64,
    pub period_norms: Vec<f64>,
}

struct Problem<'a> {
    op: &'a DiracOperator,
    mode: Mode,
    areas: Vec<f64>,
}

impl Problem<'_> {
    fn project(&self, psi: &SpinorField) -> Result<SpinorField> {
        match self.mode {
            Mode::Isometric => project_isometric(psi),
            Mode::Conformal => normalize_l4(psi, &self.areas),
        }
    }

    /// Gradient restricted to the constraint's tangent directions.
    fn tangent(&self, psi: &SpinorField, grad: &[Quat]) -> Vec<Quat> {
        match self.mode {
            Mode::Isometric => grad
                .iter()
                .zip(&psi.0)
                .map(|(&g, &p)| g - p * (g.dot(p) / p.norm2()))
                .collect(),
            Mode::Conformal => grad.to_vec(),
        }
    }
}

fn dot(a: &[Quat], b: &[Quat]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(*y)).sum()
}

fn sub(a: &SpinorField, b: &SpinorField) -> Vec<Quat> {
    a.0.iter().zip(&b.0).map(|(&x, &y)| x - y).collect()
}

fn initial_field(op: &DiracOperator, cfg: &SolveConfig) -> SpinorField {
    let n = op.face_count();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    match &cfg.init {
        Init::Ones => {
            let noise = SpinorField::random(n, &mut rng);
            SpinorField(
                noise
                    .0
                    .iter()
                    .map(|&q| Quat::ONE + q * cfg.init_noise)
                    .collect(),
            )
        }
        Init::Random => {
            // redraw faces that come out too small to be admissible
            let mut psi = SpinorField::random(n, &mut rng);
            for q in &mut psi.0 {
                while q.norm2() < 1e-2 {
                    *q = Quat::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    );
                }
            }
            psi
        }
        Init::FromField(psi) => psi.clone(),
    }
}

/// Projected gradient descent at fixed weights with Barzilai–Borwein trial
/// steps and Armijo backtracking. Returns the final iterate, its energy and
/// the totals of all accepted iterates.
fn descend(
    problem: &Problem,
    start: SpinorField,
    w: &EnergyWeights,
    grad_tol: f64,
    max_inner: usize,
    iteration_offset: usize,
) -> Result<(SpinorField, EnergyBreakdown, Vec<f64>, usize)> {
    let at = |iteration: usize, e: Error| Error::AtIteration {
        iteration,
        source: Box::new(e),
    };
    let mut x = start;
    let mut e = problem
        .op
        .energy(&x, w)
        .map_err(|e| at(iteration_offset, e))?;
    if !e.total.is_finite() {
        return Err(Error::NonFinite {
            iteration: iteration_offset,
        });
    }
    let mut g = problem.tangent(&x, e.gradient.as_ref().expect("gradient"));
    let mut totals = vec![e.total];
    let mut prev: Option<(SpinorField, Vec<Quat>)> = None;
    let mut step = {
        let gmax = g.iter().map(|q| q.norm()).fold(0.0, f64::max);
        let xmax = x.0.iter().map(|q| q.norm()).fold(0.0, f64::max);
        if gmax > 0.0 {
            1e-2 * xmax / gmax
        } else {
            1.0
        }
    };
    let mut iterations = 0;
    while iterations < max_inner {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm <= grad_tol {
            break;
        }
        if let Some((px, pg)) = &prev {
            let s = sub(&x, px);
            let y: Vec<Quat> = g.iter().zip(pg).map(|(&a, &b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 0.0 {
                step = (dot(&s, &s) / sy).clamp(1e-20, 1e20);
            }
        }
        let iteration = iteration_offset + iterations + 1;
        let mut accepted = None;
        let mut t = step;
        for _ in 0..MAX_BACKTRACKS {
            let trial = SpinorField(x.0.iter().zip(&g).map(|(&p, &d)| p - d * t).collect());
            let trial = match problem.project(&trial) {
                Ok(p) => p,
                Err(_) => {
                    t *= BACKTRACK;
                    continue;
                }
            };
            let et = match problem.op.energy_value(&trial, w) {
                Ok(et) => et,
                Err(Error::DegenerateSpinor { .. }) => {
                    t *= BACKTRACK;
                    continue;
                }
                Err(err) => return Err(at(iteration, err)),
            };
            if !et.total.is_finite() {
                t *= BACKTRACK;
                continue;
            }
            let decrease = dot(&g, &sub(&x, &trial));
            if et.total <= e.total - ARMIJO * decrease && et.total <= e.total {
                accepted = Some((trial, t));
                break;
            }
            t *= BACKTRACK;
        }
        let Some((next, t)) = accepted else { break };
        step = t;
        let en = problem
            .op
            .energy(&next, w)
            .map_err(|err| at(iteration, err))?;
        if !en.total.is_finite() {
            return Err(Error::NonFinite { iteration });
        }
        let gn = problem.tangent(&next, en.gradient.as_ref().expect("gradient"));
        prev = Some((
            std::mem::replace(&mut x, next),
            std::mem::replace(&mut g, gn),
        ));
        e = en;
        totals.push(e.total);
        iterations += 1;
    }
    Ok((x, e, totals, iterations))
}

/// Anneals `ε₃` and adapts the period weight across outer iterations, each
/// running a projected descent at fixed weights.
pub fn minimize(op: &DiracOperator, cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    if let Init::FromField(psi) = &cfg.init {
        if psi.len() != op.face_count() {
            return Err(Error::InvalidConfig(format!(
                "initial field has {} faces, mesh has {}",
                psi.len(),
                op.face_count()
            )));
        }
    }
    let problem = Problem {
        op,
        mode: cfg.mode,
        areas: op.charts().iter().map(|c| c.area).collect(),
    };
    let total_area: f64 = problem.areas.iter().sum();
    let mut psi = problem
        .project(&initial_field(op, cfg))
        .map_err(|e| Error::AtIteration {
            iteration: 0,
            source: Box::new(e),
        })?;

    let mut eps3 = cfg.eps3_init;
    let mut period_weight = cfg.period_weight;
    let grad_tol = match cfg.grad_tol {
        Some(t) => t,
        None => {
            let w = EnergyWeights::new(cfg.eps1, cfg.eps2, eps3, period_weight);
            1e-8 * op.energy_value(&psi, &w)?.total
        }
    };

    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut last_period: Option<f64> = None;
    let mut converged = false;
    let mut channel_residual = f64::INFINITY;
    let mut period_norms = Vec::new();
    for _ in 0..cfg.max_outer {
        let w = EnergyWeights::new(cfg.eps1, cfg.eps2, eps3, period_weight);
        let (next, e, totals, inner) =
            descend(&problem, psi, &w, grad_tol, cfg.max_inner, iterations)?;
        psi = next;
        iterations += inner;
        trace.push(TraceEntry {
            eps3,
            period_weight,
            e_alpha: e.e_alpha,
            e_v: e.e_v,
            e_willmore: e.e_willmore,
            e_periods: e.e_periods,
            total: e.total,
            inner_iterations: inner,
            accepted_totals: totals,
        });

        channel_residual = e.channel_residual(total_area);
        period_norms = op.periods(&psi).iter().map(|p| p.norm()).collect();
        let max_period = period_norms.iter().copied().fold(0.0, f64::max);
        if eps3 <= cfg.eps3_floor
            && channel_residual <= cfg.residual_target
            && max_period <= cfg.residual_target
        {
            converged = true;
            break;
        }
        eps3 = (eps3 * cfg.eps3_decay).max(cfg.eps3_floor);
        if max_period > cfg.residual_target {
            let stalled = last_period.is_some_and(|p| max_period > 0.9 * p);
            if stalled {
                period_weight *= cfg.period_growth;
            }
        }
        last_period = Some(max_period);
    }
    Ok(SolveResult {
        psi,
        trace,
        converged,
        termination: if converged {
            Termination::Converged
        } else {
            Termination::MaxOuter
        },
        channel_residual,
        period_norms,
    })
}
