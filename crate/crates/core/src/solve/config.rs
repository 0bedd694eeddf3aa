use serde::{Deserialize, Serialize};

use crate::dirac::SpinorField;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `Σ_f A_f |ψ_f|⁴ = 1`.
    Conformal,
    /// `|ψ_f| = 1` on every face.
    Isometric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    /// `ψ ≡ 1` plus seeded noise of magnitude `init_noise`.
    Ones,
    /// Components uniform in `[-1, 1]`.
    Random,
    #[serde(skip)]
    FromField(SpinorField),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub mode: Mode,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3_init: f64,
    pub eps3_decay: f64,
    pub eps3_floor: f64,
    pub period_weight: f64,
    /// Factor applied to the period weight when the periods stall.
    pub period_growth: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Absolute tolerance on the gradient norm; `None` means `1e-8` times
    /// the initial energy.
    pub grad_tol: Option<f64>,
    pub residual_target: f64,
    pub rng_seed: u64,
    pub init: Init,
    pub init_noise: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            mode: Mode::Conformal,
            eps1: 1.0,
            eps2: 1.0,
            eps3_init: 1.0,
            eps3_decay: 0.5,
            eps3_floor: 1e-4,
            period_weight: 1.0,
            period_growth: 2.0,
            max_outer: 40,
            max_inner: 500,
            grad_tol: None,
            residual_target: 1e-3,
            rng_seed: 0,
            init: Init::Ones,
            init_noise: 0.1,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.eps1 > 0.0 && self.eps1.is_finite()) {
            return bad("eps1 must be positive");
        }
        if !(self.eps2 > 0.0 && self.eps2.is_finite()) {
            return bad("eps2 must be positive");
        }
        if !(self.eps3_init >= 0.0 && self.eps3_init.is_finite()) {
            return bad("eps3 must be nonnegative");
        }
        if !(self.eps3_decay > 0.0 && self.eps3_decay < 1.0) {
            return bad("eps3 decay must lie in (0, 1)");
        }
        if !(self.eps3_floor >= 0.0 && self.eps3_floor <= self.eps3_init) {
            return bad("eps3 floor must lie in [0, eps3]");
        }
        if !(self.period_weight >= 0.0 && self.period_weight.is_finite()) {
            return bad("period weight must be nonnegative");
        }
        if !(self.period_growth >= 1.0 && self.period_growth.is_finite()) {
            return bad("period growth must be at least 1");
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return bad("iteration limits must be positive");
        }
        if let Some(t) = self.grad_tol {
            if !(t >= 0.0) {
                return bad("gradient tolerance must be nonnegative");
            }
        }
        if !(self.residual_target > 0.0) {
            return bad("residual target must be positive");
        }
        if !(self.init_noise >= 0.0 && self.init_noise.is_finite()) {
            return bad("init noise must be nonnegative");
        }
        Ok(())
    }
}
