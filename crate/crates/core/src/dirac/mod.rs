//! Spinor fields, the discrete Dirac residual and its channel decomposition,
//! the energy with its gradient, and periods.
//!
//! For each face the spinor differences `Δ_c = s r̂ ψ_g - ψ_f` to the three
//! neighbors are fit by a linear map `G` of the chart plane. Its `(0,1)`
//! part at `i` factors as `∂̄ψ(i) = (a - b k - U j - V i) ψ_f`, where
//! `α = a + b i` measures failure of holomorphicity, `V` failure of the
//! shape operator to be symmetric and `U = ½ H |ψ|²` is the mean curvature
//! half-density.

mod energy;
mod field;
mod operator;

pub use energy::{EnergyBreakdown, EnergyWeights};
pub use field::{SpinorField, NONVANISHING_RATIO};
pub use operator::{conformal_one_form, ChannelDensities, DiracOperator, FaceChannels};
