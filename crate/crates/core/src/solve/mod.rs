//! Constrained minimization of the spinor energy.

mod config;
mod minimize;

pub use config::{Init, Mode, SolveConfig};
pub use minimize::{
    minimize, normalize_l4, project_isometric, SolveResult, Termination, TraceEntry,
};
