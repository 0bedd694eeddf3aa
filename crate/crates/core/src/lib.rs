//! Immersions of triangulated surfaces from quaternionic spinor fields.

pub mod cli;
pub mod dirac;
pub mod error;
pub mod mesh;
pub mod quat;
pub mod reconstruct;
pub mod shapes;
pub mod solve;
pub mod spin;

pub use error::{Error, Result};
pub use quat::{Quat, Vec2, Vec3};
