//! From spinor fields to vertex positions and back, plus shape diagnostics.

mod diagnostics;
mod embed;
mod integrate;

pub use diagnostics::{chart_singular_values, diagnostics, willmore_dihedral, DistortionReport};
pub use embed::{
    derive_spinor_from_embedding, similarity_spinor, spinor_for_triangles, spinor_from_layout,
};
pub use integrate::{integrate, integrate_edge_vectors, ImmersionResult};
