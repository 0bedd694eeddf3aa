//! Face charts, transition lifts and discrete spin structures.

mod chart;
mod structure;

pub use chart::{
    build_face_charts, lift_into, oriented_edge, transition_lifts, FaceChart, TransitionLift,
    DEGENERATE_AREA_RATIO,
};
pub use structure::{
    base_spin_structure, bits_to_string, classify, enumerate_spin_classes, parse_bits,
    structure_for_bits, vertex_lift_check, SpinStructure,
};
