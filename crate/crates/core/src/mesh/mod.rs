//! Combinatorial and metric foundation.

mod halfedge;
mod homology;
pub mod io;
mod metric;

pub use halfedge::{HalfedgeId, HalfedgeMesh};
pub use homology::{dual_bfs, primal_bfs, DirectedEdge, HomologyBasis, TreeCotree};
pub use metric::{heron_area, metric_from_positions, MetricMesh, ANGLE_SUM_TOLERANCE};
