use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure names the violated invariant first and the offending
/// element index second, so that messages can be matched by prefix.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("IndexOutOfRange face {face}: vertex {vertex} >= {vertex_count}")]
    IndexOutOfRange {
        face: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("RepeatedVertex face {face}")]
    RepeatedVertex { face: usize },
    #[error("NonManifold edge {u}-{v} has {count} incident faces")]
    NonManifoldEdge { u: usize, v: usize, count: usize },
    #[error("NonManifold vertex {vertex}: face ring is not a single fan")]
    NonManifoldVertex { vertex: usize },
    #[error("NonOrientable edge {u}-{v}")]
    NonOrientable { u: usize, v: usize },
    #[error("Boundary edge {u}-{v}")]
    Boundary { u: usize, v: usize },
    #[error("Disconnected vertex {vertex}")]
    Disconnected { vertex: usize },
    #[error("EmptyMesh")]
    EmptyMesh,
    #[error("NonPositiveLength edge {edge}")]
    NonPositiveLength { edge: usize },
    #[error("TriangleInequality face {face}")]
    TriangleInequality { face: usize },
    #[error("AngleSum face {face}: deviation {deviation:e}")]
    AngleSum { face: usize, deviation: f64 },
    #[error("DegenerateEdge edge {edge}")]
    DegenerateEdge { edge: usize },
    #[error("DegenerateFace face {face}")]
    DegenerateFace { face: usize },
    #[error("DegenerateSpinor face {face}")]
    DegenerateSpinor { face: usize },
    #[error("SingularFit face {face}")]
    SingularFit { face: usize },
    #[error("Unsolvable spin system at vertex {vertex}")]
    Unsolvable { vertex: usize },
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error("NonFinite energy at iteration {iteration}")]
    NonFinite { iteration: usize },
    #[error("at iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("SolveFailure: {0}")]
    SolveFailure(String),
    #[error("Parse line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("SizeMismatch: {0}")]
    SizeMismatch(String),
    #[error("Io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
