use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors do not span a saturated sublattice")]
    NotSaturated,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge set is not a spanning tree")]
    NotSpanningTree,
    #[error("cycle basis does not match the skeleton of the curve")]
    GraphMismatch,
    #[error("frame is not a basis of the lattice")]
    FrameNotBasis,
    #[error("cone of dimension {0} is not supported")]
    UnsupportedDimension(usize),
    #[error("vertex {0} is not smooth")]
    NotSmoothVertex(usize),
    #[error("vertex {vertex} has {earlier} earlier neighbors in the ordering")]
    ColoringViolation { vertex: usize, earlier: usize },
    #[error("no transverse line found for vertex {vertex} within the retry budget")]
    ExhaustedRetries { vertex: usize },
    #[error("line is not transverse to the divisor of incidence {0}")]
    NotTransverse(String),
    #[error("curve is not 3-colorable; peeling stalls on {} vertices", witness.len())]
    NotThreeColorable { witness: Vec<usize> },
    #[error("index {index} out of range for {what}")]
    IndexOutOfRange { what: &'static str, index: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
}
