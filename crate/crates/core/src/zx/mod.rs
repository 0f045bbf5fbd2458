//! ZX-calculus diagrams: circuit translation, rewriting, and tensor verification.

mod diagram;
pub mod rules;
mod simplify;
mod tensor;
mod translate;

pub use diagram::{EdgeKind, Vertex, VertexId, VertexKind, ZxDiagram};
pub use rules::NotApplicable;
pub use simplify::{
    diagram_t_count, full_simplify, to_graph_like, RewriteTrace, Rule, TraceEntry,
    MAX_REWRITE_STEPS,
};
pub use tensor::{
    deviation_up_to_scalar, diagram_to_tensor, equal_up_to_scalar, max_deviation, Tensor,
    MAX_FACTOR_VARS, MAX_TENSOR_LEGS,
};
pub use translate::circuit_to_diagram;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZxError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertices {0} and {1} are already connected")]
    ParallelEdge(VertexId, VertexId),
    #[error("boundary {0} has degree {1}, expected 1")]
    BoundaryDegree(VertexId, usize),
    #[error("boundary {0} is not listed exactly once as an input or output")]
    UnlistedBoundary(VertexId),
    #[error("no input {0}")]
    NoSuchInput(usize),
    #[error("tensor too large: {0}")]
    TooLarge(String),
    #[error("trace replay failed at step {step}: {message}")]
    Replay { step: usize, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
