//! Exact linear algebra over cyclotomic fields.

mod dense;
mod sparse;

pub use dense::{solve_in_span, Matrix};
pub use sparse::{sparse_rank, IncrementalEchelon, Insert, SparseAccumulator, SparseMatrix, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("target is not in the span of the given vectors")]
    NotInSpan,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix format: {0}")]
    Format(String),
}
