//! Exact scalars: rationals and cyclotomic numbers.

mod cyclo;
mod rat;

pub use cyclo::{Cyclo, CycloField};
pub use rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: Q(z{0}) vs Q(z{1})")]
    ConductorMismatch(u32, u32),
    #[error("Q(z{0}) does not embed in Q(z{1})")]
    NotEmbeddable(u32, u32),
    #[error("parse error: {0}")]
    Parse(String),
}
