//! Cartan entries, reflections and the Weyl groupoid of a family of
//! irreducible Yetter-Drinfeld modules.
//!
//! Entries a_ij are computed inside B(M_i ⊕ M_j) only, truncated to
//! multidegrees ≤ (cap − 1, 1). An entry that does not stabilize by `cap`
//! is reported as [`CartanValue::UnboundedAtCap`] and never guessed.

mod cartan;
mod explore;
mod gcm;

pub use cartan::{adjoint_filtration, cartan_entry, l_j_max, top_level_module, AdjointFiltration, CartanValue, FamilyM};
pub use explore::{
    difference_set, explore_groupoid, identity, is_standard, mat_mul, mat_vec, real_roots, reflect, s_matrix, support, CartanCache, CartanData, GroupoidEdge,
    GroupoidGraph, GroupoidNode, RootSet, StandardVerdict, MORPHISM_LIMIT,
};
pub use gcm::{check_gcm, gcm_finite_type, FiniteTypeVerdict};

use crate::diff::DiffError;
use crate::nichols::EngineError;
use crate::yd::YdError;

pub const DEFAULT_CAP: usize = 8;
pub const DEFAULT_NODE_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupoidError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Yd(#[from] YdError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error("condition (F) not certified: a_{{{}{}}} did not stabilize by degree {cap}", row + 1, column + 1)]
    Uncertified { row: usize, column: usize, cap: usize },
    #[error("cap must be at least 1")]
    BadCap,
    #[error("block index {0} out of range")]
    BadIndex(usize),
    #[error("family has no blocks")]
    EmptyFamily,
    #[error("top adjoint level is not stable under the group action")]
    NotSubmodule,
    #[error("L^max failed the irreducibility check: {0}")]
    ReducibleLmax(String),
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
}
