//! Nichols algebras: the derivation-quotient engine and the symmetrizer oracle.

mod engine;
mod symmetrizer;

use std::collections::BTreeMap;

use serde_json::{json, Value};

pub use engine::{EngineConfig, MultiDegree, NElem, NicholsState};
pub use symmetrizer::{reduced_words, symmetrizer, symmetrizer_rank, SYMMETRIZER_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("memory guard: degree {degree} needs {candidates} candidate products, limit is {limit}")]
    MemoryGuard { degree: usize, candidates: usize, limit: usize },
    #[error("degree {requested} requested but only degrees up to {computed} are computed")]
    DegreeOutOfRange { requested: usize, computed: usize },
    #[error("result lies outside the computed multidegree bound")]
    OutsideBound,
    #[error("multidegree bound has {0} entries for {1} blocks")]
    BoundShape(usize, usize),
    #[error("basis index {0} out of range")]
    BadIndex(usize),
    #[error("cannot add elements of degrees {0} and {1}")]
    MixedDegrees(usize, usize),
    #[error("symmetrizer on ({dim})^{degree} exceeds the budget {budget}")]
    SymmetrizerBudget { dim: usize, degree: usize, budget: usize },
}

/// Dimensions per degree; `total` is known only when a zero degree was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub dims: Vec<usize>,
    pub finished: bool,
    pub total: Option<usize>,
    /// number of basis elements per multidegree
    pub multidegree_table: BTreeMap<Vec<u32>, usize>,
}

impl HilbertSeries {
    pub fn new(dims: Vec<usize>, finished: bool, multidegree_table: BTreeMap<Vec<u32>, usize>) -> HilbertSeries {
        let total = finished.then(|| dims.iter().sum());
        HilbertSeries { dims, finished, total, multidegree_table }
    }

    /// Sum of computed dimensions (a lower bound when not finished).
    pub fn partial_total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.dims.iter().eq(self.dims.iter().rev())
    }

    /// Coefficients of the product of two series, up to `len` terms.
    pub fn product_dims(a: &[usize], b: &[usize], len: usize) -> Vec<usize> {
        let mut out = vec![0; len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < len {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let table: serde_json::Map<String, Value> = self.multidegree_table.iter().map(|(k, v)| (k.iter().map(u32::to_string).collect::<Vec<_>>().join(","), json!(v))).collect();
        json!({
            "dims": self.dims,
            "finished": self.finished,
            "total": self.total,
            "multidegree_table": table,
        })
    }
}

/// Computes B(W) up to degree `cap` (or until it vanishes).
pub fn hilbert_series(m: &crate::yd::YDModule, cap: usize) -> Result<HilbertSeries, EngineError> {
    let mut state = NicholsState::new(m, EngineConfig::default())?;
    state.compute_to(cap)?;
    Ok(state.hilbert_series())
}
