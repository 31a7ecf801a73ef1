use crate::linalg::{SparseAccumulator, SparseMatrix, SparseVec};

use super::YDModule;

/// The braiding `c(v_a ⊗ v_b) = (g_a · v_b) ⊗ v_a` on W ⊗ W and its inverse
/// `c⁻¹(v_a ⊗ v_b) = v_b ⊗ (g_b⁻¹ · v_a)`.
///
/// Tensor words are indexed big-endian: `(a_1, …, a_n) ↦ Σ a_k d^{n-k}`, so
/// index order is lexicographic word order.
#[derive(Clone, Debug)]
pub struct BraidingOperator {
    d: usize,
    c: SparseMatrix,
    c_inv: SparseMatrix,
}

impl BraidingOperator {
    pub fn new(m: &YDModule) -> BraidingOperator {
        let d = m.dim();
        let g = m.group();
        let field = m.field();
        let mut cols = Vec::with_capacity(d * d);
        let mut inv_cols = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let gb = m.action(m.degrees()[a]).column(b);
                cols.push(gb.map_indices(|k| k * d + a));
                let ga = m.action(g.inverse(m.degrees()[b])).column(a);
                inv_cols.push(ga.map_indices(|k| b * d + k));
            }
        }
        BraidingOperator { d, c: SparseMatrix::from_columns(d * d, cols, field), c_inv: SparseMatrix::from_columns(d * d, inv_cols, field) }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.c
    }

    pub fn inverse_matrix(&self) -> &SparseMatrix {
        &self.c_inv
    }

    /// Applies `c` (or `c⁻¹`) to slots `k, k+1` (0-indexed) of a vector in W^{⊗n}.
    pub fn apply_adjacent(&self, n: usize, k: usize, v: &SparseVec, inverse: bool) -> SparseVec {
        let d = self.d;
        let op = if inverse { &self.c_inv } else { &self.c };
        let low = d.pow((n - k - 2) as u32);
        let mut acc = SparseAccumulator::new();
        for (idx, coef) in v.iter() {
            let hi = idx / (low * d * d);
            let pair = (idx / low) % (d * d);
            let lo = idx % low;
            for (p, x) in op.column(pair).iter() {
                acc.add_term((hi * d * d + p) * low + lo, &(x * coef));
            }
        }
        acc.finish()
    }

    pub fn is_invertible_pair(&self) -> bool {
        self.c.compose(&self.c_inv).is_identity() && self.c_inv.compose(&self.c).is_identity()
    }

    /// Exact check of `(c⊗id)(id⊗c)(c⊗id) = (id⊗c)(c⊗id)(id⊗c)` on W^{⊗3}.
    pub fn satisfies_braid_equation(&self) -> bool {
        let field = self.c.field();
        (0..self.d.pow(3)).all(|i| {
            let e = SparseVec::unit(i, field);
            let lhs = self.apply_adjacent(3, 0, &self.apply_adjacent(3, 1, &self.apply_adjacent(3, 0, &e, false), false), false);
            let rhs = self.apply_adjacent(3, 1, &self.apply_adjacent(3, 0, &self.apply_adjacent(3, 1, &e, false), false), false);
            lhs == rhs
        })
    }

    /// Whether `c²` is the identity on `span{v_a ⊗ v_b : a ∈ left, b ∈ right}`.
    pub fn squares_to_identity_on(&self, left: &[usize], right: &[usize]) -> bool {
        let field = self.c.field();
        left.iter().all(|&a| {
            right.iter().all(|&b| {
                let e = SparseVec::unit(a * self.d + b, field);
                self.c.apply(&self.c.apply(&e)) == e
            })
        })
    }
}
