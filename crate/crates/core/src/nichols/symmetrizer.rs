//! The quantum symmetrizer 𝔖_n = Σ_{σ ∈ S_n} (lift of σ along a reduced word),
//! used as an independent oracle for dim B^n = rank 𝔖_n.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::linalg::{IncrementalEchelon, SparseAccumulator, SparseMatrix, SparseVec};
use crate::yd::{BraidingOperator, YDModule};

use super::EngineError;

/// Budget on dim W^{⊗n} for the symmetrizer.
pub const SYMMETRIZER_BUDGET: usize = 200_000;

/// A reduced word (0-indexed adjacent transpositions, applied left to right)
/// for every permutation of n letters, found by bubble sort.
pub fn reduced_words(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut p = perm.clone();
        let mut word = Vec::new();
        for pass in 0..n {
            for k in 0..n.saturating_sub(pass + 1) {
                if p[k] > p[k + 1] {
                    p.swap(k, k + 1);
                    word.push(k);
                }
            }
        }
        out.push(word);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn check_budget(d: usize, n: usize) -> Result<usize, EngineError> {
    let mut size: usize = 1;
    for _ in 0..n {
        size = size.checked_mul(d).filter(|&s| s <= SYMMETRIZER_BUDGET).ok_or(EngineError::SymmetrizerBudget { dim: d, degree: n, budget: SYMMETRIZER_BUDGET })?;
    }
    Ok(size)
}

fn symmetrize(c: &BraidingOperator, n: usize, words: &[Vec<usize>], v: &SparseVec, inverse: bool) -> SparseVec {
    let mut acc = SparseAccumulator::new();
    let one = c.matrix().field().one();
    for w in words {
        let mut x = v.clone();
        for &k in w {
            x = c.apply_adjacent(n, k, &x, inverse);
        }
        acc.add_scaled(&x, &one);
    }
    acc.finish()
}

/// 𝔖_n on W^{⊗n} as a column-sparse matrix (`inverse` uses c⁻¹ in place of c).
pub fn symmetrizer(m: &YDModule, n: usize, inverse: bool) -> Result<SparseMatrix, EngineError> {
    let size = check_budget(m.dim(), n)?;
    let c = BraidingOperator::new(m);
    let words = reduced_words(n);
    let cols = (0..size).into_par_iter().map(|i| symmetrize(&c, n, &words, &SparseVec::unit(i, m.field()), inverse)).collect();
    Ok(SparseMatrix::from_columns(size, cols, m.field()))
}

/// rank 𝔖_n, computed blockwise over (product of degrees, multidegree) of the input word.
pub fn symmetrizer_rank(m: &YDModule, n: usize, inverse: bool) -> Result<usize, EngineError> {
    let size = check_budget(m.dim(), n)?;
    let d = m.dim();
    if n == 0 {
        return Ok(1);
    }
    let g = m.group();
    let c = BraidingOperator::new(m);
    let words = reduced_words(n);
    let mut classes: BTreeMap<(usize, Vec<u32>), Vec<usize>> = BTreeMap::new();
    for idx in 0..size {
        let mut gd = g.identity();
        let mut md = vec![0u32; m.theta().max(1)];
        let mut rest = idx;
        let mut letters = vec![0; n];
        for k in (0..n).rev() {
            letters[k] = rest % d;
            rest /= d;
        }
        for &a in &letters {
            gd = g.mul(gd, m.degrees()[a]);
            md[m.block_of(a)] += 1;
        }
        classes.entry((gd, md)).or_default().push(idx);
    }
    let ranks: Vec<usize> = classes
        .into_par_iter()
        .map(|(_, idxs)| {
            let mut ech = IncrementalEchelon::new(m.field());
            for i in idxs {
                ech.insert(&symmetrize(&c, n, &words, &SparseVec::unit(i, m.field()), inverse));
            }
            ech.rank()
        })
        .collect();
    Ok(ranks.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_words_have_inversion_length() {
        let w = reduced_words(4);
        assert_eq!(w.len(), 24);
        let total: usize = w.iter().map(Vec::len).sum();
        // Σ_σ inv(σ) = n! · n(n-1)/4
        assert_eq!(total, 24 * 3);
        assert_eq!(reduced_words(1), vec![Vec::<usize>::new()]);
    }
}
