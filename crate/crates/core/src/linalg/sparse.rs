//! Sparse vectors, column-sparse matrices and an incremental echelon form.

use std::collections::{BTreeMap, HashMap};

use crate::scalar::{Cyclo, CycloField};

use super::{LinalgError, Matrix};

/// Sparse vector: entries sorted by index, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Cyclo)>,
}

impl SparseVec {
    pub fn zero() -> SparseVec {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize, field: &'static CycloField) -> SparseVec {
        SparseVec { entries: vec![(i, field.one())] }
    }

    pub fn single(i: usize, c: Cyclo) -> SparseVec {
        if c.is_zero() {
            SparseVec::zero()
        } else {
            SparseVec { entries: vec![(i, c)] }
        }
    }

    /// Builds from arbitrary (index, value) pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Cyclo)>) -> SparseVec {
        let mut map: BTreeMap<usize, Cyclo> = BTreeMap::new();
        for (i, c) in pairs {
            match map.get_mut(&i) {
                Some(acc) => *acc += &c,
                None => {
                    map.insert(i, c);
                }
            }
        }
        SparseVec { entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn from_dense(v: &[Cyclo]) -> SparseVec {
        SparseVec { entries: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect() }
    }

    pub fn to_dense(&self, len: usize, field: &'static CycloField) -> Vec<Cyclo> {
        let mut out = vec![field.zero(); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Cyclo)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Cyclo)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn get(&self, i: usize) -> Option<&Cyclo> {
        self.entries.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &Cyclo)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, s: &Cyclo) -> SparseVec {
        if s.is_zero() {
            return SparseVec::zero();
        }
        SparseVec { entries: self.entries.iter().map(|(i, c)| (*i, c * s)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, c)| (*i, -c)).collect() }
    }

    /// Returns `self + s * other`.
    pub fn add_scaled(&self, other: &SparseVec, s: &Cyclo) -> SparseVec {
        if s.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * s));
                        b.next();
                    } else {
                        let v = x + &(y * s);
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * s));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &c.field().one()),
        }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &c.field().from_int(-1)),
        }
    }

    /// Reindexes entries through `f`, summing collisions.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(i, c)| (f(*i), c.clone())))
    }

    /// Adds `offset` to every index.
    pub fn shifted(&self, offset: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, c)| (i + offset, c.clone())).collect() }
    }
}

/// Accumulates a linear combination of sparse vectors without repeated merges.
#[derive(Default)]
pub struct SparseAccumulator {
    map: HashMap<usize, Cyclo>,
}

impl SparseAccumulator {
    pub fn new() -> SparseAccumulator {
        SparseAccumulator::default()
    }

    pub fn add_term(&mut self, i: usize, c: &Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.map.get_mut(&i) {
            Some(acc) => *acc += c,
            None => {
                self.map.insert(i, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, v: &SparseVec, s: &Cyclo) {
        if s.is_zero() {
            return;
        }
        let unit = s.is_one();
        for (i, c) in v.iter() {
            if unit {
                self.add_term(i, c);
            } else {
                self.add_term(i, &(c * s));
            }
        }
    }

    pub fn finish(self) -> SparseVec {
        let mut entries: Vec<(usize, Cyclo)> = self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        entries.sort_unstable_by_key(|(i, _)| *i);
        SparseVec { entries }
    }
}

/// A matrix stored by sparse columns; column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
    field: &'static CycloField,
}

impl SparseMatrix {
    pub fn from_columns(rows: usize, cols: Vec<SparseVec>, field: &'static CycloField) -> SparseMatrix {
        debug_assert!(cols.iter().all(|c| c.max_index().map_or(true, |m| m < rows)));
        SparseMatrix { rows, cols, field }
    }

    pub fn identity(n: usize, field: &'static CycloField) -> SparseMatrix {
        SparseMatrix { rows: n, cols: (0..n).map(|i| SparseVec::unit(i, field)).collect(), field }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn field(&self) -> &'static CycloField {
        self.field
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = SparseAccumulator::new();
        for (j, c) in v.iter() {
            acc.add_scaled(&self.cols[j], c);
        }
        acc.finish()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        SparseMatrix { rows: self.rows, cols, field: self.field }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols.len() && self.cols.iter().enumerate().all(|(j, c)| c.nnz() == 1 && c.get(j).is_some_and(Cyclo::is_one))
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols.len(), self.field);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col.iter() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    pub fn from_dense(m: &Matrix) -> SparseMatrix {
        let cols = (0..m.cols()).map(|j| SparseVec::from_dense(&m.column(j))).collect();
        SparseMatrix { rows: m.rows(), cols, field: m.field() }
    }
}

/// Echelon form built one vector at a time. Each stored row remembers which
/// combination of the accepted input vectors produced it, so dependent inputs
/// come back expressed in terms of the accepted ones.
#[derive(Clone, Debug)]
pub struct IncrementalEchelon {
    field: &'static CycloField,
    /// (row with leading coefficient 1, combination of accepted inputs)
    rows: Vec<(SparseVec, SparseVec)>,
    pivot_row: HashMap<usize, usize>,
    accepted: usize,
}

/// Outcome of offering a vector to an [`IncrementalEchelon`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert {
    /// Independent; stored as accepted input number `usize`.
    Independent(usize),
    /// Dependent; the coordinates in terms of accepted inputs.
    Dependent(SparseVec),
}

impl IncrementalEchelon {
    pub fn new(field: &'static CycloField) -> IncrementalEchelon {
        IncrementalEchelon { field, rows: Vec::new(), pivot_row: HashMap::new(), accepted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.accepted
    }

    /// Reduces `v`; returns (residual, combination λ with v = residual + Σ λ_k accepted_k).
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut work: BTreeMap<usize, Cyclo> = v.iter().map(|(i, c)| (i, c.clone())).collect();
        let mut combo = SparseAccumulator::new();
        let mut residual = Vec::new();
        while let Some((col, coef)) = work.pop_first() {
            if coef.is_zero() {
                continue;
            }
            match self.pivot_row.get(&col) {
                None => residual.push((col, coef)),
                Some(&r) => {
                    let (row, trans) = &self.rows[r];
                    for (j, x) in row.iter().skip(1) {
                        let d = x * &coef;
                        match work.get_mut(&j) {
                            Some(acc) => *acc -= &d,
                            None => {
                                work.insert(j, -d);
                            }
                        }
                    }
                    combo.add_scaled(trans, &coef);
                }
            }
        }
        (SparseVec { entries: residual }, combo.finish())
    }

    pub fn insert(&mut self, v: &SparseVec) -> Insert {
        let (residual, combo) = self.reduce(v);
        match residual.leading() {
            None => Insert::Dependent(combo),
            Some((col, lead)) => {
                let inv = lead.inv().expect("nonzero pivot");
                let row = residual.scale(&inv);
                let idx = self.accepted;
                // residual = e_idx - combo, in terms of accepted inputs
                let trans = SparseVec::unit(idx, self.field).sub(&combo).scale(&inv);
                self.pivot_row.insert(col, self.rows.len());
                self.rows.push((row, trans));
                self.accepted += 1;
                Insert::Independent(idx)
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Coordinates of `v` in terms of accepted inputs, if `v` is in their span.
    pub fn coordinates(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        let (residual, combo) = self.reduce(v);
        if residual.is_zero() {
            Ok(combo)
        } else {
            Err(LinalgError::NotInSpan)
        }
    }

    /// Pivot columns of the stored rows, in insertion order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|(r, _)| r.leading().expect("stored rows are nonzero").0).collect()
    }
}

/// Rank of a list of sparse vectors.
pub fn sparse_rank(field: &'static CycloField, vectors: &[SparseVec]) -> usize {
    let mut ech = IncrementalEchelon::new(field);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}
