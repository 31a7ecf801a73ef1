use std::fmt;

use serde_json::Value;

use crate::scalar::{Cyclo, CycloField};

use super::{IncrementalEchelon, Insert, LinalgError, SparseVec};

/// Dense row-major matrix over one cyclotomic field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: &'static CycloField,
    data: Vec<Cyclo>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: &'static CycloField) -> Matrix {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: &'static CycloField) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn scalar(c: Cyclo) -> Matrix {
        Matrix { rows: 1, cols: 1, field: c.field(), data: vec![c] }
    }

    pub fn from_rows(field: &'static CycloField, rows: Vec<Vec<Cyclo>>) -> Result<Matrix, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        let data: Vec<Cyclo> = rows.into_iter().flatten().collect();
        if data.iter().any(|x| !std::ptr::eq(x.field(), field)) {
            return Err(LinalgError::DimensionMismatch("entries from a different field".into()));
        }
        Ok(Matrix { rows: r, cols: c, field, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &'static CycloField {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclo) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Cyclo] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Cyclo> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Matrix::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Cyclo]) -> Result<Vec<Cyclo>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!("{}x{} * vector of length {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::DimensionMismatch("matrix sum".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.add(&other.scale(&self.field.from_int(-1)))
    }

    pub fn scale(&self, s: &Cyclo) -> Matrix {
        Matrix { data: self.data.iter().map(|a| a * s).collect(), ..*self }
    }

    /// Kronecker product; index `(i, k)` of the result is `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclo::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    pub fn trace(&self) -> Cyclo {
        let mut acc = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            acc += self.get(i, i);
        }
        acc
    }

    /// Reduced row echelon form and pivot columns. Pivots are the first
    /// nonzero entry in column order.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let d = m.get(r, j);
                    if !d.is_zero() {
                        let v = m.get(i, j) - &(&f * d);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Cyclo>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, self.field);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// JSON array-of-arrays of scalar strings.
    pub fn to_json(&self) -> Value {
        Value::Array((0..self.rows).map(|i| Value::Array(self.row(i).iter().map(|x| Value::String(x.to_string())).collect())).collect())
    }

    pub fn from_json(field: &'static CycloField, v: &Value) -> Result<Matrix, LinalgError> {
        let bad = |m: &str| LinalgError::Format(m.to_string());
        let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_array().ok_or_else(|| bad("matrix row must be an array"))?;
            let mut parsed = Vec::with_capacity(row.len());
            for x in row {
                let s = match x {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    _ => return Err(bad("matrix entry must be a scalar string")),
                };
                parsed.push(Cyclo::parse(field, &s).map_err(|e| bad(&e.to_string()))?);
            }
            out.push(parsed);
        }
        Matrix::from_rows(field, out)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Exact coordinates of `target` in `basis`. The basis must be linearly independent.
pub fn solve_in_span(basis: &[Vec<Cyclo>], target: &[Cyclo]) -> Result<Vec<Cyclo>, LinalgError> {
    if let Some(b) = basis.iter().find(|b| b.len() != target.len()) {
        return Err(LinalgError::DimensionMismatch(format!("basis vector of length {} vs target of length {}", b.len(), target.len())));
    }
    let field = match target.first().or_else(|| basis.first().and_then(|b| b.first())) {
        Some(x) => x.field(),
        None => return Ok(vec![]),
    };
    let mut ech = IncrementalEchelon::new(field);
    for b in basis {
        if let Insert::Dependent(_) = ech.insert(&SparseVec::from_dense(b)) {
            return Err(LinalgError::DependentBasis);
        }
    }
    let coords = ech.coordinates(&SparseVec::from_dense(target))?;
    Ok(coords.to_dense(basis.len(), field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> &'static CycloField {
        CycloField::get(1)
    }

    fn int_matrix(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(q(), rows.iter().map(|r| r.iter().map(|&x| q().from_int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(3, q());
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));
        let z = Matrix::zeros(2, 3, q());
        assert_eq!(z.rref(), (z.clone(), vec![]));
        let f3 = CycloField::get(3);
        let w = f3.root_of_unity(1);
        let m = Matrix::from_rows(f3, vec![vec![f3.one(), f3.one()], vec![w.clone(), w]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(3, q()).kernel_basis().is_empty());
        let k = int_matrix(&[&[1, -1]]).kernel_basis();
        assert_eq!(k, vec![vec![q().one(), q().one()]]);
    }

    #[test]
    fn solve_examples() {
        let e1 = vec![q().one(), q().zero()];
        let e2 = vec![q().zero(), q().one()];
        let three = vec![q().from_int(3), q().zero()];
        assert_eq!(solve_in_span(&[e1.clone()], &three).unwrap(), vec![q().from_int(3)]);
        assert_eq!(solve_in_span(&[], &[q().zero()]).unwrap(), Vec::<Cyclo>::new());
        assert_eq!(solve_in_span(&[e1.clone()], &e2), Err(LinalgError::NotInSpan));
        assert!(matches!(solve_in_span(&[e1], &[q().one()]), Err(LinalgError::DimensionMismatch(_))));
    }

    #[test]
    fn inverse_and_json() {
        let m = int_matrix(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert_eq!(int_matrix(&[&[1, 1], &[1, 1]]).inverse(), Err(LinalgError::Singular));
        let j = m.to_json();
        assert_eq!(j.to_string(), r#"[["2","1"],["1","1"]]"#);
        assert_eq!(Matrix::from_json(q(), &j).unwrap(), m);
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec((-3i64..4, 0i64..3), r * c).prop_map(move |v| {
                let f = CycloField::get(3);
                let rows = v.chunks(c).map(|ch| ch.iter().map(|&(a, k)| f.root_of_unity(k).scale(&crate::scalar::Rat::from_int(a))).collect()).collect();
                Matrix::from_rows(f, rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_of_transpose(m in arb_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_vectors_are_killed(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.len(), m.cols() - m.rank());
            for v in k {
                prop_assert!(m.mul_vec(&v).unwrap().iter().all(Cyclo::is_zero));
            }
        }

        #[test]
        fn rref_idempotent(m in arb_matrix()) {
            let (r, p) = m.rref();
            prop_assert_eq!(r.rref(), (r.clone(), p));
        }
    }
}
