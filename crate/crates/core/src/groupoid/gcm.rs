use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::GroupoidError;

/// Outcome of the finite-type test for a generalized Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTypeVerdict {
    pub finite: bool,
    /// Dynkin labels of the connected components, in order of their least index (finite case only)
    pub components: Vec<String>,
}

impl FiniteTypeVerdict {
    pub fn label(&self) -> Option<String> {
        self.finite.then(|| self.components.join(" x "))
    }
}

pub fn check_gcm(a: &[Vec<i64>]) -> Result<(), GroupoidError> {
    let n = a.len();
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(GroupoidError::NotGcm(format!("row {} has length {}", i + 1, row.len())));
        }
        if row[i] != 2 {
            return Err(GroupoidError::NotGcm(format!("diagonal entry {} is {}", i + 1, row[i])));
        }
        for j in 0..n {
            if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                return Err(GroupoidError::NotGcm(format!("entries ({}, {}) and ({}, {})", i + 1, j + 1, j + 1, i + 1)));
            }
        }
    }
    Ok(())
}

fn components(a: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && a[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn det(m: &[Vec<i64>]) -> BigRational {
    let n = m.len();
    let mut r: Vec<Vec<BigRational>> = m.iter().map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !r[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            r.swap(p, c);
            d = -d;
        }
        let piv = r[c][c].clone();
        d *= &piv;
        for i in c + 1..n {
            let f = &r[i][c] / &piv;
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let t = &f * &r[c][k];
                r[i][k] -= t;
            }
        }
    }
    d
}

fn all_principal_minors_positive(a: &[Vec<i64>], idx: &[usize]) -> bool {
    let n = idx.len();
    (1u64..(1 << n)).all(|mask| {
        let sub: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| idx[k]).collect();
        let m: Vec<Vec<i64>> = sub.iter().map(|&i| sub.iter().map(|&j| a[i][j]).collect()).collect();
        det(&m).is_positive()
    })
}

/// Dynkin label of a connected finite-type component.
fn label(a: &[Vec<i64>], idx: &[usize]) -> String {
    let n = idx.len();
    if n == 1 {
        return "A1".into();
    }
    let mut deg = vec![0usize; n];
    let mut multi = None;
    for p in 0..n {
        for q in p + 1..n {
            let m = a[idx[p]][idx[q]] * a[idx[q]][idx[p]];
            if m != 0 {
                deg[p] += 1;
                deg[q] += 1;
                if m > 1 {
                    multi = Some((p, q, m));
                }
            }
        }
    }
    match multi {
        Some((_, _, 3)) => "G2".into(),
        Some((p, q, _)) => {
            if n == 2 {
                return "B2".into();
            }
            if n == 4 && deg[p] == 2 && deg[q] == 2 {
                return "F4".into();
            }
            // the short root has −2 in its row
            let leaf = if deg[p] == 1 { p } else { q };
            let other = if leaf == p { q } else { p };
            if a[idx[leaf]][idx[other]] == -2 {
                format!("B{n}")
            } else {
                format!("C{n}")
            }
        }
        None => {
            let Some(branch) = (0..n).find(|&p| deg[p] == 3) else {
                return format!("A{n}");
            };
            let mut arms = Vec::new();
            for start in (0..n).filter(|&q| a[idx[branch]][idx[q]] != 0 && q != branch) {
                let (mut prev, mut cur, mut len) = (branch, start, 1);
                loop {
                    let next = (0..n).find(|&r| r != prev && r != cur && a[idx[cur]][idx[r]] != 0);
                    match next {
                        Some(r) => {
                            prev = cur;
                            cur = r;
                            len += 1;
                        }
                        None => break,
                    }
                }
                arms.push(len);
            }
            arms.sort_unstable();
            if arms[0] == 1 && arms[1] == 1 {
                format!("D{n}")
            } else {
                format!("E{n}")
            }
        }
    }
}

/// Decides whether a generalized Cartan matrix is of finite type, componentwise.
pub fn gcm_finite_type(a: &[Vec<i64>]) -> Result<FiniteTypeVerdict, GroupoidError> {
    check_gcm(a)?;
    let comps = components(a);
    let finite = comps.iter().all(|c| all_principal_minors_positive(a, c));
    let components = if finite { comps.iter().map(|c| label(a, c)).collect() } else { Vec::new() };
    Ok(FiniteTypeVerdict { finite, components })
}
