use std::collections::{HashMap, VecDeque};

use crate::group::{Elem, FiniteGroup};
use crate::linalg::Matrix;
use crate::scalar::{Cyclo, CycloField};

use super::YdError;

/// A linear representation of a subgroup, given on generators and closed
/// over the whole subgroup at construction.
#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    field: &'static CycloField,
    generators: Vec<(Elem, Matrix)>,
    matrices: HashMap<Elem, Matrix>,
}

impl Representation {
    /// Closes the generator matrices over the subgroup they generate, which
    /// must be exactly `subgroup`; any inconsistency means a relation fails.
    pub fn new(g: &FiniteGroup, subgroup: &[Elem], field: &'static CycloField, generators: Vec<(Elem, Matrix)>) -> Result<Representation, YdError> {
        let dim = generators.first().map_or(1, |(_, m)| m.rows());
        for (e, m) in &generators {
            if subgroup.binary_search(e).is_err() {
                return Err(YdError::Representation(format!("generator {} is not in the subgroup", g.format_element(*e))));
            }
            if m.rows() != dim || m.cols() != dim || m.field() != field {
                return Err(YdError::Representation("generator matrices must be square of one size over one field".into()));
            }
        }
        let mut matrices: HashMap<Elem, Matrix> = HashMap::new();
        matrices.insert(g.identity(), Matrix::identity(dim, field));
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(a) = queue.pop_front() {
            let ma = matrices[&a].clone();
            for (h, mh) in &generators {
                let b = g.mul(a, *h);
                let mb = ma.mul(mh).expect("square matrices of equal size");
                match matrices.get(&b) {
                    Some(existing) if *existing != mb => {
                        return Err(YdError::Representation(format!("relation violated at {}", g.format_element(b))));
                    }
                    Some(_) => {}
                    None => {
                        matrices.insert(b, mb);
                        queue.push_back(b);
                    }
                }
            }
        }
        if matrices.len() != subgroup.len() {
            return Err(YdError::Representation(format!("generators span a subgroup of order {} instead of {}", matrices.len(), subgroup.len())));
        }
        Ok(Representation { dim, field, generators, matrices })
    }

    /// One-dimensional representation from character values on generators.
    pub fn character(g: &FiniteGroup, subgroup: &[Elem], values: Vec<(Elem, Cyclo)>) -> Result<Representation, YdError> {
        let field = values.first().map(|(_, c)| c.field()).ok_or_else(|| YdError::Representation("no generator values".into()))?;
        Representation::new(g, subgroup, field, values.into_iter().map(|(e, c)| (e, Matrix::scalar(c))).collect())
    }

    /// The trivial one-dimensional representation.
    pub fn trivial(g: &FiniteGroup, subgroup: &[Elem], field: &'static CycloField) -> Result<Representation, YdError> {
        let gens = g.small_generating_set(subgroup);
        Representation::new(g, subgroup, field, gens.into_iter().map(|e| (e, Matrix::identity(1, field))).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &'static CycloField {
        self.field
    }

    pub fn generators(&self) -> &[(Elem, Matrix)] {
        &self.generators
    }

    pub fn matrix(&self, e: Elem) -> Option<&Matrix> {
        self.matrices.get(&e)
    }

    pub fn trace(&self, e: Elem) -> Option<Cyclo> {
        self.matrices.get(&e).map(Matrix::trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_of_transposition_centralizer() {
        let g = FiniteGroup::from_permutations(3, vec![vec![1, 0, 2], vec![1, 2, 0]], None).unwrap();
        let s = g.parse_element("(12)").unwrap();
        let c = g.centralizer(s);
        let f = CycloField::get(2);
        let rho = Representation::character(&g, &c, vec![(s, f.from_int(-1))]).unwrap();
        assert_eq!(rho.trace(s).unwrap(), f.from_int(-1));
        // a value of order 3 cannot represent an element of order 2
        let f3 = CycloField::get(3);
        assert!(Representation::character(&g, &c, vec![(s, f3.root_of_unity(1))]).is_err());
    }

    #[test]
    fn generators_must_span() {
        let g = FiniteGroup::from_permutations(4, vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]], None).unwrap();
        let s = g.parse_element("(12)").unwrap();
        let c = g.centralizer(s);
        let f = CycloField::get(2);
        assert!(Representation::character(&g, &c, vec![(s, f.from_int(-1))]).is_err());
        let t = g.parse_element("(34)").unwrap();
        let rho = Representation::character(&g, &c, vec![(s, f.from_int(-1)), (t, f.from_int(1))]).unwrap();
        assert_eq!(rho.trace(g.mul(s, t)).unwrap(), f.from_int(-1));
    }
}
