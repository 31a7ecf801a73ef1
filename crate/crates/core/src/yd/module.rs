use std::collections::VecDeque;
use std::sync::Arc;

use crate::group::{ConjugacyClass, Elem, FiniteGroup};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::scalar::CycloField;

use super::{Representation, YdError};

/// Position of a basis vector: block, index in the conjugacy class, index in the carrier space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub block: usize,
    pub class_index: usize,
    pub carrier_index: usize,
}

/// A finite-dimensional Yetter-Drinfeld module over kG with a homogeneous basis.
#[derive(Clone, Debug)]
pub struct YDModule {
    group: Arc<FiniteGroup>,
    field: &'static CycloField,
    labels: Vec<BasisLabel>,
    names: Vec<String>,
    degrees: Vec<Elem>,
    /// action matrix of every group element, indexed by element
    action: Vec<SparseMatrix>,
    theta: usize,
}

impl YDModule {
    /// Builds a module from the action of the group generators, closing it
    /// over all of G and checking the homomorphism and YD conditions.
    pub fn from_generator_action(
        group: Arc<FiniteGroup>,
        field: &'static CycloField,
        degrees: Vec<Elem>,
        generator_action: Vec<SparseMatrix>,
        labels: Vec<BasisLabel>,
    ) -> Result<YDModule, YdError> {
        let dim = degrees.len();
        if generator_action.len() != group.generators().len() || labels.len() != dim {
            return Err(YdError::DimensionMismatch("one action matrix per generator and one label per basis vector".into()));
        }
        if generator_action.iter().any(|m| m.rows() != dim || m.ncols() != dim) {
            return Err(YdError::DimensionMismatch("action matrices must be dim × dim".into()));
        }
        let mut action: Vec<Option<SparseMatrix>> = vec![None; group.order()];
        action[group.identity()] = Some(SparseMatrix::identity(dim, field));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(a) = queue.pop_front() {
            let ma = action[a].clone().expect("visited");
            for (gi, &h) in group.generators().iter().enumerate() {
                let b = group.mul(a, h);
                let mb = ma.compose(&generator_action[gi]);
                match &action[b] {
                    Some(existing) if *existing != mb => {
                        return Err(YdError::NotHomomorphism(group.format_element(b)));
                    }
                    Some(_) => {}
                    None => {
                        action[b] = Some(mb);
                        queue.push_back(b);
                    }
                }
            }
        }
        let action = action.into_iter().map(|m| m.expect("generators generate G")).collect();
        let theta = labels.iter().map(|l| l.block + 1).max().unwrap_or(0);
        let names = default_names(&labels);
        let m = YDModule { group, field, labels, names, degrees, action, theta };
        m.check_yd()?;
        Ok(m)
    }

    /// The zero module.
    pub fn zero(group: Arc<FiniteGroup>, field: &'static CycloField) -> YDModule {
        let action = group.elements().map(|_| SparseMatrix::from_columns(0, vec![], field)).collect();
        YDModule { group, field, labels: vec![], names: vec![], degrees: vec![], action, theta: 0 }
    }

    /// The induced module M(O, ρ): basis `(i, v)` with degree `g_i`, and
    /// `t · (j, w) = (k, ρ(γ) w)` where `t x_j = x_k γ`.
    pub fn from_class(group: Arc<FiniteGroup>, class: &ConjugacyClass, rho: &Representation) -> Result<YDModule, YdError> {
        let field = rho.field();
        let r = rho.dim();
        let t = class.size();
        let mut labels = Vec::with_capacity(t * r);
        let mut degrees = Vec::with_capacity(t * r);
        for (i, &g) in class.members().iter().enumerate() {
            for v in 0..r {
                labels.push(BasisLabel { block: 0, class_index: i, carrier_index: v });
                degrees.push(g);
            }
        }
        let mut action = Vec::with_capacity(group.order());
        for e in group.elements() {
            let mut cols = Vec::with_capacity(t * r);
            for j in 0..t {
                let (k, gamma) = class.decompose(&group, e, j);
                let m = rho.matrix(gamma).ok_or_else(|| YdError::Representation("representation does not cover the centralizer".into()))?;
                for w in 0..r {
                    cols.push(SparseVec::from_pairs((0..r).map(|u| (k * r + u, m.get(u, w).clone()))));
                }
            }
            action.push(SparseMatrix::from_columns(t * r, cols, field));
        }
        let names = default_names(&labels);
        let m = YDModule { group, field, labels, names, degrees, action, theta: 1 };
        m.check_yd()?;
        Ok(m)
    }

    /// Direct sum; block `b` of the result comes from `parts[b]` (all blocks of a
    /// multi-block part are shifted together).
    pub fn direct_sum(parts: &[&YDModule]) -> Result<YDModule, YdError> {
        let first = parts.first().ok_or_else(|| YdError::DimensionMismatch("empty direct sum".into()))?;
        let group = first.group.clone();
        let field = first.field;
        if parts.iter().any(|p| !Arc::ptr_eq(&p.group, &group) || p.field != field) {
            return Err(YdError::GroupMismatch);
        }
        let dim: usize = parts.iter().map(|p| p.dim()).sum();
        let mut labels = Vec::with_capacity(dim);
        let mut names = Vec::with_capacity(dim);
        let mut degrees = Vec::with_capacity(dim);
        let mut block_offset = 0;
        for p in parts {
            for (l, n) in p.labels.iter().zip(&p.names) {
                labels.push(BasisLabel { block: l.block + block_offset, ..*l });
                names.push(n.clone());
            }
            degrees.extend_from_slice(&p.degrees);
            block_offset += p.theta;
        }
        let action = group
            .elements()
            .map(|e| {
                let mut cols = Vec::with_capacity(dim);
                let mut offset = 0;
                for p in parts {
                    for c in p.action[e].columns() {
                        cols.push(c.shifted(offset));
                    }
                    offset += p.dim();
                }
                SparseMatrix::from_columns(dim, cols, field)
            })
            .collect();
        Ok(YDModule { group, field, labels, names, degrees, action, theta: block_offset })
    }

    /// Dual module: coaction `g⁻¹` on the dual basis, action by inverse transpose.
    pub fn dual(&self) -> YDModule {
        let g = &self.group;
        let dim = self.dim();
        let action = g
            .elements()
            .map(|e| {
                let a = &self.action[g.inverse(e)];
                // column i of the dual action is row i of a(e⁻¹)
                let mut rows: Vec<Vec<(usize, crate::scalar::Cyclo)>> = vec![Vec::new(); dim];
                for (k, col) in a.columns().iter().enumerate() {
                    for (i, c) in col.iter() {
                        rows[i].push((k, c.clone()));
                    }
                }
                SparseMatrix::from_columns(dim, rows.into_iter().map(SparseVec::from_pairs).collect(), self.field)
            })
            .collect();
        YDModule {
            group: g.clone(),
            field: self.field,
            labels: self.labels.clone(),
            names: self.names.iter().map(|n| format!("{n}*")).collect(),
            degrees: self.degrees.iter().map(|&d| g.inverse(d)).collect(),
            action,
            theta: self.theta,
        }
    }

    /// Same action with coaction `g⁻¹`; its braiding is τ c⁻¹ τ, so its
    /// Nichols algebra has the dimensions of B(M, c⁻¹).
    pub fn inverse_braided(&self) -> YDModule {
        let g = &self.group;
        YDModule { degrees: self.degrees.iter().map(|&d| g.inverse(d)).collect(), ..self.clone() }
    }

    /// Restriction to the basis vectors of one block, as a single-block module.
    pub fn block(&self, b: usize) -> Result<YDModule, YdError> {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.labels[i].block == b).collect();
        if idx.is_empty() {
            return Err(YdError::DimensionMismatch(format!("no block {b}")));
        }
        let lo = idx[0];
        let n = idx.len();
        let action = self
            .action
            .iter()
            .map(|m| SparseMatrix::from_columns(n, idx.iter().map(|&i| m.column(i).map_indices(|r| r - lo)).collect(), self.field))
            .collect();
        Ok(YDModule {
            group: self.group.clone(),
            field: self.field,
            labels: idx.iter().map(|&i| BasisLabel { block: 0, ..self.labels[i] }).collect(),
            names: idx.iter().map(|&i| self.names[i].clone()).collect(),
            degrees: idx.iter().map(|&i| self.degrees[i]).collect(),
            action,
            theta: 1,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<YDModule, YdError> {
        if names.len() != self.dim() {
            return Err(YdError::DimensionMismatch(format!("{} names for a module of dimension {}", names.len(), self.dim())));
        }
        self.names = names;
        Ok(self)
    }

    /// Checks that every group element maps the degree-g part into the degree `h g h⁻¹` part.
    pub fn check_yd(&self) -> Result<(), YdError> {
        let g = &self.group;
        for h in g.elements() {
            for (x, col) in self.action[h].columns().iter().enumerate() {
                let target = g.rack_action(h, self.degrees[x]);
                if let Some((i, _)) = col.iter().find(|(i, _)| self.degrees[*i] != target) {
                    return Err(YdError::YdAxiom(format!("{} · {} has a component on {}", g.format_element(h), self.names[x], self.names[i])));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> &'static CycloField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// Number of blocks (Z^θ grading).
    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Group-degree (coaction) of each basis vector.
    pub fn degrees(&self) -> &[Elem] {
        &self.degrees
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.labels[i].block
    }

    pub fn action(&self, e: Elem) -> &SparseMatrix {
        &self.action[e]
    }

    pub fn act(&self, e: Elem, v: &SparseVec) -> SparseVec {
        self.action[e].apply(v)
    }
}

fn default_names(labels: &[BasisLabel]) -> Vec<String> {
    let single = labels.iter().all(|l| l.block == 0);
    labels.iter().enumerate().map(|(i, l)| if single { format!("v{}", i + 1) } else { format!("v{}_{}", l.block + 1, i + 1) }).collect()
}
