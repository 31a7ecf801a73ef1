//! Finite groups, fully enumerated.
//!
//! Elements are indices into a list sorted by canonical form (one-line image
//! tuple for permutation groups, exponent tuple for abelian groups), so index
//! order is the canonical element order and the identity is element 0.
//! Permutations compose right to left: `(ab)(i) = a(b(i))`.

mod class;
mod parse;

use std::collections::{HashMap, VecDeque};
use std::fmt;

pub use class::ConjugacyClass;

/// Index of an element in [`FiniteGroup::elements`].
pub type Elem = usize;

const MAX_ORDER: usize = 100_000;
const MAX_TABLE: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("invalid group description: {0}")]
    InvalidSpec(String),
    #[error("group order exceeds {0}")]
    TooLarge(usize),
    #[error("element is not in the group: {0}")]
    NotInGroup(String),
    #[error("invalid numeration: {0}")]
    BadNumeration(String),
    #[error("cannot parse element `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    /// Permutations of `degree` points.
    Permutation { degree: usize },
    /// Z_{o_1} × … × Z_{o_k}.
    Abelian { orders: Vec<u32> },
}

pub struct FiniteGroup {
    kind: GroupKind,
    forms: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, Elem>,
    table: Option<Vec<u32>>,
    inverses: Vec<Elem>,
    generators: Vec<Elem>,
    generator_names: Vec<String>,
    words: Vec<Vec<usize>>,
    orders: Vec<u32>,
    exponent: u32,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({:?}, order {})", self.kind, self.order())
    }
}

fn compose_forms(kind: &GroupKind, a: &[u32], b: &[u32]) -> Vec<u32> {
    match kind {
        GroupKind::Permutation { .. } => b.iter().map(|&i| a[i as usize]).collect(),
        GroupKind::Abelian { orders } => a.iter().zip(b).zip(orders).map(|((x, y), o)| (x + y) % o).collect(),
    }
}

fn identity_form(kind: &GroupKind) -> Vec<u32> {
    match kind {
        GroupKind::Permutation { degree } => (0..*degree as u32).collect(),
        GroupKind::Abelian { orders } => vec![0; orders.len()],
    }
}

impl FiniteGroup {
    /// Permutation group from 0-indexed one-line images.
    pub fn from_permutations(degree: usize, generators: Vec<Vec<u32>>, names: Option<Vec<String>>) -> Result<FiniteGroup, GroupError> {
        for g in &generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&i| i as usize >= degree || std::mem::replace(&mut seen[i as usize], true)) {
                return Err(GroupError::InvalidSpec(format!("generator {g:?} is not a permutation of {degree} points")));
            }
        }
        FiniteGroup::close(GroupKind::Permutation { degree }, generators, names)
    }

    /// Z_{o_1} × … × Z_{o_k} with the unit vectors as generators `g1, g2, …`.
    pub fn abelian(orders: Vec<u32>) -> Result<FiniteGroup, GroupError> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(GroupError::InvalidSpec("abelian group needs positive orders".into()));
        }
        let k = orders.len();
        let gens = (0..k)
            .map(|i| {
                let mut v = vec![0u32; k];
                v[i] = 1 % orders[i];
                v
            })
            .collect();
        let names = (1..=k).map(|i| format!("g{i}")).collect();
        FiniteGroup::close(GroupKind::Abelian { orders }, gens, Some(names))
    }

    /// Dihedral group of order 2n acting on Z_n, generated by the reflection
    /// `x: i ↦ -i` and the rotation `y: i ↦ i + 1`. Only odd n > 1 is accepted.
    pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
        if n <= 1 || n % 2 == 0 {
            return Err(GroupError::InvalidSpec(format!("dihedral group needs odd n > 1, got {n}")));
        }
        let x = (0..n).map(|i| ((n - i) % n) as u32).collect();
        let y = (0..n).map(|i| ((i + 1) % n) as u32).collect();
        FiniteGroup::from_permutations(n, vec![x, y], Some(vec!["x".into(), "y".into()]))
    }

    fn close(kind: GroupKind, gens: Vec<Vec<u32>>, names: Option<Vec<String>>) -> Result<FiniteGroup, GroupError> {
        let id = identity_form(&kind);
        let names = match names {
            Some(n) if n.len() == gens.len() => n,
            Some(_) => return Err(GroupError::InvalidSpec("generator names do not match generators".into())),
            None => (1..=gens.len()).map(|i| format!("g{i}")).collect(),
        };
        // breadth-first closure, recording shortest words
        let mut found: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        found.insert(id.clone(), vec![]);
        let mut queue = VecDeque::from([id.clone()]);
        while let Some(cur) = queue.pop_front() {
            let word = found[&cur].clone();
            for (gi, g) in gens.iter().enumerate() {
                let next = compose_forms(&kind, &cur, g);
                if !found.contains_key(&next) {
                    if found.len() >= MAX_ORDER {
                        return Err(GroupError::TooLarge(MAX_ORDER));
                    }
                    let mut w = word.clone();
                    w.push(gi);
                    found.insert(next.clone(), w);
                    queue.push_back(next);
                }
            }
        }
        let mut forms: Vec<Vec<u32>> = found.keys().cloned().collect();
        forms.sort();
        let index: HashMap<Vec<u32>, Elem> = forms.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let words = forms.iter().map(|f| found[f].clone()).collect();
        let n = forms.len();
        let table = (n <= MAX_TABLE).then(|| {
            let mut t = vec![0u32; n * n];
            for (a, fa) in forms.iter().enumerate() {
                for (b, fb) in forms.iter().enumerate() {
                    t[a * n + b] = index[&compose_forms(&kind, fa, fb)] as u32;
                }
            }
            t
        });
        let generators = gens.iter().map(|g| index[g]).collect();
        let mut group = FiniteGroup {
            kind,
            forms,
            index,
            table,
            inverses: vec![],
            generators,
            generator_names: names,
            words,
            orders: vec![],
            exponent: 1,
        };
        group.inverses = (0..n).map(|a| group.compute_inverse(a)).collect();
        group.orders = (0..n).map(|a| group.compute_order(a)).collect();
        group.exponent = group.orders.iter().fold(1u32, |acc, &o| num_integer::lcm(acc, o));
        group.verify()?;
        Ok(group)
    }

    fn compute_inverse(&self, a: Elem) -> Elem {
        let f = &self.forms[a];
        let inv = match &self.kind {
            GroupKind::Permutation { degree } => {
                let mut v = vec![0u32; *degree];
                for (i, &j) in f.iter().enumerate() {
                    v[j as usize] = i as u32;
                }
                v
            }
            GroupKind::Abelian { orders } => f.iter().zip(orders).map(|(x, o)| (o - x) % o).collect(),
        };
        self.index[&inv]
    }

    fn compute_order(&self, a: Elem) -> u32 {
        let mut k = 1;
        let mut cur = a;
        while cur != self.identity() {
            cur = self.mul(cur, a);
            k += 1;
        }
        k
    }

    fn verify(&self) -> Result<(), GroupError> {
        let e = self.identity();
        if self.forms[e] != identity_form(&self.kind) {
            return Err(GroupError::InvalidSpec("identity is not the least element".into()));
        }
        for a in self.elements() {
            if self.mul(a, self.inverse(a)) != e || self.mul(e, a) != a {
                return Err(GroupError::InvalidSpec("inverse or identity check failed".into()));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.forms.len()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.forms.len()
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a * self.forms.len() + b] as Elem,
            None => self.index[&compose_forms(&self.kind, &self.forms[a], &self.forms[b])],
        }
    }

    /// Product of a sequence, left to right.
    pub fn product(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(self.identity(), |acc, x| self.mul(acc, x))
    }

    pub fn inverse(&self, a: Elem) -> Elem {
        self.inverses[a]
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let o = self.orders[a] as i64;
        let k = k.rem_euclid(o);
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: Elem) -> u32 {
        self.orders[a]
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Rack action `x ▷ y = x y x⁻¹`.
    pub fn rack_action(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(x, y), self.inverse(x))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_by_name(&self, name: &str) -> Option<Elem> {
        self.generator_names.iter().position(|n| n == name).map(|i| self.generators[i])
    }

    /// A shortest word in the generators (indices into [`generators`](Self::generators)) whose product is `a`.
    pub fn word(&self, a: Elem) -> &[usize] {
        &self.words[a]
    }

    /// Canonical form: 0-indexed one-line images, or exponent tuple.
    pub fn form(&self, a: Elem) -> &[u32] {
        &self.forms[a]
    }

    pub fn element_from_form(&self, form: &[u32]) -> Option<Elem> {
        self.index.get(form).copied()
    }

    pub fn centralizer(&self, s: Elem) -> Vec<Elem> {
        self.elements().filter(|&g| self.mul(g, s) == self.mul(s, g)).collect()
    }

    /// All elements generated by `gens`.
    pub fn subgroup_closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order()];
        seen[self.identity()] = true;
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        self.elements().filter(|&a| seen[a]).collect()
    }

    /// Greedy generating set of a subgroup given by its elements, in element order.
    pub fn small_generating_set(&self, subgroup: &[Elem]) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity()];
        for &a in subgroup {
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.subgroup_closure(&gens);
            }
        }
        gens
    }

    /// Conjugacy classes, each listed in element order, classes sorted by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for a in self.elements() {
            if seen[a] {
                continue;
            }
            let mut class: Vec<Elem> = self.elements().map(|g| self.rack_action(g, a)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            out.push(class);
        }
        out
    }

    /// Least element of the conjugacy class of `a` inside the subgroup `h` (a sorted element list).
    pub fn class_rep_in(&self, h: &[Elem], a: Elem) -> Elem {
        h.iter().map(|&g| self.rack_action(g, a)).min().expect("subgroup contains the identity")
    }
}
