use std::collections::HashMap;

use super::{Elem, FiniteGroup, GroupError};

/// A conjugacy class with a fixed numeration `g_1 = s, …, g_t` and
/// representatives `x_i` with `x_i ▷ s = g_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    members: Vec<Elem>,
    reps: Vec<Elem>,
    centralizer: Vec<Elem>,
    centralizer_gens: Vec<Elem>,
    position: HashMap<Elem, usize>,
}

impl ConjugacyClass {
    /// Default numeration: `s` first, the other members in element order; each
    /// representative is the least element conjugating `s` to the member.
    pub fn new(g: &FiniteGroup, s: Elem) -> Result<ConjugacyClass, GroupError> {
        if s >= g.order() {
            return Err(GroupError::NotInGroup(format!("element index {s}")));
        }
        let mut rep_of: HashMap<Elem, Elem> = HashMap::new();
        for x in g.elements() {
            rep_of.entry(g.rack_action(x, s)).or_insert(x);
        }
        let mut others: Vec<Elem> = rep_of.keys().copied().filter(|&m| m != s).collect();
        others.sort_unstable();
        let members: Vec<Elem> = std::iter::once(s).chain(others).collect();
        let reps = members.iter().map(|m| rep_of[m]).collect();
        ConjugacyClass::assemble(g, members, reps)
    }

    /// Pinned numeration. `members[0]` is the base point; `reps` defaults to
    /// the least conjugating elements when omitted.
    pub fn with_numeration(g: &FiniteGroup, members: Vec<Elem>, reps: Option<Vec<Elem>>) -> Result<ConjugacyClass, GroupError> {
        let &s = members.first().ok_or_else(|| GroupError::BadNumeration("empty member list".into()))?;
        let default = ConjugacyClass::new(g, s)?;
        let mut sorted = members.clone();
        sorted.sort_unstable();
        let mut expect = default.members.clone();
        expect.sort_unstable();
        if sorted != expect {
            return Err(GroupError::BadNumeration("members do not enumerate the conjugacy class exactly once".into()));
        }
        let reps = match reps {
            Some(r) => {
                if r.len() != members.len() {
                    return Err(GroupError::BadNumeration("one representative per member is required".into()));
                }
                for (i, (&x, &m)) in r.iter().zip(&members).enumerate() {
                    if g.rack_action(x, s) != m {
                        return Err(GroupError::BadNumeration(format!("representative {} does not conjugate the base point to member {}", i + 1, i + 1)));
                    }
                }
                r
            }
            None => members.iter().map(|&m| default.reps[default.position[&m]]).collect(),
        };
        ConjugacyClass::assemble(g, members, reps)
    }

    fn assemble(g: &FiniteGroup, members: Vec<Elem>, reps: Vec<Elem>) -> Result<ConjugacyClass, GroupError> {
        let centralizer = g.centralizer(members[0]);
        if members.len() * centralizer.len() != g.order() {
            return Err(GroupError::BadNumeration("orbit-stabilizer count failed".into()));
        }
        let centralizer_gens = g.small_generating_set(&centralizer);
        let position = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(ConjugacyClass { members, reps, centralizer, centralizer_gens, position })
    }

    pub fn base(&self) -> Elem {
        self.members[0]
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn reps(&self) -> &[Elem] {
        &self.reps
    }

    /// The centralizer of the base point, in element order.
    pub fn centralizer(&self) -> &[Elem] {
        &self.centralizer
    }

    pub fn centralizer_gens(&self) -> &[Elem] {
        &self.centralizer_gens
    }

    pub fn position(&self, e: Elem) -> Option<usize> {
        self.position.get(&e).copied()
    }

    /// The unique `(k, γ)` with `t · x_j = x_k · γ` and γ in the centralizer (0-indexed `j`, `k`).
    pub fn decompose(&self, g: &FiniteGroup, t: Elem, j: usize) -> (usize, Elem) {
        let k = self.position[&g.rack_action(t, self.members[j])];
        let gamma = g.mul(g.inverse(self.reps[k]), g.mul(t, self.reps[j]));
        debug_assert!(self.centralizer.binary_search(&gamma).is_ok());
        (k, gamma)
    }
}
