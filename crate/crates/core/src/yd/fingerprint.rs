use std::collections::BTreeSet;
use std::fmt;

use crate::scalar::{Cyclo, Rat};

use super::{YDModule, YdError};

/// Isomorphism invariant of an irreducible YD module: the least element of
/// its support class, the fiber dimension, and the character of the fiber
/// representation on the centralizer's conjugacy classes (by least element).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoClass {
    pub class_rep: Vec<u32>,
    pub fiber_dim: usize,
    pub character: Vec<Cyclo>,
}

impl fmt::Display for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chars: Vec<String> = self.character.iter().map(Cyclo::to_string).collect();
        write!(f, "rep={:?} dim={} chi=[{}]", self.class_rep, self.fiber_dim, chars.join("; "))
    }
}

impl YDModule {
    /// Fingerprint of a module that must be irreducible; reducible input is an error.
    pub fn fingerprint(&self) -> Result<IsoClass, YdError> {
        let g = self.group();
        let support: BTreeSet<usize> = self.degrees().iter().copied().collect();
        let &s0 = support.first().ok_or_else(|| YdError::Reducible("zero module".into()))?;
        let class: BTreeSet<usize> = g.elements().map(|h| g.rack_action(h, s0)).collect();
        if class != support {
            return Err(YdError::Reducible("support is not a single conjugacy class".into()));
        }
        let fiber: Vec<usize> = (0..self.dim()).filter(|&i| self.degrees()[i] == s0).collect();
        let centralizer = g.centralizer(s0);
        let chi = |h: usize| {
            let m = self.action(h);
            let mut acc = self.field().zero();
            for &i in &fiber {
                if let Some(c) = m.column(i).get(i) {
                    acc += c;
                }
            }
            acc
        };
        let mut norm = self.field().zero();
        for &h in &centralizer {
            let x = chi(h);
            norm += &(&x * &x.conj());
        }
        if norm.as_rational() != Some(&Rat::from_int(centralizer.len() as i64)) {
            return Err(YdError::Reducible(format!("fiber character has norm {} over a centralizer of order {}", norm, centralizer.len())));
        }
        let reps: BTreeSet<usize> = centralizer.iter().map(|&h| g.class_rep_in(&centralizer, h)).collect();
        Ok(IsoClass { class_rep: g.form(s0).to_vec(), fiber_dim: fiber.len(), character: reps.into_iter().map(chi).collect() })
    }

    /// Per-block fingerprints.
    pub fn fingerprints(&self) -> Result<Vec<IsoClass>, YdError> {
        (0..self.theta()).map(|b| self.block(b)?.fingerprint()).collect()
    }
}
