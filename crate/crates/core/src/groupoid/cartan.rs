use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::diff::Derivations;
use crate::group::Elem;
use crate::linalg::{IncrementalEchelon, Insert, SparseMatrix, SparseVec};
use crate::nichols::{EngineConfig, NElem, NicholsState};
use crate::yd::{BasisLabel, IsoClass, YDModule};

use super::GroupoidError;

/// A Cartan entry, or the statement that `L^{(cap)} ≠ 0`, i.e. `a ≤ 1 − cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CartanValue {
    Exact(i64),
    UnboundedAtCap { cap: usize },
}

impl CartanValue {
    pub fn exact(&self) -> Option<i64> {
        match self {
            CartanValue::Exact(a) => Some(*a),
            CartanValue::UnboundedAtCap { .. } => None,
        }
    }

    /// Largest value compatible with what was computed.
    pub fn upper_bound(&self) -> i64 {
        match self {
            CartanValue::Exact(a) => *a,
            CartanValue::UnboundedAtCap { cap } => 1 - *cap as i64,
        }
    }
}

impl fmt::Display for CartanValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanValue::Exact(a) => write!(f, "{a}"),
            CartanValue::UnboundedAtCap { cap } => write!(f, "<={} (cap {cap})", 1 - *cap as i64),
        }
    }
}

/// An ordered family of irreducible Yetter-Drinfeld modules over one group.
#[derive(Clone, Debug)]
pub struct FamilyM {
    blocks: Vec<YDModule>,
    fingerprints: Vec<IsoClass>,
}

impl FamilyM {
    pub fn new(blocks: Vec<YDModule>) -> Result<FamilyM, GroupoidError> {
        if blocks.is_empty() {
            return Err(GroupoidError::EmptyFamily);
        }
        let g = blocks[0].group();
        let f = blocks[0].field();
        if blocks.iter().any(|b| !std::sync::Arc::ptr_eq(b.group(), g) || b.field() != f) {
            return Err(GroupoidError::Yd(crate::yd::YdError::GroupMismatch));
        }
        let fingerprints = blocks.iter().map(YDModule::fingerprint).collect::<Result<Vec<_>, _>>()?;
        Ok(FamilyM { blocks, fingerprints })
    }

    /// Splits a module into its blocks.
    pub fn from_module(m: &YDModule) -> Result<FamilyM, GroupoidError> {
        FamilyM::new((0..m.theta()).map(|b| m.block(b)).collect::<Result<Vec<_>, _>>()?)
    }

    pub fn theta(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[YDModule] {
        &self.blocks
    }

    pub fn fingerprints(&self) -> &[IsoClass] {
        &self.fingerprints
    }

    /// W = M_1 ⊕ ⋯ ⊕ M_θ.
    pub fn module(&self) -> YDModule {
        let parts: Vec<&YDModule> = self.blocks.iter().collect();
        YDModule::direct_sum(&parts).expect("blocks share group and field")
    }
}

/// The spaces `L^{(1)} = M_j`, `L^{(m+1)} = ad_c(M_i)(L^{(m)})` inside B(M_i ⊕ M_j).
pub struct AdjointFiltration {
    pub state: NicholsState,
    /// bases of the nonzero levels, level m at index m-1
    pub levels: Vec<Vec<NElem>>,
    pub value: CartanValue,
}

/// Computes the filtration up to degree `cap` in B(M_i ⊕ M_j) truncated to multidegrees ≤ (cap−1, 1).
pub fn adjoint_filtration(mi: &YDModule, mj: &YDModule, cap: usize) -> Result<AdjointFiltration, GroupoidError> {
    if cap == 0 {
        return Err(GroupoidError::BadCap);
    }
    let pair = YDModule::direct_sum(&[mi, mj])?;
    let mut state = NicholsState::new(&pair, EngineConfig::with_bound(vec![cap as u32 - 1, 1]))?;
    state.compute_to(cap)?;
    let di = mi.dim();
    let mut levels: Vec<Vec<NElem>> = vec![(0..mj.dim()).map(|k| state.letter(di + k)).collect::<Result<_, _>>()?];
    let value = {
        let ops = Derivations::new(&state)?;
        let letters: Vec<NElem> = (0..di).map(|a| state.letter(a)).collect::<Result<_, _>>()?;
        loop {
            let m = levels.len();
            if m == cap {
                break CartanValue::UnboundedAtCap { cap };
            }
            let top = levels.last().expect("nonempty");
            let products: Vec<NElem> = top
                .par_iter()
                .flat_map_iter(|z| letters.iter().map(move |v| (v, z)))
                .map(|(v, z)| ops.ad_c(v, z))
                .collect::<Result<_, _>>()?;
            let mut ech = IncrementalEchelon::new(state.field());
            let mut next = Vec::new();
            for p in products {
                if let Insert::Independent(_) = ech.insert(&p.coords) {
                    next.push(p);
                }
            }
            if next.is_empty() {
                break CartanValue::Exact(1 - m as i64);
            }
            levels.push(next);
        }
    };
    log::debug!("adjoint filtration: dims {:?}, a = {value}", levels.iter().map(Vec::len).collect::<Vec<_>>());
    Ok(AdjointFiltration { state, levels, value })
}

pub fn cartan_entry(family: &FamilyM, i: usize, j: usize, cap: usize) -> Result<CartanValue, GroupoidError> {
    if i == j {
        return Ok(CartanValue::Exact(2));
    }
    check_index(family, i)?;
    check_index(family, j)?;
    Ok(adjoint_filtration(&family.blocks[i], &family.blocks[j], cap)?.value)
}

fn check_index(family: &FamilyM, i: usize) -> Result<(), GroupoidError> {
    if i < family.theta() {
        Ok(())
    } else {
        Err(GroupoidError::BadIndex(i))
    }
}

/// The top nonzero level of a finished filtration as a Yetter-Drinfeld module.
pub fn top_level_module(filt: &AdjointFiltration) -> Result<YDModule, GroupoidError> {
    if filt.value.exact().is_none() {
        return Err(GroupoidError::Uncertified { row: 0, column: 1, cap: filt.levels.len() });
    }
    let state = &filt.state;
    let top = filt.levels.last().expect("nonempty");
    let degree = top[0].degree;
    let mut by_degree: BTreeMap<Elem, Vec<SparseVec>> = BTreeMap::new();
    for x in top {
        for (h, part) in state.g_components(x)? {
            by_degree.entry(h).or_default().push(part);
        }
    }
    let mut ech = IncrementalEchelon::new(state.field());
    let mut basis = Vec::new();
    let mut degrees = Vec::new();
    let mut labels = Vec::new();
    for (class_index, (h, parts)) in by_degree.into_iter().enumerate() {
        let mut carrier_index = 0;
        for p in parts {
            if let Insert::Independent(_) = ech.insert(&p) {
                basis.push(p);
                degrees.push(h);
                labels.push(BasisLabel { block: 0, class_index, carrier_index });
                carrier_index += 1;
            }
        }
    }
    let g = state.module().group().clone();
    let dim = basis.len();
    let mut gen_action = Vec::with_capacity(g.generators().len());
    for &t in g.generators() {
        let cols = basis
            .iter()
            .map(|b| {
                let image = state.act(t, &NElem { degree, coords: b.clone() })?;
                ech.coordinates(&image.coords).map_err(|_| GroupoidError::NotSubmodule)
            })
            .collect::<Result<Vec<_>, GroupoidError>>()?;
        gen_action.push(SparseMatrix::from_columns(dim, cols, state.field()));
    }
    let m = YDModule::from_generator_action(g, state.field(), degrees, gen_action, labels)?;
    m.fingerprint().map_err(|e| GroupoidError::ReducibleLmax(e.to_string()))?;
    Ok(m)
}

/// L_j^max for the pair (i, j) of a family.
pub fn l_j_max(family: &FamilyM, i: usize, j: usize, cap: usize) -> Result<YDModule, GroupoidError> {
    check_index(family, i)?;
    check_index(family, j)?;
    if i == j {
        return Err(GroupoidError::BadIndex(j));
    }
    let filt = adjoint_filtration(&family.blocks[i], &family.blocks[j], cap)?;
    if filt.value.exact().is_none() {
        return Err(GroupoidError::Uncertified { row: i, column: j, cap });
    }
    top_level_module(&filt)
}
