use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::group::Elem;
use crate::linalg::{IncrementalEchelon, Insert, SparseAccumulator, SparseVec};
use crate::scalar::{Cyclo, CycloField};
use crate::yd::YDModule;

use super::{EngineError, HilbertSeries};

pub type MultiDegree = SmallVec<[u32; 4]>;

const DEFAULT_MEM_LIMIT: usize = 200_000;

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Maximum number of candidate products per degree.
    pub mem_limit: usize,
    /// Keep only multidegrees bounded componentwise by this vector.
    pub bound: Option<Vec<u32>>,
}

impl Default for EngineConfig {
    fn default() -> EngineConfig {
        let mem_limit = std::env::var("NICHOLS_MEM_LIMIT").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MEM_LIMIT);
        EngineConfig { mem_limit, bound: None }
    }
}

impl EngineConfig {
    pub fn with_bound(bound: Vec<u32>) -> EngineConfig {
        EngineConfig { bound: Some(bound), ..EngineConfig::default() }
    }
}

/// A homogeneous element of B(W): degree plus coordinates in the degree's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NElem {
    pub degree: usize,
    pub coords: SparseVec,
}

impl NElem {
    pub fn zero(degree: usize) -> NElem {
        NElem { degree, coords: SparseVec::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn scale(&self, s: &Cyclo) -> NElem {
        NElem { degree: self.degree, coords: self.coords.scale(s) }
    }

    pub fn add(&self, other: &NElem) -> Result<NElem, EngineError> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(EngineError::MixedDegrees(self.degree, other.degree));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Ok(NElem { degree, coords: self.coords.add(&other.coords) })
    }

    pub fn sub(&self, other: &NElem) -> Result<NElem, EngineError> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(EngineError::MixedDegrees(self.degree, other.degree));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Ok(NElem { degree, coords: self.coords.sub(&other.coords) })
    }
}

/// Data for one degree n of B(W).
#[derive(Clone, Debug)]
struct Degree {
    /// basis words, in lexicographic order
    words: Vec<Vec<u16>>,
    /// basis element b = v_first[b] · b'_tail[b]
    first: Vec<u16>,
    tail: Vec<u32>,
    gdeg: Vec<Elem>,
    mdeg: Vec<MultiDegree>,
    /// deriv[b][j] = ∂_j(b) in degree n-1
    deriv: Vec<Vec<SparseVec>>,
    /// lmul[i * dim(n-1) + c] = v_i · b_c, when inside the multidegree bound
    lmul: Vec<Option<SparseVec>>,
    /// act[t][b] = tracked[t] · b
    act: Vec<Vec<SparseVec>>,
}

impl Degree {
    fn dim(&self) -> usize {
        self.words.len()
    }
}

/// The Nichols algebra B(W) computed degree by degree.
///
/// Degree n is spanned by the products `v_i · b` with `b` in the basis of
/// degree n-1. A product is encoded by its right derivatives
/// `∂_j(v_i b) = v_i ∂_j(b) + δ_ij g_j · b`; an element of positive degree
/// vanishes iff all of these do, so a rank computation over the encodings
/// gives dim B^n. The lexicographically first independent products form the
/// basis. Encodings of different (G-degree, multidegree) have disjoint
/// supports, so elimination runs per class.
pub struct NicholsState {
    module: YDModule,
    field: &'static CycloField,
    d: usize,
    block: Vec<usize>,
    theta: usize,
    tracked: Vec<Elem>,
    tracked_pos: HashMap<Elem, usize>,
    degs: Vec<Degree>,
    finished: bool,
    config: EngineConfig,
}

impl NicholsState {
    pub fn new(module: &YDModule, config: EngineConfig) -> Result<NicholsState, EngineError> {
        let g = module.group().clone();
        let theta = module.theta().max(1);
        if let Some(b) = &config.bound {
            if b.len() != theta {
                return Err(EngineError::BoundShape(b.len(), theta));
            }
        }
        let mut tracked: Vec<Elem> = g.generators().to_vec();
        for &x in module.degrees() {
            tracked.push(x);
            tracked.push(g.inverse(x));
        }
        tracked.sort_unstable();
        tracked.dedup();
        let tracked_pos = tracked.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let field = module.field();
        let zero_deg = Degree {
            words: vec![vec![]],
            first: vec![],
            tail: vec![],
            gdeg: vec![g.identity()],
            mdeg: vec![SmallVec::from_elem(0, theta)],
            deriv: vec![vec![SparseVec::zero(); module.dim()]],
            lmul: vec![],
            act: tracked.iter().map(|_| vec![SparseVec::unit(0, field)]).collect(),
        };
        Ok(NicholsState {
            module: module.clone(),
            field,
            d: module.dim(),
            block: (0..module.dim()).map(|i| module.block_of(i)).collect(),
            theta,
            tracked,
            tracked_pos,
            degs: vec![zero_deg],
            finished: module.dim() == 0,
            config,
        })
    }

    pub fn module(&self) -> &YDModule {
        &self.module
    }

    pub fn field(&self) -> &'static CycloField {
        self.field
    }

    /// Highest degree computed so far.
    pub fn top_degree(&self) -> usize {
        self.degs.len() - 1
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn bound(&self) -> Option<&[u32]> {
        self.config.bound.as_deref()
    }

    pub fn dim(&self, n: usize) -> Result<usize, EngineError> {
        if n < self.degs.len() {
            Ok(self.degs[n].dim())
        } else if self.finished {
            Ok(0)
        } else {
            Err(EngineError::DegreeOutOfRange { requested: n, computed: self.top_degree() })
        }
    }

    fn degree(&self, n: usize) -> Result<&Degree, EngineError> {
        self.degs.get(n).ok_or(EngineError::DegreeOutOfRange { requested: n, computed: self.top_degree() })
    }

    /// Basis words of degree n (letters are basis indices of W).
    pub fn basis_words(&self, n: usize) -> Result<&[Vec<u16>], EngineError> {
        Ok(&self.degree(n)?.words)
    }

    /// For a basis element `b = v_i · b'` of degree `n ≥ 1`, returns `(i, index of b' in degree n-1)`.
    pub fn basis_split(&self, n: usize, k: usize) -> Result<(usize, usize), EngineError> {
        let d = self.degree(n)?;
        if n == 0 || k >= d.dim() {
            return Err(EngineError::BadIndex(k));
        }
        Ok((d.first[k] as usize, d.tail[k] as usize))
    }

    pub fn basis_gdeg(&self, n: usize) -> Result<&[Elem], EngineError> {
        Ok(&self.degree(n)?.gdeg)
    }

    pub fn basis_mdeg(&self, n: usize) -> Result<&[MultiDegree], EngineError> {
        Ok(&self.degree(n)?.mdeg)
    }

    fn within_bound(&self, m: &[u32]) -> bool {
        match &self.config.bound {
            None => true,
            Some(b) => m.iter().zip(b).all(|(x, y)| x <= y),
        }
    }

    /// Computes the next degree; returns its dimension.
    pub fn extend_degree(&mut self) -> Result<usize, EngineError> {
        let n = self.degs.len();
        if self.finished {
            self.degs.push(self.empty_degree(n));
            return Ok(0);
        }
        let g = self.module.group().clone();
        let prev = &self.degs[n - 1];
        let dp = prev.dim();
        let mut cands: Vec<(u16, u32)> = Vec::new();
        let mut classes: BTreeMap<(Elem, MultiDegree), Vec<usize>> = BTreeMap::new();
        for i in 0..self.d {
            for c in 0..dp {
                let mut m = prev.mdeg[c].clone();
                m[self.block[i]] += 1;
                if !self.within_bound(&m) {
                    continue;
                }
                if cands.len() >= self.config.mem_limit {
                    return Err(EngineError::MemoryGuard { degree: n, candidates: self.d * dp, limit: self.config.mem_limit });
                }
                let key = (g.mul(self.module.degrees()[i], prev.gdeg[c]), m);
                classes.entry(key).or_default().push(cands.len());
                cands.push((i as u16, c as u32));
            }
        }
        log::debug!("degree {n}: {} candidates in {} classes", cands.len(), classes.len());
        let results: Vec<(Vec<(usize, SparseVec)>, Vec<(usize, SparseVec)>)> = classes
            .into_par_iter()
            .map(|(_, idxs)| {
                let mut ech = IncrementalEchelon::new(self.field);
                let mut pivots = Vec::new();
                let mut deps = Vec::new();
                for ci in idxs {
                    let (i, c) = cands[ci];
                    let enc = self.encode(n, i as usize, c as usize);
                    match ech.insert(&enc) {
                        Insert::Independent(_) => pivots.push((ci, enc)),
                        Insert::Dependent(coords) => deps.push((ci, coords)),
                    }
                }
                (pivots, deps)
            })
            .collect();
        let mut all_pivots: Vec<usize> = results.iter().flat_map(|(p, _)| p.iter().map(|(ci, _)| *ci)).collect();
        all_pivots.sort_unstable();
        let global: HashMap<usize, usize> = all_pivots.iter().enumerate().map(|(k, &ci)| (ci, k)).collect();
        let dim = all_pivots.len();
        let mut lmul: Vec<Option<SparseVec>> = vec![None; self.d * dp];
        let mut deriv: Vec<Vec<SparseVec>> = vec![Vec::new(); dim];
        for (pivots, deps) in results {
            let local: Vec<usize> = pivots.iter().map(|(ci, _)| global[ci]).collect();
            for (ci, enc) in pivots {
                let (i, c) = cands[ci];
                let k = global[&ci];
                lmul[i as usize * dp + c as usize] = Some(SparseVec::unit(k, self.field));
                deriv[k] = split_blocks(&enc, self.d, dp);
            }
            for (ci, coords) in deps {
                let (i, c) = cands[ci];
                lmul[i as usize * dp + c as usize] = Some(coords.map_indices(|t| local[t]));
            }
        }
        let mut words = Vec::with_capacity(dim);
        let mut first = Vec::with_capacity(dim);
        let mut tail = Vec::with_capacity(dim);
        let mut gdeg = Vec::with_capacity(dim);
        let mut mdeg = Vec::with_capacity(dim);
        for &ci in &all_pivots {
            let (i, c) = cands[ci];
            let mut w = Vec::with_capacity(n);
            w.push(i);
            w.extend_from_slice(&prev.words[c as usize]);
            words.push(w);
            first.push(i);
            tail.push(c);
            gdeg.push(g.mul(self.module.degrees()[i as usize], prev.gdeg[c as usize]));
            let mut m = prev.mdeg[c as usize].clone();
            m[self.block[i as usize]] += 1;
            mdeg.push(m);
        }
        let act: Vec<Vec<SparseVec>> = (0..self.tracked.len())
            .into_par_iter()
            .map(|t| {
                let gv = self.module.action(self.tracked[t]);
                (0..dim)
                    .map(|b| {
                        let gi = gv.column(first[b] as usize);
                        let gc = &prev.act[t][tail[b] as usize];
                        let mut acc = SparseAccumulator::new();
                        for (k, x) in gi.iter() {
                            for (e, y) in gc.iter() {
                                let row = lmul[k * dp + e].as_ref().expect("group action stays inside the multidegree bound");
                                acc.add_scaled(row, &(x * y));
                            }
                        }
                        acc.finish()
                    })
                    .collect()
            })
            .collect();
        self.degs.push(Degree { words, first, tail, gdeg, mdeg, deriv, lmul, act });
        if dim == 0 {
            self.finished = true;
        }
        Ok(dim)
    }

    fn empty_degree(&self, _n: usize) -> Degree {
        let dp = self.degs.last().map_or(0, Degree::dim);
        Degree {
            words: vec![],
            first: vec![],
            tail: vec![],
            gdeg: vec![],
            mdeg: vec![],
            deriv: vec![],
            lmul: vec![Some(SparseVec::zero()); self.d * dp],
            act: self.tracked.iter().map(|_| vec![]).collect(),
        }
    }

    /// Derivative encoding of v_i · b_c (b_c in degree n-1), indexed `j * dim(n-1) + e`.
    fn encode(&self, n: usize, i: usize, c: usize) -> SparseVec {
        let prev = &self.degs[n - 1];
        let dp = prev.dim();
        let dpp = if n >= 2 { self.degs[n - 2].dim() } else { 0 };
        let mut acc = SparseAccumulator::new();
        for j in 0..self.d {
            let off = j * dp;
            for (k, x) in prev.deriv[c][j].iter() {
                let row = prev.lmul[i * dpp + k].as_ref().expect("derivatives stay inside the multidegree bound");
                for (e, y) in row.iter() {
                    acc.add_term(off + e, &(x * y));
                }
            }
            if i == j {
                let t = self.tracked_pos[&self.module.degrees()[j]];
                for (e, y) in prev.act[t][c].iter() {
                    acc.add_term(off + e, y);
                }
            }
        }
        acc.finish()
    }

    /// Extends until `cap` or until a zero degree is reached.
    pub fn compute_to(&mut self, cap: usize) -> Result<(), EngineError> {
        while self.top_degree() < cap && !self.finished {
            self.extend_degree()?;
        }
        Ok(())
    }

    pub fn ensure_degree(&mut self, n: usize) -> Result<(), EngineError> {
        while self.top_degree() < n {
            self.extend_degree()?;
        }
        Ok(())
    }

    pub fn hilbert_series(&self) -> HilbertSeries {
        let mut dims: Vec<usize> = self.degs.iter().map(Degree::dim).collect();
        if self.finished {
            while dims.len() > 1 && dims.last() == Some(&0) {
                dims.pop();
            }
        }
        let mut table: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for d in &self.degs {
            for m in &d.mdeg {
                *table.entry(m.to_vec()).or_default() += 1;
            }
        }
        HilbertSeries::new(dims, self.finished, table)
    }

    fn check_letter(&self, i: usize) -> Result<(), EngineError> {
        if i < self.d {
            Ok(())
        } else {
            Err(EngineError::BadIndex(i))
        }
    }

    /// `v_i · y`.
    pub fn lmul_basis(&self, i: usize, y: &NElem) -> Result<NElem, EngineError> {
        self.check_letter(i)?;
        let n = y.degree + 1;
        if n >= self.degs.len() {
            if self.finished {
                return Ok(NElem::zero(n));
            }
            return Err(EngineError::DegreeOutOfRange { requested: n, computed: self.top_degree() });
        }
        let dp = self.degs[y.degree].dim();
        let mut acc = SparseAccumulator::new();
        for (c, x) in y.coords.iter() {
            let row = self.degs[n].lmul[i * dp + c].as_ref().ok_or(EngineError::OutsideBound)?;
            acc.add_scaled(row, x);
        }
        Ok(NElem { degree: n, coords: acc.finish() })
    }

    /// The unit 1 ∈ B^0.
    pub fn one(&self) -> NElem {
        NElem { degree: 0, coords: SparseVec::unit(0, self.field) }
    }

    /// The degree-one element with coordinates `v` in the basis of W.
    pub fn from_w(&self, v: &SparseVec) -> Result<NElem, EngineError> {
        let d1 = self.degree(1)?;
        let mut pairs = Vec::with_capacity(v.nnz());
        for (i, c) in v.iter() {
            let k = d1.words.iter().position(|w| w[0] as usize == i).ok_or(EngineError::OutsideBound)?;
            pairs.push((k, c.clone()));
        }
        Ok(NElem { degree: 1, coords: SparseVec::from_pairs(pairs) })
    }

    /// The basis vector v_i as a degree-one element.
    pub fn letter(&self, i: usize) -> Result<NElem, EngineError> {
        self.check_letter(i)?;
        self.from_w(&SparseVec::unit(i, self.field))
    }

    /// Coordinates in W of a degree-one element.
    pub fn to_w(&self, x: &NElem) -> SparseVec {
        match self.degs.get(1) {
            Some(d1) => x.coords.map_indices(|k| d1.words[k][0] as usize),
            None => SparseVec::zero(),
        }
    }

    /// Normal form of a word in the basis of W.
    pub fn normal_form(&self, word: &[usize]) -> Result<NElem, EngineError> {
        let mut acc = self.one();
        for &i in word.iter().rev() {
            acc = self.lmul_basis(i, &acc)?;
        }
        Ok(acc)
    }

    /// Product in B(W).
    pub fn multiply(&self, a: &NElem, b: &NElem) -> Result<NElem, EngineError> {
        let n = a.degree + b.degree;
        if n > self.top_degree() && !self.finished {
            return Err(EngineError::DegreeOutOfRange { requested: n, computed: self.top_degree() });
        }
        let words = &self.degree(a.degree)?.words;
        let mut acc = SparseAccumulator::new();
        for (w, x) in a.coords.iter() {
            let mut r = b.clone();
            for &i in words[w].iter().rev() {
                r = self.lmul_basis(i as usize, &r)?;
            }
            acc.add_scaled(&r.coords, x);
        }
        Ok(NElem { degree: n, coords: acc.finish() })
    }

    /// Right derivative ∂_j.
    pub fn partial_right(&self, j: usize, x: &NElem) -> Result<NElem, EngineError> {
        self.check_letter(j)?;
        if x.degree == 0 {
            return Ok(NElem::zero(0));
        }
        let deg = self.degree(x.degree)?;
        let mut acc = SparseAccumulator::new();
        for (b, c) in x.coords.iter() {
            acc.add_scaled(&deg.deriv[b][j], c);
        }
        Ok(NElem { degree: x.degree - 1, coords: acc.finish() })
    }

    /// Action of a group element.
    pub fn act(&self, e: Elem, x: &NElem) -> Result<NElem, EngineError> {
        let deg = self.degree(x.degree)?;
        if let Some(&t) = self.tracked_pos.get(&e) {
            let mut acc = SparseAccumulator::new();
            for (b, c) in x.coords.iter() {
                acc.add_scaled(&deg.act[t][b], c);
            }
            return Ok(NElem { degree: x.degree, coords: acc.finish() });
        }
        let g = self.module.group();
        let mut r = x.clone();
        for &gi in g.word(e).iter().rev() {
            r = self.act(g.generators()[gi], &r)?;
        }
        Ok(r)
    }

    /// Decomposes an element into its G-homogeneous components (by basis degrees).
    pub fn g_components(&self, x: &NElem) -> Result<BTreeMap<Elem, SparseVec>, EngineError> {
        let gd = &self.degree(x.degree)?.gdeg;
        let mut out: BTreeMap<Elem, Vec<(usize, Cyclo)>> = BTreeMap::new();
        for (b, c) in x.coords.iter() {
            out.entry(gd[b]).or_default().push((b, c.clone()));
        }
        Ok(out.into_iter().map(|(k, v)| (k, SparseVec::from_pairs(v))).collect())
    }

    pub fn theta(&self) -> usize {
        self.theta
    }
}

fn split_blocks(enc: &SparseVec, d: usize, dp: usize) -> Vec<SparseVec> {
    let mut parts: Vec<Vec<(usize, Cyclo)>> = vec![Vec::new(); d];
    if dp > 0 {
        for (k, c) in enc.iter() {
            parts[k / dp].push((k % dp, c.clone()));
        }
    }
    parts.into_iter().map(SparseVec::from_pairs).collect()
}
