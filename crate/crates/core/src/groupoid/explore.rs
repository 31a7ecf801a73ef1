use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Mutex;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::yd::{IsoClass, YDModule};

use super::cartan::{adjoint_filtration, top_level_module, CartanValue, FamilyM};
use super::GroupoidError;

/// Cartan entries of a family at a given cap; the diagonal is `Exact(2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub entries: Vec<Vec<CartanValue>>,
    pub cap: usize,
}

impl CartanData {
    pub fn theta(&self) -> usize {
        self.entries.len()
    }

    pub fn row_certified(&self, i: usize) -> bool {
        self.entries[i].iter().all(|e| e.exact().is_some())
    }

    /// The integer matrix when every entry is exact.
    pub fn exact_matrix(&self) -> Option<Vec<Vec<i64>>> {
        self.entries.iter().map(|row| row.iter().map(CartanValue::exact).collect()).collect()
    }

    pub fn row(&self, i: usize) -> Result<Vec<i64>, GroupoidError> {
        self.entries[i]
            .iter()
            .enumerate()
            .map(|(j, e)| e.exact().ok_or(GroupoidError::Uncertified { row: i, column: j, cap: self.cap }))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<Value>> = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        CartanValue::Exact(a) => json!(a),
                        CartanValue::UnboundedAtCap { cap } => json!({ "unbounded_at_cap": cap, "upper_bound": e.upper_bound() }),
                    })
                    .collect()
            })
            .collect();
        json!({ "entries": rows, "cap": self.cap })
    }
}

/// Memoizes Cartan entries and L^max modules by the fingerprints of the pair.
#[derive(Default)]
pub struct CartanCache {
    map: Mutex<HashMap<(IsoClass, IsoClass, usize), (CartanValue, Option<YDModule>)>>,
}

impl CartanCache {
    pub fn new() -> CartanCache {
        CartanCache::default()
    }

    fn get(&self, family: &FamilyM, i: usize, j: usize, cap: usize) -> Result<(CartanValue, Option<YDModule>), GroupoidError> {
        let key = (family.fingerprints()[i].clone(), family.fingerprints()[j].clone(), cap);
        if let Some(hit) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let filt = adjoint_filtration(&family.blocks()[i], &family.blocks()[j], cap)?;
        let lmax = match filt.value {
            CartanValue::Exact(_) => Some(top_level_module(&filt)?),
            CartanValue::UnboundedAtCap { .. } => None,
        };
        let out = (filt.value, lmax);
        self.map.lock().expect("cache lock").insert(key, out.clone());
        Ok(out)
    }

    pub fn cartan_data(&self, family: &FamilyM, cap: usize) -> Result<CartanData, GroupoidError> {
        let t = family.theta();
        let pairs: Vec<(usize, usize)> = (0..t).flat_map(|i| (0..t).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let values: Vec<CartanValue> = pairs.par_iter().map(|&(i, j)| self.get(family, i, j, cap).map(|r| r.0)).collect::<Result<_, _>>()?;
        let mut entries = vec![vec![CartanValue::Exact(2); t]; t];
        for (&(i, j), v) in pairs.iter().zip(values) {
            entries[i][j] = v;
        }
        Ok(CartanData { entries, cap })
    }

    /// R_i(M): block i dualized, every other block j replaced by L_j^max.
    pub fn reflect(&self, family: &FamilyM, i: usize, cap: usize) -> Result<FamilyM, GroupoidError> {
        if i >= family.theta() {
            return Err(GroupoidError::BadIndex(i));
        }
        let mut blocks = Vec::with_capacity(family.theta());
        for j in 0..family.theta() {
            if j == i {
                blocks.push(family.blocks()[i].dual());
            } else {
                let (_, lmax) = self.get(family, i, j, cap)?;
                blocks.push(lmax.ok_or(GroupoidError::Uncertified { row: i, column: j, cap })?);
            }
        }
        FamilyM::new(blocks)
    }
}

/// R_i(M), refusing when row i is not certified within `cap`.
pub fn reflect(family: &FamilyM, i: usize, cap: usize) -> Result<FamilyM, GroupoidError> {
    CartanCache::new().reflect(family, i, cap)
}

/// s_{i,M}(α_j) = α_j − a_ij α_i, as a matrix whose columns are the images.
pub fn s_matrix(row: &[i64], i: usize) -> Vec<Vec<i64>> {
    let t = row.len();
    let mut s = vec![vec![0i64; t]; t];
    for (j, &a) in row.iter().enumerate() {
        s[j][j] += 1;
        s[i][j] -= a;
    }
    s
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n).map(|r| (0..m).map(|c| (0..b.len()).map(|k| a[r][k] * b[k][c]).sum()).collect()).collect()
}

pub fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn identity(t: usize) -> Vec<Vec<i64>> {
    (0..t).map(|i| (0..t).map(|j| i64::from(i == j)).collect()).collect()
}

pub struct GroupoidNode {
    pub key: Vec<IsoClass>,
    pub family: FamilyM,
    pub cartan: CartanData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidEdge {
    pub from: usize,
    pub row: usize,
    pub to: usize,
    pub s: Vec<Vec<i64>>,
}

pub struct GroupoidGraph {
    pub nodes: Vec<GroupoidNode>,
    pub edges: Vec<GroupoidEdge>,
    /// (node, row) pairs that could not be reflected within the cap
    pub uncertified: Vec<(usize, usize)>,
    /// true when the node limit stopped the search
    pub truncated: bool,
    pub cap: usize,
    pub node_limit: usize,
}

impl GroupoidGraph {
    /// Closed under all reflections, with no refusals.
    pub fn is_complete(&self) -> bool {
        !self.truncated && self.uncertified.is_empty()
    }

    pub fn edge(&self, from: usize, row: usize) -> Option<&GroupoidEdge> {
        self.edges.iter().find(|e| e.from == from && e.row == row)
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(k, n)| {
                json!({
                    "id": k,
                    "fingerprints": n.key.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "dims": n.family.blocks().iter().map(YDModule::dim).collect::<Vec<_>>(),
                    "cartan": n.cartan.to_json(),
                })
            })
            .collect();
        let edges: Vec<Value> = self.edges.iter().map(|e| json!({ "from": e.from, "row": e.row + 1, "to": e.to, "s": e.s })).collect();
        json!({
            "nodes": nodes,
            "edges": edges,
            "uncertified": self.uncertified.iter().map(|(n, r)| json!({ "node": n, "row": r + 1 })).collect::<Vec<_>>(),
            "truncated": self.truncated,
            "complete": self.is_complete(),
            "cap": self.cap,
            "node_limit": self.node_limit,
        })
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph weyl_groupoid {\n");
        for (k, n) in self.nodes.iter().enumerate() {
            let cm = n.cartan.exact_matrix().map_or_else(|| "uncertified".to_string(), |m| format!("{m:?}"));
            s.push_str(&format!("  n{k} [label=\"{k}: {cm}\"];\n"));
        }
        for e in &self.edges {
            if e.from <= e.to {
                s.push_str(&format!("  n{} -> n{} [label=\"{}\", dir=both];\n", e.from, e.to, e.row + 1));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Breadth-first closure of `family` under certified reflections.
pub fn explore_groupoid(family: &FamilyM, cap: usize, node_limit: usize) -> Result<GroupoidGraph, GroupoidError> {
    let cache = CartanCache::new();
    let mut index: HashMap<Vec<IsoClass>, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut uncertified = Vec::new();
    let mut truncated = false;
    let cartan = cache.cartan_data(family, cap)?;
    index.insert(family.fingerprints().to_vec(), 0);
    nodes.push(GroupoidNode { key: family.fingerprints().to_vec(), family: family.clone(), cartan });
    let mut queue = VecDeque::from([0usize]);
    'bfs: while let Some(k) = queue.pop_front() {
        for i in 0..family.theta() {
            let node = &nodes[k];
            if !node.cartan.row_certified(i) {
                uncertified.push((k, i));
                continue;
            }
            let s = s_matrix(&node.cartan.row(i)?, i);
            let next = cache.reflect(&node.family, i, cap)?;
            let to = match index.get(next.fingerprints()) {
                Some(&t) => t,
                None => {
                    if nodes.len() >= node_limit {
                        truncated = true;
                        break 'bfs;
                    }
                    let cartan = cache.cartan_data(&next, cap)?;
                    let t = nodes.len();
                    index.insert(next.fingerprints().to_vec(), t);
                    nodes.push(GroupoidNode { key: next.fingerprints().to_vec(), family: next, cartan });
                    queue.push_back(t);
                    t
                }
            };
            edges.push(GroupoidEdge { from: k, row: i, to, s });
        }
    }
    log::info!("groupoid: {} nodes, {} edges, truncated {truncated}", nodes.len(), edges.len());
    Ok(GroupoidGraph { nodes, edges, uncertified, truncated, cap, node_limit })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub roots: BTreeSet<Vec<i64>>,
    /// false when the groupoid or the morphism search was incomplete
    pub complete: bool,
}

impl RootSet {
    pub fn positive(&self) -> Vec<Vec<i64>> {
        self.roots.iter().filter(|r| r.iter().all(|&x| x >= 0)).cloned().collect()
    }
}

/// Upper limit on (node, morphism) pairs visited by [`real_roots`].
pub const MORPHISM_LIMIT: usize = 100_000;

/// Δ^re = { w(α_j) } over all composites w of edge matrices ending at the base node.
pub fn real_roots(graph: &GroupoidGraph) -> RootSet {
    let t = graph.nodes[0].family.theta();
    let start = (0usize, identity(t));
    let mut seen: BTreeSet<(usize, Vec<Vec<i64>>)> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut roots = BTreeSet::new();
    let mut complete = graph.is_complete();
    while let Some((k, w)) = queue.pop_front() {
        for j in 0..t {
            roots.insert(w.iter().map(|row| row[j]).collect());
        }
        for e in graph.edges.iter().filter(|e| e.from == k) {
            let next = (e.to, mat_mul(&w, &e.s));
            if seen.contains(&next) {
                continue;
            }
            if seen.len() >= MORPHISM_LIMIT {
                complete = false;
                continue;
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
    }
    RootSet { roots, complete }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardVerdict {
    Standard,
    /// two nodes with different Cartan matrices
    NotStandard { first: usize, second: usize },
    /// some entry was not certified within the cap, or the search was truncated
    Undecided,
}

pub fn is_standard(graph: &GroupoidGraph) -> StandardVerdict {
    let mats: Vec<Option<Vec<Vec<i64>>>> = graph.nodes.iter().map(|n| n.cartan.exact_matrix()).collect();
    if let Some(base) = &mats[0] {
        if let Some(k) = mats.iter().position(|m| m.as_ref().is_some_and(|m| m != base)) {
            return StandardVerdict::NotStandard { first: 0, second: k };
        }
    }
    if mats.iter().any(Option::is_none) || graph.truncated {
        return StandardVerdict::Undecided;
    }
    StandardVerdict::Standard
}

/// Multidegrees (as integer vectors) with nonzero dimension in a Hilbert series table.
pub fn support(table: &std::collections::BTreeMap<Vec<u32>, usize>) -> BTreeSet<Vec<i64>> {
    table.iter().filter(|(_, &n)| n > 0).map(|(k, _)| k.iter().map(|&x| i64::from(x)).collect()).collect()
}

/// { a − b : a, b ∈ S }.
pub fn difference_set(s: &BTreeSet<Vec<i64>>) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for a in s {
        for b in s {
            out.insert(a.iter().zip(b).map(|(x, y)| x - y).collect());
        }
    }
    out
}
