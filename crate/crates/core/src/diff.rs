//! Quantum differential operators on a computed Nichols algebra and the
//! braided adjoint actions.
//!
//! Functionals on W are coordinate vectors over the dual basis f_1, …, f_d.
//! The right derivative ∂_i = ∂^R_{f_i} satisfies
//! `∂_i(bc) = b ∂_i(c) + ∂_i(b) g_i·c`; the left derivative satisfies
//! `∂^L_f(v b) = v ∂^L_{g_v⁻¹·f}(b) + ⟨f, v⟩ b` for homogeneous v ∈ W of degree g_v,
//! where `(h·f)(w) = f(h⁻¹·w)`.

use rayon::prelude::*;

use crate::group::Elem;
use crate::linalg::{SparseAccumulator, SparseVec};
use crate::nichols::{EngineError, NElem, NicholsState};
use crate::scalar::Cyclo;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiffError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("expected an element of degree one, got degree {0}")]
    NotDegreeOne(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// ∂^L_f or ∂^R_f for a functional `f` on W.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationOperator {
    pub side: Side,
    pub functional: SparseVec,
}

impl DerivationOperator {
    pub fn dual_basis(side: Side, i: usize, ops: &Derivations<'_>) -> DerivationOperator {
        DerivationOperator { side, functional: SparseVec::unit(i, ops.state.field()) }
    }

    pub fn apply(&self, ops: &Derivations<'_>, x: &NElem) -> Result<NElem, DiffError> {
        match self.side {
            Side::Left => ops.partial_left_functional(&self.functional, x),
            Side::Right => ops.partial_right_functional(&self.functional, x),
        }
    }
}

/// Derivations and adjoint actions over a fixed computed state.
pub struct Derivations<'a> {
    state: &'a NicholsState,
    /// left[n][b][i] = ∂^L_i(b) for the basis element b of degree n
    left: Vec<Vec<Vec<SparseVec>>>,
}

impl<'a> Derivations<'a> {
    /// Builds the left-derivative tables for every computed degree.
    pub fn new(state: &'a NicholsState) -> Result<Derivations<'a>, DiffError> {
        let m = state.module();
        let d = m.dim();
        // twist[a][i] = row i of the action of g_a: (g_a⁻¹·f_i) in dual coordinates
        let twist: Vec<Vec<SparseVec>> = (0..d)
            .map(|a| {
                let act = m.action(m.degrees()[a]);
                let mut rows = vec![Vec::new(); d];
                for k in 0..d {
                    for (i, x) in act.column(k).iter() {
                        rows[i].push((k, x.clone()));
                    }
                }
                rows.into_iter().map(SparseVec::from_pairs).collect()
            })
            .collect();
        let mut left: Vec<Vec<Vec<SparseVec>>> = vec![vec![vec![SparseVec::zero(); d]]];
        for n in 1..=state.top_degree() {
            let dim = state.dim(n)?;
            let prev = &left[n - 1];
            let rows: Result<Vec<Vec<SparseVec>>, EngineError> = (0..dim)
                .into_par_iter()
                .map(|b| {
                    let (a, t) = state.basis_split(n, b)?;
                    (0..d)
                        .map(|i| {
                            let mut out = SparseVec::zero();
                            if n >= 2 {
                                let mut inner = SparseAccumulator::new();
                                for (k, x) in twist[a][i].iter() {
                                    inner.add_scaled(&prev[t][k], x);
                                }
                                out = state.lmul_basis(a, &NElem { degree: n - 2, coords: inner.finish() })?.coords;
                            }
                            if i == a {
                                out = out.add(&SparseVec::unit(t, state.field()));
                            }
                            Ok(out)
                        })
                        .collect()
                })
                .collect();
            left.push(rows?);
        }
        Ok(Derivations { state, left })
    }

    pub fn state(&self) -> &NicholsState {
        self.state
    }

    fn check_degree(&self, x: &NElem) -> Result<(), DiffError> {
        if x.degree >= self.left.len() {
            return Err(EngineError::DegreeOutOfRange { requested: x.degree, computed: self.left.len() - 1 }.into());
        }
        Ok(())
    }

    /// ∂_i = ∂^R_{f_i}.
    pub fn partial_right(&self, i: usize, x: &NElem) -> Result<NElem, DiffError> {
        Ok(self.state.partial_right(i, x)?)
    }

    pub fn partial_right_functional(&self, f: &SparseVec, x: &NElem) -> Result<NElem, DiffError> {
        let mut acc = NElem::zero(x.degree.saturating_sub(1));
        for (i, c) in f.iter() {
            acc = acc.add(&self.state.partial_right(i, x)?.scale(c))?;
        }
        Ok(acc)
    }

    /// ∂^L_{f_i}.
    pub fn partial_left(&self, i: usize, x: &NElem) -> Result<NElem, DiffError> {
        self.partial_left_functional(&SparseVec::unit(i, self.state.field()), x)
    }

    pub fn partial_left_functional(&self, f: &SparseVec, x: &NElem) -> Result<NElem, DiffError> {
        self.check_degree(x)?;
        if let Some(i) = f.max_index() {
            if i >= self.state.module().dim() {
                return Err(EngineError::BadIndex(i).into());
            }
        }
        if x.degree == 0 {
            return Ok(NElem::zero(0));
        }
        let table = &self.left[x.degree];
        let mut acc = SparseAccumulator::new();
        for (b, c) in x.coords.iter() {
            for (i, fi) in f.iter() {
                acc.add_scaled(&table[b][i], &(c * fi));
            }
        }
        Ok(NElem { degree: x.degree - 1, coords: acc.finish() })
    }

    /// Applies left derivatives along `word`, first letter first.
    pub fn left_word(&self, word: &[usize], x: &NElem) -> Result<NElem, DiffError> {
        let mut r = x.clone();
        for &i in word {
            r = self.partial_left(i, &r)?;
        }
        Ok(r)
    }

    /// Applies right derivatives along `word`, first letter first.
    pub fn right_word(&self, word: &[usize], x: &NElem) -> Result<NElem, DiffError> {
        let mut r = x.clone();
        for &i in word {
            r = self.partial_right(i, &r)?;
        }
        Ok(r)
    }

    fn degree_one(&self, v: &NElem) -> Result<SparseVec, DiffError> {
        if v.degree != 1 {
            return Err(DiffError::NotDegreeOne(v.degree));
        }
        Ok(self.state.to_w(v))
    }

    /// ad_c v(y) = v y − (v_(−1)·y) v_(0).
    pub fn ad_c(&self, v: &NElem, y: &NElem) -> Result<NElem, DiffError> {
        let w = self.degree_one(v)?;
        let mut acc = NElem::zero(y.degree + 1);
        for (a, c) in w.iter() {
            let va = self.state.letter(a)?;
            let gy = self.state.act(self.state.module().degrees()[a], y)?;
            let term = self.state.multiply(&va, y)?.sub(&self.state.multiply(&gy, &va)?)?;
            acc = acc.add(&term.scale(c))?;
        }
        Ok(acc)
    }

    /// ad_{c⁻¹} v(y) = v y − y_(0) (S⁻¹(y_(−1))·v).
    pub fn ad_c_inv(&self, v: &NElem, y: &NElem) -> Result<NElem, DiffError> {
        let w = self.degree_one(v)?;
        let g = self.state.module().group();
        let mut acc = self.state.multiply(v, y)?;
        for (h, coords) in self.state.g_components(y)? {
            let part = NElem { degree: y.degree, coords };
            let hv = self.state.module().act(g.inverse(h), &w);
            let hv = self.state.from_w(&hv)?;
            acc = acc.sub(&self.state.multiply(&part, &hv)?)?;
        }
        Ok(acc)
    }

    /// The lexicographically first word of left derivatives taking `x` to a
    /// nonzero scalar, with that scalar. `None` when `x` is zero.
    pub fn nondegeneracy_witness(&self, x: &NElem) -> Result<Option<(Vec<usize>, Cyclo)>, DiffError> {
        self.check_degree(x)?;
        let mut word = Vec::with_capacity(x.degree);
        self.witness_rec(x, &mut word)
    }

    fn witness_rec(&self, x: &NElem, word: &mut Vec<usize>) -> Result<Option<(Vec<usize>, Cyclo)>, DiffError> {
        if x.is_zero() {
            return Ok(None);
        }
        if x.degree == 0 {
            let s = x.coords.get(0).cloned().expect("nonzero scalar");
            return Ok(Some((word.clone(), s)));
        }
        for i in 0..self.state.module().dim() {
            let y = self.partial_left(i, x)?;
            word.push(i);
            if let Some(found) = self.witness_rec(&y, word)? {
                return Ok(Some(found));
            }
            word.pop();
        }
        Ok(None)
    }

    /// An element of positive degree is zero iff every ∂_i kills it.
    pub fn vanishes_by_derivatives(&self, x: &NElem) -> Result<bool, DiffError> {
        if x.degree == 0 {
            return Ok(x.is_zero());
        }
        for i in 0..self.state.module().dim() {
            if !self.partial_right(i, x)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `h·f` for a functional `f` on W: `(h·f)(w) = f(h⁻¹·w)`.
pub fn act_on_functional(state: &NicholsState, h: Elem, f: &SparseVec) -> SparseVec {
    let m = state.module();
    let act = m.action(m.group().inverse(h));
    let pairs: Vec<(usize, Cyclo)> = (0..m.dim())
        .filter_map(|k| {
            let mut s = state.field().zero();
            for (i, x) in act.column(k).iter() {
                if let Some(y) = f.get(i) {
                    s += &(x * y);
                }
            }
            (!s.is_zero()).then_some((k, s))
        })
        .collect();
    SparseVec::from_pairs(pairs)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::nichols::{symmetrizer, EngineConfig};
    use crate::presets;
    use crate::yd::YDModule;

    fn state(m: &YDModule, cap: usize) -> NicholsState {
        let mut s = NicholsState::new(m, EngineConfig::default()).unwrap();
        s.compute_to(cap).unwrap();
        s
    }

    fn basis(s: &NicholsState, n: usize, k: usize) -> NElem {
        NElem { degree: n, coords: SparseVec::unit(k, s.field()) }
    }

    fn tensor_index(word: &[usize], d: usize) -> usize {
        word.iter().fold(0, |acc, &a| acc * d + a)
    }

    #[test]
    fn derivatives_on_letters() {
        let s = state(&presets::fk3(), 6);
        let ops = Derivations::new(&s).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let x = s.letter(j).unwrap();
                let want = if i == j { s.one() } else { NElem::zero(0) };
                assert_eq!(ops.partial_right(i, &x).unwrap(), want);
                assert_eq!(ops.partial_left(i, &x).unwrap(), want);
            }
            assert!(ops.partial_left(i, &s.one()).unwrap().is_zero());
        }
        // ∂_{x3}(x2 x3) = x2
        let x23 = s.normal_form(&[1, 2]).unwrap();
        assert_eq!(ops.partial_right(2, &x23).unwrap(), s.letter(1).unwrap());
    }

    #[test]
    fn left_derivative_on_degree_two() {
        // ∂^L_f(v w) = v ⟨g_v⁻¹·f, w⟩ + ⟨f, v⟩ w
        let [_, _, w] = presets::s4_modules();
        let s = state(&w, 3);
        let ops = Derivations::new(&s).unwrap();
        let m = s.module();
        let f = s.field();
        for a in 0..6 {
            for b in 0..6 {
                let x = s.normal_form(&[a, b]).unwrap();
                for i in 0..6 {
                    let tw = act_on_functional(&s, m.group().inverse(m.degrees()[a]), &SparseVec::unit(i, f));
                    let mut want = s.letter(a).unwrap().scale(&tw.get(b).cloned().unwrap_or_else(|| f.zero()));
                    if i == a {
                        want = want.add(&s.letter(b).unwrap()).unwrap();
                    }
                    assert_eq!(ops.partial_left(i, &x).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn iterated_left_derivatives_pair_with_symmetrizer() {
        for (m, top) in [(presets::fk3(), 4), (presets::fk3_doubled(), 3), (presets::s4_modules()[2].clone(), 3)] {
            let s = state(&m, top);
            let ops = Derivations::new(&s).unwrap();
            let d = m.dim();
            for n in 1..=top {
                let sym = symmetrizer(&m, n, false).unwrap();
                let words: Vec<Vec<usize>> = (0..d.pow(n as u32)).map(|t| (0..n).rev().map(|k| t / d.pow(k as u32) % d).collect()).collect();
                for b in 0..s.dim(n).unwrap() {
                    let bw: Vec<usize> = s.basis_words(n).unwrap()[b].iter().map(|&x| x as usize).collect();
                    let col = sym.column(tensor_index(&bw, d));
                    for iw in &words {
                        let got = ops.left_word(iw, &basis(&s, n, b)).unwrap();
                        let want = col.get(tensor_index(iw, d)).cloned().unwrap_or_else(|| s.field().zero());
                        assert_eq!(got.coords.get(0).cloned().unwrap_or_else(|| s.field().zero()), want);
                    }
                }
            }
        }
    }

    #[test]
    fn sides_commute() {
        let s = state(&presets::s4_mixed_pair(), 4);
        let ops = Derivations::new(&s).unwrap();
        for n in 2..=4 {
            for b in 0..s.dim(n).unwrap() {
                let x = basis(&s, n, b);
                for i in [0, 3, 7, 11] {
                    for j in [1, 6, 10] {
                        let lr = ops.partial_left(i, &ops.partial_right(j, &x).unwrap()).unwrap();
                        let rl = ops.partial_right(j, &ops.partial_left(i, &x).unwrap()).unwrap();
                        assert_eq!(lr, rl);
                    }
                }
            }
        }
    }

    #[test]
    fn fk3_doubled_adjoint_expansions() {
        let s = state(&presets::fk3_doubled(), 5);
        let ops = Derivations::new(&s).unwrap();
        let m = s.module();
        let l = |name: &str| s.letter(m.name_index(name).unwrap()).unwrap();
        let nf = |w: &[&str]| s.normal_form(&w.iter().map(|x| m.name_index(x).unwrap()).collect::<Vec<_>>()).unwrap();
        assert!(ops.ad_c(&l("x1"), &s.one()).unwrap().is_zero());
        assert!(ops.ad_c_inv(&l("x1"), &s.one()).unwrap().is_zero());
        let a = ops.ad_c(&l("x1"), &l("y2")).unwrap();
        assert_eq!(a, nf(&["x1", "y2"]).add(&nf(&["y3", "x1"])).unwrap());
        let b = ops.ad_c(&l("x2"), &a).unwrap();
        let want = nf(&["x2", "x1", "y2"]).add(&nf(&["x2", "y3", "x1"])).unwrap().sub(&nf(&["x3", "y2", "x2"])).unwrap().sub(&nf(&["y1", "x3", "x2"])).unwrap();
        assert_eq!(b, want);
        let r = ops.partial_right(m.name_index("x3").unwrap(), &ops.partial_right(m.name_index("y1").unwrap(), &b).unwrap()).unwrap();
        assert_eq!(r, l("x2").scale(&s.field().from_int(-1)));
    }

    fn expansion(s: &NicholsState, terms: &[(i64, &[&str])]) -> NElem {
        let m = s.module();
        let mut acc = NElem::zero(terms[0].1.len());
        for (c, w) in terms {
            let word: Vec<usize> = w.iter().map(|x| m.name_index(x).unwrap()).collect();
            acc = acc.add(&s.normal_form(&word).unwrap().scale(&s.field().from_int(*c))).unwrap();
        }
        acc
    }

    #[test]
    fn dihedral_adjoint_expansion() {
        let s = state(&presets::dihedral_doubled(9).unwrap(), 3);
        let ops = Derivations::new(&s).unwrap();
        let m = s.module();
        let l = |name: &str| s.letter(m.name_index(name).unwrap()).unwrap();
        let x = ops.ad_c(&l("v2"), &ops.ad_c(&l("v1"), &l("w2")).unwrap()).unwrap();
        assert_eq!(x, expansion(&s, &[(1, &["v2", "v1", "w2"]), (1, &["v2", "w0", "v1"]), (-1, &["v3", "w2", "v2"]), (-1, &["w4", "v3", "v2"])]));
        // ∂_{v6}(−v5 v6) = −v5
        let y = ops.partial_right(m.name_index("w4").unwrap(), &x).unwrap();
        assert_eq!(ops.partial_right(m.name_index("v6").unwrap(), &y).unwrap(), l("v5").scale(&s.field().from_int(-1)));
        assert_eq!(ops.partial_right(m.name_index("v6").unwrap(), &expansion(&s, &[(1, &["v5", "v6"])])).unwrap(), l("v5"));
    }

    #[test]
    fn s4_mixed_adjoint_expansions() {
        let s = state(&presets::s4_mixed_pair(), 3);
        let ops = Derivations::new(&s).unwrap();
        let m = s.module();
        let l = |name: &str| s.letter(m.name_index(name).unwrap()).unwrap();
        let d = |name: &str, x: &NElem| ops.partial_right(m.name_index(name).unwrap(), x).unwrap();
        let x = ops.ad_c(&l("zt2"), &ops.ad_c(&l("zt1"), &l("w1")).unwrap()).unwrap();
        assert_eq!(x, expansion(&s, &[(1, &["zt2", "zt1", "w1"]), (1, &["zt2", "w4", "zt1"]), (-1, &["zt3", "w5", "zt2"]), (-1, &["w3", "zt3", "zt2"])]));
        assert_eq!(d("zt1", &d("w1", &x)), l("zt2"));
        let y = ops.ad_c(&l("w2"), &ops.ad_c(&l("w1"), &l("zt1")).unwrap()).unwrap();
        assert_eq!(y, expansion(&s, &[(1, &["w2", "w1", "zt1"]), (-1, &["w2", "zt2", "w1"]), (1, &["w1", "zt4", "w2"]), (-1, &["zt1", "w1", "w2"])]));
        assert_eq!(d("w5", &d("zt2", &y)), l("w2"));
    }

    #[test]
    fn ad_c_inv_on_degree_one() {
        // ad_{c⁻¹} v(w) = v w − w (g_w⁻¹·v)
        let s = state(&presets::fk3_doubled(), 3);
        let ops = Derivations::new(&s).unwrap();
        let m = s.module();
        let g = m.group();
        for a in 0..6 {
            for b in 0..6 {
                let (v, w) = (s.letter(a).unwrap(), s.letter(b).unwrap());
                let hv = s.from_w(&m.act(g.inverse(m.degrees()[b]), &SparseVec::unit(a, s.field()))).unwrap();
                let want = s.multiply(&v, &w).unwrap().sub(&s.multiply(&w, &hv).unwrap()).unwrap();
                assert_eq!(ops.ad_c_inv(&v, &w).unwrap(), want);
            }
        }
    }

    #[test]
    fn symmetric_pair_has_equal_adjoints() {
        let (m1, m2) = presets::zero_cartan_pair();
        let w = YDModule::direct_sum(&[&m1, &m2]).unwrap();
        let s = state(&w, 4);
        let ops = Derivations::new(&s).unwrap();
        let u = s.letter(3).unwrap();
        for n in 0..=3 {
            for b in 0..s.dim(n).unwrap() {
                let y = basis(&s, n, b);
                if s.basis_mdeg(n).unwrap()[b][1] > 0 {
                    continue;
                }
                assert_eq!(ops.ad_c(&u, &y).unwrap(), ops.ad_c_inv(&u, &y).unwrap());
                assert!(ops.ad_c(&u, &y).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn every_basis_element_has_a_witness() {
        let s = state(&presets::fk3(), 5);
        let ops = Derivations::new(&s).unwrap();
        for n in 0..=4 {
            for b in 0..s.dim(n).unwrap() {
                let (word, c) = ops.nondegeneracy_witness(&basis(&s, n, b)).unwrap().unwrap();
                assert_eq!(word.len(), n);
                assert!(!c.is_zero());
            }
        }
        assert_eq!(ops.nondegeneracy_witness(&NElem::zero(2)).unwrap(), None);
        // top degree of FK3: the first witness word is lexicographically least
        let (word, _) = ops.nondegeneracy_witness(&basis(&s, 4, 0)).unwrap().unwrap();
        assert_eq!(word[0], 0);
    }

    #[test]
    fn degree_errors() {
        let s = state(&presets::fk3_doubled(), 2);
        let ops = Derivations::new(&s).unwrap();
        let x = s.normal_form(&[0, 3]).unwrap();
        assert!(matches!(ops.ad_c(&s.letter(1).unwrap(), &x), Err(DiffError::Engine(EngineError::DegreeOutOfRange { .. }))));
        assert!(matches!(ops.ad_c(&x, &x), Err(DiffError::NotDegreeOne(2))));
    }

    fn fk3_ops() -> &'static (NicholsState, Vec<Vec<Vec<SparseVec>>>) {
        use std::sync::OnceLock;
        static CELL: OnceLock<(NicholsState, Vec<Vec<Vec<SparseVec>>>)> = OnceLock::new();
        CELL.get_or_init(|| {
            let s = state(&presets::fk3_doubled(), 4);
            let left = Derivations::new(&s).unwrap().left;
            (s, left)
        })
    }

    fn element(s: &NicholsState, n: usize, coeffs: &[i64]) -> NElem {
        let f = s.field();
        let dim = s.dim(n).unwrap();
        let pairs = coeffs.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, &c)| (k % dim, f.from_int(c)));
        let mut acc = SparseAccumulator::new();
        for (k, c) in pairs {
            acc.add_term(k, &c);
        }
        NElem { degree: n, coords: acc.finish() }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn operator_relation(n in 0usize..3, coeffs in prop::collection::vec(-3i64..4, 1..8), a in 0usize..6, f in prop::collection::vec(-2i64..3, 6)) {
            // ∂^L_f ∘ L_v = L_v ∘ ∂^L_{g_v⁻¹·f} + ⟨f, v⟩ id
            let (s, left) = fk3_ops();
            let ops = Derivations { state: s, left: left.clone() };
            let x = element(s, n, &coeffs);
            let fv = SparseVec::from_dense(&f.iter().map(|&c| s.field().from_int(c)).collect::<Vec<_>>());
            let v = s.letter(a).unwrap();
            let lhs = ops.partial_left_functional(&fv, &s.multiply(&v, &x).unwrap()).unwrap();
            let tw = act_on_functional(s, s.module().group().inverse(s.module().degrees()[a]), &fv);
            let d = ops.partial_left_functional(&tw, &x).unwrap();
            let mut rhs = if n == 0 { NElem::zero(0) } else { s.multiply(&v, &d).unwrap() };
            if let Some(c) = fv.get(a) {
                rhs = rhs.add(&x.scale(c)).unwrap();
            }
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn zero_detection(n in 1usize..5, coeffs in prop::collection::vec(-2i64..3, 1..12)) {
            let (s, left) = fk3_ops();
            let ops = Derivations { state: s, left: left.clone() };
            let x = element(s, n, &coeffs);
            prop_assert_eq!(ops.vanishes_by_derivatives(&x).unwrap(), x.is_zero());
            prop_assert_eq!(ops.nondegeneracy_witness(&x).unwrap().is_none(), x.is_zero());
        }
    }
}
