//! Ready-made groups and modules with pinned numerations.
//!
//! Numerations follow the classical conventions for S3, S4 and D_n so that
//! derivative-level computations can be compared symbol by symbol.

use std::sync::Arc;

use crate::group::{ConjugacyClass, Elem, FiniteGroup};
use crate::scalar::CycloField;
use crate::yd::{diagonal_blocks, Representation, YDModule, YdError};

fn elems(g: &FiniteGroup, xs: &[&str]) -> Vec<Elem> {
    xs.iter().map(|x| g.parse_element(x).expect("preset element")).collect()
}

fn names(prefix: &str, range: impl Iterator<Item = usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

pub fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::from_permutations(3, vec![vec![1, 0, 2], vec![1, 2, 0]], None).expect("S3"))
}

pub fn s4() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::from_permutations(4, vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]], None).expect("S4"))
}

/// Transpositions of S3: σ1 = (12), σ2 = (23), σ3 = (13) with even representatives.
pub fn s3_transpositions(g: &FiniteGroup) -> ConjugacyClass {
    ConjugacyClass::with_numeration(g, elems(g, &["(12)", "(23)", "(13)"]), Some(elems(g, &["e", "(123)", "(132)"]))).expect("S3 numeration")
}

/// M(O_2^3, sgn) over S3, basis `x1, x2, x3` (or another prefix).
pub fn fk3_named(g: &Arc<FiniteGroup>, prefix: &str) -> Result<YDModule, YdError> {
    let class = s3_transpositions(g);
    let f = CycloField::get(2);
    let rho = Representation::character(g, class.centralizer(), vec![(class.base(), f.from_int(-1))])?;
    YDModule::from_class(g.clone(), &class, &rho)?.with_names(names(prefix, 1..=3))
}

pub fn fk3() -> YDModule {
    fk3_named(&s3(), "x").expect("FK3 module")
}

/// M(O_2^3, sgn) ⊕ M(O_2^3, sgn) with bases `x1..x3`, `y1..y3`.
pub fn fk3_doubled() -> YDModule {
    let g = s3();
    let x = fk3_named(&g, "x").expect("FK3 module");
    let y = fk3_named(&g, "y").expect("FK3 module");
    YDModule::direct_sum(&[&x, &y]).expect("same group")
}

/// Transpositions of S4: σ1..σ6 = (12), (23), (13), (14), (24), (34) with
/// representatives g1..g6 = σ1, σ3, σ2, σ5, σ4, (1324).
pub fn s4_transpositions(g: &FiniteGroup) -> ConjugacyClass {
    let members = elems(g, &["(12)", "(23)", "(13)", "(14)", "(24)", "(34)"]);
    let reps = elems(g, &["(12)", "(13)", "(23)", "(24)", "(14)", "(1324)"]);
    ConjugacyClass::with_numeration(g, members, Some(reps)).expect("S4 transposition numeration")
}

/// Four-cycles of S4: τ1..τ6 = (1234), (1432), (1243), (1342), (1324), (1423)
/// with representatives h1..h6 = τ1, (24), τ6, τ5, τ3, τ4.
pub fn s4_four_cycles(g: &FiniteGroup) -> ConjugacyClass {
    let members = elems(g, &["(1234)", "(1432)", "(1243)", "(1342)", "(1324)", "(1423)"]);
    let reps = elems(g, &["(1234)", "(24)", "(1423)", "(1324)", "(1243)", "(1342)"]);
    ConjugacyClass::with_numeration(g, members, Some(reps)).expect("S4 four-cycle numeration")
}

/// M(O_2^4, ρ) with ρ(t1) = -1 and ρ(t2) = `t2_value`, where t1 = (12), t2 = (34).
/// `t2_value = -1` gives sgn, `t2_value = 1` gives sgn ⊗ ε.
pub fn s4_transposition_module(g: &Arc<FiniteGroup>, t2_value: i64, prefix: &str) -> Result<YDModule, YdError> {
    let class = s4_transpositions(g);
    let f = CycloField::get(2);
    let t1 = g.parse_element("(12)")?;
    let t2 = g.parse_element("(34)")?;
    let rho = Representation::character(g, class.centralizer(), vec![(t1, f.from_int(-1)), (t2, f.from_int(t2_value))])?;
    YDModule::from_class(g.clone(), &class, &rho)?.with_names(names(prefix, 1..=6))
}

/// M(O_4^4, χ_-) with χ_-(τ1) = -1.
pub fn s4_four_cycle_module(g: &Arc<FiniteGroup>, prefix: &str) -> Result<YDModule, YdError> {
    let class = s4_four_cycles(g);
    let f = CycloField::get(2);
    let rho = Representation::character(g, class.centralizer(), vec![(class.base(), f.from_int(-1))])?;
    YDModule::from_class(g.clone(), &class, &rho)?.with_names(names(prefix, 1..=6))
}

/// The three S4 modules: sgn, sgn ⊗ ε on transpositions, χ_- on four-cycles.
pub fn s4_modules() -> [YDModule; 3] {
    let g = s4();
    [
        s4_transposition_module(&g, -1, "z").expect("sgn"),
        s4_transposition_module(&g, 1, "zt").expect("sgn ⊗ ε"),
        s4_four_cycle_module(&g, "w").expect("χ_-"),
    ]
}

/// The family (M(O_2^4, sgn ⊗ ε), M(O_4^4, χ_-)) with bases `zt1..zt6`, `w1..w6`.
pub fn s4_mixed_pair() -> YDModule {
    let g = s4();
    let a = s4_transposition_module(&g, 1, "zt").expect("sgn ⊗ ε");
    let b = s4_four_cycle_module(&g, "w").expect("χ_-");
    YDModule::direct_sum(&[&a, &b]).expect("same group")
}

/// Reflections σ_i = x y^i of D_n, i ∈ Z_n, with rotation representatives y^{a_i}, a_i = -i(n+1)/2.
pub fn dihedral_reflections(g: &FiniteGroup, n: usize) -> ConjugacyClass {
    let x = g.generator_by_name("x").expect("x");
    let y = g.generator_by_name("y").expect("y");
    let half = ((n + 1) / 2) as i64;
    let members = (0..n as i64).map(|i| g.mul(x, g.pow(y, i))).collect();
    let reps = (0..n as i64).map(|i| g.pow(y, -i * half)).collect();
    ConjugacyClass::with_numeration(g, members, Some(reps)).expect("dihedral numeration")
}

/// M(O_x, sgn) ⊕ M(O_x, sgn) over D_n with bases `v0..v{n-1}`, `w0..w{n-1}`.
pub fn dihedral_doubled(n: usize) -> Result<YDModule, YdError> {
    let g = Arc::new(FiniteGroup::dihedral(n)?);
    let class = dihedral_reflections(&g, n);
    let f = CycloField::get(2);
    let rho = Representation::character(&g, class.centralizer(), vec![(class.base(), f.from_int(-1))])?;
    let v = YDModule::from_class(g.clone(), &class, &rho)?.with_names(names("v", 0..n))?;
    let w = YDModule::from_class(g.clone(), &class, &rho)?.with_names(names("w", 0..n))?;
    YDModule::direct_sum(&[&v, &w])
}

/// Diagonal type of Cartan type A2 at q = ζ_3: q11 = q22 = ζ_3, q12 = ζ_3^2, q21 = 1.
pub fn diagonal_a2() -> Vec<YDModule> {
    diagonal_blocks(CycloField::get(3), &[vec![1, 2], vec![0, 1]]).expect("diagonal A2").1
}

/// One-dimensional module with braiding ζ_n^k.
pub fn one_dimensional(n: u32, k: i64) -> YDModule {
    diagonal_blocks(CycloField::get(n), &[vec![k]]).expect("one-dimensional").1.remove(0)
}

/// Two blocks over S3 × Z3 (on six points) whose braiding squares to the identity:
/// M(class of (12), ρ) with ρ(12) = -1, ρ(456) = 1, and the one-dimensional
/// M({(456)}, χ) with χ(12) = χ(123) = 1, χ(456) = ζ_3.
pub fn zero_cartan_pair() -> (YDModule, YDModule) {
    let g = Arc::new(FiniteGroup::from_permutations(6, vec![vec![1, 0, 2, 3, 4, 5], vec![1, 2, 0, 3, 4, 5], vec![0, 1, 2, 4, 5, 3]], None).expect("S3 x Z3"));
    let f = CycloField::get(6);
    let s = g.parse_element("(12)").expect("(12)");
    let r = g.parse_element("(123)").expect("(123)");
    let z = g.parse_element("(456)").expect("(456)");
    let class = ConjugacyClass::new(&g, s).expect("class");
    let rho = Representation::character(&g, class.centralizer(), vec![(s, f.from_int(-1)), (z, f.one())]).expect("ρ");
    let m1 = YDModule::from_class(g.clone(), &class, &rho).expect("M1").with_names(names("x", 1..=3)).expect("names");
    let cz = ConjugacyClass::new(&g, z).expect("class");
    let chi = Representation::character(&g, cz.centralizer(), vec![(s, f.one()), (r, f.one()), (z, f.root_of_unity(2))]).expect("χ");
    let m2 = YDModule::from_class(g.clone(), &cz, &chi).expect("M2").with_names(vec!["u1".into()]).expect("names");
    (m1, m2)
}

/// One cell of the S4 multiplication table: `row · rep_j = rep_k · γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableCell {
    /// 1-indexed k
    pub k: usize,
    /// `γ` as an element name: "tau1", "tau1^-1", "t1" or "t2"
    pub gamma: &'static str,
}

const fn c(k: usize, gamma: &'static str) -> TableCell {
    TableCell { k, gamma }
}

/// σ_a · h_j = h_k τ1^{±1}; rows σ1..σ6, columns h1..h6.
pub const TABLE_SIGMA_H: [[TableCell; 6]; 6] = [
    [c(4, "tau1^-1"), c(3, "tau1^-1"), c(2, "tau1"), c(1, "tau1"), c(6, "tau1"), c(5, "tau1^-1")],
    [c(5, "tau1^-1"), c(6, "tau1"), c(4, "tau1"), c(3, "tau1^-1"), c(1, "tau1"), c(2, "tau1^-1")],
    [c(2, "tau1"), c(1, "tau1"), c(5, "tau1^-1"), c(6, "tau1"), c(3, "tau1^-1"), c(4, "tau1^-1")],
    [c(6, "tau1^-1"), c(5, "tau1"), c(4, "tau1^-1"), c(3, "tau1"), c(2, "tau1^-1"), c(1, "tau1")],
    [c(2, "tau1"), c(1, "tau1^-1"), c(6, "tau1^-1"), c(5, "tau1^-1"), c(4, "tau1"), c(3, "tau1")],
    [c(3, "tau1^-1"), c(4, "tau1^-1"), c(1, "tau1"), c(2, "tau1"), c(6, "tau1^-1"), c(5, "tau1")],
];

/// σ_a · g_j = g_k t_p; rows σ1..σ6, columns g1..g6.
pub const TABLE_SIGMA_G: [[TableCell; 6]; 6] = [
    [c(1, "t1"), c(3, "t1"), c(2, "t1"), c(5, "t1"), c(4, "t1"), c(6, "t2")],
    [c(3, "t1"), c(2, "t1"), c(1, "t1"), c(4, "t2"), c(6, "t1"), c(5, "t1")],
    [c(2, "t1"), c(1, "t1"), c(3, "t1"), c(6, "t2"), c(5, "t2"), c(4, "t2")],
    [c(5, "t1"), c(2, "t2"), c(6, "t1"), c(4, "t1"), c(1, "t1"), c(3, "t1")],
    [c(4, "t1"), c(6, "t2"), c(3, "t2"), c(1, "t1"), c(5, "t1"), c(2, "t2")],
    [c(1, "t2"), c(5, "t2"), c(4, "t2"), c(3, "t2"), c(2, "t2"), c(6, "t1")],
];

/// τ_a · g_j = g_k t_q; rows τ1..τ6, columns g1..g6.
pub const TABLE_TAU_G: [[TableCell; 6]; 6] = [
    [c(2, "t2"), c(6, "t1"), c(5, "t1"), c(1, "t2"), c(3, "t2"), c(4, "t1")],
    [c(4, "t2"), c(1, "t2"), c(5, "t2"), c(6, "t1"), c(3, "t1"), c(2, "t1")],
    [c(5, "t2"), c(4, "t2"), c(1, "t2"), c(2, "t1"), c(6, "t2"), c(3, "t2")],
    [c(3, "t2"), c(4, "t1"), c(6, "t2"), c(2, "t2"), c(1, "t2"), c(5, "t2")],
    [c(6, "t1"), c(5, "t1"), c(2, "t2"), c(3, "t1"), c(4, "t2"), c(1, "t2")],
    [c(6, "t2"), c(3, "t2"), c(4, "t1"), c(5, "t2"), c(2, "t1"), c(1, "t1")],
];

/// Element named in a [`TableCell`].
pub fn table_gamma(g: &FiniteGroup, name: &str) -> Elem {
    let e = |s: &str| g.parse_element(s).expect("table element");
    match name {
        "tau1" => e("(1234)"),
        "tau1^-1" => e("(1432)"),
        "t1" => e("(12)"),
        "t2" => e("(34)"),
        other => panic!("unknown table element {other}"),
    }
}

/// A table cell that disagrees with `decompose`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMismatch {
    /// 0, 1 or 2 for σ·h, σ·g, τ·g
    pub block: usize,
    pub row: usize,
    pub column: usize,
    pub expected: TableCell,
    /// (1-indexed k, γ) from `decompose`
    pub computed: (usize, Elem),
}

/// Compares every cell of the three tables with `decompose`; returns the number of cells and the mismatches.
pub fn check_s4_table() -> (usize, Vec<TableMismatch>) {
    let g = s4();
    let trans = s4_transpositions(&g);
    let cycles = s4_four_cycles(&g);
    let mut total = 0;
    let mut bad = Vec::new();
    let blocks: [(&[[TableCell; 6]; 6], &ConjugacyClass, &ConjugacyClass); 3] =
        [(&TABLE_SIGMA_H, &trans, &cycles), (&TABLE_SIGMA_G, &trans, &trans), (&TABLE_TAU_G, &cycles, &trans)];
    for (block, (table, rows, cols)) in blocks.into_iter().enumerate() {
        for (a, row) in table.iter().enumerate() {
            let t = rows.members()[a];
            for (j, cell) in row.iter().enumerate() {
                total += 1;
                let (k, gamma) = cols.decompose(&g, t, j);
                if k + 1 != cell.k || gamma != table_gamma(&g, cell.gamma) {
                    bad.push(TableMismatch { block, row: a, column: j, expected: *cell, computed: (k + 1, gamma) });
                }
            }
        }
    }
    (total, bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_spot_checks() {
        let g = s4();
        let cyc = s4_four_cycles(&g);
        let tr = s4_transpositions(&g);
        let s1 = g.parse_element("(12)").unwrap();
        assert_eq!(cyc.decompose(&g, s1, 0), (3, g.parse_element("(1432)").unwrap()));
        let s6 = g.parse_element("(34)").unwrap();
        assert_eq!(tr.decompose(&g, s6, 0), (0, g.parse_element("(34)").unwrap()));
    }

    #[test]
    fn s4_table_agrees_except_row_sigma3_of_first_block() {
        // σ3 is an involution, so σ3·h1 = h2·γ forces σ3·h2 = h1·γ⁻¹; the
        // tabulated entries (h2 τ1, h1 τ1) and (h5 τ1⁻¹, h3 τ1⁻¹) cannot both hold.
        let g = s4();
        let (total, bad) = check_s4_table();
        assert_eq!(total, 108);
        let cells: Vec<_> = bad.iter().map(|m| (m.block, m.row, m.column, m.computed)).collect();
        assert_eq!(cells, vec![(0, 2, 0, (2, g.parse_element("(1432)").unwrap())), (0, 2, 2, (5, g.parse_element("(1234)").unwrap()))]);
    }

    #[test]
    fn dihedral_rack_indices() {
        let n = 9;
        let m = dihedral_doubled(n).unwrap();
        let g = m.group().clone();
        let cls = dihedral_reflections(&g, n);
        for j in 0..n {
            for i in 0..n {
                let k = cls.position(g.rack_action(cls.members()[j], cls.members()[i])).unwrap();
                assert_eq!(k, (2 * j + n - i) % n);
            }
        }
    }
}
