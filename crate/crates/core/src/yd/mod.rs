//! Yetter-Drinfeld modules over group algebras.

mod braiding;
mod fingerprint;
mod module;
mod rep;

use std::sync::Arc;

pub use braiding::BraidingOperator;
pub use fingerprint::IsoClass;
pub use module::{BasisLabel, YDModule};
pub use rep::Representation;

use crate::group::{FiniteGroup, GroupError};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::scalar::CycloField;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum YdError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("representation: {0}")]
    Representation(String),
    #[error("action is not a group homomorphism (fails at {0})")]
    NotHomomorphism(String),
    #[error("Yetter-Drinfeld compatibility fails: {0}")]
    YdAxiom(String),
    #[error("module is reducible: {0}")]
    Reducible(String),
    #[error("modules live over different groups or fields")]
    GroupMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Diagonal braiding `q_ij = ζ_N^{e_ij}` realized over Z_N^θ: block `j` is
/// spanned by `v_j` of degree the `j`-th unit vector, with `g_i · v_j = q_ij v_j`.
pub fn diagonal_blocks(field: &'static CycloField, exponents: &[Vec<i64>]) -> Result<(Arc<FiniteGroup>, Vec<YDModule>), YdError> {
    let theta = exponents.len();
    if exponents.iter().any(|r| r.len() != theta) {
        return Err(YdError::DimensionMismatch("q-matrix must be square".into()));
    }
    let n = field.conductor();
    let group = Arc::new(FiniteGroup::abelian(vec![n; theta])?);
    let mut blocks = Vec::with_capacity(theta);
    for j in 0..theta {
        let mut unit = vec![0u32; theta];
        unit[j] = 1 % n;
        let degree = group.element_from_form(&unit).expect("unit vector");
        let action = (0..theta).map(|i| SparseMatrix::from_columns(1, vec![SparseVec::single(0, field.root_of_unity(exponents[i][j]))], field)).collect();
        let m = YDModule::from_generator_action(group.clone(), field, vec![degree], action, vec![BasisLabel { block: 0, class_index: 0, carrier_index: 0 }])?;
        blocks.push(m.with_names(vec![format!("v{}", j + 1)])?);
    }
    Ok((group, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ConjugacyClass;
    use crate::scalar::Cyclo;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::from_permutations(3, vec![vec![1, 0, 2], vec![1, 2, 0]], None).unwrap())
    }

    fn fk3(g: &Arc<FiniteGroup>, pinned: bool) -> YDModule {
        let s = g.parse_element("(12)").unwrap();
        let class = if pinned {
            let members = ["(12)", "(23)", "(13)"].map(|x| g.parse_element(x).unwrap()).to_vec();
            let reps = ["e", "(123)", "(132)"].map(|x| g.parse_element(x).unwrap()).to_vec();
            ConjugacyClass::with_numeration(g, members, Some(reps)).unwrap()
        } else {
            ConjugacyClass::new(g, s).unwrap()
        };
        let f = CycloField::get(2);
        let rho = Representation::character(g, class.centralizer(), vec![(s, f.from_int(-1))]).unwrap();
        YDModule::from_class(g.clone(), &class, &rho).unwrap()
    }

    fn s4() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::from_permutations(4, vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]], None).unwrap())
    }

    fn s4_transpositions(g: &Arc<FiniteGroup>, second: i64) -> YDModule {
        let s = g.parse_element("(12)").unwrap();
        let t = g.parse_element("(34)").unwrap();
        let class = ConjugacyClass::new(g, s).unwrap();
        let f = CycloField::get(2);
        let rho = Representation::character(g, class.centralizer(), vec![(s, f.from_int(-1)), (t, f.from_int(second))]).unwrap();
        YDModule::from_class(g.clone(), &class, &rho).unwrap()
    }

    #[test]
    fn fk3_braiding_is_minus_rack_swap() {
        let g = s3();
        let m = fk3(&g, true);
        assert_eq!(m.dim(), 3);
        let c = BraidingOperator::new(&m);
        let f = m.field();
        let cls = ConjugacyClass::with_numeration(&g, m.degrees().to_vec(), None).unwrap();
        for j in 0..3 {
            for i in 0..3 {
                let k = cls.position(g.rack_action(m.degrees()[j], m.degrees()[i])).unwrap();
                let image = c.matrix().apply(&SparseVec::unit(j * 3 + i, f));
                assert_eq!(image, SparseVec::single(k * 3 + j, f.from_int(-1)), "c(x{}⊗x{})", j + 1, i + 1);
            }
        }
        assert!(c.satisfies_braid_equation());
        assert!(c.is_invertible_pair());
    }

    #[test]
    fn trivial_class_gives_identity_braiding() {
        let g = s3();
        let class = ConjugacyClass::new(&g, g.identity()).unwrap();
        let rho = Representation::trivial(&g, class.centralizer(), CycloField::get(1)).unwrap();
        let m = YDModule::from_class(g, &class, &rho).unwrap();
        assert_eq!(m.dim(), 1);
        assert!(BraidingOperator::new(&m).matrix().is_identity());
    }

    #[test]
    fn fingerprints_ignore_numeration_and_separate_characters() {
        let g = s3();
        assert_eq!(fk3(&g, true).fingerprint().unwrap(), fk3(&g, false).fingerprint().unwrap());
        let g4 = s4();
        let a = s4_transpositions(&g4, -1).fingerprint().unwrap();
        let b = s4_transpositions(&g4, 1).fingerprint().unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn dual_and_double_dual() {
        let g = s4();
        let m = s4_transpositions(&g, 1);
        let d = m.dual();
        d.check_yd().unwrap();
        assert_eq!(d.dual().fingerprint().unwrap(), m.fingerprint().unwrap());
        assert!(BraidingOperator::new(&d).satisfies_braid_equation());
        // one-dimensional case: (g, χ) ↦ (g⁻¹, χ⁻¹)
        let f = CycloField::get(5);
        let (grp, blocks) = diagonal_blocks(f, &[vec![1]]).unwrap();
        let v = &blocks[0];
        let dv = v.dual();
        assert_eq!(dv.degrees()[0], grp.inverse(v.degrees()[0]));
        let gen = grp.generators()[0];
        assert_eq!(dv.action(gen).column(0).get(0).unwrap(), &f.root_of_unity(-1));
    }

    #[test]
    fn direct_sum_blocks_and_zero() {
        let g = s3();
        let m = fk3(&g, true);
        let z = YDModule::zero(g.clone(), m.field());
        let s = YDModule::direct_sum(&[&m, &z]).unwrap();
        assert_eq!((s.dim(), s.theta()), (3, 1));
        let two = YDModule::direct_sum(&[&m, &m]).unwrap();
        assert_eq!(two.theta(), 2);
        two.check_yd().unwrap();
        let c = BraidingOperator::new(&two);
        assert!(c.satisfies_braid_equation());
        // c(x_j ⊗ y_i) = - y_{j▷i} ⊗ x_j
        let f = m.field();
        let cls = ConjugacyClass::with_numeration(&g, m.degrees().to_vec(), None).unwrap();
        for j in 0..3 {
            for i in 0..3 {
                let k = cls.position(g.rack_action(m.degrees()[j], m.degrees()[i])).unwrap();
                let image = c.matrix().apply(&SparseVec::unit(j * 6 + 3 + i, f));
                assert_eq!(image, SparseVec::single((3 + k) * 6 + j, f.from_int(-1)));
            }
        }
        assert_eq!(two.fingerprints().unwrap().len(), 2);
        assert!(two.fingerprint().is_err());
    }

    #[test]
    fn diagonal_braiding_matches_q_matrix() {
        let f = CycloField::get(3);
        let e = vec![vec![1, 2], vec![0, 1]];
        let (_, blocks) = diagonal_blocks(f, &e).unwrap();
        let w = YDModule::direct_sum(&[&blocks[0], &blocks[1]]).unwrap();
        let c = BraidingOperator::new(&w);
        for i in 0..2 {
            for j in 0..2 {
                let image = c.matrix().apply(&SparseVec::unit(i * 2 + j, f));
                assert_eq!(image, SparseVec::single(j * 2 + i, f.root_of_unity(e[i][j])));
            }
        }
    }

    #[test]
    fn braided_duality_adjunction() {
        // ⟨c*(f_a ⊗ f_b), v_x ⊗ v_y⟩ = ⟨f_a ⊗ f_b, c(v_x ⊗ v_y)⟩ with ⟨f⊗g, v⊗w⟩ = ⟨f,w⟩⟨g,v⟩
        let g = s4();
        for m in [s4_transpositions(&g, -1), fk3(&s3(), true)] {
            let d = m.dim();
            let c = BraidingOperator::new(&m);
            let cd = BraidingOperator::new(&m.dual());
            let zero = m.field().zero();
            let entry = |op: &BraidingOperator, row: usize, col: usize| -> Cyclo { op.matrix().column(col).get(row).cloned().unwrap_or_else(|| zero.clone()) };
            for a in 0..d {
                for b in 0..d {
                    for x in 0..d {
                        for y in 0..d {
                            assert_eq!(entry(&cd, y * d + x, a * d + b), entry(&c, b * d + a, x * d + y));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reducible_module_is_reported() {
        let g = s3();
        let class = ConjugacyClass::new(&g, g.parse_element("(12)").unwrap()).unwrap();
        let f = CycloField::get(1);
        let s = g.parse_element("(12)").unwrap();
        let rho = Representation::new(&g, class.centralizer(), f, vec![(s, crate::linalg::Matrix::identity(2, f))]).unwrap();
        let m = YDModule::from_class(g, &class, &rho).unwrap();
        assert!(matches!(m.fingerprint(), Err(YdError::Reducible(_))));
    }
}
