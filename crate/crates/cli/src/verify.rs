//! The regression matrix behind `verify-paper`.

use serde_json::{json, Value};

use nichols_core::groupoid::{cartan_entry, gcm_finite_type, reflect, CartanValue, FamilyM};
use nichols_core::nichols::{hilbert_series, symmetrizer_rank, EngineConfig, HilbertSeries, NicholsState};
use nichols_core::presets;
use nichols_core::yd::{BraidingOperator, YDModule};

use crate::expr::{parse_expr, Evaluator};
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyRow {
    pub id: usize,
    pub key: &'static str,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

impl VerifyRow {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "key": self.key,
            "expected": self.expected,
            "observed": self.observed,
            "status": if self.pass { "PASS" } else { "FAIL" },
        })
    }
}

type Check = Result<(String, bool), CliError>;

fn row(id: usize, key: &'static str, expected: &str, check: Check) -> VerifyRow {
    let (observed, pass) = check.unwrap_or_else(|e| (format!("error: {e}"), false));
    VerifyRow { id, key, expected: expected.to_string(), observed, pass }
}

fn total(m: &YDModule, cap: usize) -> Result<Option<usize>, CliError> {
    Ok(hilbert_series(m, cap)?.total)
}

fn show(t: Option<usize>) -> String {
    t.map_or_else(|| "unfinished".to_string(), |x| x.to_string())
}

fn derive(m: &YDModule, text: &str) -> Result<String, CliError> {
    let e = parse_expr(text)?;
    let ev = Evaluator::new(m, e.degrees()?.1)?;
    ev.format(&ev.eval(&e)?)
}

fn derivations(m: &YDModule, cases: &[(&str, &str)]) -> Check {
    let mut pass = true;
    let mut seen = Vec::new();
    for (text, want) in cases {
        let got = derive(m, text)?;
        pass &= got == *want;
        seen.push(format!("{text} = {got}"));
    }
    Ok((seen.join("; "), pass))
}

fn fk3_dimension(fk3: Option<YDModule>) -> Check {
    let t = total(&fk3.unwrap_or_else(presets::fk3), 5)?;
    Ok((format!("total {}", show(t)), t == Some(12)))
}

fn s4_dimensions() -> Check {
    let totals = presets::s4_modules().iter().map(|m| total(m, 32)).collect::<Result<Vec<_>, _>>()?;
    let shown: Vec<String> = totals.iter().map(|&t| show(t)).collect();
    Ok((format!("totals {}", shown.join(", ")), totals.iter().all(|&t| t == Some(576))))
}

fn s3_obstruction() -> Check {
    let w = presets::fk3_doubled();
    let (text, pass) = derivations(&w, &[("(d x3 (d y1 (ad x2 (ad x1 y2))))", "-x2")])?;
    let a = cartan_entry(&FamilyM::from_module(&w)?, 0, 1, 8)?;
    Ok((format!("{text}; a_12 = {a}"), pass && a.upper_bound() <= -2))
}

fn dihedral_obstruction() -> Check {
    derivations(&presets::dihedral_doubled(9).map_err(|e| CliError::Internal(e.to_string()))?, &[("(d v6 (d w4 (ad v2 (ad v1 w2))))", "-v5")])
}

fn s4_mixed_obstruction() -> Check {
    derivations(&presets::s4_mixed_pair(), &[("(d zt1 (d w1 (ad zt2 (ad zt1 w1))))", "zt2"), ("(d w5 (d zt2 (ad w2 (ad w1 zt1))))", "w2")])
}

fn table() -> Check {
    let (cells, bad) = presets::check_s4_table();
    let mut text = format!("{}/{cells} cells match", cells - bad.len());
    let g = presets::s4();
    for b in &bad {
        let (k, gamma) = b.computed;
        text.push_str(&format!(
            "; block {} row {} column {}: table ({}, {}), computed ({k}, {})",
            b.block + 1,
            b.row + 1,
            b.column + 1,
            b.expected.k,
            b.expected.gamma,
            g.format_element(gamma)
        ));
    }
    Ok((text, bad.is_empty() && cells == 108))
}

fn direct_sum(blocks: &[YDModule]) -> YDModule {
    let parts: Vec<&YDModule> = blocks.iter().collect();
    YDModule::direct_sum(&parts).expect("one group")
}

fn corpus() -> Vec<(&'static str, YDModule)> {
    let (z1, z2) = presets::zero_cartan_pair();
    vec![
        ("fk3", presets::fk3()),
        ("fk3 doubled", presets::fk3_doubled()),
        ("diagonal A2", direct_sum(&presets::diagonal_a2())),
        ("q = z5", presets::one_dimensional(5, 1)),
        ("four-cycles chi_-", presets::s4_modules()[2].clone()),
        ("zero-Cartan pair", direct_sum(&[z1, z2])),
    ]
}

fn dims_to(m: &YDModule, n: usize) -> Result<Vec<usize>, CliError> {
    let mut s = NicholsState::new(m, EngineConfig::default())?;
    s.compute_to(n)?;
    (0..=n).map(|k| if k <= s.top_degree() { Ok(s.dim(k)?) } else { Ok(0) }).collect()
}

fn oracle_equivalence() -> Check {
    let mut bad = Vec::new();
    let corpus = corpus();
    for (name, m) in &corpus {
        let dims = dims_to(m, 4)?;
        for n in 1..=4 {
            if symmetrizer_rank(m, n, false)? != dims[n] {
                bad.push(format!("{name} degree {n}"));
            }
        }
    }
    let text = if bad.is_empty() { format!("{} modules agree through degree 4", corpus.len()) } else { format!("disagree: {}", bad.join(", ")) };
    Ok((text, bad.is_empty()))
}

fn duality() -> Check {
    let mut bad = Vec::new();
    let corpus = corpus();
    for (name, m) in &corpus {
        let d = dims_to(m, 5)?;
        if dims_to(&m.dual(), 5)? != d {
            bad.push(format!("{name} dual"));
        }
        if dims_to(&m.inverse_braided(), 5)? != d {
            bad.push(format!("{name} inverse braiding"));
        }
    }
    let text = if bad.is_empty() { format!("{} modules agree through degree 5", corpus.len()) } else { format!("disagree: {}", bad.join(", ")) };
    Ok((text, bad.is_empty()))
}

fn reflection() -> Check {
    let f = FamilyM::new(presets::diagonal_a2())?;
    let base = total(&f.module(), 16)?;
    let mut pass = base == Some(27);
    let mut text = format!("total {}", show(base));
    for i in 0..2 {
        let r = reflect(&f, i, 8)?;
        let t = total(&r.module(), 16)?;
        let back = reflect(&r, i, 8)?;
        let involution = back.fingerprints() == f.fingerprints();
        pass &= t == base && involution;
        text.push_str(&format!("; R_{} total {}, R_{}^2 = id {involution}", i + 1, show(t), i + 1));
    }
    Ok((text, pass))
}

fn finite_type() -> Check {
    let mut disagreements = 0;
    for x in 0..=4i64 {
        for y in 0..=4i64 {
            if (x == 0) != (y == 0) {
                continue;
            }
            let v = gcm_finite_type(&[vec![2, -x], vec![-y, 2]])?;
            let rule = x == 0 || x * y <= 3;
            if v.finite != rule {
                disagreements += 1;
            }
        }
    }
    let affine = gcm_finite_type(&[vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]])?;
    Ok((format!("{disagreements} disagreements on 2x2 inputs; affine triangle finite {}", affine.finite), disagreements == 0 && !affine.finite))
}

fn zero_cartan() -> Check {
    let (m1, m2) = presets::zero_cartan_pair();
    let w = direct_sum(&[m1.clone(), m2.clone()]);
    let left: Vec<usize> = (0..m1.dim()).collect();
    let right: Vec<usize> = (m1.dim()..w.dim()).collect();
    let c = BraidingOperator::new(&w);
    let symmetric = c.squares_to_identity_on(&left, &right);
    let f = FamilyM::from_module(&w)?;
    let a12 = cartan_entry(&f, 0, 1, 8)?;
    let a21 = cartan_entry(&f, 1, 0, 8)?;
    let h = hilbert_series(&w, 16)?;
    let (h1, h2) = (hilbert_series(&m1, 16)?, hilbert_series(&m2, 16)?);
    let product = HilbertSeries::product_dims(&h1.dims, &h2.dims, h1.dims.len() + h2.dims.len() - 1);
    let factor = h.finished && h.dims == product;
    let pass = symmetric && factor && a12 == CartanValue::Exact(0) && a21 == CartanValue::Exact(0);
    Ok((format!("c^2 = id on M1 (x) M2 {symmetric}; a_12 = {a12}, a_21 = {a21}; series factor {factor} (total {})", show(h.total)), pass))
}

/// Runs every regression; `fk3` replaces the bundled M(O_2^3, sgn) in the first row.
pub fn verify_paper(fk3: Option<YDModule>) -> Vec<VerifyRow> {
    vec![
        row(1, "fk3_dimension", "total 12", fk3_dimension(fk3)),
        row(2, "s4_dimensions", "totals 576, 576, 576", s4_dimensions()),
        row(3, "s3_obstruction", "-x2 and a_12 <= -2", s3_obstruction()),
        row(4, "dihedral_obstruction", "-v5", dihedral_obstruction()),
        row(5, "s4_mixed_obstruction", "zt2 and w2", s4_mixed_obstruction()),
        row(6, "s4_multiplication_table", "108/108 cells match", table()),
        row(7, "symmetrizer_oracle", "rank S_n = dim B^n, n <= 4", oracle_equivalence()),
        row(8, "duality_and_inverse", "equal graded dimensions", duality()),
        row(9, "reflection_invariance", "total 27, R_i^2 = id", reflection()),
        row(10, "finite_type_rule", "2x2 rule, affine triangle infinite", finite_type()),
        row(11, "zero_cartan_factorization", "c^2 = id, a = 0, series factor", zero_cartan()),
    ]
}
