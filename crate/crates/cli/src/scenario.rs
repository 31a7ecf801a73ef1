//! Scenario files: schema, validation and construction of the family they describe.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use nichols_core::group::{ConjugacyClass, Elem, FiniteGroup};
use nichols_core::linalg::Matrix;
use nichols_core::scalar::{Cyclo, CycloField};
use nichols_core::yd::{diagonal_blocks, Representation, YDModule};

use crate::CliError;

pub const SPEC_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Hilbert,
    Cartan,
    Reflect,
    Groupoid,
    Roots,
    Derive,
    VerifyPaper,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Hilbert => "hilbert",
            Task::Cartan => "cartan",
            Task::Reflect => "reflect",
            Task::Groupoid => "groupoid",
            Task::Roots => "roots",
            Task::Derive => "derive",
            Task::VerifyPaper => "verify-paper",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    /// one-line images, 1-indexed
    Permutation { degree: usize, generators: Vec<Vec<u32>>, names: Option<Vec<String>> },
    Abelian { orders: Vec<u32> },
    Dihedral { n: usize },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumerationSpec {
    pub members: Vec<String>,
    pub reps: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RhoValue {
    Scalar(String),
    Matrix(Vec<Vec<String>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoSpec {
    pub dim: usize,
    /// images of generators of the centralizer of the class representative
    #[serde(default)]
    pub values: BTreeMap<String, RhoValue>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalSpec {
    pub q: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub id: String,
    pub class_rep: Option<String>,
    pub numeration: Option<NumerationSpec>,
    pub rho: Option<RhoSpec>,
    pub diagonal: Option<DiagonalSpec>,
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub spec_version: String,
    pub name: Option<String>,
    pub description: Option<String>,
    pub task: Option<Task>,
    pub conductor: Option<u32>,
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub modules: Vec<ModuleSpec>,
    /// lists of module ids; each target is the direct sum of its modules
    pub targets: Option<Vec<Vec<String>>>,
    pub cap: Option<usize>,
    pub node_limit: Option<usize>,
    pub expression: Option<String>,
    /// 1-indexed block for `reflect`
    pub reflect_at: Option<usize>,
    #[serde(skip)]
    pub sha256: String,
}

/// Numeration overrides keyed by module id.
pub type NumerationOverrides = BTreeMap<String, NumerationSpec>;

fn schema_error(e: serde_path_to_error::Error<serde_json::Error>) -> CliError {
    let inner = e.inner();
    let path = e.path().to_string();
    let at = if path == "." { String::new() } else { format!(" at `{path}`") };
    CliError::Schema(format!("line {} column {}{at}: {inner}", inner.line(), inner.column()))
}

pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let mut s: Scenario = serde_path_to_error::deserialize(de).map_err(schema_error)?;
    if s.spec_version != SPEC_VERSION {
        return Err(CliError::Schema(format!("spec_version: expected \"{SPEC_VERSION}\", found \"{}\"", s.spec_version)));
    }
    s.sha256 = format!("{:x}", Sha256::digest(text.as_bytes()));
    Ok(s)
}

pub fn parse_numeration(text: &str) -> Result<NumerationOverrides, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(schema_error)
}

/// A scenario's modules, built over one group and field.
pub struct Built {
    pub group: Arc<FiniteGroup>,
    pub field: &'static CycloField,
    /// blocks of each module id, in declaration order
    pub modules: Vec<(String, Vec<YDModule>)>,
}

impl Built {
    pub fn blocks(&self, ids: &[String], at: &str) -> Result<Vec<YDModule>, CliError> {
        let mut out = Vec::new();
        for (k, id) in ids.iter().enumerate() {
            let (_, blocks) = self
                .modules
                .iter()
                .find(|(m, _)| m == id)
                .ok_or_else(|| CliError::Schema(format!("{at}[{k}]: no module with id `{id}`")))?;
            out.extend(blocks.iter().cloned());
        }
        if out.is_empty() {
            return Err(CliError::Schema(format!("{at}: empty target")));
        }
        Ok(out)
    }
}

impl Scenario {
    /// Targets as lists of module ids; by default one target containing every module.
    pub fn targets(&self) -> Vec<Vec<String>> {
        self.targets.clone().unwrap_or_else(|| vec![self.modules.iter().map(|m| m.id.clone()).collect()])
    }

    pub fn build(&self, overrides: Option<&NumerationOverrides>) -> Result<Built, CliError> {
        if self.modules.is_empty() {
            return Err(CliError::Schema("modules: at least one module is required".into()));
        }
        let mut ids = std::collections::BTreeSet::new();
        for (k, m) in self.modules.iter().enumerate() {
            if !ids.insert(m.id.as_str()) {
                return Err(CliError::Schema(format!("modules[{k}].id: duplicate id `{}`", m.id)));
            }
        }
        if let Some(o) = overrides {
            if let Some(id) = o.keys().find(|id| !ids.contains(id.as_str())) {
                return Err(CliError::Schema(format!("numeration file: no module with id `{id}`")));
            }
        }
        if let Some((k, m)) = self.modules.iter().enumerate().find(|(_, m)| m.diagonal.is_some()) {
            if self.modules.len() != 1 {
                return Err(CliError::Schema(format!("modules[{k}].diagonal: a diagonal module must be the only module")));
            }
            if self.group.is_some() {
                return Err(CliError::Schema("group: omit the group for diagonal braidings (it is Z_N^θ)".into()));
            }
            return self.build_diagonal(m);
        }
        let spec = self.group.as_ref().ok_or_else(|| CliError::Schema("group: missing".into()))?;
        let group = Arc::new(build_group(spec)?);
        let conductor = self.conductor.unwrap_or_else(|| group.exponent());
        let field = checked_field(conductor)?;
        let mut modules = Vec::new();
        for (k, m) in self.modules.iter().enumerate() {
            let at = format!("modules[{k}]");
            let numeration = overrides.and_then(|o| o.get(&m.id)).or(m.numeration.as_ref());
            let module = build_class_module(&group, field, m, numeration, &at)?;
            modules.push((m.id.clone(), vec![module]));
        }
        Ok(Built { group, field, modules })
    }

    fn build_diagonal(&self, m: &ModuleSpec) -> Result<Built, CliError> {
        let at = "modules[0].diagonal";
        if m.class_rep.is_some() || m.rho.is_some() || m.numeration.is_some() {
            return Err(CliError::Schema("modules[0]: a diagonal module takes no class_rep, rho or numeration".into()));
        }
        let conductor = self.conductor.ok_or_else(|| CliError::Schema("conductor: required for diagonal braidings".into()))?;
        let field = checked_field(conductor)?;
        let q = &m.diagonal.as_ref().expect("diagonal").q;
        let mut exponents = Vec::with_capacity(q.len());
        for (i, row) in q.iter().enumerate() {
            if row.len() != q.len() {
                return Err(CliError::Schema(format!("{at}.q[{i}]: expected {} entries", q.len())));
            }
            let mut r = Vec::with_capacity(row.len());
            for (j, s) in row.iter().enumerate() {
                let c = parse_scalar(field, s, &format!("{at}.q[{i}][{j}]"))?;
                let k = c.root_exponent().ok_or_else(|| CliError::Schema(format!("{at}.q[{i}][{j}]: `{s}` is not a {conductor}-th root of unity")))?;
                r.push(i64::from(k));
            }
            exponents.push(r);
        }
        let (group, mut blocks) = diagonal_blocks(field, &exponents).map_err(|e| CliError::Schema(format!("{at}: {e}")))?;
        if let Some(names) = &m.names {
            if names.len() != blocks.len() {
                return Err(CliError::Schema(format!("modules[0].names: expected {} names", blocks.len())));
            }
            blocks = blocks
                .into_iter()
                .zip(names)
                .map(|(b, n)| b.with_names(vec![n.clone()]))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Schema(format!("modules[0].names: {e}")))?;
        }
        Ok(Built { group, field, modules: vec![(m.id.clone(), blocks)] })
    }
}

fn checked_field(conductor: u32) -> Result<&'static CycloField, CliError> {
    if conductor == 0 {
        return Err(CliError::Schema("conductor: must be positive".into()));
    }
    Ok(CycloField::get(conductor))
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, CliError> {
    let g = match spec {
        GroupSpec::Permutation { degree, generators, names } => {
            let mut gens = Vec::with_capacity(generators.len());
            for (k, img) in generators.iter().enumerate() {
                if img.len() != *degree || img.iter().any(|&p| p == 0 || p as usize > *degree) {
                    return Err(CliError::Schema(format!("group.generators[{k}]: expected a 1-indexed image list of length {degree}")));
                }
                gens.push(img.iter().map(|&p| p - 1).collect());
            }
            FiniteGroup::from_permutations(*degree, gens, names.clone())
        }
        GroupSpec::Abelian { orders } => FiniteGroup::abelian(orders.clone()),
        GroupSpec::Dihedral { n } => FiniteGroup::dihedral(*n),
    };
    g.map_err(|e| CliError::Schema(format!("group: {e}")))
}

fn parse_elem(g: &FiniteGroup, s: &str, at: &str) -> Result<Elem, CliError> {
    g.parse_element(s).map_err(|e| CliError::Schema(format!("{at}: {e}")))
}

pub fn parse_scalar(field: &'static CycloField, s: &str, at: &str) -> Result<Cyclo, CliError> {
    Cyclo::parse(field, s).map_err(|e| CliError::Schema(format!("{at}: `{s}`: {e}")))
}

fn build_class_module(
    g: &Arc<FiniteGroup>,
    field: &'static CycloField,
    m: &ModuleSpec,
    numeration: Option<&NumerationSpec>,
    at: &str,
) -> Result<YDModule, CliError> {
    if m.diagonal.is_some() {
        return Err(CliError::Schema(format!("{at}.diagonal: cannot be combined with other modules")));
    }
    let class = match numeration {
        Some(n) => {
            let members = n.members.iter().enumerate().map(|(i, s)| parse_elem(g, s, &format!("{at}.numeration.members[{i}]"))).collect::<Result<Vec<_>, _>>()?;
            let reps = match &n.reps {
                Some(r) => Some(r.iter().enumerate().map(|(i, s)| parse_elem(g, s, &format!("{at}.numeration.reps[{i}]"))).collect::<Result<Vec<_>, _>>()?),
                None => None,
            };
            if let Some(rep) = &m.class_rep {
                if members.first() != Some(&parse_elem(g, rep, &format!("{at}.class_rep"))?) {
                    return Err(CliError::Schema(format!("{at}.class_rep: must equal the first numeration member")));
                }
            }
            ConjugacyClass::with_numeration(g, members, reps).map_err(|e| CliError::Schema(format!("{at}.numeration: {e}")))?
        }
        None => {
            let rep = m.class_rep.as_ref().ok_or_else(|| CliError::Schema(format!("{at}: needs class_rep, numeration or diagonal")))?;
            ConjugacyClass::new(g, parse_elem(g, rep, &format!("{at}.class_rep"))?).map_err(|e| CliError::Schema(format!("{at}.class_rep: {e}")))?
        }
    };
    let rho = build_rho(g, field, &class, m.rho.as_ref(), &format!("{at}.rho"))?;
    let module = YDModule::from_class(g.clone(), &class, &rho).map_err(|e| CliError::Schema(format!("{at}: {e}")))?;
    match &m.names {
        Some(names) => module.with_names(names.clone()).map_err(|e| CliError::Schema(format!("{at}.names: {e}"))),
        None => Ok(module),
    }
}

fn build_rho(g: &FiniteGroup, field: &'static CycloField, class: &ConjugacyClass, spec: Option<&RhoSpec>, at: &str) -> Result<Representation, CliError> {
    let centralizer = class.centralizer();
    let rep_err = |e: nichols_core::yd::YdError| CliError::Schema(format!("{at}: {e}"));
    let Some(spec) = spec else {
        return Representation::trivial(g, centralizer, field).map_err(rep_err);
    };
    if spec.values.is_empty() {
        if spec.dim != 1 {
            return Err(CliError::Schema(format!("{at}.values: required when dim is {}", spec.dim)));
        }
        return Representation::trivial(g, centralizer, field).map_err(rep_err);
    }
    let mut gens = Vec::with_capacity(spec.values.len());
    for (key, value) in &spec.values {
        let vat = format!("{at}.values[\"{key}\"]");
        let e = parse_elem(g, key, &vat)?;
        if centralizer.binary_search(&e).is_err() {
            return Err(CliError::Schema(format!("{vat}: not in the centralizer of the class representative")));
        }
        let m = match value {
            RhoValue::Scalar(s) if spec.dim == 1 => Matrix::scalar(parse_scalar(field, s, &vat)?),
            RhoValue::Scalar(_) => return Err(CliError::Schema(format!("{vat}: expected a {0}x{0} matrix", spec.dim))),
            RhoValue::Matrix(rows) => {
                if rows.len() != spec.dim || rows.iter().any(|r| r.len() != spec.dim) {
                    return Err(CliError::Schema(format!("{vat}: expected a {0}x{0} matrix", spec.dim)));
                }
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| r.iter().enumerate().map(|(j, s)| parse_scalar(field, s, &format!("{vat}[{i}][{j}]"))).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Matrix::from_rows(field, rows).map_err(|e| CliError::Schema(format!("{vat}: {e}")))?
            }
        };
        gens.push((e, m));
    }
    Representation::new(g, centralizer, field, gens).map_err(rep_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FK3: &str = r#"{
        "spec_version": "1",
        "conductor": 2,
        "group": {"type": "permutation", "degree": 3, "generators": [[2,1,3],[2,3,1]]},
        "modules": [{"id": "x", "class_rep": "(12)", "rho": {"dim": 1, "values": {"(12)": "-1"}}}]
    }"#;

    #[test]
    fn builds_fk3() {
        let s = parse_scenario(FK3).unwrap();
        let b = s.build(None).unwrap();
        assert_eq!(b.modules[0].1[0].dim(), 3);
        assert_eq!(s.sha256.len(), 64);
    }

    #[test]
    fn unknown_field_is_located() {
        let text = FK3.replace("\"conductor\"", "\"conductr\"");
        let CliError::Schema(msg) = parse_scenario(&text).unwrap_err() else { panic!() };
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("conductr"), "{msg}");
    }

    #[test]
    fn bad_references_are_located() {
        let text = FK3.replace("\"(12)\": \"-1\"", "\"(123)\": \"-1\"");
        let s = parse_scenario(&text).unwrap();
        let CliError::Schema(msg) = s.build(None).err().unwrap() else { panic!() };
        assert!(msg.starts_with("modules[0].rho.values[\"(123)\"]"), "{msg}");
        let text = FK3.replace("\"class_rep\": \"(12)\"", "\"class_rep\": \"(14)\"");
        let CliError::Schema(msg) = parse_scenario(&text).unwrap().build(None).err().unwrap() else { panic!() };
        assert!(msg.starts_with("modules[0].class_rep"), "{msg}");
    }

    #[test]
    fn wrong_version_is_rejected() {
        assert!(parse_scenario(&FK3.replace("\"spec_version\": \"1\"", "\"spec_version\": \"0\"")).is_err());
    }

    #[test]
    fn diagonal_needs_no_group() {
        let text = r#"{"spec_version": "1", "conductor": 3, "modules": [{"id": "a2", "diagonal": {"q": [["z3^1", "z3^2"], ["1", "z3^1"]]}}]}"#;
        let b = parse_scenario(text).unwrap().build(None).unwrap();
        assert_eq!(b.modules[0].1.len(), 2);
        let bad = text.replace("\"z3^2\"", "\"2\"");
        assert!(parse_scenario(&bad).unwrap().build(None).is_err());
    }
}
