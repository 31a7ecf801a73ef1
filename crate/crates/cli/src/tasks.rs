//! Task execution and report assembly.

use serde_json::{json, Value};

use nichols_core::groupoid::{
    explore_groupoid, gcm_finite_type, is_standard, real_roots, s_matrix, CartanCache, CartanData, CartanValue, FamilyM, GroupoidGraph, StandardVerdict,
    DEFAULT_CAP, DEFAULT_NODE_LIMIT,
};
use nichols_core::nichols::hilbert_series;
use nichols_core::yd::YDModule;

use crate::expr::{parse_expr, Evaluator};
use crate::scenario::{Built, NumerationOverrides, Scenario, Task, SPEC_VERSION};
use crate::{verify, CliError};

pub const HILBERT_DEFAULT_CAP: usize = 64;

/// Command-line values that take precedence over the scenario.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub cap: Option<usize>,
    pub node_limit: Option<usize>,
    pub numeration: Option<NumerationOverrides>,
    pub expression: Option<String>,
    pub reflect_at: Option<usize>,
}

/// A finished run: the JSON report plus optional tables.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub csv: Option<String>,
    pub dot: Option<String>,
    /// human-readable digest
    pub summary: String,
    pub refusal: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.refusal.is_some() {
            2
        } else {
            0
        }
    }

    pub fn report_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }
}

struct Partial {
    result: Value,
    csv: Option<String>,
    dot: Option<String>,
    summary: String,
    refusal: Option<String>,
}

impl Partial {
    fn ok(result: Value, summary: String) -> Partial {
        Partial { result, csv: None, dot: None, summary, refusal: None }
    }
}

fn envelope(task: Task, scenario: Option<&Scenario>, p: Partial) -> Outcome {
    let scen = scenario.map(|s| json!({ "name": s.name, "sha256": s.sha256 }));
    let report = json!({
        "spec_version": SPEC_VERSION,
        "task": task.name(),
        "scenario": scen,
        "status": if p.refusal.is_some() { "refused" } else { "ok" },
        "refusal": p.refusal,
        "result": p.result,
    });
    let summary = match &p.refusal {
        Some(r) => format!("{}refused: {r}\n", p.summary),
        None => p.summary,
    };
    Outcome { report, csv: p.csv, dot: p.dot, summary, refusal: p.refusal }
}

/// Runs `task` on a scenario (optional only for `verify-paper`).
pub fn run(scenario: Option<&Scenario>, task: Task, opts: &RunOptions) -> Result<Outcome, CliError> {
    if let Some(t) = scenario.and_then(|s| s.task) {
        if t != task {
            log::info!("scenario declares task `{}`, running `{}`", t.name(), task.name());
        }
    }
    let started = std::time::Instant::now();
    let partial = match (task, scenario) {
        (Task::VerifyPaper, s) => run_verify(s, opts),
        (_, None) => Err(CliError::Schema(format!("task `{}` needs a scenario file", task.name()))),
        (_, Some(s)) => run_task(s, task, opts),
    };
    log::info!("{} finished in {:.3} s", task.name(), started.elapsed().as_secs_f64());
    match partial {
        Ok(p) => Ok(envelope(task, scenario, p)),
        Err(CliError::Refusal(r)) => Ok(envelope(task, scenario, Partial { result: Value::Null, csv: None, dot: None, summary: String::new(), refusal: Some(r) })),
        Err(e) => Err(e),
    }
}

fn run_task(s: &Scenario, task: Task, opts: &RunOptions) -> Result<Partial, CliError> {
    let built = s.build(opts.numeration.as_ref())?;
    let targets = s.targets();
    if task == Task::Hilbert {
        return hilbert(&built, &targets, opts.cap.or(s.cap).unwrap_or(HILBERT_DEFAULT_CAP));
    }
    if targets.len() != 1 {
        return Err(CliError::Schema(format!("targets: task `{}` takes exactly one target, found {}", task.name(), targets.len())));
    }
    let blocks = built.blocks(&targets[0], "targets[0]")?;
    let cap = opts.cap.or(s.cap).unwrap_or(DEFAULT_CAP);
    if cap == 0 {
        return Err(CliError::Schema("cap: must be at least 1".into()));
    }
    let node_limit = opts.node_limit.or(s.node_limit).unwrap_or(DEFAULT_NODE_LIMIT);
    match task {
        Task::Derive => {
            let text = opts.expression.as_ref().or(s.expression.as_ref()).ok_or_else(|| CliError::Schema("expression: required for `derive`".into()))?;
            derive(&blocks, text)
        }
        Task::Cartan => cartan(&family(blocks)?, cap),
        Task::Reflect => {
            let at = opts.reflect_at.or(s.reflect_at).ok_or_else(|| CliError::Schema("reflect_at: required for `reflect`".into()))?;
            if at == 0 || at > blocks.len() {
                return Err(CliError::Schema(format!("reflect_at: must lie in 1..={}", blocks.len())));
            }
            reflect(&family(blocks)?, at - 1, cap)
        }
        Task::Groupoid => groupoid(&family(blocks)?, cap, node_limit),
        Task::Roots => roots(&family(blocks)?, cap, node_limit),
        Task::Hilbert | Task::VerifyPaper => unreachable!("handled above"),
    }
}

fn family(blocks: Vec<YDModule>) -> Result<FamilyM, CliError> {
    FamilyM::new(blocks).map_err(|e| CliError::Schema(format!("targets[0]: {e}")))
}

fn sum(blocks: &[YDModule]) -> YDModule {
    let parts: Vec<&YDModule> = blocks.iter().collect();
    YDModule::direct_sum(&parts).expect("blocks of one scenario share group and field")
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn hilbert(built: &Built, targets: &[Vec<String>], cap: usize) -> Result<Partial, CliError> {
    let mut results = Vec::new();
    let mut csv = String::from("target,degree,dim\n");
    let mut summary = String::new();
    for (t, ids) in targets.iter().enumerate() {
        let m = sum(&built.blocks(ids, &format!("targets[{t}]"))?);
        let h = hilbert_series(&m, cap)?;
        for (n, d) in h.dims.iter().enumerate() {
            csv.push_str(&format!("{},{n},{d}\n", ids.join("+")));
        }
        let total = h.total.map_or_else(|| format!("unknown (not finished by degree {cap}, partial {})", h.partial_total()), |x| x.to_string());
        summary.push_str(&format!("[{}] dim W = {}, dims {}, total {total}\n", ids.join(" + "), m.dim(), join(&h.dims, " ")));
        let mut entry = h.to_json();
        entry["target"] = json!(ids);
        entry["module_dim"] = json!(m.dim());
        results.push(entry);
    }
    Ok(Partial { result: json!({ "cap": cap, "targets": results }), csv: Some(csv), dot: None, summary, refusal: None })
}

fn cartan_csv(data: &CartanData) -> String {
    let mut csv = String::from("row,column,value,exact\n");
    for (i, row) in data.entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            csv.push_str(&format!("{},{},{},{}\n", i + 1, j + 1, e.upper_bound(), e.exact().is_some()));
        }
    }
    csv
}

fn matrix_text(data: &CartanData) -> String {
    data.entries.iter().map(|row| format!("  [{}]\n", join(row, ", "))).collect()
}

fn finite_type_json(data: &CartanData) -> Result<Value, CliError> {
    Ok(match data.exact_matrix() {
        Some(m) => {
            let v = gcm_finite_type(&m)?;
            json!({ "finite": v.finite, "label": v.label() })
        }
        None => Value::Null,
    })
}

fn fingerprints_json(f: &FamilyM) -> Value {
    json!(f.fingerprints().iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn first_uncertified(data: &CartanData) -> Option<(usize, usize)> {
    data.entries.iter().enumerate().find_map(|(i, row)| row.iter().position(|e| e.exact().is_none()).map(|j| (i, j)))
}

fn cartan(f: &FamilyM, cap: usize) -> Result<Partial, CliError> {
    let data = CartanCache::new().cartan_data(f, cap)?;
    let finite = finite_type_json(&data)?;
    let mut summary = format!("Cartan matrix (cap {cap}):\n{}", matrix_text(&data));
    if let Some(label) = finite.get("label").and_then(Value::as_str) {
        summary.push_str(&format!("finite type {label}\n"));
    } else if finite.get("finite") == Some(&json!(false)) {
        summary.push_str("not of finite type\n");
    }
    let result = json!({ "fingerprints": fingerprints_json(f), "cartan": data.to_json(), "finite_type": finite });
    Ok(Partial { result, csv: Some(cartan_csv(&data)), dot: None, summary, refusal: None })
}

fn reflect(f: &FamilyM, i: usize, cap: usize) -> Result<Partial, CliError> {
    let cache = CartanCache::new();
    let data = cache.cartan_data(f, cap)?;
    let mut result = json!({ "at": i + 1, "cartan": data.to_json(), "fingerprints": fingerprints_json(f) });
    let row = match data.row(i) {
        Ok(r) => r,
        Err(e) => {
            let reason = CliError::from(e).to_string().trim_start_matches("refused: ").to_string();
            return Ok(Partial { result, csv: Some(cartan_csv(&data)), dot: None, summary: matrix_text(&data), refusal: Some(reason) });
        }
    };
    let g = cache.reflect(f, i, cap)?;
    let s = s_matrix(&row, i);
    result["s"] = json!(s);
    result["reflected"] = json!({
        "fingerprints": fingerprints_json(&g),
        "dims": g.blocks().iter().map(YDModule::dim).collect::<Vec<_>>(),
    });
    let summary = format!(
        "R_{}: block dims {:?} -> {:?}\ns = {:?}\n",
        i + 1,
        f.blocks().iter().map(YDModule::dim).collect::<Vec<_>>(),
        g.blocks().iter().map(YDModule::dim).collect::<Vec<_>>(),
        s
    );
    Ok(Partial { result, csv: Some(cartan_csv(&data)), dot: None, summary, refusal: None })
}

fn graph_refusal(g: &GroupoidGraph) -> Option<String> {
    if let Some(&(node, row)) = g.uncertified.first() {
        let col = first_uncertified(&g.nodes[node].cartan).map_or(String::new(), |(_, j)| format!(": a_{}{} did not stabilize", row + 1, j + 1));
        return Some(format!("(F_{}) uncertified at cap {} at node {node}{col}", row + 1, g.cap));
    }
    g.truncated.then(|| format!("node limit {} reached before the groupoid closed", g.node_limit))
}

fn groupoid(f: &FamilyM, cap: usize, node_limit: usize) -> Result<Partial, CliError> {
    let g = explore_groupoid(f, cap, node_limit)?;
    let standard = standard_json(&is_standard(&g));
    let mut result = g.to_json();
    result["standard"] = standard.clone();
    let summary = format!("{} nodes, {} edges, complete {}, verdict {}\n", g.nodes.len(), g.edges.len(), g.is_complete(), standard["verdict"].as_str().unwrap_or("?"));
    Ok(Partial { result, csv: None, dot: Some(g.to_dot()), summary, refusal: graph_refusal(&g) })
}

fn standard_json(v: &StandardVerdict) -> Value {
    match v {
        StandardVerdict::Standard => json!({ "verdict": "standard" }),
        StandardVerdict::NotStandard { first, second } => json!({ "verdict": "not standard", "nodes": [first, second] }),
        StandardVerdict::Undecided => json!({ "verdict": "undecided" }),
    }
}

fn roots(f: &FamilyM, cap: usize, node_limit: usize) -> Result<Partial, CliError> {
    let g = explore_groupoid(f, cap, node_limit)?;
    if let Some(r) = graph_refusal(&g) {
        let result = json!({ "nodes": g.nodes.len(), "cap": cap, "node_limit": node_limit });
        return Ok(Partial { result, csv: None, dot: None, summary: String::new(), refusal: Some(r) });
    }
    let rs = real_roots(&g);
    let verdict = is_standard(&g);
    let finite = match verdict {
        StandardVerdict::Standard => finite_type_json(&g.nodes[0].cartan)?,
        _ => Value::Null,
    };
    let positive = rs.positive();
    let result = json!({
        "roots": rs.roots.iter().collect::<Vec<_>>(),
        "positive": positive,
        "count": rs.roots.len(),
        "complete": rs.complete,
        "nodes": g.nodes.len(),
        "standard": standard_json(&verdict),
        "finite_type": finite,
    });
    let mut summary = format!("{} real roots ({} positive) over {} nodes\n", rs.roots.len(), positive.len(), g.nodes.len());
    for r in &positive {
        summary.push_str(&format!("  {r:?}\n"));
    }
    let refusal = (!rs.complete).then(|| format!("morphism search limit reached; root list may be partial"));
    Ok(Partial { result, csv: None, dot: None, summary, refusal })
}

/// Evaluates an expression and reports Cartan bounds from iterated adjoint chains.
fn derive(blocks: &[YDModule], text: &str) -> Result<Partial, CliError> {
    let m = sum(blocks);
    let mut seen = std::collections::BTreeSet::new();
    if let Some(dup) = m.names().iter().find(|n| !seen.insert(n.as_str())) {
        return Err(CliError::Schema(format!("names: `{dup}` is used twice in the target")));
    }
    let e = parse_expr(text)?;
    let (degree, top) = e.degrees()?;
    let ev = Evaluator::new(&m, top)?;
    let value = ev.eval(&e)?;
    let normal_form = ev.format(&value)?;
    let mut bounds = Vec::new();
    let mut summary = format!("{text} = {normal_form}\n");
    for (vs, y) in e.ad_chains() {
        let blk = |name: &str| ev.letter_index(name).map(|k| m.block_of(k));
        let i = blk(&vs[0])?;
        let j = blk(&y)?;
        if i == j || vs.iter().map(|v| blk(v)).collect::<Result<Vec<_>, _>>()?.iter().any(|&b| b != i) {
            continue;
        }
        let mut chain = crate::expr::Expr::Letter(y.clone());
        for v in vs.iter().rev() {
            chain = crate::expr::Expr::Ad { inverse: false, v: Box::new(crate::expr::Expr::Letter(v.clone())), arg: Box::new(chain) };
        }
        let nonzero = !ev.eval(&chain)?.is_zero();
        if nonzero {
            let bound = CartanValue::UnboundedAtCap { cap: vs.len() + 1 }.upper_bound();
            summary.push_str(&format!("a_{}{} <= {bound}\n", i + 1, j + 1));
            bounds.push(json!({ "row": i + 1, "column": j + 1, "at_most": bound, "chain_length": vs.len() }));
        }
    }
    let result = json!({
        "expression": text,
        "degree": degree,
        "normal_form": normal_form,
        "zero": value.is_zero(),
        "cartan_bounds": bounds,
    });
    Ok(Partial::ok(result, summary))
}

fn run_verify(s: Option<&Scenario>, opts: &RunOptions) -> Result<Partial, CliError> {
    let fk3 = match s {
        Some(s) if !s.modules.is_empty() => {
            let built = s.build(opts.numeration.as_ref())?;
            let targets = s.targets();
            Some(sum(&built.blocks(&targets[0], "targets[0]")?))
        }
        _ => None,
    };
    let rows = verify::verify_paper(fk3);
    let passed = rows.iter().filter(|r| r.pass).count();
    let mut summary = String::new();
    for r in &rows {
        summary.push_str(&format!("{:>2}  {}  {:<28} {}\n", r.id, if r.pass { "PASS" } else { "FAIL" }, r.key, r.observed));
    }
    summary.push_str(&format!("{passed}/{} checks passed\n", rows.len()));
    let result = json!({ "checks": rows.iter().map(verify::VerifyRow::to_json).collect::<Vec<_>>(), "passed": passed, "total": rows.len() });
    Ok(Partial::ok(result, summary))
}
