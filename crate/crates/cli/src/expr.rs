//! S-expressions over B(W): `(d x e)`, `(dl x e)`, `(ad v e)`, `(adinv v e)`,
//! `(* e ...)`, `(+ e ...)`, `(- e e)`, `(scale c e)` and basis names.

use nichols_core::diff::Derivations;
use nichols_core::nichols::{EngineConfig, NElem, NicholsState};
use nichols_core::scalar::Cyclo;
use nichols_core::yd::YDModule;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Letter(String),
    /// right (`left = false`) or left skew derivation by a basis letter
    D { left: bool, letter: String, arg: Box<Expr> },
    Ad { inverse: bool, v: Box<Expr>, arg: Box<Expr> },
    Mul(Vec<Expr>),
    Add(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Scale(String, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(s: &str) -> Vec<String> {
    s.replace('(', " ( ").replace(')', " ) ").split_whitespace().map(str::to_string).collect()
}

fn read(tokens: &[String], pos: &mut usize) -> Result<Sexp, CliError> {
    let err = |m: &str| CliError::Schema(format!("expression: {m}"));
    let t = tokens.get(*pos).ok_or_else(|| err("unexpected end"))?;
    *pos += 1;
    match t.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    None => return Err(err("missing `)`")),
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read(tokens, pos)?),
                }
            }
        }
        ")" => Err(err("unexpected `)`")),
        a => Ok(Sexp::Atom(a.to_string())),
    }
}

fn to_expr(s: &Sexp) -> Result<Expr, CliError> {
    let err = |m: String| CliError::Schema(format!("expression: {m}"));
    let items = match s {
        Sexp::Atom(a) => return Ok(Expr::Letter(a.clone())),
        Sexp::List(items) => items,
    };
    let (head, rest) = match items.split_first() {
        Some((Sexp::Atom(h), rest)) => (h.as_str(), rest),
        _ => return Err(err("a list must start with an operator".into())),
    };
    let arity = |n: usize| if rest.len() == n { Ok(()) } else { Err(err(format!("`{head}` takes {n} arguments, got {}", rest.len()))) };
    let atom = |s: &Sexp| match s {
        Sexp::Atom(a) => Ok(a.clone()),
        Sexp::List(_) => Err(err(format!("`{head}` expects a name or scalar as first argument"))),
    };
    Ok(match head {
        "d" | "dl" => {
            arity(2)?;
            Expr::D { left: head == "dl", letter: atom(&rest[0])?, arg: Box::new(to_expr(&rest[1])?) }
        }
        "ad" | "adinv" => {
            arity(2)?;
            Expr::Ad { inverse: head == "adinv", v: Box::new(to_expr(&rest[0])?), arg: Box::new(to_expr(&rest[1])?) }
        }
        "*" | "+" if !rest.is_empty() => {
            let args = rest.iter().map(to_expr).collect::<Result<Vec<_>, _>>()?;
            if head == "*" {
                Expr::Mul(args)
            } else {
                Expr::Add(args)
            }
        }
        "-" => {
            arity(2)?;
            Expr::Sub(Box::new(to_expr(&rest[0])?), Box::new(to_expr(&rest[1])?))
        }
        "scale" => {
            arity(2)?;
            Expr::Scale(atom(&rest[0])?, Box::new(to_expr(&rest[1])?))
        }
        other => return Err(err(format!("unknown operator `{other}`"))),
    })
}

pub fn parse_expr(s: &str) -> Result<Expr, CliError> {
    let tokens = tokenize(s);
    let mut pos = 0;
    let sexp = read(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(CliError::Schema("expression: trailing input".into()));
    }
    to_expr(&sexp)
}

impl Expr {
    /// Degree of the value and the largest degree met while evaluating.
    pub fn degrees(&self) -> Result<(usize, usize), CliError> {
        let err = |m: &str| CliError::Schema(format!("expression: {m}"));
        Ok(match self {
            Expr::Letter(_) => (1, 1),
            Expr::D { arg, .. } => {
                let (d, top) = arg.degrees()?;
                if d == 0 {
                    return Err(err("derivation of a degree-zero element"));
                }
                (d - 1, top)
            }
            Expr::Ad { v, arg, .. } => {
                let (dv, tv) = v.degrees()?;
                if dv != 1 {
                    return Err(err("the first argument of `ad` must have degree one"));
                }
                let (d, top) = arg.degrees()?;
                (d + 1, top.max(tv).max(d + 1))
            }
            Expr::Mul(args) => {
                let mut d = 0;
                let mut top = 0;
                for a in args {
                    let (da, ta) = a.degrees()?;
                    d += da;
                    top = top.max(ta);
                }
                (d, top.max(d))
            }
            Expr::Add(args) => {
                let ds = args.iter().map(Expr::degrees).collect::<Result<Vec<_>, _>>()?;
                if ds.iter().any(|x| x.0 != ds[0].0) {
                    return Err(err("`+` needs summands of one degree"));
                }
                (ds[0].0, ds.iter().map(|x| x.1).max().unwrap_or(0))
            }
            Expr::Sub(a, b) => {
                let (da, ta) = a.degrees()?;
                let (db, tb) = b.degrees()?;
                if da != db {
                    return Err(err("`-` needs arguments of one degree"));
                }
                (da, ta.max(tb))
            }
            Expr::Scale(_, a) => a.degrees()?,
        })
    }

    /// Maximal chains `(ad v_1 (ad v_2 … (ad v_k y)))` of letters, as (v names, y name).
    pub fn ad_chains(&self) -> Vec<(Vec<String>, String)> {
        let mut out = Vec::new();
        self.collect_chains(&mut out, false);
        out
    }

    fn chain(&self) -> Option<(Vec<String>, String)> {
        match self {
            Expr::Ad { inverse: false, v, arg } => {
                let Expr::Letter(name) = v.as_ref() else { return None };
                let (mut vs, y) = match arg.as_ref() {
                    Expr::Letter(y) => (Vec::new(), y.clone()),
                    inner => inner.chain()?,
                };
                vs.insert(0, name.clone());
                Some((vs, y))
            }
            _ => None,
        }
    }

    fn collect_chains(&self, out: &mut Vec<(Vec<String>, String)>, inside: bool) {
        if !inside {
            if let Some(c) = self.chain() {
                out.push(c);
                return;
            }
        }
        match self {
            Expr::Letter(_) => {}
            Expr::D { arg, .. } | Expr::Scale(_, arg) => arg.collect_chains(out, false),
            Expr::Ad { v, arg, .. } => {
                v.collect_chains(out, false);
                arg.collect_chains(out, false);
            }
            Expr::Mul(args) | Expr::Add(args) => args.iter().for_each(|a| a.collect_chains(out, false)),
            Expr::Sub(a, b) => {
                a.collect_chains(out, false);
                b.collect_chains(out, false);
            }
        }
    }
}

/// An evaluation context: B(W) computed to the degree an expression needs.
pub struct Evaluator {
    state: NicholsState,
}

impl Evaluator {
    pub fn new(module: &YDModule, degree: usize) -> Result<Evaluator, CliError> {
        let mut state = NicholsState::new(module, EngineConfig::default())?;
        state.compute_to(degree.max(1))?;
        Ok(Evaluator { state })
    }

    pub fn state(&self) -> &NicholsState {
        &self.state
    }

    pub fn letter_index(&self, name: &str) -> Result<usize, CliError> {
        self.state.module().name_index(name).ok_or_else(|| CliError::Schema(format!("expression: unknown basis element `{name}`")))
    }

    pub fn eval(&self, e: &Expr) -> Result<NElem, CliError> {
        let ops = Derivations::new(&self.state)?;
        self.eval_with(&ops, e)
    }

    pub fn eval_with(&self, ops: &Derivations<'_>, e: &Expr) -> Result<NElem, CliError> {
        let s = &self.state;
        Ok(match e {
            Expr::Letter(name) => s.letter(self.letter_index(name)?)?,
            Expr::D { left, letter, arg } => {
                let i = self.letter_index(letter)?;
                let x = self.eval_with(ops, arg)?;
                if *left {
                    ops.partial_left(i, &x)?
                } else {
                    ops.partial_right(i, &x)?
                }
            }
            Expr::Ad { inverse, v, arg } => {
                let v = self.eval_with(ops, v)?;
                let y = self.eval_with(ops, arg)?;
                if *inverse {
                    ops.ad_c_inv(&v, &y)?
                } else {
                    ops.ad_c(&v, &y)?
                }
            }
            Expr::Mul(args) => {
                let mut acc = s.one();
                for a in args {
                    acc = s.multiply(&acc, &self.eval_with(ops, a)?)?;
                }
                acc
            }
            Expr::Add(args) => {
                let mut acc = self.eval_with(ops, &args[0])?;
                for a in &args[1..] {
                    acc = acc.add(&self.eval_with(ops, a)?)?;
                }
                acc
            }
            Expr::Sub(a, b) => self.eval_with(ops, a)?.sub(&self.eval_with(ops, b)?)?,
            Expr::Scale(c, a) => {
                let c = crate::scenario::parse_scalar(s.field(), c, "expression: scale")?;
                self.eval_with(ops, a)?.scale(&c)
            }
        })
    }

    /// Normal form as a linear combination of basis words, e.g. `x1 x2 - x2 x1`.
    pub fn format(&self, x: &NElem) -> Result<String, CliError> {
        let s = &self.state;
        let names = s.module().names();
        let words = s.basis_words(x.degree)?;
        let mut out = String::new();
        for (k, c) in x.coords.iter() {
            let word = if x.degree == 0 { "1".to_string() } else { words[k].iter().map(|&l| names[l as usize].as_str()).collect::<Vec<_>>().join(" ") };
            let (neg, coeff) = coefficient(c);
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            if let Some(cf) = coeff {
                out.push_str(&cf);
                out.push(' ');
            }
            out.push_str(&word);
        }
        if out.is_empty() {
            out.push('0');
        }
        Ok(out)
    }
}

/// Sign and printed coefficient (`None` for ±1).
fn coefficient(c: &Cyclo) -> (bool, Option<String>) {
    match c.as_rational() {
        Some(r) => {
            let a = r.abs();
            (r.is_negative(), (!a.is_one()).then(|| a.to_string()))
        }
        None => (false, Some(format!("({c})"))),
    }
}
