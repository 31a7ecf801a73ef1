//! Textual element forms.
//!
//! Accepted inputs: `e`/`id`/`()`; products of 1-indexed cycles such as
//! `(1 2)(3 4)`, `(1,2,3)` or `(123)` for degree below 10; one-line images
//! `[2,1,3,4]` (1-indexed) or exponent tuples `[1,0]` for abelian groups;
//! words in named generators such as `x*y^2` or `y^-1 x`.

use super::{Elem, FiniteGroup, GroupError, GroupKind};

impl FiniteGroup {
    pub fn parse_element(&self, s: &str) -> Result<Elem, GroupError> {
        let t = s.trim();
        let err = || GroupError::Parse(s.to_string());
        if t.is_empty() || t == "e" || t == "id" || t == "()" {
            return Ok(self.identity());
        }
        if t.starts_with('[') {
            let inner = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(err)?;
            let nums: Vec<i64> = inner.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<_, _>>().map_err(|_| err())?;
            let form: Vec<u32> = match &self.kind {
                GroupKind::Permutation { .. } => nums.iter().map(|&x| (x - 1) as u32).collect(),
                GroupKind::Abelian { orders } => {
                    if nums.len() != orders.len() {
                        return Err(err());
                    }
                    nums.iter().zip(orders).map(|(&x, &o)| x.rem_euclid(o as i64) as u32).collect()
                }
            };
            return self.element_from_form(&form).ok_or_else(|| GroupError::NotInGroup(s.to_string()));
        }
        if t.starts_with('(') {
            let GroupKind::Permutation { degree } = self.kind else {
                return Err(err());
            };
            let mut acc: Vec<u32> = (0..degree as u32).collect();
            let mut rest = t;
            while !rest.is_empty() {
                let close = rest.find(')').ok_or_else(err)?;
                let body = rest.strip_prefix('(').ok_or_else(err)?[..close - 1].trim();
                rest = rest[close + 1..].trim_start();
                let points: Vec<usize> = if body.contains(',') || body.contains(' ') {
                    body.split(|c: char| c == ',' || c.is_whitespace()).filter(|x| !x.is_empty()).map(|x| x.parse::<usize>()).collect::<Result<_, _>>().map_err(|_| err())?
                } else {
                    body.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(err)?
                };
                if points.iter().any(|&p| p == 0 || p > degree) {
                    return Err(GroupError::NotInGroup(s.to_string()));
                }
                let mut cyc: Vec<u32> = (0..degree as u32).collect();
                for (k, &p) in points.iter().enumerate() {
                    cyc[p - 1] = (points[(k + 1) % points.len()] - 1) as u32;
                }
                acc = compose(&acc, &cyc);
            }
            return self.element_from_form(&acc).ok_or_else(|| GroupError::NotInGroup(s.to_string()));
        }
        let mut out = self.identity();
        for token in t.split(|c: char| c == '*' || c.is_whitespace()).filter(|x| !x.is_empty()) {
            let (name, exp) = match token.split_once('^') {
                Some((n, k)) => (n, k.parse::<i64>().map_err(|_| err())?),
                None => (token, 1),
            };
            let g = self.generator_by_name(name).ok_or_else(err)?;
            out = self.mul(out, self.pow(g, exp));
        }
        Ok(out)
    }

    /// Cycle notation (1-indexed) for permutations, `e` for the identity,
    /// `[a,b,…]` exponent tuples for abelian groups.
    pub fn format_element(&self, a: Elem) -> String {
        let form = self.form(a);
        match &self.kind {
            GroupKind::Abelian { .. } => format!("[{}]", form.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
            GroupKind::Permutation { degree } => {
                if a == self.identity() {
                    return "e".into();
                }
                let mut seen = vec![false; *degree];
                let mut out = String::new();
                for start in 0..*degree {
                    if seen[start] || form[start] as usize == start {
                        continue;
                    }
                    let mut cyc = Vec::new();
                    let mut i = start;
                    while !seen[i] {
                        seen[i] = true;
                        cyc.push(i + 1);
                        i = form[i] as usize;
                    }
                    let sep = if *degree < 10 { "" } else { " " };
                    out.push('(');
                    out.push_str(&cyc.iter().map(usize::to_string).collect::<Vec<_>>().join(sep));
                    out.push(')');
                }
                out
            }
        }
    }
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&i| a[i as usize]).collect()
}

#[cfg(test)]
mod tests {
    use super::super::tests::s4;
    use super::*;

    #[test]
    fn cycle_forms() {
        let g = s4();
        let a = g.parse_element("(1234)").unwrap();
        assert_eq!(g.form(a), &[1, 2, 3, 0]);
        assert_eq!(g.format_element(a), "(1234)");
        assert_eq!(g.parse_element("(1,2,3,4)").unwrap(), a);
        assert_eq!(g.parse_element("[2,3,4,1]").unwrap(), a);
        // right-to-left: (12)(23) = (123)
        assert_eq!(g.format_element(g.parse_element("(12)(23)").unwrap()), "(123)");
        assert_eq!(g.format_element(g.parse_element("(12)(34)").unwrap()), "(12)(34)");
        assert_eq!(g.parse_element("e").unwrap(), g.identity());
        assert!(g.parse_element("(15)").is_err());
        assert!(g.parse_element("q").is_err());
    }

    #[test]
    fn words_and_tuples() {
        let d = FiniteGroup::dihedral(9).unwrap();
        let x = d.generator_by_name("x").unwrap();
        let y = d.generator_by_name("y").unwrap();
        assert_eq!(d.parse_element("x*y^2").unwrap(), d.mul(x, d.mul(y, y)));
        assert_eq!(d.parse_element("y^-1").unwrap(), d.inverse(y));
        let z = FiniteGroup::abelian(vec![3, 3]).unwrap();
        let e = z.parse_element("[1,2]").unwrap();
        assert_eq!(z.form(e), &[1, 2]);
        assert_eq!(z.format_element(e), "[1,2]");
        assert_eq!(z.parse_element("g1*g2^2").unwrap(), e);
    }
}
