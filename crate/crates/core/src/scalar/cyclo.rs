//! Arithmetic in the cyclotomic fields Q(ζ_N).
//!
//! An element is stored as its coefficient vector in the power basis
//! `1, ζ, …, ζ^{φ(N)-1}`, i.e. as a polynomial reduced modulo the cyclotomic
//! polynomial Φ_N. Fields are interned: [`CycloField::get`] returns a
//! `&'static` handle so numbers stay cheap to clone.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use smallvec::{smallvec, SmallVec};

use super::{Rat, ScalarError};

type Coeffs = SmallVec<[Rat; 2]>;

/// The field Q(ζ_N) together with its reduction data.
pub struct CycloField {
    conductor: u32,
    /// Φ_N, low degree first, monic.
    modulus: Vec<i64>,
    /// `powers[k]` is ζ^k reduced mod Φ_N, for `0 <= k < N`.
    powers: Vec<Vec<i64>>,
}

impl PartialEq for CycloField {
    fn eq(&self, other: &CycloField) -> bool {
        self.conductor == other.conductor
    }
}

impl Eq for CycloField {}

impl Hash for CycloField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor.hash(state);
    }
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(z{})", self.conductor)
    }
}

fn poly_mul_int(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of integer polynomials by a monic divisor.
fn poly_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Φ_n via Φ_n = (x^n - 1) / ∏_{d | n, d < n} Φ_d.
fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let mut den = vec![1i64];
    for d in 1..n {
        if n % d == 0 {
            den = poly_mul_int(&den, &cyclotomic_polynomial(d));
        }
    }
    poly_div_monic(&num, &den)
}

fn registry() -> &'static Mutex<HashMap<u32, &'static CycloField>> {
    static REG: OnceLock<Mutex<HashMap<u32, &'static CycloField>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CycloField {
    /// Interned handle for Q(ζ_N). Panics if `n == 0`.
    pub fn get(n: u32) -> &'static CycloField {
        assert!(n > 0, "cyclotomic conductor must be positive");
        let mut reg = registry().lock().expect("cyclotomic registry poisoned");
        if let Some(f) = reg.get(&n) {
            return f;
        }
        let modulus = cyclotomic_polynomial(n);
        let phi = modulus.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x, reduce the x^phi term
            let top = cur[phi - 1];
            for j in (1..phi).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..phi {
                    cur[j] -= top * modulus[j];
                }
            }
        }
        let field: &'static CycloField = Box::leak(Box::new(CycloField { conductor: n, modulus, powers }));
        reg.insert(n, field);
        field
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Euler totient φ(N), the degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Φ_N as integer coefficients, lowest degree first.
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    pub fn zero(&'static self) -> Cyclo {
        Cyclo { field: self, c: smallvec![Rat::ZERO; self.degree()] }
    }

    pub fn one(&'static self) -> Cyclo {
        self.from_rat(Rat::ONE)
    }

    pub fn from_int(&'static self, n: i64) -> Cyclo {
        self.from_rat(Rat::from_int(n))
    }

    pub fn from_rat(&'static self, r: Rat) -> Cyclo {
        let mut c: Coeffs = smallvec![Rat::ZERO; self.degree()];
        c[0] = r;
        Cyclo { field: self, c }
    }

    /// ζ_N^k in canonical form; `k` is reduced mod N.
    pub fn root_of_unity(&'static self, k: i64) -> Cyclo {
        let n = self.conductor as i64;
        let k = k.rem_euclid(n) as usize;
        let c = self.powers[k].iter().map(|&x| Rat::from_int(x)).collect();
        Cyclo { field: self, c }
    }

    /// Builds an element from power-basis coefficients, reducing if the
    /// vector is longer than φ(N).
    pub fn from_coeffs(&'static self, coeffs: &[Rat]) -> Cyclo {
        let phi = self.degree();
        let mut c: Coeffs = smallvec![Rat::ZERO; phi];
        for (k, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            self.accumulate_power(&mut c, k, a);
        }
        Cyclo { field: self, c }
    }

    fn accumulate_power(&self, c: &mut Coeffs, k: usize, a: &Rat) {
        let phi = self.degree();
        if k < phi {
            c[k] = &c[k] + a;
            return;
        }
        let row = &self.powers[k % self.conductor as usize];
        for j in 0..phi {
            if row[j] != 0 {
                c[j] = &c[j] + &(a * &Rat::from_int(row[j]));
            }
        }
    }
}

/// An element of Q(ζ_N) in canonical (fully reduced) form.
#[derive(Clone)]
pub struct Cyclo {
    field: &'static CycloField,
    c: Coeffs,
}

impl Cyclo {
    pub fn field(&self) -> &'static CycloField {
        self.field
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Rat::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rat> {
        if self.c[1..].iter().all(Rat::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    fn check_field(&self, other: &Cyclo) -> Result<(), ScalarError> {
        if std::ptr::eq(self.field, other.field) {
            Ok(())
        } else {
            Err(ScalarError::ConductorMismatch(self.field.conductor, other.field.conductor))
        }
    }

    pub fn try_add(&self, other: &Cyclo) -> Result<Cyclo, ScalarError> {
        self.check_field(other)?;
        let c = self.c.iter().zip(other.c.iter()).map(|(a, b)| a + b).collect();
        Ok(Cyclo { field: self.field, c })
    }

    pub fn try_sub(&self, other: &Cyclo) -> Result<Cyclo, ScalarError> {
        self.check_field(other)?;
        let c = self.c.iter().zip(other.c.iter()).map(|(a, b)| a - b).collect();
        Ok(Cyclo { field: self.field, c })
    }

    pub fn try_mul(&self, other: &Cyclo) -> Result<Cyclo, ScalarError> {
        self.check_field(other)?;
        let phi = self.field.degree();
        if phi == 1 {
            return Ok(Cyclo { field: self.field, c: smallvec![&self.c[0] * &other.c[0]] });
        }
        let mut full = vec![Rat::ZERO; 2 * phi - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[i + j] = &full[i + j] + &(a * b);
            }
        }
        let mut c: Coeffs = smallvec![Rat::ZERO; phi];
        for (k, a) in full.iter().enumerate() {
            if !a.is_zero() {
                self.field.accumulate_power(&mut c, k, a);
            }
        }
        Ok(Cyclo { field: self.field, c })
    }

    pub fn scale(&self, r: &Rat) -> Cyclo {
        Cyclo { field: self.field, c: self.c.iter().map(|a| a * r).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Cyclo, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.field.from_rat(r.recip()?));
        }
        let modulus: Vec<Rat> = self.field.modulus.iter().map(|&m| Rat::from_int(m)).collect();
        let a: Vec<Rat> = self.c.to_vec();
        // invariant: s_i * a ≡ r_i (mod Φ)
        let (mut r0, mut r1) = (trim(modulus), trim(a));
        let (mut s0, mut s1) = (Vec::<Rat>::new(), vec![Rat::ONE]);
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant because Φ_N is irreducible.
        let lead = r1[0].recip()?;
        let s: Vec<Rat> = s1.iter().map(|x| x * &lead).collect();
        Ok(self.field.from_coeffs(&s))
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Cyclo {
        let n = self.field.conductor as usize;
        let mut c: Coeffs = smallvec![Rat::ZERO; self.field.degree()];
        for (k, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                self.field.accumulate_power(&mut c, (n - k % n) % n, a);
            }
        }
        Cyclo { field: self.field, c }
    }

    /// Embeds into Q(ζ_M) for a multiple M of the conductor, via ζ_N = ζ_M^{M/N}.
    pub fn embed(&self, target: &'static CycloField) -> Result<Cyclo, ScalarError> {
        let (n, m) = (self.field.conductor, target.conductor);
        if m % n != 0 {
            return Err(ScalarError::NotEmbeddable(n, m));
        }
        let step = (m / n) as usize;
        let mut c: Coeffs = smallvec![Rat::ZERO; target.degree()];
        for (k, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                target.accumulate_power(&mut c, k * step, a);
            }
        }
        Ok(Cyclo { field: target, c })
    }

    /// Smallest `k` in `0..N` with `self = ζ_N^k`, if the element is an N-th root of unity.
    pub fn root_exponent(&self) -> Option<u32> {
        (0..self.field.conductor).find(|&k| *self == self.field.root_of_unity(k as i64))
    }

    /// Multiplicative order if the element is a root of unity.
    pub fn multiplicative_order(&self) -> Option<u32> {
        let n = self.field.conductor;
        let k = self.root_exponent()?;
        let g = num_integer::gcd(k, n);
        Some(n / g)
    }

    pub fn pow(&self, mut e: u64) -> Cyclo {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Approximate complex value, for display only.
    pub fn to_complex_approx(&self) -> (f64, f64) {
        let n = self.field.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, a) in self.c.iter().enumerate() {
            let t = std::f64::consts::TAU * k as f64 / n;
            re += a.to_f64() * t.cos();
            im += a.to_f64() * t.sin();
        }
        (re, im)
    }

    /// Parses the textual form in a given field, e.g. `1/2 - z3^1` or `-2*z12^5 + 1`.
    /// Tokens `zM^k` with M dividing the field's conductor are embedded.
    pub fn parse(field: &'static CycloField, s: &str) -> Result<Cyclo, ScalarError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ScalarError::Parse("empty scalar".into()));
        }
        let mut acc = field.zero();
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut i = 0;
        let mut terms = Vec::new();
        while i <= bytes.len() {
            let at_split = i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^' && bytes[i - 1] != b'*');
            if at_split {
                terms.push(&compact[start..i]);
                start = i;
            }
            i += 1;
        }
        for term in terms {
            acc = &acc + &parse_term(field, term)?;
        }
        Ok(acc)
    }
}

fn parse_term(field: &'static CycloField, term: &str) -> Result<Cyclo, ScalarError> {
    let bad = || ScalarError::Parse(format!("invalid scalar term `{term}`"));
    let (sign, body) = match term.as_bytes().first() {
        Some(b'+') => (false, &term[1..]),
        Some(b'-') => (true, &term[1..]),
        _ => (false, term),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (coef, zpart) = match body.find('z') {
        Some(pos) => {
            let head = &body[..pos];
            let coef = if head.is_empty() {
                Rat::ONE
            } else {
                head.strip_suffix('*').ok_or_else(bad)?.parse::<Rat>()?
            };
            (coef, Some(&body[pos + 1..]))
        }
        None => (body.parse::<Rat>()?, None),
    };
    let mut value = match zpart {
        None => field.from_rat(coef),
        Some(z) => {
            let (m, k) = match z.split_once('^') {
                Some((m, k)) => (m, k),
                None => (z, "1"),
            };
            let m: u32 = m.parse().map_err(|_| bad())?;
            let k: i64 = k.parse().map_err(|_| bad())?;
            if m == 0 || field.conductor % m != 0 {
                return Err(ScalarError::NotEmbeddable(m, field.conductor));
            }
            let step = (field.conductor / m) as i64;
            field.root_of_unity(k * step).scale(&coef)
        }
    };
    if sign {
        value = -&value;
    }
    Ok(value)
}

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.len() > 1 && p.last().is_some_and(Rat::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            &x - &y
        })
        .collect();
    trim(out)
}

fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        return (vec![Rat::ZERO], trim(rem));
    }
    let lead_inv = den[dd].recip().expect("nonzero leading coefficient");
    let mut quot = vec![Rat::ZERO; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] * &lead_inv;
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
        }
        quot[k] = c;
    }
    rem.truncate(dd.max(1));
    (trim(quot), trim(rem))
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Cyclo) -> bool {
        std::ptr::eq(self.field, other.field) && self.c == other.c
    }
}

impl Eq for Cyclo {}

impl Hash for Cyclo {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.c.hash(state);
    }
}

impl Ord for Cyclo {
    /// A total order on canonical forms (conductor, then coefficients); not a field order.
    fn cmp(&self, other: &Cyclo) -> std::cmp::Ordering {
        self.field.conductor.cmp(&other.field.conductor).then_with(|| self.c.as_slice().cmp(other.c.as_slice()))
    }
}

impl PartialOrd for Cyclo {
    fn partial_cmp(&self, other: &Cyclo) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

// Operators panic on conductor mismatch; use the `try_*` methods to handle it.

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Div<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn div(self, rhs: &Cyclo) -> Cyclo {
        let inv = rhs.inv().unwrap_or_else(|e| panic!("{e}"));
        self * &inv
    }
}

impl<'a> Neg for &'a Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { field: self.field, c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        assert!(std::ptr::eq(self.field, rhs.field), "{}", ScalarError::ConductorMismatch(self.field.conductor, rhs.field.conductor));
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            if !b.is_zero() {
                *a = &*a + b;
            }
        }
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &Cyclo) {
        assert!(std::ptr::eq(self.field, rhs.field), "{}", ScalarError::ConductorMismatch(self.field.conductor, rhs.field.conductor));
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            if !b.is_zero() {
                *a = &*a - b;
            }
        }
    }
}

impl fmt::Display for Cyclo {
    /// Canonical textual form: ascending powers, `c*zN^k` terms, constant first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.field.conductor;
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "z{n}^{k}")?;
            } else {
                write!(f, "{mag}*z{n}^{k}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self)
    }
}
