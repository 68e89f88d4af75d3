//! The finite field F_q, q = p^e, in a polynomial basis over F_p.
//!
//! Elements are stored as `u32` indices: the element `d_0 + d_1 w + ... + d_{e-1} w^{e-1}`
//! has index `d_0 + d_1 p + ... + d_{e-1} p^{e-1}`. The prime subfield is therefore the
//! index range `0..p`. Prime fields use direct modular arithmetic; extension fields use
//! precomputed addition and multiplication tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest q for which extension-field tables are built.
pub const MAX_EXTENSION_ORDER: u32 = 1024;

/// Largest prime accepted (keeps products of two residues inside `u32`).
pub const MAX_PRIME: u32 = 65521;

/// An element of F_q, meaningful only relative to its [`Field`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// Description of F_q = F_p[w]/(m(w)).
pub struct FieldDesc {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, coefficients low to high (length e + 1). For e = 1 this is `w`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Shared handle to a [`FieldDesc`]. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<FieldDesc>);

/// Built-in irreducible moduli, coefficients low to high.
fn builtin_modulus(p: u32, e: u32) -> Option<Vec<u32>> {
    let m: &[u32] = match (p, e) {
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (3, 2) => &[1, 0, 1],
        (3, 3) => &[1, 2, 0, 1],
        (5, 2) => &[2, 0, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

// Dense polynomial helpers over F_p (coefficients low to high).

fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m monic
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &mc) in m.iter().enumerate() {
            let sub = (lead as u64 * mc as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u64 * y as u64;
        }
    }
    let mut v: Vec<u32> = out.into_iter().map(|c| (c % p as u64) as u32).collect();
    fp_trim(&mut v);
    v
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let d = m.len() - 1;
    // Test every monic divisor candidate of degree 1..=d/2.
    for deg in 1..=d / 2 {
        let count = (p as u64).pow(deg as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(deg + 1);
            let mut r = idx;
            for _ in 0..deg {
                f.push((r % p as u64) as u32);
                r /= p as u64;
            }
            f.push(1);
            if fp_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds F_q with q = p^e. When `e > 1` and no modulus is given, a built-in
    /// irreducible is used for (p, e) in {(2,2), (2,3), (2,4), (3,2), (3,3), (5,2)}.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > MAX_PRIME {
            return Err(Error::InvalidField(format!("prime {p} exceeds {MAX_PRIME}")));
        }
        if e == 0 {
            return Err(Error::InvalidField("exponent e must be positive".into()));
        }
        let q = (p as u64).pow(e);
        if e > 1 && q > MAX_EXTENSION_ORDER as u64 {
            return Err(Error::InvalidField(format!(
                "extension fields are limited to q <= {MAX_EXTENSION_ORDER}"
            )));
        }
        let q = q as u32;
        if e == 1 {
            if let Some(m) = &modulus {
                let mut m = m.clone();
                fp_trim(&mut m);
                if m.len() != 2 || m[1] != 1 {
                    return Err(Error::InvalidField("modulus for a prime field must be monic of degree 1".into()));
                }
            }
            return Ok(Field(Arc::new(FieldDesc { p, e, q, modulus: vec![0, 1], tables: None })));
        }
        let modulus = match modulus {
            Some(m) => {
                let mut m: Vec<u32> = m.into_iter().map(|c| c % p).collect();
                fp_trim(&mut m);
                if m.len() != e as usize + 1 {
                    return Err(Error::InvalidField(format!("modulus must have degree {e}")));
                }
                if *m.last().unwrap() != 1 {
                    return Err(Error::InvalidField("modulus must be monic".into()));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::InvalidField(format!(
                        "modulus {} is reducible over F_{p}",
                        format_wpoly(&m)
                    )));
                }
                m
            }
            None => builtin_modulus(p, e).ok_or_else(|| {
                Error::InvalidField(format!("no built-in modulus for p = {p}, e = {e}"))
            })?,
        };
        let tables = build_tables(p, e, q, &modulus);
        Ok(Field(Arc::new(FieldDesc { p, e, q, modulus, tables: Some(tables) })))
    }

    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// F_q for a prime power q, with the built-in modulus when q is not prime.
    pub fn with_order(q: u32) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Field::new(p, e, None)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.0.e
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }
    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// Monic modulus, coefficients low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn modulus_text(&self) -> String {
        format_wpoly(&self.0.modulus)
    }

    #[inline]
    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    #[inline]
    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The class of `w` (for a prime field, this is just 0 ... use only when e > 1).
    pub fn generator(&self) -> FqElem {
        if self.0.e == 1 {
            FqElem(0)
        } else {
            FqElem(self.0.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.0.tables {
            None => {
                let s = a.0 + b.0;
                FqElem(if s >= self.0.p { s - self.0.p } else { s })
            }
            Some(t) => FqElem(t.add[(a.0 * self.0.q + b.0) as usize]),
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        match &self.0.tables {
            None => FqElem(if a.0 == 0 { 0 } else { self.0.p - a.0 }),
            Some(t) => FqElem(t.neg[a.0 as usize]),
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.0.tables {
            None => FqElem(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32),
            Some(t) => FqElem(t.mul[(a.0 * self.0.q + b.0) as usize]),
        }
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        match &self.0.tables {
            None => Some(self.pow(a, (self.0.p - 2) as u64)),
            Some(t) => Some(FqElem(t.inv[a.0 as usize])),
        }
    }

    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Digits of `a` over F_p, low to high (length e).
    pub fn digits(&self, a: FqElem) -> Vec<u32> {
        let mut r = a.0;
        (0..self.0.e)
            .map(|_| {
                let d = r % self.0.p;
                r /= self.0.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FqElem {
        let reduced = fp_rem(digits, &self.0.modulus, self.0.p);
        let mut idx = 0u32;
        for &d in reduced.iter().rev() {
            idx = idx * self.0.p + d;
        }
        FqElem(idx)
    }

    /// Text form: an integer for prime fields, otherwise a polynomial in `w`
    /// with coefficients in 0..p, highest degree first.
    pub fn format_elem(&self, a: FqElem) -> String {
        if self.0.e == 1 {
            return a.0.to_string();
        }
        format_wpoly(&self.digits(a))
    }

    /// Number of monomials in the text form of `a` (used to decide on parentheses).
    pub fn elem_term_count(&self, a: FqElem) -> usize {
        if self.0.e == 1 {
            return 1;
        }
        self.digits(a).iter().filter(|&&d| d != 0).count().max(1)
    }

    pub fn parse_elem(&self, s: &str) -> Result<FqElem> {
        let digits = parse_wpoly(s)?;
        if self.0.e == 1 && digits.len() > 1 {
            return Err(Error::Parse(format!("'{s}' is not an element of a prime field")));
        }
        let digits: Vec<u32> = digits.into_iter().map(|d| (d % self.0.p as u64) as u32).collect();
        Ok(self.from_digits(&digits))
    }

    pub fn same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}[w]/({})", self.0.p, self.modulus_text())
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn build_tables(p: u32, e: u32, q: u32, modulus: &[u32]) -> Tables {
    let digits = |x: u32| -> Vec<u32> {
        let mut r = x;
        (0..e)
            .map(|_| {
                let d = r % p;
                r /= p;
                d
            })
            .collect()
    };
    let index = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &x| acc * p + x) };
    let all: Vec<Vec<u32>> = (0..q).map(digits).collect();
    let qs = q as usize;
    let mut add = vec![0; qs * qs];
    let mut mul = vec![0; qs * qs];
    let mut neg = vec![0; qs];
    let mut inv = vec![0; qs];
    for a in 0..qs {
        let da = &all[a];
        let nd: Vec<u32> = da.iter().map(|&x| (p - x) % p).collect();
        neg[a] = index(&nd);
        for b in 0..qs {
            let db = &all[b];
            let sd: Vec<u32> = da.iter().zip(db).map(|(&x, &y)| (x + y) % p).collect();
            add[a * qs + b] = index(&sd);
            let prod = fp_rem(&fp_mul(da, db, p), modulus, p);
            let mut pd = prod;
            pd.resize(e as usize, 0);
            let m = index(&pd);
            mul[a * qs + b] = m;
            if m == 1 {
                inv[a] = b as u32;
            }
        }
    }
    Tables { add, mul, neg, inv }
}

/// Formats a polynomial in `w` given by coefficients low to high.
pub fn format_wpoly(c: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &d) in c.iter().enumerate().rev() {
        if d == 0 {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "w".to_string(),
            _ => format!("w^{i}"),
        };
        parts.push(match (d, var.is_empty()) {
            (_, true) => d.to_string(),
            (1, false) => var,
            (_, false) => format!("{d}*{var}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Parses `2*w^2 + w + 1` style text into coefficients low to high (unreduced).
pub fn parse_wpoly(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    let s = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
    let mut out: Vec<u64> = Vec::new();
    for raw in s.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in '{s}'")));
        }
        let (coef, deg) = parse_monomial(term, "w")?;
        let deg = deg as usize;
        if out.len() <= deg {
            out.resize(deg + 1, 0);
        }
        out[deg] += coef;
    }
    Ok(out)
}

fn parse_monomial(term: &str, var: &str) -> Result<(u64, u64)> {
    let mut coef = 1u64;
    let mut deg = 0u64;
    for factor in term.split('*') {
        let f = factor.trim();
        if let Ok(n) = f.parse::<u64>() {
            coef *= n;
        } else if f == var {
            deg += 1;
        } else if let Some(exp) = f.strip_prefix(var).and_then(|r| r.strip_prefix('^')) {
            deg += exp.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad exponent in '{term}'")))?;
        } else {
            return Err(Error::Parse(format!("unexpected factor '{f}'")));
        }
    }
    Ok((coef, deg))
}
