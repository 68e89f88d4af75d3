//! Sparse bivariate polynomials in F_q[t, θ].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, FqElem};
use crate::error::{Error, Result};

/// Exponent pair `t^t θ^th`. Ordered by t-degree first, then θ-degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub t: u32,
    pub th: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { t: 0, th: 0 };

    pub fn new(t: u32, th: u32) -> Self {
        Monomial { t, th }
    }
}

/// An element of F_q[t, θ]: a sorted list of monomials with nonzero coefficients.
///
/// The zero polynomial has no terms. Terms are kept in ascending monomial order,
/// which makes equality structural.
#[derive(Clone)]
pub struct BiPoly {
    field: Field,
    terms: Vec<(Monomial, FqElem)>,
}

impl BiPoly {
    pub fn zero(field: &Field) -> Self {
        BiPoly { field: field.clone(), terms: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, FqElem::ONE)
    }

    pub fn constant(field: &Field, c: FqElem) -> Self {
        Self::monomial(field, c, 0, 0)
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::constant(field, field.from_int(n))
    }

    pub fn monomial(field: &Field, c: FqElem, t: u32, th: u32) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(Monomial { t, th }, c)] };
        BiPoly { field: field.clone(), terms }
    }

    /// The variable `t`.
    pub fn t(field: &Field) -> Self {
        Self::monomial(field, FqElem::ONE, 1, 0)
    }

    /// The variable `θ`.
    pub fn theta(field: &Field) -> Self {
        Self::monomial(field, FqElem::ONE, 0, 1)
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(field: &Field, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, FqElem)>,
    {
        let mut v: Vec<(Monomial, FqElem)> = terms.into_iter().collect();
        v.sort_unstable_by_key(|&(m, _)| m);
        let mut out: Vec<(Monomial, FqElem)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(*lc, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|&(_, c)| !c.is_zero());
        BiPoly { field: field.clone(), terms: out }
    }

    /// Univariate polynomial in θ from coefficients low to high.
    pub fn from_theta_coeffs(field: &Field, coeffs: &[FqElem]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (Monomial::new(0, i as u32), c))
            .collect();
        BiPoly { field: field.clone(), terms }
    }

    /// Univariate polynomial in t from coefficients low to high.
    pub fn from_t_coeffs(field: &Field, coeffs: &[FqElem]) -> Self {
        let mut terms: Vec<_> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (Monomial::new(i as u32, 0), c))
            .collect();
        terms.sort_unstable_by_key(|&(m, _)| m);
        BiPoly { field: field.clone(), terms }
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, FqElem)] {
        &self.terms
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (Monomial::ONE, FqElem::ONE)
    }

    /// True for nonzero elements of F_q (degree 0 in both variables).
    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Monomial::ONE
    }

    pub fn constant_value(&self) -> Option<FqElem> {
        match self.terms.as_slice() {
            [] => Some(FqElem::ZERO),
            [(m, c)] if *m == Monomial::ONE => Some(*c),
            _ => None,
        }
    }

    pub fn is_t_free(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.t == 0)
    }

    pub fn deg_t(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.t)
    }

    pub fn deg_theta(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.th).max()
    }

    pub fn coeff(&self, t: u32, th: u32) -> FqElem {
        let key = Monomial { t, th };
        match self.terms.binary_search_by_key(&key, |&(m, _)| m) {
            Ok(i) => self.terms[i].1,
            Err(_) => FqElem::ZERO,
        }
    }

    /// Coefficient of `t^i`, as a polynomial in θ.
    pub fn t_coeff(&self, i: u32) -> BiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.t == i)
            .map(|&(m, c)| (Monomial::new(0, m.th), c))
            .collect();
        BiPoly { field: self.field.clone(), terms }
    }

    /// Leading term in (t, θ)-lexicographic order.
    pub fn leading_term(&self) -> Option<(Monomial, FqElem)> {
        self.terms.last().copied()
    }

    pub fn scale(&self, c: FqElem) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero(&self.field);
        }
        let f = &self.field;
        let terms = self.terms.iter().map(|&(m, x)| (m, f.mul(x, c))).collect();
        BiPoly { field: f.clone(), terms }
    }

    pub fn mul_monomial(&self, t: u32, th: u32) -> BiPoly {
        let terms = self.terms.iter().map(|&(m, c)| (Monomial::new(m.t + t, m.th + th), c)).collect();
        BiPoly { field: self.field.clone(), terms }
    }

    pub fn pow(&self, mut n: u64) -> BiPoly {
        let mut acc = BiPoly::one(&self.field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn map_monomials(&self, f: impl Fn(Monomial) -> Monomial, keeps_order: bool) -> BiPoly {
        let terms: Vec<_> = self.terms.iter().map(|&(m, c)| (f(m), c)).collect();
        if keeps_order {
            BiPoly { field: self.field.clone(), terms }
        } else {
            BiPoly::from_terms(&self.field, terms)
        }
    }

    /// χ: t ↦ t^q. Coefficients are fixed since x^q = x on F_q.
    pub fn frobenius_t(&self) -> BiPoly {
        let q = self.field.q();
        self.map_monomials(|m| Monomial::new(m.t.checked_mul(q).expect("t-degree overflow"), m.th), true)
    }

    /// τ on coefficients: θ ↦ θ^q.
    pub fn frobenius_theta(&self) -> BiPoly {
        self.frobenius_theta_n(1)
    }

    /// θ ↦ θ^{q^n}.
    pub fn frobenius_theta_n(&self, n: u32) -> BiPoly {
        if n == 0 {
            return self.clone();
        }
        let s = (self.field.q() as u64).pow(n);
        let s = u32::try_from(s).expect("θ-degree overflow");
        self.map_monomials(|m| Monomial::new(m.t, m.th.checked_mul(s).expect("θ-degree overflow")), true)
    }

    /// t ↦ t^{q^n}.
    pub fn frobenius_t_n(&self, n: u32) -> BiPoly {
        if n == 0 {
            return self.clone();
        }
        let s = u32::try_from((self.field.q() as u64).pow(n)).expect("t-degree overflow");
        self.map_monomials(|m| Monomial::new(m.t.checked_mul(s).expect("t-degree overflow"), m.th), true)
    }

    /// The substitution t ↦ θ. The result is t-free.
    pub fn specialize_t(&self) -> BiPoly {
        self.map_monomials(|m| Monomial::new(0, m.t + m.th), false)
    }

    /// Exact quotient `self / d` in F_q[t, θ].
    ///
    /// `d` must be monic in its leading variable: if `d` involves `t`, the coefficient
    /// of its top power of `t` must be a nonzero constant; a t-free `d` is always
    /// accepted. A nonzero remainder is returned as [`Error::NonExactDivision`].
    pub fn exact_div(&self, d: &BiPoly) -> Result<BiPoly> {
        let (quot, rem) = self.div_rem(d)?;
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(Error::NonExactDivision { remainder: rem })
        }
    }

    /// Division with remainder in the leading variable of `d`.
    pub fn div_rem(&self, d: &BiPoly) -> Result<(BiPoly, BiPoly)> {
        if !self.field.same(&d.field) {
            return Err(Error::FieldMismatch);
        }
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        if self.is_zero() {
            return Ok((BiPoly::zero(f), BiPoly::zero(f)));
        }
        let mt = d.deg_t().unwrap();
        if mt > 0 {
            let lead = d.t_coeff(mt);
            let lc = lead
                .constant_value()
                .filter(|c| !c.is_zero())
                .ok_or_else(|| Error::NotMonic(d.to_string()))?;
            Ok(self.div_rem_t(d, mt, f.inv(lc).unwrap()))
        } else {
            Ok(self.div_rem_theta(d))
        }
    }

    fn rows(&self) -> Vec<Vec<FqElem>> {
        let nt = self.deg_t().map_or(0, |d| d as usize + 1);
        let mut rows: Vec<Vec<FqElem>> = vec![Vec::new(); nt];
        for &(m, c) in &self.terms {
            let row = &mut rows[m.t as usize];
            let j = m.th as usize;
            if row.len() <= j {
                row.resize(j + 1, FqElem::ZERO);
            }
            row[j] = c;
        }
        rows
    }

    fn from_rows(field: &Field, rows: &[Vec<FqElem>]) -> BiPoly {
        let mut terms = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if !c.is_zero() {
                    terms.push((Monomial::new(i as u32, j as u32), c));
                }
            }
        }
        BiPoly { field: field.clone(), terms }
    }

    fn div_rem_t(&self, d: &BiPoly, mt: u32, lc_inv: FqElem) -> (BiPoly, BiPoly) {
        let f = &self.field;
        let mut rows = self.rows();
        let top = rows.len() - 1;
        let mt = mt as usize;
        let lower: Vec<(Monomial, FqElem)> = d.terms.iter().filter(|(m, _)| m.t as usize != mt).copied().collect();
        let mut quot: Vec<(Monomial, FqElem)> = Vec::new();
        if top >= mt {
            for i in (mt..=top).rev() {
                let row = std::mem::take(&mut rows[i]);
                for (b, &c) in row.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let qc = f.mul(c, lc_inv);
                    quot.push((Monomial::new((i - mt) as u32, b as u32), qc));
                    for &(m, dc) in &lower {
                        let r = i - mt + m.t as usize;
                        let col = b + m.th as usize;
                        let target = &mut rows[r];
                        if target.len() <= col {
                            target.resize(col + 1, FqElem::ZERO);
                        }
                        target[col] = f.sub(target[col], f.mul(qc, dc));
                    }
                }
            }
        }
        rows.truncate(mt.min(rows.len()));
        (BiPoly::from_terms(f, quot), BiPoly::from_rows(f, &rows))
    }

    fn div_rem_theta(&self, d: &BiPoly) -> (BiPoly, BiPoly) {
        let f = &self.field;
        let (lead, lc) = d.leading_term().unwrap();
        let m = lead.th as usize;
        let lc_inv = f.inv(lc).unwrap();
        let lower: Vec<(usize, FqElem)> =
            d.terms.iter().filter(|(mm, _)| mm.th as usize != m).map(|&(mm, c)| (mm.th as usize, c)).collect();
        let mut rows = self.rows();
        let mut quot = Vec::new();
        for (i, row) in rows.iter_mut().enumerate() {
            if row.len() <= m {
                continue;
            }
            for b in (m..row.len()).rev() {
                let c = row[b];
                if c.is_zero() {
                    continue;
                }
                let qc = f.mul(c, lc_inv);
                quot.push((Monomial::new(i as u32, (b - m) as u32), qc));
                row[b] = FqElem::ZERO;
                for &(j, dc) in &lower {
                    let col = b - m + j;
                    row[col] = f.sub(row[col], f.mul(qc, dc));
                }
            }
            row.truncate(m);
        }
        (BiPoly::from_terms(f, quot), BiPoly::from_rows(f, &rows))
    }

    /// Evaluates at `t = a`, `θ = b` for a, b in F_q.
    pub fn eval(&self, a: FqElem, b: FqElem) -> FqElem {
        let f = &self.field;
        let q = f.q() as u64 - 1;
        let pw = |x: FqElem, n: u32| -> FqElem {
            if n == 0 {
                FqElem::ONE
            } else if x.is_zero() {
                FqElem::ZERO
            } else {
                // x^(q-1) = 1 for nonzero x
                f.pow(x, ((n as u64 - 1) % q) + 1)
            }
        };
        self.terms
            .iter()
            .fold(FqElem::ZERO, |acc, &(m, c)| f.add(acc, f.mul(c, f.mul(pw(a, m.t), pw(b, m.th)))))
    }

    /// Parses the canonical text form, e.g. `t^2*theta + 2*theta^3 + 1`.
    pub fn parse(field: &Field, s: &str) -> Result<BiPoly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        for term in split_top_level(s, '+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in '{s}'")));
            }
            let mut coef = FqElem::ONE;
            let mut mono = Monomial::ONE;
            for factor in split_top_level(term, '*') {
                let fac = factor.trim();
                if fac.starts_with('(') {
                    coef = field.mul(coef, field.parse_elem(fac)?);
                } else if let Some(rest) = fac.strip_prefix("theta") {
                    mono.th += parse_exp(rest, fac)?;
                } else if let Some(rest) = fac.strip_prefix('t') {
                    mono.t += parse_exp(rest, fac)?;
                } else if let Some(rest) = fac.strip_prefix('w') {
                    let e = parse_exp(rest, fac)?;
                    coef = field.mul(coef, field.pow(field.generator(), e as u64));
                    if field.is_prime_field() {
                        return Err(Error::Parse("'w' used over a prime field".into()));
                    }
                } else if let Ok(n) = fac.parse::<u64>() {
                    coef = field.mul(coef, field.from_int((n % field.p() as u64) as i64));
                } else {
                    return Err(Error::Parse(format!("unexpected factor '{fac}'")));
                }
            }
            terms.push((mono, coef));
        }
        Ok(BiPoly::from_terms(field, terms))
    }
}

fn parse_exp(rest: &str, whole: &str) -> Result<u32> {
    if rest.is_empty() {
        return Ok(1);
    }
    rest.strip_prefix('^')
        .and_then(|e| e.trim().parse::<u32>().ok())
        .ok_or_else(|| Error::Parse(format!("bad factor '{whole}'")))
}

pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl PartialEq for BiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.field.same(&other.field)
    }
}
impl Eq for BiPoly {}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl fmt::Display for BiPoly {
    /// Canonical text: monomials `c*t^i*theta^j` sorted by (i, j) descending,
    /// coefficients written as polynomials in `w` with digits in 0..p.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = &self.field;
        for (k, &(m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut var = Vec::new();
            match m.t {
                0 => {}
                1 => var.push("t".to_string()),
                i => var.push(format!("t^{i}")),
            }
            match m.th {
                0 => {}
                1 => var.push("theta".to_string()),
                j => var.push(format!("theta^{j}")),
            }
            let ctext = field.format_elem(c);
            let ctext = if field.elem_term_count(c) > 1 { format!("({ctext})") } else { ctext };
            if var.is_empty() {
                write!(f, "{ctext}")?;
            } else if c == FqElem::ONE {
                write!(f, "{}", var.join("*"))?;
            } else {
                write!(f, "{}*{}", ctext, var.join("*"))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Arithmetic

fn merge(a: &BiPoly, b: &BiPoly, negate_b: bool) -> BiPoly {
    assert!(a.field.same(&b.field), "field mismatch");
    let f = &a.field;
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    let nb = |c: FqElem| if negate_b { f.neg(c) } else { c };
    while i < a.terms.len() && j < b.terms.len() {
        let (ma, ca) = a.terms[i];
        let (mb, cb) = b.terms[j];
        match ma.cmp(&mb) {
            Ordering::Less => {
                out.push((ma, ca));
                i += 1;
            }
            Ordering::Greater => {
                out.push((mb, nb(cb)));
                j += 1;
            }
            Ordering::Equal => {
                let s = f.add(ca, nb(cb));
                if !s.is_zero() {
                    out.push((ma, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a.terms[i..]);
    out.extend(b.terms[j..].iter().map(|&(m, c)| (m, nb(c))));
    BiPoly { field: f.clone(), terms: out }
}

/// Computes `Σ a_i * b_i` with a single accumulation pass.
pub fn sum_of_products(field: &Field, pairs: &[(&BiPoly, &BiPoly)]) -> BiPoly {
    let mut max_t = 0u32;
    let mut max_th = 0u32;
    let mut work = 0usize;
    let mut any = false;
    for (a, b) in pairs {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        any = true;
        max_t = max_t.max(a.deg_t().unwrap() + b.deg_t().unwrap());
        max_th = max_th.max(a.deg_theta().unwrap() + b.deg_theta().unwrap());
        work += a.len() * b.len();
    }
    if !any {
        return BiPoly::zero(field);
    }
    let box_size = (max_t as usize + 1) * (max_th as usize + 1);
    if box_size <= 4 * work + 256 {
        dense_products(field, pairs, max_t, max_th)
    } else {
        sparse_products(field, pairs)
    }
}

fn dense_products(field: &Field, pairs: &[(&BiPoly, &BiPoly)], max_t: u32, max_th: u32) -> BiPoly {
    let width = max_th as usize + 1;
    let size = (max_t as usize + 1) * width;
    let mut terms = Vec::new();
    if field.is_prime_field() {
        let p = field.p() as u64;
        let mut buf = vec![0u64; size];
        let mut pending: u64 = 0;
        for (a, b) in pairs {
            for &(ma, ca) in &a.terms {
                let ca = ca.0 as u64;
                let base = ma.t as usize * width + ma.th as usize;
                for &(mb, cb) in &b.terms {
                    buf[base + mb.t as usize * width + mb.th as usize] += ca * cb.0 as u64;
                }
                pending += b.terms.len() as u64;
                if pending > (1u64 << 31) {
                    buf.iter_mut().for_each(|x| *x %= p);
                    pending = 0;
                }
            }
        }
        for (idx, &v) in buf.iter().enumerate() {
            let r = (v % p) as u32;
            if r != 0 {
                terms.push((Monomial::new((idx / width) as u32, (idx % width) as u32), FqElem(r)));
            }
        }
    } else {
        let mut buf = vec![FqElem::ZERO; size];
        for (a, b) in pairs {
            for &(ma, ca) in &a.terms {
                let base = ma.t as usize * width + ma.th as usize;
                for &(mb, cb) in &b.terms {
                    let k = base + mb.t as usize * width + mb.th as usize;
                    buf[k] = field.add(buf[k], field.mul(ca, cb));
                }
            }
        }
        for (idx, &v) in buf.iter().enumerate() {
            if !v.is_zero() {
                terms.push((Monomial::new((idx / width) as u32, (idx % width) as u32), v));
            }
        }
    }
    BiPoly { field: field.clone(), terms }
}

fn sparse_products(field: &Field, pairs: &[(&BiPoly, &BiPoly)]) -> BiPoly {
    let mut prods: Vec<(Monomial, FqElem)> = Vec::new();
    for (a, b) in pairs {
        for &(ma, ca) in &a.terms {
            for &(mb, cb) in &b.terms {
                prods.push((Monomial::new(ma.t + mb.t, ma.th + mb.th), field.mul(ca, cb)));
            }
        }
    }
    BiPoly::from_terms(field, prods)
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &'a BiPoly) -> BiPoly {
        merge(self, rhs, false)
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &'a BiPoly) -> BiPoly {
        merge(self, rhs, true)
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &'a BiPoly) -> BiPoly {
        assert!(self.field.same(&rhs.field), "field mismatch");
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero(&self.field);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(c);
        }
        sum_of_products(&self.field, &[(self, rhs)])
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        let f = &self.field;
        let terms = self.terms.iter().map(|&(m, c)| (m, f.neg(c))).collect();
        BiPoly { field: f.clone(), terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: BiPoly) -> BiPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: &'a BiPoly) -> BiPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}
