//! Truncated Laurent series in `u` with coefficients in F_q[t, θ].
//!
//! A series knows its coefficients for every exponent below `precision`. Products
//! follow `prec(ab) = min(prec(a) + val(b), prec(b) + val(a))`, sums take the minimum,
//! and the twist τ (u ↦ u^q, θ ↦ θ^q) maps precision `P` to `qP - (q - 1)`.
//! Exact objects (polynomials in `u`) carry the precision [`EXACT`].

use std::fmt;

use rayon::prelude::*;

use crate::algebra::{sum_of_products, BiPoly, Field, FqElem};
use crate::error::{Error, Result};

/// Precision marker for series known exactly (finitely many terms, no truncation).
pub const EXACT: i64 = i64::MAX / 8;

#[inline]
fn padd(p: i64, v: i64) -> i64 {
    if p >= EXACT {
        EXACT
    } else {
        (p + v).min(EXACT)
    }
}

#[inline]
fn pscale(p: i64, s: i64) -> i64 {
    // s * (p - 1) + 1, saturating to EXACT
    if p >= EXACT {
        return EXACT;
    }
    match (p - 1).checked_mul(s) {
        Some(x) if x < EXACT => x + 1,
        _ => EXACT,
    }
}

/// Outputs below this count are multiplied sequentially.
const PAR_THRESHOLD: usize = 32;

#[derive(Clone)]
pub struct USeries {
    field: Field,
    /// Exponent of `coeffs[0]`; equals `precision` when the series is zero to precision.
    valuation: i64,
    precision: i64,
    /// `coeffs[k]` is the coefficient of `u^{valuation + k}`. Trailing zeros are trimmed;
    /// `coeffs[0]` is nonzero unless `zero` is set.
    coeffs: Vec<BiPoly>,
    /// All coefficients below `precision` are known to vanish.
    zero: bool,
}

impl USeries {
    /// Builds a series from a dense run of coefficients starting at exponent `start`.
    pub fn from_coeffs(field: &Field, start: i64, precision: i64, mut coeffs: Vec<BiPoly>) -> Self {
        let keep = (precision - start).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        while coeffs.last().is_some_and(BiPoly::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => USeries::zero(field, precision),
            Some(k) => {
                coeffs.drain(..k);
                USeries { field: field.clone(), valuation: start + k as i64, precision, coeffs, zero: false }
            }
        }
    }

    /// Builds a series from sparse `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I>(field: &Field, precision: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BiPoly)>,
    {
        let mut terms: Vec<(i64, BiPoly)> = terms.into_iter().filter(|(n, c)| *n < precision && !c.is_zero()).collect();
        if terms.is_empty() {
            return USeries::zero(field, precision);
        }
        terms.sort_by_key(|(n, _)| *n);
        let lo = terms[0].0;
        let hi = terms.last().unwrap().0;
        let mut coeffs = vec![BiPoly::zero(field); (hi - lo + 1) as usize];
        for (n, c) in terms {
            let slot = &mut coeffs[(n - lo) as usize];
            *slot = &*slot + &c;
        }
        USeries::from_coeffs(field, lo, precision, coeffs)
    }

    pub fn zero(field: &Field, precision: i64) -> Self {
        USeries { field: field.clone(), valuation: precision, precision, coeffs: Vec::new(), zero: true }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(BiPoly::one(field))
    }

    /// `c` as an exact series.
    pub fn constant(c: BiPoly) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * u^n`, exact.
    pub fn monomial(c: BiPoly, n: i64) -> Self {
        let field = c.field().clone();
        USeries::from_coeffs(&field, n, EXACT, vec![c])
    }

    /// The parameter `u`.
    pub fn u(field: &Field) -> Self {
        Self::monomial(BiPoly::one(field), 1)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    #[inline]
    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision >= EXACT
    }

    #[inline]
    pub fn is_zero_to_precision(&self) -> bool {
        self.zero
    }

    /// Lower bound for the valuation: the valuation itself, or the precision for a zero series.
    #[inline]
    pub fn valuation_bound(&self) -> i64 {
        self.valuation
    }

    pub fn valuation(&self) -> Result<i64> {
        if self.zero {
            Err(Error::ZeroSeries(self.precision))
        } else {
            Ok(self.valuation)
        }
    }

    pub fn leading(&self) -> Result<&BiPoly> {
        if self.zero {
            Err(Error::ZeroSeries(self.precision))
        } else {
            Ok(&self.coeffs[0])
        }
    }

    /// Coefficient of `u^n`. Panics if `n` is at or beyond the precision.
    pub fn coeff(&self, n: i64) -> BiPoly {
        assert!(n < self.precision, "coefficient u^{n} is beyond precision {}", self.precision);
        self.get(n).cloned().unwrap_or_else(|| BiPoly::zero(&self.field))
    }

    /// Stored coefficient of `u^n`, if nonzero and known.
    pub fn get(&self, n: i64) -> Option<&BiPoly> {
        if self.zero || n < self.valuation || n >= self.precision {
            return None;
        }
        self.coeffs.get((n - self.valuation) as usize).filter(|c| !c.is_zero())
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BiPoly)> {
        let v = self.valuation;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (v + k as i64, c))
    }

    /// Largest exponent with a stored nonzero coefficient.
    pub fn last_exponent(&self) -> Option<i64> {
        if self.zero {
            None
        } else {
            Some(self.valuation + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn truncate(&self, precision: i64) -> USeries {
        if precision >= self.precision {
            return self.clone();
        }
        if self.zero {
            return USeries::zero(&self.field, precision);
        }
        USeries::from_coeffs(&self.field, self.valuation, precision, self.coeffs.clone())
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, k: i64) -> USeries {
        let mut out = self.clone();
        out.valuation += k;
        out.precision = padd(self.precision, k);
        out
    }

    /// Applies a coefficient map that fixes exponents (for example t ↦ θ, or χ).
    pub fn map_coeffs(&self, f: impl Fn(&BiPoly) -> BiPoly + Sync) -> USeries {
        if self.zero {
            return self.clone();
        }
        let coeffs: Vec<BiPoly> = if self.coeffs.len() > PAR_THRESHOLD {
            self.coeffs.par_iter().map(&f).collect()
        } else {
            self.coeffs.iter().map(&f).collect()
        };
        USeries::from_coeffs(&self.field, self.valuation, self.precision, coeffs)
    }

    /// Fallible variant of [`USeries::map_coeffs`]; the closure receives the exponent.
    pub fn try_map_coeffs(&self, f: impl Fn(i64, &BiPoly) -> Result<BiPoly> + Sync) -> Result<USeries> {
        if self.zero {
            return Ok(self.clone());
        }
        let v = self.valuation;
        let coeffs: Result<Vec<BiPoly>> =
            self.coeffs.par_iter().enumerate().with_min_len(PAR_THRESHOLD).map(|(k, c)| f(v + k as i64, c)).collect();
        Ok(USeries::from_coeffs(&self.field, self.valuation, self.precision, coeffs?))
    }

    pub fn neg(&self) -> USeries {
        if self.zero {
            return self.clone();
        }
        USeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), ..self.clone() }
    }

    fn combine(&self, other: &USeries, negate: bool) -> USeries {
        assert!(self.field.same(&other.field), "field mismatch");
        let prec = self.precision.min(other.precision);
        let mut terms: Vec<(i64, BiPoly)> = Vec::new();
        terms.extend(self.terms().map(|(n, c)| (n, c.clone())));
        terms.extend(other.terms().map(|(n, c)| (n, if negate { -c } else { c.clone() })));
        USeries::from_terms(&self.field, prec, terms)
    }

    pub fn add(&self, other: &USeries) -> USeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &USeries) -> USeries {
        self.combine(other, true)
    }

    pub fn scale(&self, c: &BiPoly) -> USeries {
        if c.is_zero() {
            return USeries::zero(&self.field, self.precision);
        }
        self.map_coeffs(|x| x * c)
    }

    pub fn mul(&self, other: &USeries) -> USeries {
        assert!(self.field.same(&other.field), "field mismatch");
        let (va, vb) = (self.valuation, other.valuation);
        let prec = padd(self.precision, vb).min(padd(other.precision, va));
        if self.zero || other.zero {
            return USeries::zero(&self.field, prec);
        }
        let lo = va + vb;
        let hi = (self.last_exponent().unwrap() + other.last_exponent().unwrap() + 1).min(prec);
        if hi <= lo {
            return USeries::zero(&self.field, prec);
        }
        let a_nz: Vec<(i64, &BiPoly)> = self.terms().collect();
        let b = &other.coeffs;
        let field = &self.field;
        let coeff_at = |n: i64| -> BiPoly {
            let pairs: Vec<(&BiPoly, &BiPoly)> = a_nz
                .iter()
                .take_while(|(i, _)| n - *i >= vb)
                .filter_map(|&(i, ai)| {
                    let j = (n - i - vb) as usize;
                    b.get(j).filter(|c| !c.is_zero()).map(|bj| (ai, bj))
                })
                .collect();
            sum_of_products(field, &pairs)
        };
        let count = (hi - lo) as usize;
        let coeffs: Vec<BiPoly> = if count > PAR_THRESHOLD {
            (0..count).into_par_iter().with_min_len(4).map(|k| coeff_at(lo + k as i64)).collect()
        } else {
            (lo..hi).map(coeff_at).collect()
        };
        USeries::from_coeffs(field, lo, prec, coeffs)
    }

    /// `self^n` by binary exponentiation, `n >= 0`.
    pub fn pow(&self, mut n: u64) -> USeries {
        let mut acc = USeries::one(&self.field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse. The leading coefficient must be a nonzero constant.
    pub fn inv(&self) -> Result<USeries> {
        if self.zero {
            return Err(Error::ZeroSeries(self.precision));
        }
        if self.is_exact() {
            return Err(Error::UnboundedPrecision);
        }
        let field = &self.field;
        let lead = self.coeffs[0]
            .constant_value()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::NonUnitLeadingCoefficient(self.coeffs[0].to_string()))?;
        let lead_inv = field.inv(lead).unwrap();
        let neg_inv = BiPoly::constant(field, field.neg(lead_inv));
        let v = self.valuation;
        let out_prec = self.precision - 2 * v;
        let count = (self.precision - v).max(0) as usize;
        let a_nz: Vec<(usize, &BiPoly)> =
            self.coeffs.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
        let mut r: Vec<BiPoly> = Vec::with_capacity(count);
        for n in 0..count {
            if n == 0 {
                r.push(BiPoly::constant(field, lead_inv));
                continue;
            }
            let pairs: Vec<(&BiPoly, &BiPoly)> =
                a_nz.iter().take_while(|(i, _)| *i <= n).map(|&(i, ai)| (ai, &r[n - i])).collect();
            let s = sum_of_products(field, &pairs);
            r.push(&s * &neg_inv);
        }
        Ok(USeries::from_coeffs(field, -v, out_prec, r))
    }

    /// `self / other` as `self * other^{-1}`.
    pub fn div(&self, other: &USeries) -> Result<USeries> {
        Ok(self.mul(&other.inv()?))
    }

    /// τ: u ↦ u^q, θ ↦ θ^q.
    pub fn tau(&self) -> USeries {
        self.tau_pow(1, EXACT)
    }

    /// τ^n, keeping only exponents below `cap`.
    pub fn tau_pow(&self, n: u32, cap: i64) -> USeries {
        if n == 0 {
            return self.truncate(cap);
        }
        let s = (self.q() as i64).pow(n);
        let prec = pscale(self.precision, s).min(cap);
        if self.zero {
            return USeries::zero(&self.field, prec);
        }
        let terms: Vec<(i64, BiPoly)> = self
            .terms()
            .take_while(|(e, _)| e.checked_mul(s).is_some_and(|x| x < prec))
            .map(|(e, c)| (e * s, c.frobenius_theta_n(n)))
            .collect();
        USeries::from_terms(&self.field, prec, terms)
    }

    /// χ: t ↦ t^q on every coefficient.
    pub fn chi(&self) -> USeries {
        self.map_coeffs(BiPoly::frobenius_t)
    }

    pub fn chi_pow(&self, n: u32) -> USeries {
        self.map_coeffs(|c| c.frobenius_t_n(n))
    }

    /// Frobenius (q-th power) F = χτ.
    pub fn frobenius(&self) -> USeries {
        self.tau().chi()
    }

    /// t ↦ θ on every coefficient.
    pub fn specialize_t(&self) -> USeries {
        self.map_coeffs(BiPoly::specialize_t)
    }

    /// Divides every coefficient exactly by `d`.
    pub fn exact_div_scalar(&self, d: &BiPoly) -> Result<USeries> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.try_map_coeffs(|n, c| {
            c.exact_div(d).map_err(|e| match e {
                Error::NonExactDivision { remainder } => Error::NonExactCoefficient { exponent: n, remainder },
                other => other,
            })
        })
    }

    /// True when every nonzero exponent is divisible by `q - 1`.
    pub fn in_v_lattice(&self) -> bool {
        let m = self.q() as i64 - 1;
        self.terms().all(|(n, _)| n.rem_euclid(m) == 0)
    }

    pub fn is_t_free(&self) -> bool {
        self.terms().all(|(_, c)| c.is_t_free())
    }

    /// Lowest exponent (below the common precision) where the two series differ.
    pub fn first_difference(&self, other: &USeries) -> Option<i64> {
        self.sub(other).valuation().ok()
    }

    /// Equality up to the smaller of the two precisions.
    pub fn agrees_with(&self, other: &USeries) -> bool {
        self.first_difference(other).is_none()
    }

    /// The constant `c` of F_q as an exact series.
    pub fn from_fq(field: &Field, c: FqElem) -> USeries {
        USeries::constant(BiPoly::constant(field, c))
    }
}

/// Runs `f` at increasing base precision until its result reaches `target`, then truncates.
///
/// The output does not depend on where the loop stops, so callers may cache freely.
pub fn with_precision(target: i64, mut f: impl FnMut(i64) -> Result<USeries>) -> Result<USeries> {
    let mut base = target;
    for _ in 0..16 {
        let s = f(base)?;
        if s.precision() >= target {
            return Ok(s.truncate(target));
        }
        base += 2 * (target - s.precision()).max(1);
    }
    Err(Error::InsufficientPrecision(format!("could not reach precision {target}")))
}

impl PartialEq for USeries {
    /// Structural equality: same precision and same coefficients.
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field)
            && self.precision == other.precision
            && self.zero == other.zero
            && self.valuation == other.valuation
            && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "USeries({self})")
    }
}

impl fmt::Display for USeries {
    /// `c*u^n + ... + O(u^P)`, with multi-term coefficients parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (n, c) in self.terms() {
            let ctext = c.to_string();
            let ctext = if c.len() > 1 { format!("({ctext})") } else { ctext };
            let upart = match n {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{n}"),
            };
            parts.push(match (upart.is_empty(), c.is_one()) {
                (true, _) => ctext,
                (false, true) => upart,
                (false, false) => format!("{ctext}*{upart}"),
            });
        }
        if !self.is_exact() {
            parts.push(format!("O(u^{})", self.precision));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn bp(f: &Field, s: &str) -> BiPoly {
        BiPoly::parse(f, s).unwrap()
    }

    fn series(f: &Field, prec: i64, terms: &[(i64, &str)]) -> USeries {
        USeries::from_terms(f, prec, terms.iter().map(|&(n, s)| (n, bp(f, s))))
    }

    #[test]
    fn mul_identity() {
        let f = f3();
        let a = series(&f, EXACT, &[(1, "1"), (2, "1")]);
        assert_eq!(a.mul(&USeries::one(&f)), a);
    }

    #[test]
    fn precision_rules() {
        let f = f3();
        let a = series(&f, 10, &[(2, "1"), (3, "theta")]);
        let b = series(&f, 7, &[(1, "t")]);
        assert_eq!(a.mul(&b).precision(), 9); // min(10 + 1, 7 + 2)
        assert_eq!(a.add(&b).precision(), 7);
        assert_eq!(a.tau().precision(), 3 * 10 - 2);
        assert_eq!(a.tau().valuation().unwrap(), 6);
    }

    #[test]
    fn geometric_inverse() {
        let f = f3();
        let a = series(&f, 10, &[(0, "1"), (1, "2")]); // 1 - u
        let inv = a.inv().unwrap();
        assert_eq!(inv.precision(), 10);
        for n in 0..10 {
            assert!(inv.coeff(n).is_one());
        }
        assert!(a.mul(&inv).sub(&USeries::one(&f)).is_zero_to_precision());
    }

    #[test]
    fn inverse_of_laurent_leading() {
        let f = f3();
        let a = series(&f, 12, &[(2, "2"), (4, "theta"), (5, "t")]);
        let inv = a.inv().unwrap();
        assert_eq!(inv.valuation().unwrap(), -2);
        assert_eq!(inv.precision(), 8);
        assert_eq!(inv.leading().unwrap(), &bp(&f, "2"));
        let prod = a.mul(&inv);
        assert!(prod.sub(&USeries::one(&f)).is_zero_to_precision());
    }

    #[test]
    fn inverse_requires_unit() {
        let f = f3();
        let a = series(&f, 10, &[(0, "theta"), (1, "1")]);
        assert!(matches!(a.inv(), Err(Error::NonUnitLeadingCoefficient(_))));
    }

    #[test]
    fn twists() {
        let f = f3();
        assert_eq!(USeries::u(&f).tau(), USeries::monomial(BiPoly::one(&f), 3));
        let a = series(&f, EXACT, &[(1, "t + 2*theta")]);
        assert_eq!(a.tau(), series(&f, EXACT, &[(3, "t + 2*theta^3")]));
        assert_eq!(a.chi(), series(&f, EXACT, &[(1, "t^3 + 2*theta")]));
        assert_eq!(USeries::u(&f).chi(), USeries::u(&f));
    }

    #[test]
    fn scalar_division() {
        let f = f3();
        let br = bp(&f, "theta^3 + 2*theta");
        let a = series(&f, 5, &[(1, "theta^3 + 2*theta")]);
        assert_eq!(a.exact_div_scalar(&br).unwrap(), series(&f, 5, &[(1, "1")]));
        let b = series(&f, 5, &[(1, "1"), (2, "theta")]);
        match b.exact_div_scalar(&bp(&f, "theta")) {
            Err(Error::NonExactCoefficient { exponent, .. }) => assert_eq!(exponent, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn accessors_on_zero() {
        let f = f3();
        let z = USeries::zero(&f, 8);
        assert!(z.leading().is_err());
        assert!(z.valuation().is_err());
        assert!(z.is_zero_to_precision());
        assert_eq!(z.to_string(), "O(u^8)");
    }

    #[test]
    fn text_form() {
        let f = f3();
        let a = series(&f, 9, &[(1, "1"), (5, "1"), (7, "2*theta"), (8, "t + theta")]);
        assert_eq!(a.to_string(), "u + u^5 + 2*theta*u^7 + (t + theta)*u^8 + O(u^9)");
    }
}
