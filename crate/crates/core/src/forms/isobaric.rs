//! Isobaric polynomials in E, g, h with coefficients in F_q(θ).

use std::fmt;

use crate::algebra::{bracket, make_monic, theta_gcd, BiPoly, Field};
use crate::carlitz::Generators;
use crate::error::{Error, Result};
use crate::series::USeries;

use super::meta::Exps;

/// A reduced fraction num/den of t-free polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct Frac {
    pub num: BiPoly,
    pub den: BiPoly,
}

impl Frac {
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Frac> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Frac { den: BiPoly::one(num.field()), num });
        }
        let g = theta_gcd(&num, &den);
        let num = num.exact_div(&g)?;
        let den = den.exact_div(&g)?;
        let (_, lead) = den.leading_term().unwrap();
        let inv = den.field().inv(lead).unwrap();
        Ok(Frac { num: num.scale(inv), den: den.scale(inv) })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

/// Splits a monic t-free polynomial into bracket powers and a leftover factor.
///
/// Larger brackets are removed first, so [2] is preferred over [1]·([2]/[1]).
pub fn bracket_factorization(den: &BiPoly) -> (Vec<(u32, u32)>, BiPoly) {
    let field = den.field();
    let q = field.q() as u64;
    let deg = den.deg_theta().unwrap_or(0) as u64;
    let mut jmax = 0;
    while q.pow(jmax + 1) <= deg {
        jmax += 1;
    }
    let mut rest = den.clone();
    let mut out = Vec::new();
    for j in (1..=jmax).rev() {
        let b = bracket(field, j as i64).unwrap();
        let b = make_monic(&b);
        let mut e = 0;
        while let Ok(quot) = rest.exact_div(&b) {
            rest = quot;
            e += 1;
        }
        if e > 0 {
            out.push((j, e));
        }
    }
    out.sort();
    (out, rest)
}

fn den_text(den: &BiPoly) -> String {
    let (brackets, rest) = bracket_factorization(den);
    let mut parts: Vec<String> =
        brackets.iter().map(|&(j, e)| if e == 1 { format!("[{j}]") } else { format!("[{j}]^{e}") }).collect();
    if !rest.is_one() {
        parts.push(format!("({rest})"));
    }
    parts.join("*")
}

fn monomial_text((a, b, c): Exps) -> String {
    let mut parts = Vec::new();
    for (sym, e) in [("E", a), ("g", b), ("h", c)] {
        match e {
            0 => {}
            1 => parts.push(sym.to_string()),
            _ => parts.push(format!("{sym}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Σ coeff · E^a g^b h^c, terms kept in decreasing (a, b, c) order.
#[derive(Clone, Debug, PartialEq)]
pub struct IsobaricPoly {
    field: Field,
    terms: Vec<(Exps, Frac)>,
}

impl IsobaricPoly {
    pub fn new(field: &Field, terms: Vec<(Exps, Frac)>) -> Self {
        let mut terms: Vec<(Exps, Frac)> = terms.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        IsobaricPoly { field: field.clone(), terms }
    }

    pub fn terms(&self) -> &[(Exps, Frac)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree in E.
    pub fn depth(&self) -> Option<u32> {
        self.terms.iter().map(|((a, _, _), _)| *a).max()
    }

    /// The monic least common denominator of all coefficients.
    pub fn common_denominator(&self) -> BiPoly {
        self.terms.iter().fold(BiPoly::one(&self.field), |acc, (_, f)| {
            let g = theta_gcd(&acc, &f.den);
            &acc * &f.den.exact_div(&g).unwrap()
        })
    }

    /// (L·P(E, g, h), L) with L the common denominator, as a series below the generators' precision.
    pub fn eval_scaled(&self, gens: &Generators) -> (USeries, BiPoly) {
        let l = self.common_denominator();
        let mut acc = USeries::zero(&self.field, gens.precision);
        for &((a, b, c), ref f) in &self.terms {
            let scale = &f.num * &l.exact_div(&f.den).unwrap();
            let mono = monomial_series(gens, (a, b, c));
            acc = acc.add(&mono.scale(&scale));
        }
        (acc, l)
    }

    /// P(E, g, h), provided the result has polynomial coefficients.
    pub fn eval(&self, gens: &Generators) -> Result<USeries> {
        let (s, l) = self.eval_scaled(gens);
        s.exact_div_scalar(&l)
    }
}

/// E^a g^b h^c below the generators' precision.
pub fn monomial_series(gens: &Generators, (a, b, c): Exps) -> USeries {
    let p = gens.precision;
    gens.e.pow(a as u64).truncate(p).mul(&gens.g.pow(b as u64).truncate(p)).mul(&gens.h.pow(c as u64).truncate(p)).truncate(p)
}

impl fmt::Display for IsobaricPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let minus_one = BiPoly::from_int(&self.field, -1);
        let negatable = self.field.p() != 2;
        for (i, (exps, frac)) in self.terms.iter().enumerate() {
            let mono = monomial_text(*exps);
            let (neg, num) = if negatable && frac.num.len() == 1 && frac.num.terms()[0].1 == minus_one.terms()[0].1 {
                (true, -&frac.num)
            } else {
                (false, frac.num.clone())
            };
            let coeff = if frac.den.is_one() {
                if num.is_one() {
                    None
                } else if num.len() == 1 {
                    Some(num.to_string())
                } else {
                    Some(format!("({num})"))
                }
            } else {
                let num_text = if num.len() == 1 { num.to_string() } else { format!("({num})") };
                Some(format!("({num_text}/{})", den_text(&frac.den)))
            };
            let body = match (coeff, mono.as_str()) {
                (None, m) => m.to_string(),
                (Some(c), "1") => c,
                (Some(c), m) => format!("{c}*{m}"),
            };
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_convention() {
        let f3 = Field::prime(3).unwrap();
        let b1 = bracket(&f3, 1).unwrap();
        let m1 = BiPoly::from_int(&f3, -1);
        let p = IsobaricPoly::new(
            &f3,
            vec![((0, 0, 1), Frac::new(m1.clone(), b1.clone()).unwrap()), ((1, 1, 0), Frac::new(m1, b1).unwrap())],
        );
        assert_eq!(p.to_string(), "-(1/[1])*E*g - (1/[1])*h");
        assert_eq!(p.depth(), Some(1));
        let h = IsobaricPoly::new(&f3, vec![((0, 0, 1), Frac::new(BiPoly::one(&f3), BiPoly::one(&f3)).unwrap())]);
        assert_eq!(h.to_string(), "h");
    }

    #[test]
    fn fractions_reduce() {
        let f3 = Field::prime(3).unwrap();
        let b1 = bracket(&f3, 1).unwrap();
        let b2 = bracket(&f3, 2).unwrap();
        // θ^3 - θ + 1 is irreducible of degree 3, hence coprime to [2]
        let cubic = BiPoly::parse(&f3, "theta^3 + 2*theta + 1").unwrap();
        let fr = Frac::new(&b1 * &cubic, &b2 * &b1).unwrap();
        assert_eq!(fr.num, cubic);
        assert_eq!(fr.den, b2);
        assert_eq!(den_text(&fr.den), "[2]");
        assert_eq!(den_text(&(&b1 * &b1)), "[1]^2");
    }
}
