//! The Carlitz module, the parameters `u_a`, and the generators E, g, h, Δ.

use rayon::prelude::*;

use crate::algebra::{bracket, BiPoly, Field, FqElem};
use crate::series::USeries;

/// A monic polynomial in A = F_q[θ], coefficients stored lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicPoly {
    coeffs: Vec<FqElem>,
}

impl MonicPoly {
    /// Panics if the top coefficient is not 1.
    pub fn new(coeffs: Vec<FqElem>) -> Self {
        assert_eq!(coeffs.last(), Some(&FqElem::ONE), "monic polynomial must end with 1");
        MonicPoly { coeffs }
    }

    pub fn one() -> Self {
        MonicPoly { coeffs: vec![FqElem::ONE] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn to_bipoly(&self, field: &Field) -> BiPoly {
        BiPoly::from_theta_coeffs(field, &self.coeffs)
    }
}

/// All monic polynomials of degree `d`, lowest coefficient varying fastest.
pub fn monic_enum(field: &Field, d: usize) -> Vec<MonicPoly> {
    let q = field.q() as usize;
    let count = q.pow(d as u32);
    (0..count)
        .map(|mut n| {
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..d {
                coeffs.push(FqElem((n % q) as u32));
                n /= q;
            }
            coeffs.push(FqElem::ONE);
            MonicPoly { coeffs }
        })
        .collect()
}

/// Coefficients of ρ_{θ^i} on the basis x^{q^m}, for i = 0..=max_deg.
fn rho_theta_powers(field: &Field, max_deg: usize) -> Vec<Vec<BiPoly>> {
    let theta = BiPoly::theta(field);
    let mut out = vec![vec![BiPoly::one(field)]];
    for i in 0..max_deg {
        let prev = &out[i];
        let mut next = Vec::with_capacity(prev.len() + 1);
        for m in 0..=prev.len() {
            let mut c = BiPoly::zero(field);
            if m < prev.len() {
                c = &c + &(&theta * &prev[m]);
            }
            if m > 0 {
                c = &c + &prev[m - 1].frobenius_theta();
            }
            next.push(c);
        }
        out.push(next);
    }
    out
}

fn rho_from_powers(field: &Field, powers: &[Vec<BiPoly>], a: &MonicPoly) -> Vec<BiPoly> {
    let mut out = vec![BiPoly::zero(field); a.degree() + 1];
    for (i, &ai) in a.coeffs().iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (m, c) in powers[i].iter().enumerate() {
            out[m] = &out[m] + &c.scale(ai);
        }
    }
    out
}

/// ρ_a as its coefficient list on x, x^q, x^{q^2}, ...
pub fn carlitz_rho(field: &Field, a: &MonicPoly) -> Vec<BiPoly> {
    let powers = rho_theta_powers(field, a.degree());
    rho_from_powers(field, &powers, a)
}

fn u_a_from_rho(field: &Field, rho: &[BiPoly], precision: i64) -> USeries {
    let q = field.q() as i64;
    let d = rho.len() as u32 - 1;
    let top = q.pow(d);
    // P_a(u) = u^{q^d} ρ_a(1/u) = Σ c_m u^{q^d - q^m}
    let terms = rho.iter().enumerate().map(|(m, c)| (top - q.pow(m as u32), c.clone()));
    let pa = USeries::from_terms(field, (precision - top).max(1), terms);
    let inv = pa.inv().expect("P_a has constant term 1");
    inv.shift(top).truncate(precision)
}

/// `u_a = 1 / ρ_a(1/u)` to the given precision.
pub fn u_a(field: &Field, a: &MonicPoly, precision: i64) -> USeries {
    u_a_from_rho(field, &carlitz_rho(field, a), precision)
}

/// Largest degree d with q^d < precision.
fn degree_bound(q: i64, precision: i64) -> Option<usize> {
    if precision <= 1 {
        return None;
    }
    let mut d = 0;
    while q.pow(d as u32 + 1) < precision {
        d += 1;
    }
    Some(d)
}

/// The parameters u_a for every monic a with q^{deg a} below a precision.
#[derive(Clone, Debug)]
pub struct UaTable {
    field: Field,
    precision: i64,
    entries: Vec<(MonicPoly, USeries)>,
}

impl UaTable {
    pub fn new(field: &Field, precision: i64) -> Self {
        let q = field.q() as i64;
        let mut polys = Vec::new();
        if let Some(dmax) = degree_bound(q, precision) {
            for d in 0..=dmax {
                polys.extend(monic_enum(field, d));
            }
        }
        let dmax = polys.last().map_or(0, MonicPoly::degree);
        let powers = rho_theta_powers(field, dmax);
        let entries = polys
            .into_par_iter()
            .map(|a| {
                let rho = rho_from_powers(field, &powers, &a);
                let ua = u_a_from_rho(field, &rho, precision);
                (a, ua)
            })
            .collect();
        UaTable { field: field.clone(), precision, entries }
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn entries(&self) -> &[(MonicPoly, USeries)] {
        &self.entries
    }

    /// Σ_a a^{q^m} u_a.
    pub fn powersum(&self, m: u32) -> USeries {
        let terms: Vec<USeries> = self
            .entries
            .par_iter()
            .map(|(a, ua)| ua.scale(&a.to_bipoly(&self.field).frobenius_theta_n(m)))
            .collect();
        sum_all(&self.field, self.precision, terms)
    }

    /// 1 - [1] Σ_a u_a^{q-1}.
    pub fn eisenstein_g(&self) -> USeries {
        let q = self.field.q() as i64;
        let terms: Vec<USeries> = self
            .entries
            .par_iter()
            .filter(|(a, _)| (q - 1) * q.pow(a.degree() as u32) < self.precision)
            .map(|(_, ua)| ua.pow(q as u64 - 1).truncate(self.precision))
            .collect();
        let sum = sum_all(&self.field, self.precision, terms);
        USeries::one(&self.field).sub(&sum.scale(&bracket(&self.field, 1).unwrap())).truncate(self.precision)
    }
}

fn sum_all(field: &Field, precision: i64, terms: Vec<USeries>) -> USeries {
    terms.iter().fold(USeries::zero(field, precision), |acc, s| acc.add(s))
}

pub fn series_powersum(field: &Field, m: u32, precision: i64) -> USeries {
    UaTable::new(field, precision).powersum(m)
}

pub fn series_e(field: &Field, precision: i64) -> USeries {
    series_powersum(field, 0, precision)
}

pub fn series_h(field: &Field, precision: i64) -> USeries {
    series_powersum(field, 1, precision).neg()
}

pub fn series_g(field: &Field, precision: i64) -> USeries {
    UaTable::new(field, precision).eisenstein_g()
}

pub fn series_delta(field: &Field, precision: i64) -> USeries {
    Generators::new(field, precision).delta
}

/// E, g, h and Δ at a common precision.
#[derive(Clone, Debug)]
pub struct Generators {
    pub field: Field,
    pub precision: i64,
    pub e: USeries,
    pub g: USeries,
    pub h: USeries,
    pub delta: USeries,
}

impl Generators {
    pub fn new(field: &Field, precision: i64) -> Self {
        let table = UaTable::new(field, precision);
        Self::from_table(&table)
    }

    pub fn from_table(table: &UaTable) -> Self {
        let field = &table.field;
        let precision = table.precision;
        let e = table.powersum(0);
        let h = table.powersum(1).neg();
        let g = table.eisenstein_g();
        let q = field.q() as u64;
        let delta = h.pow(q - 1).neg().truncate(precision);
        Generators { field: field.clone(), precision, e, g, h, delta }
    }

    pub fn truncate(&self, precision: i64) -> Generators {
        Generators {
            field: self.field.clone(),
            precision: precision.min(self.precision),
            e: self.e.truncate(precision),
            g: self.g.truncate(precision),
            h: self.h.truncate(precision),
            delta: self.delta.truncate(precision),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::EXACT;

    fn bp(f: &Field, s: &str) -> BiPoly {
        BiPoly::parse(f, s).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(monic_enum(&f3, 0), vec![MonicPoly::one()]);
        let lin: Vec<String> = monic_enum(&f3, 1).iter().map(|a| a.to_bipoly(&f3).to_string()).collect();
        assert_eq!(lin, ["theta", "theta + 1", "theta + 2"]);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(monic_enum(&f2, 2).len(), 4);
        let f4 = Field::with_order(4).unwrap();
        assert_eq!(monic_enum(&f4, 2).len(), 16);
    }

    #[test]
    fn rho_examples() {
        let f3 = Field::prime(3).unwrap();
        let theta = MonicPoly::new(vec![FqElem::ZERO, FqElem::ONE]);
        assert_eq!(carlitz_rho(&f3, &theta), vec![bp(&f3, "theta"), bp(&f3, "1")]);
        // ρ_θ∘ρ_θ(x) = θ(θx + x^3) + (θx + x^3)^3
        let sq = MonicPoly::new(vec![FqElem::ZERO, FqElem::ZERO, FqElem::ONE]);
        assert_eq!(carlitz_rho(&f3, &sq), vec![bp(&f3, "theta^2"), bp(&f3, "theta^3 + theta"), bp(&f3, "1")]);
        assert_eq!(carlitz_rho(&f3, &MonicPoly::one()), vec![bp(&f3, "1")]);
    }

    #[test]
    fn u_theta_geometric() {
        let f3 = Field::prime(3).unwrap();
        let theta = MonicPoly::new(vec![FqElem::ZERO, FqElem::ONE]);
        let ua = u_a(&f3, &theta, 12);
        // u^3 (1 + θu^2)^{-1} = u^3 - θu^5 + θ^2u^7 - θ^3u^9 + θ^4u^11
        let expected = USeries::from_terms(
            &f3,
            12,
            (0..5).map(|i| {
                let c = BiPoly::theta(&f3).pow(i as u64);
                (3 + 2 * i, if i % 2 == 1 { -&c } else { c })
            }),
        );
        assert_eq!(ua, expected);
        assert_eq!(u_a(&f3, &MonicPoly::one(), 12), USeries::u(&f3).truncate(12));
    }

    #[test]
    fn u_a_valuations() {
        let f3 = Field::prime(3).unwrap();
        for d in 0..=2 {
            for a in monic_enum(&f3, d) {
                let ua = u_a(&f3, &a, 40);
                assert_eq!(ua.valuation().unwrap(), 3i64.pow(d as u32));
                assert!(ua.leading().unwrap().is_one());
                assert!(ua.is_t_free());
            }
        }
    }

    #[test]
    fn generator_leading_terms() {
        let f3 = Field::prime(3).unwrap();
        let gens = Generators::new(&f3, 40);
        let e: Vec<i64> = gens.e.terms().map(|(n, _)| n).take(2).collect();
        assert_eq!(e, [1, 5]);
        assert!(gens.e.coeff(5).is_one());
        assert_eq!(gens.h.coeff(1), bp(&f3, "2"));
        assert_eq!(gens.h.coeff(5), bp(&f3, "2"));
        assert!(gens.g.in_v_lattice());
        assert!(!gens.e.in_v_lattice());
        let one_bracket = bracket(&f3, 1).unwrap();
        assert_eq!(gens.g.coeff(2), -&one_bracket);
        // next nonzero exponent of g after u^{q-1} is q^3 - 2q^2 + 2q - 1 = 14
        let g_exps: Vec<i64> = gens.g.terms().map(|(n, _)| n).take(3).collect();
        assert_eq!(g_exps, [0, 2, 14]);
        assert_eq!(gens.g.coeff(14), -&one_bracket);
        assert_eq!(gens.delta.valuation().unwrap(), 2);
        assert_eq!(gens.delta.leading().unwrap(), &bp(&f3, "2"));
        assert_eq!(gens.delta.precision(), 40);
    }

    #[test]
    fn truncation_is_exact() {
        let f2 = Field::prime(2).unwrap();
        let lo = Generators::new(&f2, 33);
        let hi = Generators::new(&f2, 70).truncate(33);
        assert_eq!(lo.e, hi.e);
        assert_eq!(lo.g, hi.g);
        assert_eq!(lo.h, hi.h);
        assert_eq!(lo.delta, hi.delta);
    }

    #[test]
    fn extension_field_generators() {
        let f4 = Field::with_order(4).unwrap();
        let gens = Generators::new(&f4, 30);
        // E = u + u^{q^2-2q+2} + ...
        assert_eq!(gens.e.terms().map(|(n, _)| n).take(2).collect::<Vec<_>>(), [1, 10]);
        assert!(gens.g.in_v_lattice());
        assert_ne!(gens.e.precision(), EXACT);
    }
}
