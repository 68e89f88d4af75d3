//! The deformation series 𝐝 = Σ c_s v^s (v = u^{q-1}) and its companions 𝐄 = -h·τ𝐝, 𝐡 = h·𝐝.

use serde::Serialize;

use crate::algebra::{BiPoly, Field};
use crate::carlitz::Generators;
use crate::check::Witness;
use crate::error::Result;
use crate::series::USeries;

/// Coefficients c_0, ..., c_{S-1} of 𝐝 in the variable v.
#[derive(Clone, Debug, PartialEq)]
pub struct DSeries {
    field: Field,
    coeffs: Vec<BiPoly>,
}

/// Number of v-coefficients needed to know 𝐝 below u-exponent `precision`.
pub fn v_count(q: u32, precision: i64) -> usize {
    let m = q as i64 - 1;
    ((precision + m - 1) / m).max(1) as usize
}

impl DSeries {
    /// Runs the recursion for `count` coefficients; `gens` must reach u-exponent (q-1)(count-1).
    pub fn from_generators(gens: &Generators, count: usize) -> DSeries {
        let field = &gens.field;
        let q = field.q() as usize;
        let m = q as i64 - 1;
        assert!(
            gens.precision > m * (count as i64 - 1),
            "generators at precision {} cannot feed {count} v-coefficients",
            gens.precision
        );
        let gamma: Vec<BiPoly> = (0..count).map(|i| gens.g.coeff(m * i as i64)).collect();
        let delta: Vec<BiPoly> = (0..count).map(|i| gens.delta.coeff(m * i as i64)).collect();
        // t - θ^q
        let shift = &BiPoly::t(field) - &BiPoly::theta(field).frobenius_theta();
        let mut c: Vec<BiPoly> = vec![BiPoly::one(field)];
        let mut tau1: Vec<BiPoly> = vec![BiPoly::one(field)];
        let mut tau2: Vec<BiPoly> = vec![BiPoly::one(field)];
        for s in 1..count {
            let mut first = BiPoly::zero(field);
            for j in 0..=s / q {
                let i = s - j * q;
                if !gamma[i].is_zero() && !tau1[j].is_zero() {
                    first = &first + &(&gamma[i] * &tau1[j]);
                }
            }
            let mut second = BiPoly::zero(field);
            for j in 0..=s / (q * q) {
                let i = s - j * q * q;
                if !delta[i].is_zero() && !tau2[j].is_zero() {
                    second = &second + &(&delta[i] * &tau2[j]);
                }
            }
            let cs = &first + &(&shift * &second);
            tau1.push(cs.frobenius_theta());
            tau2.push(cs.frobenius_theta_n(2));
            c.push(cs);
        }
        DSeries { field: field.clone(), coeffs: c }
    }

    pub fn new(field: &Field, count: usize) -> DSeries {
        let m = field.q() as i64 - 1;
        let gens = Generators::new(field, m * count as i64);
        Self::from_generators(&gens, count)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BiPoly] {
        &self.coeffs
    }

    pub fn c(&self, s: usize) -> &BiPoly {
        &self.coeffs[s]
    }

    /// A copy with c_s replaced; used to probe the sensitivity of the checks.
    pub fn with_coeff(&self, s: usize, value: BiPoly) -> DSeries {
        let mut out = self.clone();
        out.coeffs[s] = value;
        out
    }

    /// 𝐝 as a u-series: v^s becomes u^{(q-1)s}.
    pub fn to_useries(&self) -> USeries {
        let m = self.field.q() as i64 - 1;
        let prec = m * self.coeffs.len() as i64;
        USeries::from_terms(&self.field, prec, self.coeffs.iter().enumerate().map(|(s, c)| (m * s as i64, c.clone())))
    }

    /// deg_t c_s for every stored s, plus the coefficient of t^l at each milestone index.
    pub fn degree_profile(&self) -> DegreeProfile {
        let q = self.field.q() as usize;
        let degrees = self.coeffs.iter().enumerate().map(|(s, c)| (s, c.deg_t())).collect();
        let mut milestones = Vec::new();
        for l in 1.. {
            let s = milestone_index(q, l);
            if s >= self.coeffs.len() {
                break;
            }
            milestones.push(Milestone { l, s, t_coeff: self.coeffs[s].t_coeff(l as u32).to_string() });
        }
        DegreeProfile { degrees, milestones }
    }
}

/// 1 + q^2 + ... + q^{2(l-1)}.
pub fn milestone_index(q: usize, l: usize) -> usize {
    (0..l).map(|i| q.pow(2 * i as u32)).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Milestone {
    pub l: usize,
    pub s: usize,
    /// Coefficient of t^l in c_s, in canonical text form.
    pub t_coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeProfile {
    pub degrees: Vec<(usize, Option<u32>)>,
    pub milestones: Vec<Milestone>,
}

impl DegreeProfile {
    /// deg_t c_s ≤ l whenever s < 1 + q^2 + ... + q^{2l}; returns the first violating s.
    pub fn first_bound_violation(&self, q: usize) -> Option<usize> {
        self.degrees.iter().find_map(|&(s, deg)| {
            let l = (0..).find(|&l| s < milestone_index(q, l + 1)).unwrap();
            deg.filter(|&d| d as usize > l).map(|_| s)
        })
    }
}

pub fn d_series(field: &Field, count: usize) -> DSeries {
    DSeries::new(field, count)
}

pub fn d_as_useries(field: &Field, count: usize) -> USeries {
    DSeries::new(field, count).to_useries()
}

/// Generators, 𝐝, 𝐄 and 𝐡, all known below a common u-precision.
#[derive(Clone, Debug)]
pub struct Deformation {
    pub gens: Generators,
    pub d_coeffs: DSeries,
    pub d: USeries,
    pub e_bold: USeries,
    pub h_bold: USeries,
}

impl Deformation {
    pub fn new(field: &Field, precision: i64) -> Self {
        Self::from_generators(Generators::new(field, precision))
    }

    pub fn from_generators(gens: Generators) -> Self {
        let n = gens.precision;
        let d_coeffs = DSeries::from_generators(&gens, v_count(gens.field.q(), n));
        let d = d_coeffs.to_useries().truncate(n);
        let e_bold = gens.h.mul(&d.tau_pow(1, n)).neg().truncate(n);
        let h_bold = gens.h.mul(&d).truncate(n);
        Deformation { gens, d_coeffs, d, e_bold, h_bold }
    }

    /// The same objects known below a smaller precision.
    pub fn truncate(&self, precision: i64) -> Deformation {
        if precision >= self.precision() {
            return self.clone();
        }
        let count = v_count(self.field().q(), precision);
        Deformation {
            gens: self.gens.truncate(precision),
            d_coeffs: DSeries { field: self.d_coeffs.field.clone(), coeffs: self.d_coeffs.coeffs[..count].to_vec() },
            d: self.d.truncate(precision),
            e_bold: self.e_bold.truncate(precision),
            h_bold: self.h_bold.truncate(precision),
        }
    }

    pub fn field(&self) -> &Field {
        &self.gens.field
    }

    pub fn precision(&self) -> i64 {
        self.gens.precision
    }
}

pub fn e_bold(field: &Field, precision: i64) -> USeries {
    Deformation::new(field, precision).e_bold
}

pub fn h_bold(field: &Field, precision: i64) -> USeries {
    Deformation::new(field, precision).h_bold
}

fn t_minus_theta_pow(field: &Field, n: u32) -> BiPoly {
    &BiPoly::t(field) - &BiPoly::theta(field).frobenius_theta_n(n)
}

/// Left side of (t - θ^q)Δ·τ²X + g·τX - X, below `cap`.
pub fn dd_operator(gens: &Generators, x: &USeries, cap: i64) -> USeries {
    let field = &gens.field;
    let a = gens.delta.mul(&x.tau_pow(2, cap)).scale(&t_minus_theta_pow(field, 1));
    let b = gens.g.mul(&x.tau_pow(1, cap));
    a.add(&b).sub(x).truncate(cap)
}

/// The τ-difference equation on 𝐝.
pub fn check_dd_equation(field: &Field, precision: i64) -> Witness {
    let def = Deformation::new(field, precision);
    Witness::vanishes(&dd_operator(&def.gens, &def.d, precision), precision)
}

/// The τ-difference equation on an arbitrary candidate.
pub fn check_dd_equation_on(gens: &Generators, d: &DSeries, precision: i64) -> Witness {
    Witness::vanishes(&dd_operator(gens, &d.to_useries(), precision), precision)
}

/// (t - θ^{q²})τ²𝐄 = g^q·τ𝐄 + Δ𝐄.
pub fn check_e_equation(field: &Field, precision: i64) -> Witness {
    let def = Deformation::new(field, precision);
    check_e_equation_on(&def, precision)
}

pub fn check_e_equation_on(def: &Deformation, precision: i64) -> Witness {
    let gens = &def.gens;
    let e = &def.e_bold;
    let lhs = e.tau_pow(2, precision).scale(&t_minus_theta_pow(def.field(), 2));
    let rhs = gens.g.tau_pow(1, precision).mul(&e.tau_pow(1, precision)).add(&gens.delta.mul(e));
    Witness::equal(&lhs, &rhs, precision)
}

/// Extra generator precision that absorbs the losses of division by Δ.
pub fn delta_margin(q: u32) -> i64 {
    4 * q as i64
}

/// 𝐡 = (t - θ^q)/Δ^q·τ²𝐡 - (g/Δ)·τ𝐡.
pub fn check_h_equation(field: &Field, precision: i64) -> Witness {
    let def = Deformation::new(field, precision + delta_margin(field.q()));
    Witness::from_result(check_h_equation_on(&def, precision), precision)
}

pub fn check_h_equation_on(def: &Deformation, precision: i64) -> Result<Witness> {
    let gens = &def.gens;
    let cap = def.precision();
    let h = &def.h_bold;
    let delta_inv = gens.delta.inv()?;
    let delta_q_inv = gens.delta.tau_pow(1, 2 * cap).inv()?;
    let first = delta_q_inv.mul(&h.tau_pow(2, 2 * cap)).scale(&t_minus_theta_pow(def.field(), 1));
    let second = gens.g.mul(&delta_inv).mul(&h.tau_pow(1, 2 * cap));
    Ok(Witness::equal(h, &first.sub(&second), precision))
}

/// The four stability formulas, in the order τ𝐡, τ𝐄, χ𝐡, χ𝐄.
pub fn check_stability_formulas(field: &Field, precision: i64) -> Vec<(&'static str, Witness)> {
    let def = Deformation::new(field, precision + delta_margin(field.q()));
    check_stability_formulas_on(&def, precision)
}

pub const STABILITY_NAMES: [&str; 4] = ["tau_h", "tau_E", "chi_h", "chi_E"];

pub fn check_stability_formulas_on(def: &Deformation, precision: i64) -> Vec<(&'static str, Witness)> {
    let field = def.field();
    let gens = &def.gens;
    let cap = def.precision();
    let (e, h) = (&def.e_bold, &def.h_bold);
    let frob = |x: &USeries| x.tau_pow(1, 2 * cap).chi();

    let tau_h = Witness::equal(&h.tau_pow(1, cap), &gens.delta.mul(e), precision);

    let tau_e = Witness::from_result(
        gens.g
            .mul(e)
            .add(h)
            .exact_div_scalar(&t_minus_theta_pow(field, 1))
            .map(|rhs| Witness::equal(&e.tau_pow(1, cap), &rhs, precision)),
        precision,
    );

    let chi_h = Witness::from_result(
        gens.delta.inv().map(|delta_inv| {
            let t_minus_theta_q = &BiPoly::t(field).frobenius_t() - &BiPoly::theta(field).frobenius_theta();
            let rhs = frob(e).scale(&t_minus_theta_q).sub(&gens.g.mul(&delta_inv).mul(&frob(h)));
            Witness::equal(&h.chi(), &rhs, precision)
        }),
        precision,
    );

    let chi_e = Witness::from_result(
        gens.delta.inv().map(|delta_inv| Witness::equal(&e.chi(), &frob(h).mul(&delta_inv), precision)),
        precision,
    );

    STABILITY_NAMES.into_iter().zip([tau_h, tau_e, chi_h, chi_e]).collect()
}

pub fn c_degree_profile(field: &Field, count: usize) -> DegreeProfile {
    DSeries::new(field, count).degree_profile()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(f: &Field, s: &str) -> BiPoly {
        BiPoly::parse(f, s).unwrap()
    }

    #[test]
    fn first_coefficients() {
        let f3 = Field::prime(3).unwrap();
        let d = DSeries::new(&f3, 14);
        assert!(d.c(0).is_one());
        assert_eq!(d.c(1), &bp(&f3, "2*t + theta"));
        assert_eq!(d.c(7), &bp(&f3, "2*t + theta"));
        assert_eq!(d.c(9), &bp(&f3, "t + 2*theta"));
    }

    #[test]
    fn companions_lead_terms() {
        let f3 = Field::prime(3).unwrap();
        let def = Deformation::new(&f3, 40);
        assert_eq!(def.e_bold.valuation().unwrap(), 1);
        assert!(def.e_bold.leading().unwrap().is_one());
        assert_eq!(def.h_bold.valuation().unwrap(), 1);
        assert_eq!(def.h_bold.leading().unwrap(), &bp(&f3, "2"));
        assert_eq!(def.e_bold.specialize_t(), def.gens.e);
        assert!(def.d.in_v_lattice());
    }

    #[test]
    fn equations_hold() {
        for q in [2, 3] {
            let f = Field::prime(q).unwrap();
            assert!(check_dd_equation(&f, 60).passed);
            assert!(check_e_equation(&f, 60).passed);
            let w = check_h_equation(&f, 60);
            assert!(w.passed, "{w:?}");
            for (name, w) in check_stability_formulas(&f, 60) {
                assert!(w.passed, "q={q} {name}: {w:?}");
            }
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let f3 = Field::prime(3).unwrap();
        let gens = Generators::new(&f3, 60);
        let d = DSeries::from_generators(&gens, 30);
        assert!(check_dd_equation_on(&gens, &d, 60).passed);
        let bumped = d.with_coeff(1, d.c(1) + &BiPoly::one(&f3));
        let w = check_dd_equation_on(&gens, &bumped, 60);
        assert!(!w.passed);
        assert_eq!(w.first_failure, Some(2));
    }

    #[test]
    fn milestones() {
        let f2 = Field::prime(2).unwrap();
        let prof = DSeries::new(&f2, 30).degree_profile();
        assert_eq!(prof.milestones.len(), 3);
        assert_eq!(prof.milestones[0].s, 1);
        assert_eq!(prof.milestones[1].s, 5);
        assert_eq!(prof.milestones[2].s, 21);
        assert!(prof.milestones.iter().all(|m| m.t_coeff == "1"));
        assert_eq!(prof.first_bound_violation(2), None);
    }
}
