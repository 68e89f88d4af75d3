//! E_{j,1}, the integral avatars F_m = E_{-m,1}^{q^m}, and the determinant family E_{j,k}.

use std::sync::Mutex;

use crate::algebra::{bk_poly, bracket, BiPoly, Field, Var};
use crate::carlitz::Generators;
use crate::dd::Deformation;
use crate::error::Result;
use crate::hankel::{hankel_det, series_det, MAX_K};
use crate::series::{with_precision, USeries};

/// Shared generators and deformation series for one field, reused across requests.
///
/// Cached objects are computed at the largest precision asked for so far and truncated on the
/// way out, so results never depend on request order.
pub struct FormContext {
    field: Field,
    gens: Mutex<Option<Generators>>,
    deform: Mutex<Option<Deformation>>,
}

impl FormContext {
    pub fn new(field: &Field) -> Self {
        FormContext { field: field.clone(), gens: Mutex::new(None), deform: Mutex::new(None) }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generators(&self, precision: i64) -> Generators {
        let mut slot = self.gens.lock().unwrap();
        match slot.as_ref() {
            Some(g) if g.precision >= precision => g.truncate(precision),
            _ => {
                let g = Generators::new(&self.field, precision);
                *slot = Some(g.clone());
                g
            }
        }
    }

    pub fn deformation(&self, precision: i64) -> Deformation {
        {
            let slot = self.deform.lock().unwrap();
            if let Some(d) = slot.as_ref().filter(|d| d.precision() >= precision) {
                return d.truncate(precision);
            }
        }
        let def = Deformation::from_generators(self.generators(precision));
        *self.deform.lock().unwrap() = Some(def.clone());
        def
    }
}

/// E_{0,1}, ..., E_{jmax,1} by the forward recursion, below the generators' precision.
pub fn e_j1_list(gens: &Generators, jmax: u32) -> Result<Vec<USeries>> {
    let field = &gens.field;
    let n = gens.precision;
    let mut out = vec![gens.e.clone()];
    if jmax >= 1 {
        let num = gens.e.mul(&gens.g).add(&gens.h);
        out.push(num.exact_div_scalar(&bracket(field, 1)?)?.neg());
    }
    for j in 0..jmax.saturating_sub(1) {
        let a = gens.delta.tau_pow(j, n).mul(&out[j as usize]);
        let b = gens.g.tau_pow(j + 1, n).mul(&out[j as usize + 1]);
        let next = a.add(&b).truncate(n).exact_div_scalar(&bracket(field, j as i64 + 2)?)?.neg();
        out.push(next);
    }
    Ok(out)
}

pub fn e_j1(ctx: &FormContext, j: u32, precision: i64) -> Result<USeries> {
    let gens = ctx.generators(precision);
    Ok(e_j1_list(&gens, j)?.pop().unwrap())
}

/// F_0, ..., F_mmax from F_0 = E, F_1 = -h and
/// F_m = -((θ^{q²} - θ^{q^m}) τ²F_{m-2} + τg · τF_{m-1}) / Δ.
///
/// Precision may drop slightly below the generators' because of the division by Δ.
pub fn f_list(gens: &Generators, mmax: u32) -> Result<Vec<USeries>> {
    let field = &gens.field;
    let n = gens.precision;
    let mut out = vec![gens.e.clone(), gens.h.neg()];
    out.truncate(mmax as usize + 1);
    if mmax < 2 {
        return Ok(out);
    }
    let delta_inv = gens.delta.inv()?;
    let tau_g = gens.g.tau_pow(1, n);
    let theta = BiPoly::theta(field);
    for m in 2..=mmax {
        let coef = &theta.frobenius_theta_n(2) - &theta.frobenius_theta_n(m);
        let a = out[m as usize - 2].tau_pow(2, n).scale(&coef);
        let b = tau_g.mul(&out[m as usize - 1].tau_pow(1, n));
        let next = a.add(&b).mul(&delta_inv).neg().truncate(n);
        out.push(next);
    }
    Ok(out)
}

/// F_0, ..., F_mmax, each known below `precision`.
pub fn f_list_at(ctx: &FormContext, mmax: u32, precision: i64) -> Result<Vec<USeries>> {
    let mut base = precision;
    loop {
        let list = f_list(&ctx.generators(base), mmax)?;
        let reached = list.iter().map(USeries::precision).min().unwrap_or(precision);
        if reached >= precision {
            return Ok(list.into_iter().map(|s| s.truncate(precision)).collect());
        }
        base += 2 * (precision - reached);
    }
}

pub fn f_m(ctx: &FormContext, m: u32, precision: i64) -> Result<USeries> {
    with_precision(precision, |base| Ok(f_list(&ctx.generators(base), m)?.pop().unwrap()))
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 || k as usize > MAX_K {
        return Err(crate::Error::Unsupported(format!("k = {k}; supported 1..={MAX_K}")));
    }
    Ok(())
}

/// The determinant of (E_{j+c-r,1}^{q^r}) before division by B_k(θ).
pub fn e_jk_determinant(ctx: &FormContext, j: u32, k: u32, precision: i64) -> Result<USeries> {
    check_k(k)?;
    let gens = ctx.generators(precision);
    let ej = e_j1_list(&gens, j + k - 1)?;
    let fm = if j < k - 1 { f_list_at(ctx, k - 1 - j, precision)? } else { Vec::new() };
    let entries: Vec<Vec<USeries>> = (0..k as i64)
        .map(|r| {
            (0..k as i64)
                .map(|c| {
                    let idx = j as i64 + c - r;
                    if idx >= 0 {
                        ej[idx as usize].tau_pow(r as u32, precision)
                    } else {
                        let m = -idx;
                        fm[m as usize].tau_pow((r - m) as u32, precision)
                    }
                })
                .collect()
        })
        .collect();
    Ok(series_det(ctx.field(), &entries, precision))
}

/// E_{j,k}: the determinant divided coefficient-exactly by B_k(θ).
pub fn e_jk(ctx: &FormContext, j: u32, k: u32, precision: i64) -> Result<USeries> {
    let det = e_jk_determinant(ctx, j, k, precision)?;
    det.exact_div_scalar(&bk_poly(ctx.field(), k, Var::Theta))
}

/// E_{j,k} through (τ^j H_k(𝐄) / B_k(t)) at t = θ.
pub fn e_jk_via_t(ctx: &FormContext, j: u32, k: u32, precision: i64) -> Result<USeries> {
    check_k(k)?;
    let q = ctx.field().q() as i64;
    let s = q.pow(j);
    // τ^j maps precision P to s(P - 1) + 1
    let base = ((precision - 1) + s - 1) / s + 1;
    let def = ctx.deformation(base);
    let hk = hankel_det(&def.e_bold, k as usize, base)?;
    let quot = hk.exact_div_scalar(&bk_poly(ctx.field(), k, Var::T))?;
    Ok(quot.tau_pow(j, precision).specialize_t().truncate(precision))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_forms() {
        let f3 = Field::prime(3).unwrap();
        let ctx = FormContext::new(&f3);
        let e11 = e_j1(&ctx, 1, 40).unwrap();
        assert_eq!(e11.valuation().unwrap(), 3);
        assert!(e11.leading().unwrap().is_one());
        let gens = ctx.generators(40);
        let f = f_list(&gens, 2).unwrap();
        assert_eq!(f[1], gens.h.neg());
        let expect = gens.h.mul(&gens.g.pow(3)).neg().truncate(f[2].precision());
        assert_eq!(f[2], expect);
    }

    #[test]
    fn order_of_e02() {
        let f3 = Field::prime(3).unwrap();
        let ctx = FormContext::new(&f3);
        let e02 = e_jk(&ctx, 0, 2, 30).unwrap();
        assert_eq!(e02.valuation().unwrap(), 10);
        assert!(e02.leading().unwrap().is_one());
        assert_eq!(e_jk_via_t(&ctx, 0, 2, 30).unwrap(), e02);
    }
}
