//! Linear algebra on u-expansions: decomposition into E, g, h and extremal forms.

use serde::Serialize;

use crate::algebra::{BiPoly, PolyMatrix};
use crate::carlitz::Generators;
use crate::error::{Error, Result};
use crate::series::USeries;

use super::families::FormContext;
use super::isobaric::{monomial_series, Frac, IsobaricPoly};
use super::meta::{monomial_basis, ord_bound, weight_condition, Exps};

/// Coefficients beyond the solving window reserved for verification.
pub const DEFAULT_MARGIN: i64 = 20;

fn coefficient_rows(series: &[USeries], columns: i64) -> Result<PolyMatrix> {
    PolyMatrix::from_rows(series.iter().map(|s| (0..columns).map(|n| s.coeff(n)).collect()).collect())
}

fn basis_series(gens: &Generators, basis: &[Exps]) -> Vec<USeries> {
    basis.iter().map(|&e| monomial_series(gens, e)).collect()
}

/// Writes `f` as an isobaric polynomial of weight w, type m and depth ≤ l in E, g, h.
///
/// The system is solved on exponents below `precision(f) - margin` and the solution is then
/// checked on every available coefficient.
pub fn decompose_egh(ctx: &FormContext, f: &USeries, w: u64, m: u64, l: u64, margin: i64) -> Result<IsobaricPoly> {
    let field = ctx.field();
    let q = field.q() as u64;
    let basis = monomial_basis(q, w, m, l);
    let prec = f.precision();
    let n = basis.len() as i64;
    if prec < n + margin {
        return Err(Error::InsufficientPrecision(format!(
            "series known below u^{prec}, need at least {} for {n} monomials",
            n + margin
        )));
    }
    if basis.is_empty() {
        return if f.is_zero_to_precision() { Ok(IsobaricPoly::new(field, vec![])) } else { Err(Error::NoSolution) };
    }
    let gens = ctx.generators(prec);
    let monos = basis_series(&gens, &basis);
    let columns = prec - margin;
    let mrows = coefficient_rows(&monos, columns)?;
    if mrows.rank()? < basis.len() {
        return Err(Error::InsufficientPrecision(format!("monomials are not separated below u^{columns}")));
    }
    let mut all = monos.clone();
    all.push(f.clone());
    let red = coefficient_rows(&all, columns)?.row_reduce_ff()?;
    if red.rank() > basis.len() {
        return Err(Error::NoSolution);
    }
    // the single zero row of the echelon form carries the relation y·[M; f] = 0
    let y: Vec<BiPoly> = red.transform.row(basis.len()).to_vec();
    let yf = &y[basis.len()];
    let mut check = f.scale(yf);
    for (yi, mono) in y.iter().zip(&monos) {
        check = check.add(&mono.scale(yi));
    }
    if !check.truncate(prec).is_zero_to_precision() {
        return Err(Error::NoSolution);
    }
    let minus_yf = -yf;
    let terms: Result<Vec<(Exps, Frac)>> =
        basis.iter().zip(&y).map(|(&e, yi)| Ok((e, Frac::new(yi.clone(), minus_yf.clone())?))).collect();
    Ok(IsobaricPoly::new(field, terms?))
}

#[derive(Clone, Debug, Serialize)]
pub struct Extremal {
    pub max_ord: i64,
    /// Precision actually used.
    pub precision: i64,
    #[serde(skip)]
    pub series: USeries,
    #[serde(skip)]
    pub poly: IsobaricPoly,
}

/// Starting precision for the extremal search.
pub fn extremal_seed(q: u64, w: u64, l: u64, basis_len: usize, margin: i64) -> i64 {
    let floor = basis_len as i64 + margin;
    // the bound is only meaningful once E may occur
    if l >= 1 && weight_condition(q, l, w) {
        if let Ok(b) = i64::try_from(&ord_bound(q, l, w)) {
            return (b + margin).max(floor);
        }
    }
    let heuristic = (4 * w).max(2 * basis_len as u64 * (q * q - 1));
    (heuristic as i64 + margin).max(floor)
}

/// The normalised form of largest order at u = 0 in the space of weight w, type m, depth ≤ l.
pub fn extremal_search(ctx: &FormContext, w: u64, m: u64, l: u64, precision: Option<i64>) -> Result<Extremal> {
    let field = ctx.field();
    let q = field.q() as u64;
    let basis = monomial_basis(q, w, m, l);
    if basis.is_empty() {
        return Err(Error::NoSolution);
    }
    let margin = DEFAULT_MARGIN;
    let mut prec = precision.unwrap_or_else(|| extremal_seed(q, w, l, basis.len(), margin));
    for attempt in 0..2 {
        let gens = ctx.generators(prec);
        let monos = basis_series(&gens, &basis);
        let red = coefficient_rows(&monos, prec)?.row_reduce_ff()?;
        let max_ord = red.pivots.last().copied().map(|c| c as i64);
        let separated = red.rank() == basis.len();
        match max_ord {
            Some(ord) if separated && ord < prec - margin => {
                let row = basis.len() - 1;
                let y: Vec<BiPoly> = red.transform.row(row).to_vec();
                let lead = red.echelon.get(row, ord as usize).clone();
                let mut combo = USeries::zero(field, prec);
                for (yi, mono) in y.iter().zip(&monos) {
                    combo = combo.add(&mono.scale(yi));
                }
                let series = combo.exact_div_scalar(&lead).map_err(|_| {
                    Error::Unsupported("normalised extremal form has non-polynomial coefficients".into())
                })?;
                let terms: Result<Vec<(Exps, Frac)>> =
                    basis.iter().zip(&y).map(|(&e, yi)| Ok((e, Frac::new(yi.clone(), lead.clone())?))).collect();
                return Ok(Extremal { max_ord: ord, precision: prec, series, poly: IsobaricPoly::new(field, terms?) });
            }
            _ if attempt == 0 => prec *= 2,
            _ => {}
        }
    }
    Err(Error::InsufficientPrecision(format!("extremal order not isolated below u^{prec}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::forms::families::{e_j1, e_jk};

    #[test]
    fn decompose_e11() {
        let f3 = Field::prime(3).unwrap();
        let ctx = FormContext::new(&f3);
        let e11 = e_j1(&ctx, 1, 40).unwrap();
        let p = decompose_egh(&ctx, &e11, 4, 1, 1, DEFAULT_MARGIN).unwrap();
        assert_eq!(p.to_string(), "-(1/[1])*E*g - (1/[1])*h");
        let e = ctx.generators(40).e;
        assert_eq!(decompose_egh(&ctx, &e, 2, 1, 1, DEFAULT_MARGIN).unwrap().to_string(), "E");
        let h = ctx.generators(40).h;
        assert_eq!(decompose_egh(&ctx, &h, 4, 1, 0, DEFAULT_MARGIN).unwrap().to_string(), "h");
        assert!(matches!(decompose_egh(&ctx, &e, 4, 1, 1, DEFAULT_MARGIN), Err(Error::NoSolution)));
    }

    #[test]
    fn extremal_small() {
        let f3 = Field::prime(3).unwrap();
        let ctx = FormContext::new(&f3);
        let ex = extremal_search(&ctx, 2, 1, 1, None).unwrap();
        assert_eq!(ex.max_ord, 1);
        assert_eq!(ex.series, ctx.generators(ex.precision).e);
        let ex = extremal_search(&ctx, 10, 1, 1, None).unwrap();
        assert_eq!(ex.max_ord, 9);
        assert_eq!(ex.series, e_jk(&ctx, 2, 1, ex.precision).unwrap());
    }
}
