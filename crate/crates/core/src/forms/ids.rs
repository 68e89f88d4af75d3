//! Textual form identifiers: `E`, `g`, `h`, `Delta`, `d`, `Ebold`, `hbold`, `E[j,1]`, `F[m]`,
//! `E[j,k]`, `powersum[m]`.

use std::fmt;
use std::str::FromStr;

use crate::carlitz::UaTable;
use crate::error::{Error, Result};
use crate::series::USeries;

use super::families::{e_j1, e_jk, f_m, FormContext};
use super::meta::{depth_cap, type_of, weight_of, FormMeta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormId {
    E,
    G,
    H,
    Delta,
    D,
    EBold,
    HBold,
    Ej1(u32),
    F(u32),
    Ejk(u32, u32),
    PowerSum(u32),
}

fn parse_indices(inner: &str) -> Result<Vec<u32>> {
    inner
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad index {p:?}"))))
        .collect()
}

impl FromStr for FormId {
    type Err = Error;

    fn from_str(s: &str) -> Result<FormId> {
        let s = s.trim();
        let simple = match s {
            "E" => Some(FormId::E),
            "g" => Some(FormId::G),
            "h" => Some(FormId::H),
            "Delta" => Some(FormId::Delta),
            "d" => Some(FormId::D),
            "Ebold" => Some(FormId::EBold),
            "hbold" => Some(FormId::HBold),
            _ => None,
        };
        if let Some(id) = simple {
            return Ok(id);
        }
        let (head, rest) = s.split_once('[').ok_or_else(|| Error::Parse(format!("unknown form {s:?}")))?;
        let inner = rest.strip_suffix(']').ok_or_else(|| Error::Parse(format!("missing ']' in {s:?}")))?;
        let idx = parse_indices(inner)?;
        match (head, idx.as_slice()) {
            ("E", [j, 1]) => Ok(FormId::Ej1(*j)),
            ("E", [j, k]) if *k >= 1 => Ok(FormId::Ejk(*j, *k)),
            ("F", [m]) => Ok(FormId::F(*m)),
            ("powersum", [m]) => Ok(FormId::PowerSum(*m)),
            _ => Err(Error::Parse(format!("unknown form {s:?}"))),
        }
    }
}

impl fmt::Display for FormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormId::E => write!(f, "E"),
            FormId::G => write!(f, "g"),
            FormId::H => write!(f, "h"),
            FormId::Delta => write!(f, "Delta"),
            FormId::D => write!(f, "d"),
            FormId::EBold => write!(f, "Ebold"),
            FormId::HBold => write!(f, "hbold"),
            FormId::Ej1(j) => write!(f, "E[{j},1]"),
            FormId::F(m) => write!(f, "F[{m}]"),
            FormId::Ejk(j, k) => write!(f, "E[{j},{k}]"),
            FormId::PowerSum(m) => write!(f, "powersum[{m}]"),
        }
    }
}

impl FormId {
    /// Whether the series carries the deformation variable t.
    pub fn is_deformed(&self) -> bool {
        matches!(self, FormId::D | FormId::EBold | FormId::HBold)
    }

    /// Weight, type and depth bound of the space the form lives in; `None` for t-deformed series.
    pub fn default_meta(&self, q: u64) -> Option<FormMeta> {
        let (w, m, l) = match *self {
            FormId::E => (2, 1, 1),
            FormId::G => (q - 1, 0, 0),
            FormId::H => (q + 1, 1, 0),
            FormId::Delta => (q * q - 1, 0, 0),
            FormId::Ej1(j) => (weight_of(q, j, 1), 1, 1),
            FormId::Ejk(j, k) => (weight_of(q, j, k), type_of(q, k), depth_cap(q, k)),
            // E_{-m,1}^{q^m} has weight q^m + 1 and type q^m = 1
            FormId::F(m) | FormId::PowerSum(m) => (q.pow(m) + 1, 1, 1),
            FormId::D | FormId::EBold | FormId::HBold => return None,
        };
        FormMeta::new(q, w, m, l).ok()
    }

    /// The u-expansion below `precision`.
    pub fn compute(&self, ctx: &FormContext, precision: i64) -> Result<USeries> {
        match *self {
            FormId::E => Ok(ctx.generators(precision).e),
            FormId::G => Ok(ctx.generators(precision).g),
            FormId::H => Ok(ctx.generators(precision).h),
            FormId::Delta => Ok(ctx.generators(precision).delta),
            FormId::D => Ok(ctx.deformation(precision).d),
            FormId::EBold => Ok(ctx.deformation(precision).e_bold),
            FormId::HBold => Ok(ctx.deformation(precision).h_bold),
            FormId::Ej1(j) => e_j1(ctx, j, precision),
            FormId::F(m) => f_m(ctx, m, precision),
            FormId::Ejk(j, k) => e_jk(ctx, j, k, precision),
            FormId::PowerSum(m) => Ok(UaTable::new(ctx.field(), precision).powersum(m)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["E", "g", "h", "Delta", "d", "Ebold", "hbold", "E[2,1]", "F[3]", "E[1,2]", "powersum[2]"] {
            assert_eq!(s.parse::<FormId>().unwrap().to_string(), s);
        }
        assert_eq!("E[ 0 , 2 ]".parse::<FormId>().unwrap(), FormId::Ejk(0, 2));
        assert!("E[0,0]".parse::<FormId>().is_err());
        assert!("X".parse::<FormId>().is_err());
        assert!("F[1".parse::<FormId>().is_err());
    }

    #[test]
    fn default_spaces() {
        assert_eq!(FormId::Ejk(0, 2).default_meta(3), Some(FormMeta { weight: 8, type_m: 0, depth: 4 }));
        assert_eq!(FormId::Ej1(1).default_meta(3).unwrap().weight, 4);
        assert_eq!(FormId::D.default_meta(3), None);
    }
}
