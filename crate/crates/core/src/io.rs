//! JSON serialization of series.
//!
//! `{"q":…,"valuation":…,"precision":…,"coeffs":[[exponent,"bipoly-text"],…]}`; the valuation is
//! `null` for a series that is zero to precision, and the precision is `null` for an exact series.

use serde::{Deserialize, Serialize};

use crate::algebra::{BiPoly, Field};
use crate::dd::DSeries;
use crate::error::{Error, Result};
use crate::series::{USeries, EXACT};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub q: u32,
    pub valuation: Option<i64>,
    pub precision: Option<i64>,
    pub coeffs: Vec<(i64, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_indexed: Option<bool>,
}

impl SeriesJson {
    pub fn from_series(s: &USeries) -> Self {
        SeriesJson {
            q: s.q(),
            valuation: s.valuation().ok(),
            precision: if s.is_exact() { None } else { Some(s.precision()) },
            coeffs: s.terms().map(|(n, c)| (n, c.to_string())).collect(),
            v_indexed: None,
        }
    }

    pub fn to_series(&self, field: &Field) -> Result<USeries> {
        if field.q() != self.q {
            return Err(Error::Parse(format!("series over F_{} read with field of order {}", self.q, field.q())));
        }
        let precision = self.precision.unwrap_or(EXACT);
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (n, text) in &self.coeffs {
            if *n >= precision {
                return Err(Error::Parse(format!("exponent {n} at or beyond precision {precision}")));
            }
            terms.push((*n, BiPoly::parse(field, text)?));
        }
        let s = USeries::from_terms(field, precision, terms);
        if s.valuation().ok() != self.valuation {
            return Err(Error::Parse("stored valuation does not match the coefficients".into()));
        }
        Ok(s)
    }
}

pub fn series_to_json(s: &USeries) -> String {
    serde_json::to_string(&SeriesJson::from_series(s)).expect("series JSON is always serializable")
}

pub fn series_from_json(field: &Field, text: &str) -> Result<USeries> {
    let js: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    js.to_series(field)
}

/// 𝐝 in the series format of its u-expansion, marked as v-indexed.
pub fn dseries_to_json(d: &DSeries) -> String {
    let mut js = SeriesJson::from_series(&d.to_useries());
    js.v_indexed = Some(true);
    serde_json::to_string(&js).expect("series JSON is always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f4 = Field::with_order(4).unwrap();
        let s = USeries::from_terms(
            &f4,
            9,
            [(1, BiPoly::parse(&f4, "(w + 1)*t + theta").unwrap()), (4, BiPoly::parse(&f4, "w").unwrap())],
        );
        let text = series_to_json(&s);
        assert_eq!(text, r#"{"q":4,"valuation":1,"precision":9,"coeffs":[[1,"(w + 1)*t + theta"],[4,"w"]]}"#);
        assert_eq!(series_from_json(&f4, &text).unwrap(), s);
        let z = USeries::zero(&f4, 5);
        assert_eq!(series_to_json(&z), r#"{"q":4,"valuation":null,"precision":5,"coeffs":[]}"#);
        assert_eq!(series_from_json(&f4, &series_to_json(&z)).unwrap(), z);
        let f3 = Field::prime(3).unwrap();
        assert!(series_from_json(&f3, &text).is_err());
    }
}
