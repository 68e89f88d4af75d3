//! Outcome of a truncated identity check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::USeries;

/// Pass/fail with enough data to locate a failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub passed: bool,
    /// Exponents below this bound were compared.
    pub checked_precision: i64,
    /// Lowest exponent where the two sides differ.
    pub first_failure: Option<i64>,
    /// Free-form description of the mismatch, empty on success.
    pub detail: String,
}

impl Witness {
    pub fn pass(checked_precision: i64) -> Self {
        Witness { passed: true, checked_precision, first_failure: None, detail: String::new() }
    }

    pub fn fail(checked_precision: i64, first_failure: Option<i64>, detail: impl Into<String>) -> Self {
        Witness { passed: false, checked_precision, first_failure, detail: detail.into() }
    }

    /// Passes when `diff` vanishes below `target`. A diff known to fewer exponents fails.
    pub fn vanishes(diff: &USeries, target: i64) -> Self {
        let diff = diff.truncate(target);
        if diff.precision() < target {
            return Witness::fail(
                diff.precision(),
                None,
                format!("only {} exponents available, {} requested", diff.precision(), target),
            );
        }
        match diff.valuation() {
            Err(_) => Witness::pass(target),
            Ok(n) => Witness::fail(target, Some(n), format!("nonzero coefficient {} at u^{}", diff.coeff(n), n)),
        }
    }

    pub fn equal(a: &USeries, b: &USeries, target: i64) -> Self {
        Witness::vanishes(&a.sub(b), target)
    }

    /// Turns an error raised during a check into a failing witness.
    pub fn from_result(r: Result<Witness>, target: i64) -> Self {
        match r {
            Ok(w) => w,
            Err(Error::NonExactCoefficient { exponent, remainder }) => {
                Witness::fail(target, Some(exponent), format!("non-exact division, remainder {remainder}"))
            }
            Err(e) => Witness::fail(target, None, e.to_string()),
        }
    }

    /// Conjunction; keeps the first failure.
    pub fn and(self, other: Witness) -> Witness {
        if !self.passed {
            self
        } else if !other.passed {
            other
        } else {
            Witness::pass(self.checked_precision.min(other.checked_precision))
        }
    }

    /// Passes iff `ok`; a failure carries `detail`.
    pub fn expect(ok: bool, checked_precision: i64, detail: impl Into<String>) -> Self {
        if ok {
            Witness::pass(checked_precision)
        } else {
            Witness::fail(checked_precision, None, detail)
        }
    }

    pub fn all(ws: impl IntoIterator<Item = Witness>) -> Witness {
        ws.into_iter().fold(Witness::pass(i64::MAX), Witness::and)
    }
}
