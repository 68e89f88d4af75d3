use thiserror::Error;

use crate::algebra::BiPoly;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("fields do not match")]
    FieldMismatch,

    #[error("bracket [{0}] is only materialized for indices >= 1")]
    BracketIndex(i64),

    #[error("division is not exact, remainder {remainder}")]
    NonExactDivision { remainder: BiPoly },

    #[error("divisor is not monic in its leading variable: {0}")]
    NotMonic(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("leading coefficient {0} is not a unit of F_q")]
    NonUnitLeadingCoefficient(String),

    #[error("series is zero to precision {0}")]
    ZeroSeries(i64),

    #[error("series has unbounded precision; truncate before inverting")]
    UnboundedPrecision,

    #[error("coefficient of u^{exponent} is not divisible, remainder {remainder}")]
    NonExactCoefficient { exponent: i64, remainder: BiPoly },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no solution in the requested space")]
    NoSolution,

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("missing golden files: {0}")]
    MissingGolden(String),

    #[error("i/o error: {0}")]
    Io(String),
}
