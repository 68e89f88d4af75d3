//! Machine checks of every closed-form claim, collected into structured reports.

mod golden;
pub mod random;
mod registry;
mod report;
mod suite;

pub use golden::{default_golden_dir, golden_check, write_goldens, Golden, GoldenKind, GOLDENS};
pub use registry::{claims_for, coverage_problems, find, Claim, Suite, COVERAGE, REGISTRY};
pub use report::{Case, Params, Record, Status, VerificationReport};
pub use suite::{
    displayed_d_terms, run_suite, theorem1_precision, theorem2_precision, Bounds, CLOSED_FORM_PRECISION,
    IDENTITY_PRECISION,
};
