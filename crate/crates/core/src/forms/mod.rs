//! Quasi-modular forms: the E_{j,k} families, decomposition in E, g, h, and extremal search.

mod families;
mod ids;
mod isobaric;
mod meta;
mod solve;

pub use families::{e_j1, e_j1_list, e_jk, e_jk_determinant, e_jk_via_t, f_list, f_list_at, f_m, FormContext};
pub use ids::FormId;
pub use isobaric::{bracket_factorization, monomial_series, Frac, IsobaricPoly};
pub use meta::{
    depth_cap, depth_lower_bound, expected_ord, monomial_basis, ord_bound, type_of, weight_condition, weight_of, Exps,
    FormMeta,
};
pub use solve::{decompose_egh, extremal_search, extremal_seed, Extremal, DEFAULT_MARGIN};
