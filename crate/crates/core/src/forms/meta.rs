//! Weight, type and depth bookkeeping and the closed-form bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight w, type m (mod q - 1) and depth bound l of a space of quasi-modular forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormMeta {
    pub weight: u64,
    pub type_m: u64,
    pub depth: u64,
}

impl FormMeta {
    /// Reduces the type mod q - 1 and rejects spaces that are necessarily empty.
    pub fn new(q: u64, weight: u64, type_m: u64, depth: u64) -> Result<Self> {
        let m = q - 1;
        let type_m = type_m % m;
        if (weight % m) != (2 * type_m) % m {
            return Err(Error::Unsupported(format!(
                "weight {weight} and type {type_m} violate w = 2m mod {m}; the space is zero"
            )));
        }
        Ok(FormMeta { weight, type_m, depth })
    }
}

/// Exponents (a, b, c) of E^a g^b h^c.
pub type Exps = (u32, u32, u32);

/// All E^a g^b h^c with a ≤ l, 2a + (q-1)b + (q+1)c = w and a + c = m mod (q - 1).
///
/// Sorted in decreasing lexicographic order of (a, b, c).
pub fn monomial_basis(q: u64, w: u64, m: u64, l: u64) -> Vec<Exps> {
    let modulus = q - 1;
    let mut out = Vec::new();
    for a in (0..=l.min(w / 2)).rev() {
        let rest = w - 2 * a;
        for c in (0..=rest / (q + 1)).rev() {
            let r = rest - c * (q + 1);
            if !r.is_multiple_of(q - 1) {
                continue;
            }
            let b = r / (q - 1);
            if (a + c) % modulus != m % modulus {
                continue;
            }
            out.push((a as u32, b as u32, c as u32));
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    out
}

/// q^j (q^{2k} - 1)/(q^2 - 1).
pub fn expected_ord(q: u64, j: u32, k: u32) -> u64 {
    q.pow(j) * (q.pow(2 * k) - 1) / (q * q - 1)
}

/// (q^k - 1)(q^j + 1)/(q - 1).
pub fn weight_of(q: u64, j: u32, k: u32) -> u64 {
    (q.pow(k) - 1) * (q.pow(j) + 1) / (q - 1)
}

/// k mod (q - 1).
pub fn type_of(q: u64, k: u32) -> u64 {
    k as u64 % (q - 1)
}

/// (q^k - 1)/(q - 1).
pub fn depth_cap(q: u64, k: u32) -> u64 {
    (q.pow(k) - 1) / (q - 1)
}

/// (1 + q^k) / (32 (1 + q)(3 + 2q)^2), exactly.
pub fn depth_lower_bound(q: u64, k: u32) -> BigRational {
    let q = BigInt::from(q);
    let num = BigInt::from(1) + q.pow(k);
    let s = BigInt::from(3) + BigInt::from(2) * &q;
    let den = BigInt::from(32) * (BigInt::from(1) + &q) * &s * &s;
    BigRational::new(num, den)
}

/// 16 q^3 (3 + 2q)^2 l w, an a-priori cap on the order at u = 0 of a nonzero form.
pub fn ord_bound(q: u64, l: u64, w: u64) -> BigInt {
    let q = BigInt::from(q);
    let s = BigInt::from(3) + BigInt::from(2) * &q;
    BigInt::from(16) * q.pow(3) * &s * &s * BigInt::from(l) * BigInt::from(w)
}

/// Whether w ≥ 4l (2q(q+2)(3+2q)l + 3(q^2+1))^{3/2}, decided exactly by squaring.
pub fn weight_condition(q: u64, l: u64, w: u64) -> bool {
    let (qb, lb, wb) = (BigInt::from(q), BigInt::from(l), BigInt::from(w));
    let x = BigInt::from(2) * &qb * (&qb + BigInt::from(2)) * (BigInt::from(3) + BigInt::from(2) * &qb) * &lb
        + BigInt::from(3) * (&qb * &qb + BigInt::from(1));
    &wb * &wb >= BigInt::from(16) * &lb * &lb * x.pow(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        assert_eq!(expected_ord(3, 1, 2), 30);
        assert_eq!(weight_of(3, 1, 2), 16);
        assert_eq!(type_of(3, 2), 0);
        assert_eq!(depth_cap(3, 2), 4);
        assert_eq!(expected_ord(2, 0, 3), 21);
        assert_eq!(weight_of(2, 0, 3), 14);
        assert_eq!(depth_cap(2, 3), 7);
        assert_eq!(expected_ord(3, 0, 2), 10);
        assert_eq!(expected_ord(3, 2, 2), 90);
        assert_eq!(expected_ord(2, 0, 2), 5);
    }

    #[test]
    fn lower_bound_is_exact() {
        let b = depth_lower_bound(3, 2);
        assert_eq!(b, BigRational::new(BigInt::from(10), BigInt::from(32 * 4 * 81)));
        assert!(depth_lower_bound(3, 3) > b);
    }

    #[test]
    fn basis_examples() {
        assert_eq!(monomial_basis(3, 2, 1, 1), vec![(1, 0, 0)]);
        assert_eq!(monomial_basis(3, 4, 1, 1), vec![(1, 1, 0), (0, 0, 1)]);
        assert!(monomial_basis(3, 3, 1, 1).is_empty());
        assert_eq!(monomial_basis(3, 8, 2, 4), vec![(4, 0, 0), (2, 2, 0), (1, 1, 1), (0, 4, 0), (0, 0, 2)]);
    }

    #[test]
    fn weight_condition_is_strict_for_small_weights() {
        assert!(!weight_condition(3, 1, 10));
        assert!(weight_condition(2, 1, 10_000_000));
    }
}
