//! Exact arithmetic: F_q, F_q[t, θ], brackets, B_k and fraction-free elimination.

mod bipoly;
mod field;
mod matrix;

pub use bipoly::{sum_of_products, BiPoly, Monomial};
pub use field::{format_wpoly, is_prime, parse_wpoly, prime_power, Field, FieldDesc, FqElem};
pub use matrix::{Echelon, PolyMatrix};


use crate::error::{Error, Result};

/// Which variable a univariate helper is built in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    T,
    Theta,
}

/// `[j] = θ^{q^j} - θ` for `j >= 1`.
pub fn bracket(field: &Field, j: i64) -> Result<BiPoly> {
    if j < 1 {
        return Err(Error::BracketIndex(j));
    }
    let theta = BiPoly::theta(field);
    Ok(&theta.frobenius_theta_n(j as u32) - &theta)
}

/// `x^{q^n}` for the chosen variable.
pub fn var_power(field: &Field, var: Var, n: u32) -> BiPoly {
    let e = u32::try_from((field.q() as u64).pow(n)).expect("exponent overflow");
    match var {
        Var::T => BiPoly::monomial(field, FqElem::ONE, e, 0),
        Var::Theta => BiPoly::monomial(field, FqElem::ONE, 0, e),
    }
}

/// `B_k(x) = ∏_{0 <= i < j < k} (x^{q^j} - x^{q^i})`, with `B_1 = 1`.
pub fn bk_poly(field: &Field, k: u32, var: Var) -> BiPoly {
    let mut acc = BiPoly::one(field);
    for j in 1..k {
        for i in 0..j {
            acc = &acc * &(&var_power(field, var, j) - &var_power(field, var, i));
        }
    }
    acc
}

/// Monic gcd of two t-free polynomials.
pub fn theta_gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    assert!(a.is_t_free() && b.is_t_free(), "theta_gcd expects t-free input");
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    make_monic(&x)
}

/// Divides by the leading coefficient (in (t, θ)-lex order). Zero stays zero.
pub fn make_monic(a: &BiPoly) -> BiPoly {
    match a.leading_term() {
        None => a.clone(),
        Some((_, c)) => a.scale(a.field().inv(c).unwrap()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(bracket(&f3, 1).unwrap().to_string(), "theta^3 + 2*theta");
        assert_eq!(bracket(&f3, 2).unwrap().to_string(), "theta^9 + 2*theta");
        let f2 = Field::prime(2).unwrap();
        assert_eq!(bracket(&f2, 2).unwrap().to_string(), "theta^4 + theta");
        assert!(matches!(bracket(&f2, 0), Err(Error::BracketIndex(0))));
        assert!(bracket(&f2, -1).is_err());
    }

    #[test]
    fn bk_examples() {
        let f3 = Field::prime(3).unwrap();
        assert!(bk_poly(&f3, 1, Var::T).is_one());
        assert_eq!(bk_poly(&f3, 2, Var::T).to_string(), "t^3 + 2*t");
        let f2 = Field::prime(2).unwrap();
        // hand expansion: (t^2 - t)(t^4 - t)(t^4 - t^2)
        let t = BiPoly::t(&f2);
        let expected = &(&(&t.pow(2) - &t) * &(&t.pow(4) - &t)) * &(&t.pow(4) - &t.pow(2));
        assert_eq!(bk_poly(&f2, 3, Var::T), expected);
        // monic in t
        let b = bk_poly(&f3, 4, Var::T);
        assert_eq!(b.leading_term().unwrap().1, FqElem::ONE);
        assert_eq!(bk_poly(&f3, 3, Var::Theta), bk_poly(&f3, 3, Var::T).specialize_t());
    }

    #[test]
    fn gcd_of_brackets() {
        let f3 = Field::prime(3).unwrap();
        // [1] divides [2] since F_3 ⊂ F_9
        let g = theta_gcd(&bracket(&f3, 2).unwrap(), &bracket(&f3, 1).unwrap());
        assert_eq!(g, bracket(&f3, 1).unwrap());
        let one = theta_gcd(&BiPoly::parse(&f3, "theta + 1").unwrap(), &BiPoly::parse(&f3, "theta").unwrap());
        assert!(one.is_one());
    }
}
