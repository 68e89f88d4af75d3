//! Hankel-type determinants H_k(f) = det(χ^i τ^j f), coefficient determinants d_s,
//! Moore determinants, and the identities that tie them together.

use rayon::prelude::*;

use crate::algebra::{bk_poly, BiPoly, Field, FqElem, Var};
use crate::check::Witness;
use crate::dd::{DSeries, Deformation};
use crate::error::{Error, Result};
use crate::series::USeries;

/// Largest supported determinant size.
pub const MAX_K: usize = 5;

/// Determinant by Laplace expansion over column subsets (2^n · n products).
///
/// `mul(r, acc, entry)` multiplies a partial product over the first `r` rows by an entry of row `r`.
pub fn laplace_det<T, M, A, N>(entries: &[Vec<T>], one: T, mul: M, add: A, neg: N) -> T
where
    T: Clone + Send + Sync,
    M: Fn(usize, &T, &T) -> T + Sync,
    A: Fn(&T, &T) -> T + Sync,
    N: Fn(&T) -> T + Sync,
{
    let n = entries.len();
    assert!(entries.iter().all(|row| row.len() == n), "square matrix expected");
    let full = 1usize << n;
    let mut dp: Vec<Option<T>> = vec![None; full];
    dp[0] = Some(one);
    for r in 0..n {
        let targets: Vec<usize> = (0..full).filter(|m| m.count_ones() as usize == r + 1).collect();
        let layer: Vec<(usize, Option<T>)> = targets
            .par_iter()
            .map(|&target| {
                let mut acc: Option<T> = None;
                for c in 0..n {
                    if target & (1 << c) == 0 {
                        continue;
                    }
                    let prev_mask = target & !(1 << c);
                    let Some(prev) = &dp[prev_mask] else { continue };
                    let mut term = mul(r, prev, &entries[r][c]);
                    // inversions: earlier rows sitting in columns to the right of c
                    if (prev_mask >> (c + 1)).count_ones() % 2 == 1 {
                        term = neg(&term);
                    }
                    acc = Some(match acc {
                        None => term,
                        Some(a) => add(&a, &term),
                    });
                }
                (target, acc)
            })
            .collect();
        for (target, v) in layer {
            dp[target] = v;
        }
    }
    dp[full - 1].take().expect("full mask is always reached")
}

/// Determinant of a polynomial matrix.
pub fn poly_det(field: &Field, entries: &[Vec<BiPoly>]) -> BiPoly {
    if entries.is_empty() {
        return BiPoly::one(field);
    }
    laplace_det(entries, BiPoly::one(field), |_, a, b| a * b, |a, b| a + b, |a| -a)
}

/// Determinant of a matrix of series, correct below `cap`.
pub fn series_det(field: &Field, entries: &[Vec<USeries>], cap: i64) -> USeries {
    let n = entries.len() as i64;
    if n == 0 {
        return USeries::one(field);
    }
    let vmin = entries.iter().flatten().map(USeries::valuation_bound).min().unwrap_or(0).min(0);
    // a factor truncated at C perturbs a product at exponents ≥ C + (other valuations)
    let entry_cap = cap - (n - 1) * vmin;
    let entries: Vec<Vec<USeries>> =
        entries.iter().map(|row| row.iter().map(|e| e.truncate(entry_cap)).collect()).collect();
    let det = laplace_det(
        &entries,
        USeries::one(field),
        |r, a, b| a.mul(b).truncate(cap - (n - 1 - r as i64) * vmin),
        |a, b| a.add(b),
        |a| a.neg(),
    );
    det.truncate(cap)
}

/// The matrix (χ^i τ^j f) for 0 ≤ i, j < k, truncated at `cap`.
pub fn hankel_matrix(f: &USeries, k: usize, cap: i64) -> Vec<Vec<USeries>> {
    let cols: Vec<USeries> = (0..k).map(|j| f.tau_pow(j as u32, cap)).collect();
    (0..k).map(|i| cols.iter().map(|c| c.chi_pow(i as u32)).collect()).collect()
}

/// H_k(f) below `cap` (capped further by the precision of f).
pub fn hankel_det(f: &USeries, k: usize, cap: i64) -> Result<USeries> {
    if k == 0 || k > MAX_K {
        return Err(Error::Unsupported(format!("H_k for k = {k}; supported 1..={MAX_K}")));
    }
    Ok(series_det(f.field(), &hankel_matrix(f, k, cap), cap))
}

/// ν_k = (q^k - 1)(q^{k-1} - 1)/(q^2 - 1), the u-valuation of H_k(𝐝).
pub fn nu(q: u64, k: u32) -> u64 {
    (q.pow(k) - 1) * (q.pow(k - 1) - 1) / (q * q - 1)
}

/// Multi-index s = (s_1, ..., s_k) with norm Σ s_i q^{i-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn norm(&self, q: u64) -> u64 {
        self.0.iter().enumerate().map(|(i, &s)| s as u64 * q.pow(i as u32)).sum()
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// s0 = (t_k, ..., t_1) with t_1 = 0 and t_l = 1 + q^2 + ... + q^{2(l-2)}.
    pub fn s0(q: u64, k: usize) -> MultiIndex {
        let t = |l: usize| -> usize { (0..l.saturating_sub(1)).map(|i| q.pow(2 * i as u32) as usize).sum() };
        MultiIndex((1..=k).rev().map(t).collect())
    }

    /// All multi-indices of length k with norm at most `cutoff`, in lexicographic order.
    pub fn enumerate(q: u64, k: usize, cutoff: u64) -> Vec<MultiIndex> {
        fn rec(q: u64, k: usize, i: usize, budget: u64, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if i == k {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            let w = q.pow(i as u32);
            for s in 0..=(budget / w) {
                cur.push(s as usize);
                rec(q, k, i + 1, budget - s * w, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(q, k, 0, cutoff, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

/// d_s = det(χ^i τ^j c_{s_j}).
pub fn hankel_coeff_det(s: &MultiIndex, d: &DSeries) -> Result<BiPoly> {
    if let Some(&bad) = s.0.iter().find(|&&x| x >= d.len()) {
        return Err(Error::InsufficientPrecision(format!("c_{bad} not computed ({} available)", d.len())));
    }
    let k = s.k();
    let entries: Vec<Vec<BiPoly>> = (0..k)
        .map(|i| (0..k).map(|j| d.c(s.0[j]).frobenius_theta_n(j as u32).frobenius_t_n(i as u32)).collect())
        .collect();
    Ok(poly_det(d.field(), &entries))
}

/// Moore determinant M(ν) = det(t^{ν_c q^r}).
pub fn moore_det(field: &Field, nu: &[u32]) -> BiPoly {
    let q = field.q() as u64;
    let k = nu.len();
    let entries: Vec<Vec<BiPoly>> = (0..k)
        .map(|r| {
            nu.iter()
                .map(|&v| {
                    let e = u32::try_from(v as u64 * q.pow(r as u32)).expect("t-degree overflow");
                    BiPoly::monomial(field, FqElem::ONE, e, 0)
                })
                .collect()
        })
        .collect();
    poly_det(field, &entries)
}

/// H_k(𝐄) = (-1)^k h^{(q^k-1)/(q-1)} τ(H_k(𝐝)), compared below `precision`.
pub fn relationship_check(def: &Deformation, k: usize, precision: i64) -> Result<Witness> {
    let q = def.field().q() as u64;
    let lhs = hankel_det(&def.e_bold, k, precision)?;
    let hd = hankel_det(&def.d, k, precision)?;
    let mut rhs = def.gens.h.pow((q.pow(k as u32) - 1) / (q - 1)).mul(&hd.tau_pow(1, precision));
    if k % 2 == 1 {
        rhs = rhs.neg();
    }
    Ok(Witness::equal(&lhs, &rhs, precision))
}

/// H_{s,k}^{q+1} - H_{s,k-1}^q H_{s,k+1} = H_{s-1,k}^q H_{s+1,k} with H_{s,k} = τ^s H_k(f), s ≥ 1.
pub fn sylvester_check(f: &USeries, s: u32, k: usize, precision: i64) -> Result<Witness> {
    if s < 1 {
        return Err(Error::Unsupported("sylvester_check needs s >= 1".into()));
    }
    if k < 2 || k + 1 > MAX_K {
        return Err(Error::Unsupported(format!("sylvester_check needs 2 <= k <= {}", MAX_K - 1)));
    }
    let q = f.q() as i64;
    // every piece carries at least one twist, so H at about precision/q suffices
    let base = (precision - 1) / q + 2;
    let cap = precision;
    let h_km1 = hankel_det(f, k - 1, base)?;
    let h_k = hankel_det(f, k, base)?;
    let h_kp1 = hankel_det(f, k + 1, base)?;
    let frob = |x: &USeries| x.tau_pow(1, cap).chi();
    let hs_k = h_k.tau_pow(s, cap);
    let lhs = hs_k.mul(&frob(&hs_k)).sub(&frob(&h_km1.tau_pow(s, cap)).mul(&h_kp1.tau_pow(s, cap)));
    let rhs = frob(&h_k.tau_pow(s - 1, cap)).mul(&h_k.tau_pow(s + 1, cap));
    Ok(Witness::equal(&lhs, &rhs, precision))
}

/// B_k(t) divides every coefficient of H_k(f) below `precision`.
pub fn divisibility_check(f: &USeries, k: usize, precision: i64) -> Result<Witness> {
    let hk = hankel_det(f, k, precision)?;
    if hk.precision() < precision {
        return Ok(Witness::fail(hk.precision(), None, "insufficient precision"));
    }
    let bk = bk_poly(f.field(), k as u32, Var::T);
    Ok(Witness::from_result(hk.exact_div_scalar(&bk).map(|_| Witness::pass(precision)), precision))
}

/// The coefficient of v^n in H_k(𝐝) equals Σ_{‖s‖ = n} d_s, for n ≤ cutoff.
pub fn hk_expansion_check(d: &DSeries, k: usize, cutoff: u64) -> Result<Witness> {
    let field = d.field();
    let q = field.q() as u64;
    let m = q as i64 - 1;
    let target = m * (cutoff as i64 + 1);
    let hk = hankel_det(&d.to_useries(), k, target)?;
    let mut sums = vec![BiPoly::zero(field); cutoff as usize + 1];
    for s in MultiIndex::enumerate(q, k, cutoff) {
        let n = s.norm(q) as usize;
        sums[n] = &sums[n] + &hankel_coeff_det(&s, d)?;
    }
    let expansion = USeries::from_terms(field, target, sums.into_iter().enumerate().map(|(n, c)| (m * n as i64, c)));
    Ok(Witness::equal(&hk, &expansion, target))
}

/// ‖s0^σ‖ > ‖s0‖ for every non-identity permutation σ.
pub fn permutation_check(q: u64, k: usize) -> Witness {
    let s0 = MultiIndex::s0(q, k);
    let base = s0.norm(q);
    let mut failures = Vec::new();
    for_each_permutation(k, |perm| {
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return;
        }
        let permuted = MultiIndex(perm.iter().map(|&p| s0.0[p]).collect());
        if permuted.norm(q) <= base {
            failures.push(format!("{:?}", permuted.0));
        }
    });
    match failures.first() {
        None => Witness::pass(base as i64),
        Some(first) => Witness::fail(base as i64, None, format!("permuted index {first} has norm <= {base}")),
    }
}

/// For every s with ‖s‖ ≤ cutoff and d_s ≠ 0, the sorted t-degrees satisfy deg_l ≥ l (0-indexed).
pub fn permutation_degree_check(d: &DSeries, k: usize, cutoff: u64) -> Result<Witness> {
    let q = d.field().q() as u64;
    let indices = MultiIndex::enumerate(q, k, cutoff);
    let bad: Result<Vec<MultiIndex>> = indices
        .into_par_iter()
        .filter_map(|s| {
            let mut degs: Vec<Option<u32>> = s.0.iter().map(|&x| d.c(x).deg_t()).collect();
            degs.sort();
            let ok = degs.iter().enumerate().all(|(l, dg)| dg.is_some_and(|dg| dg as usize >= l));
            if ok {
                return None;
            }
            match hankel_coeff_det(&s, d) {
                Ok(det) if det.is_zero() => None,
                Ok(_) => Some(Ok(s)),
                Err(e) => Some(Err(e)),
            }
        })
        .collect();
    let bad = bad?;
    Ok(match bad.iter().min() {
        None => Witness::pass(cutoff as i64),
        Some(s) => Witness::fail(cutoff as i64, Some(s.norm(q) as i64), format!("d_s nonzero for s = {:?}", s.0)),
    })
}

/// Calls `f` on every permutation of 0..n (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::EXACT;

    #[test]
    fn det_small() {
        let f3 = Field::prime(3).unwrap();
        let p = |s: &str| BiPoly::parse(&f3, s).unwrap();
        let m = vec![vec![p("1"), p("2"), p("0")], vec![p("0"), p("1"), p("theta")], vec![p("t"), p("0"), p("1")]];
        // 1*(1 - 0) - 2*(0 - θt) + 0 = 1 + 2θt
        assert_eq!(poly_det(&f3, &m), p("2*t*theta + 1"));
    }

    #[test]
    fn permutations_are_all_visited() {
        let mut seen = std::collections::BTreeSet::new();
        for_each_permutation(4, |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn s0_values() {
        assert_eq!(MultiIndex::s0(3, 3).0, vec![10, 1, 0]);
        assert_eq!(MultiIndex::s0(3, 3).norm(3), 13);
        for q in [2u64, 3, 5] {
            for k in 1..=5u32 {
                let expect = nu(q, k) / (q - 1);
                assert_eq!(MultiIndex::s0(q, k as usize).norm(q), expect);
            }
        }
    }

    #[test]
    fn moore_basics() {
        let f2 = Field::prime(2).unwrap();
        for k in 1..=4u32 {
            let nus: Vec<u32> = (0..k).collect();
            assert_eq!(moore_det(&f2, &nus), bk_poly(&f2, k, Var::T));
        }
        assert!(moore_det(&f2, &[3, 3]).is_zero());
    }

    #[test]
    fn h1_is_identity() {
        let f3 = Field::prime(3).unwrap();
        let f = USeries::from_terms(&f3, EXACT, [(0, BiPoly::one(&f3)), (2, BiPoly::t(&f3))]);
        assert_eq!(hankel_det(&f, 1, 20).unwrap(), f.truncate(20));
        assert!(hankel_det(&f, 6, 20).is_err());
    }

    #[test]
    fn constant_has_vanishing_hankel() {
        let f3 = Field::prime(3).unwrap();
        let one = USeries::one(&f3);
        assert!(hankel_det(&one, 2, 20).unwrap().is_zero_to_precision());
    }

    #[test]
    fn s0_determinant() {
        let f3 = Field::prime(3).unwrap();
        let d = DSeries::new(&f3, 12);
        for k in 1..=3 {
            let s0 = MultiIndex::s0(3, k);
            assert_eq!(hankel_coeff_det(&s0, &d).unwrap(), bk_poly(&f3, k as u32, Var::T));
        }
    }
}
