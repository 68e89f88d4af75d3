//! Seeded random inputs for the sampled checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{BiPoly, Field, FqElem, Monomial};
use crate::series::USeries;

/// A generator that depends only on the user seed and a label, so each check draws the same
/// inputs no matter which other checks run or in which order.
pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    // FNV-1a over the label, mixed with the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h ^ seed.rotate_left(17))
}

/// A nonzero polynomial with t-degree ≤ `max_t`, θ-degree ≤ `max_theta` and at most `max_terms` terms.
pub fn random_bipoly(field: &Field, rng: &mut impl Rng, max_t: u32, max_theta: u32, max_terms: usize) -> BiPoly {
    loop {
        let n = rng.gen_range(1..=max_terms);
        let terms = (0..n).map(|_| {
            let c = FqElem(rng.gen_range(1..field.q()));
            (Monomial { t: rng.gen_range(0..=max_t), th: rng.gen_range(0..=max_theta) }, c)
        });
        let p = BiPoly::from_terms(field, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random element of F_q[t,θ][[v]], v = u^{q-1}, known below u^precision.
///
/// Each v-exponent is occupied with probability `density`.
pub fn random_v_series(field: &Field, rng: &mut impl Rng, precision: i64, density: f64) -> USeries {
    let m = field.q() as i64 - 1;
    let terms: Vec<(i64, BiPoly)> = (0..)
        .map(|s| s * m)
        .take_while(|&n| n < precision)
        .filter_map(|n| if rng.gen_bool(density) { Some((n, random_bipoly(field, rng, 2, 2, 3))) } else { None })
        .collect();
    USeries::from_terms(field, precision, terms)
}

/// k distinct exponents drawn from 0..=max, in random order.
pub fn random_tuple(rng: &mut impl Rng, k: usize, max: u32) -> Vec<u32> {
    assert!(k <= max as usize + 1, "cannot draw {k} distinct values from 0..={max}");
    rand::seq::index::sample(rng, max as usize + 1, k).into_iter().map(|i| i as u32).collect()
}
