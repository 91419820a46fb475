//! Exact combinatorial arithmetic and seeded randomness.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` over signed arguments: zero when `k < 0` or `k > n`.
pub fn binomial_signed(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 {
        return BigUint::ZERO;
    }
    binomial(n as u64, k as u64)
}

/// `C(n, 2)` in machine arithmetic.
pub fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Deterministic generator keyed by `seed`; `stream` selects an independent substream.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Advances `idx` to the next `idx.len()`-subset of `0..n` in lexicographic order.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(2, 3), BigUint::ZERO);
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(50, 25), "126410606437752".parse::<BigUint>().unwrap());
        assert_eq!(binomial_signed(4, -1), BigUint::ZERO);
        assert_eq!(pairs(4), 6);
    }

    #[test]
    fn combinations_in_order() {
        let mut idx = vec![0, 1];
        let mut all = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            all.push(idx.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], vec![0, 2]);
        let mut empty: Vec<usize> = Vec::new();
        assert!(!next_combination(&mut empty, 3));
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = rng(7, 0).random();
        let b: u64 = rng(7, 0).random();
        let c: u64 = rng(7, 1).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
