//! Growth functions of the dichotomy, evaluated exactly while the values stay
//! within [`MAX_BITS`] bits.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::QuasiError;
use crate::numeric::binomial;

/// Largest intermediate value, in bits, that the evaluators will materialize.
pub const MAX_BITS: u64 = 1 << 22;

fn too_large(what: &str) -> QuasiError {
    QuasiError::TooLarge(what.to_string())
}

fn small(x: &BigUint, what: &str) -> Result<u64, QuasiError> {
    x.to_u64().filter(|&v| v <= 1 << 24).ok_or_else(|| too_large(what))
}

fn pow(base: &BigUint, exp: &BigUint, what: &str) -> Result<BigUint, QuasiError> {
    if base <= &BigUint::one() || exp == &BigUint::ZERO {
        return Ok(if exp == &BigUint::ZERO { BigUint::one() } else { base.clone() });
    }
    let e = exp.to_u32().ok_or_else(|| too_large(what))?;
    if base.bits().saturating_mul(u64::from(e)) > MAX_BITS {
        return Err(too_large(what));
    }
    Ok(base.pow(e))
}

/// Ramsey upper bound `R(n) = C(2n-2, n-1)` (`R(0) = 0`).
pub fn ramsey(n: &BigUint) -> Result<BigUint, QuasiError> {
    if n == &BigUint::ZERO {
        return Ok(BigUint::ZERO);
    }
    let n = small(n, "ramsey")?;
    Ok(binomial(2 * n - 2, n - 1))
}

/// Clique-lemma growth: `f(1) = 1`, `f(n+1) = 1 + R(2 f(n))`; `f(0) = 0`.
pub fn clique_bound(n: u64) -> Result<BigUint, QuasiError> {
    let mut f = BigUint::from(u64::from(n > 0));
    for _ in 1..n {
        f = BigUint::one() + ramsey(&(f * 2u32))?;
    }
    Ok(f)
}

/// `g(q, n) = (2n)^(2 f(q))`.
pub fn lemma0_bound(q: u64, n: &BigUint) -> Result<BigUint, QuasiError> {
    let f = clique_bound(q)?;
    pow(&(n * 2u32), &(f * 2u32), "g(q, n)")
}

/// `f(r, p, q, n) = (r+3)^(p + (r+2) g(q, n))`.
pub fn lemma1_bound(r: u64, p: &BigUint, q: u64, n: &BigUint) -> Result<BigUint, QuasiError> {
    let g = lemma0_bound(q, n)?;
    let exp = p + g * (r + 2);
    pow(&BigUint::from(r + 3), &exp, "f(r, p, q, n)")
}

/// `F~(r, p, q, 0) = q`, `F~(r, p, q, t) = f(r, p, q, F~(r, p, q, t-1))`.
pub fn peel_bound(r: u64, p: &BigUint, q: u64, t: u64) -> Result<BigUint, QuasiError> {
    let mut acc = BigUint::from(q);
    for _ in 0..t {
        acc = lemma1_bound(r, p, q, &acc)?;
    }
    Ok(acc)
}

/// `F(r, p, q) = F~(r, p, q, C(q, 2))`.
pub fn rcdbg_bound(r: u64, p: &BigUint, q: u64) -> Result<BigUint, QuasiError> {
    peel_bound(r, p, q, q * q.saturating_sub(1) / 2)
}

/// `N~(r, m, i)` for the crown orders `qs[i]` excluded at each depth: `N~(r, m, r) = m`,
/// `N~(r, m, i) = F(r, N~(r, m, i+1), qs[i])`.
pub fn margin_n_tilde(r: u64, m: u64, i: u64, qs: &[u64]) -> Result<BigUint, QuasiError> {
    if qs.len() < r as usize {
        return Err(QuasiError::Precondition(format!("need {r} crown orders, got {}", qs.len())));
    }
    let mut acc = BigUint::from(m);
    for j in (i..r).rev() {
        acc = rcdbg_bound(r, &acc, qs[j as usize])?;
    }
    Ok(acc)
}

/// `N(r, m) = N~(r, m, 0)`.
pub fn margin_n(r: u64, m: u64, qs: &[u64]) -> Result<BigUint, QuasiError> {
    margin_n_tilde(r, m, 0, qs)
}

/// `s(r) = sum_{i<r} C(qs[i], 2)`.
pub fn margin_s(r: u64, qs: &[u64]) -> Result<BigUint, QuasiError> {
    if qs.len() < r as usize {
        return Err(QuasiError::Precondition(format!("need {r} crown orders, got {}", qs.len())));
    }
    Ok(qs[..r as usize].iter().map(|&q| binomial(q, 2)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn first_values() {
        assert_eq!(ramsey(&big(2)).unwrap(), big(2));
        assert_eq!(ramsey(&big(3)).unwrap(), big(6));
        assert_eq!(clique_bound(1).unwrap(), big(1));
        assert_eq!(clique_bound(2).unwrap(), big(3));
        assert_eq!(clique_bound(3).unwrap(), big(253));
        assert_eq!(lemma0_bound(2, &big(2)).unwrap(), big(4096));
        assert_eq!(lemma0_bound(1, &big(5)).unwrap(), big(100));
        assert_eq!(peel_bound(0, &big(1), 2, 0).unwrap(), big(2));
        assert_eq!(margin_s(2, &[3, 4]).unwrap(), big(9));
        assert_eq!(margin_n(0, 7, &[]).unwrap(), big(7));
    }

    #[test]
    fn lemma1_small_case() {
        // (0+3)^(1 + 2 * g(1, 1)) with g(1, 1) = 2^2.
        assert_eq!(lemma1_bound(0, &big(1), 1, &big(1)).unwrap(), big(3u64.pow(9)));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(clique_bound(5), Err(QuasiError::TooLarge(_))));
        assert!(matches!(rcdbg_bound(1, &big(2), 3), Err(QuasiError::TooLarge(_))));
    }

    #[test]
    fn monotone_where_evaluable() {
        for q in 1..4 {
            assert!(clique_bound(q).unwrap() < clique_bound(q + 1).unwrap());
        }
        for n in 1..6 {
            assert!(lemma0_bound(2, &big(n)).unwrap() < lemma0_bound(2, &big(n + 1)).unwrap());
            assert!(lemma0_bound(1, &big(n)).unwrap() < lemma0_bound(2, &big(n)).unwrap());
        }
        for p in 1..4 {
            let a = lemma1_bound(0, &big(p), 1, &big(1)).unwrap();
            assert!(a < lemma1_bound(0, &big(p + 1), 1, &big(1)).unwrap());
            assert!(a < lemma1_bound(1, &big(p), 1, &big(1)).unwrap());
        }
    }
}
