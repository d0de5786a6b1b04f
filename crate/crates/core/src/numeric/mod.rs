//! Exact integer primitives: powers, perfect-power membership, modular
//! exponentiation, factorization, valuations and multiplicative orders.
//!
//! Everything here is a pure function over `BigUint`. Nothing falls back to
//! floating point.

mod factor;
mod prime;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

pub use factor::{factorize, factorize_with, FactorBudget, PrimeFactorization};
pub use prime::{is_prime, is_prime_u64};

use crate::error::{Error, Result};

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn pow(base: u64, exp: u64) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

/// Largest `e` with `base^e <= n`, together with `base^e`.
///
/// Uses repeated squaring to bracket the exponent, then binary descent, so
/// it costs O(log e) big multiplications.
pub fn integer_log(n: &BigUint, base: &BigUint) -> (u64, BigUint) {
    assert!(base > &BigUint::one(), "integer_log base must be >= 2");
    assert!(!n.is_zero(), "integer_log of zero");
    let mut squares = vec![base.clone()];
    loop {
        let last = squares.last().unwrap();
        let next = last * last;
        if &next > n {
            break;
        }
        squares.push(next);
    }
    let mut e = 0u64;
    let mut acc = BigUint::one();
    for (k, sq) in squares.iter().enumerate().rev() {
        let cand = &acc * sq;
        if &cand <= n {
            acc = cand;
            e += 1 << k;
        }
    }
    (e, acc)
}

/// Returns `e >= 1` with `base^e == n`, if one exists.
pub fn perfect_power_exponent(n: &BigUint, base: &BigUint) -> Option<u64> {
    if n < base || !(n % base).is_zero() {
        return None;
    }
    let (e, acc) = integer_log(n, base);
    (acc == *n).then_some(e)
}

/// `r^e mod m`. Panics if `m` is zero.
pub fn mod_pow(r: &BigUint, e: &BigUint, m: &BigUint) -> BigUint {
    r.modpow(e, m)
}

/// Largest `a` with `p^a | n`. `p >= 2`, `n >= 1`.
pub fn p_adic_valuation(p: &BigUint, n: &BigUint) -> u64 {
    valuation_capped(p, n, u64::MAX)
}

/// Like [`p_adic_valuation`] but stops counting at `cap`.
pub fn valuation_capped(p: &BigUint, n: &BigUint, cap: u64) -> u64 {
    assert!(p > &BigUint::one(), "valuation base must be >= 2");
    assert!(!n.is_zero(), "valuation of zero is unbounded");
    let mut a = 0;
    let mut rest = n.clone();
    while a < cap {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            break;
        }
        rest = q;
        a += 1;
    }
    a
}

/// Factorization of the Carmichael function λ(s), assembled from the
/// factorization of `s` without materializing λ(s) first.
pub fn carmichael_factorization(s: &BigUint) -> Result<PrimeFactorization> {
    let fs = factorize(s)?;
    let two = big(2);
    let mut lcm: BTreeMap<BigUint, u64> = BTreeMap::new();
    let bump = |p: &BigUint, e: u64, lcm: &mut BTreeMap<BigUint, u64>| {
        if e > 0 {
            let slot = lcm.entry(p.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
    };
    for (p, k) in fs.factors() {
        if p == &two {
            let e = match k {
                1 => 0,
                2 => 1,
                _ => k - 2,
            };
            bump(p, e, &mut lcm);
            continue;
        }
        bump(p, k - 1, &mut lcm);
        let pm1 = p - 1u32;
        if pm1 > BigUint::one() {
            for (q, e) in factorize(&pm1)?.factors() {
                bump(q, *e, &mut lcm);
            }
        }
    }
    Ok(PrimeFactorization::from_map(lcm))
}

pub fn carmichael(s: &BigUint) -> Result<BigUint> {
    Ok(carmichael_factorization(s)?.product())
}

/// Least `n >= 1` with `r^n ≡ 1 (mod s)`, found by descending from λ(s)
/// through its prime divisors.
pub fn multiplicative_order(r: &BigUint, s: &BigUint) -> Result<BigUint> {
    if s < &big(2) {
        return Err(Error::invalid(format!("modulus {s} must be >= 2")));
    }
    if !r.gcd(s).is_one() {
        return Err(Error::NotCoprime {
            r: r.clone(),
            s: s.clone(),
        });
    }
    let lambda = carmichael_factorization(s)?;
    let mut order = lambda.product();
    let one = BigUint::one();
    for (q, e) in lambda.factors() {
        for _ in 0..*e {
            let cand = &order / q;
            if r.modpow(&cand, s) == one {
                order = cand;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn perfect_power_fixtures() {
        assert_eq!(perfect_power_exponent(&big(8), &big(2)), Some(3));
        assert_eq!(perfect_power_exponent(&big(25), &big(5)), Some(2));
        assert_eq!(perfect_power_exponent(&big(24), &big(2)), None);
        assert_eq!(perfect_power_exponent(&big(5), &big(5)), Some(1));
        assert_eq!(perfect_power_exponent(&big(4), &big(5)), None);
    }

    #[test]
    fn perfect_power_table() {
        for base in 2..=50u64 {
            for e in 1..=64u64 {
                let n = pow(base, e);
                assert_eq!(perfect_power_exponent(&n, &big(base)), Some(e));
                assert_eq!(perfect_power_exponent(&(&n + 1u32), &big(base)), None);
                assert_eq!(perfect_power_exponent(&(&n - 1u32), &big(base)), None);
            }
        }
    }

    #[test]
    fn mod_pow_fixtures() {
        assert_eq!(mod_pow(&big(2), &big(10), &big(1000)), big(24));
        assert_eq!(mod_pow(&big(7), &big(0), &big(5)), big(1));
        assert_eq!(mod_pow(&big(2), &big(9), &big(27)), big(512 % 27));
        assert_eq!(mod_pow(&big(2), &big(9), &big(27)), big(26));
    }

    #[test]
    fn order_fixtures() {
        let ord = |r, s| multiplicative_order(&big(r), &big(s)).unwrap().to_u64().unwrap();
        assert_eq!(ord(2, 7), 3);
        assert_eq!(ord(3, 8), 2);
        assert_eq!(ord(2, 9), 6);
        assert!(matches!(
            multiplicative_order(&big(2), &big(6)),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn carmichael_small() {
        let lam = |s| carmichael(&big(s)).unwrap().to_u64().unwrap();
        assert_eq!(lam(8), 2);
        assert_eq!(lam(16), 4);
        assert_eq!(lam(15), 4);
        assert_eq!(lam(9), 6);
        assert_eq!(lam(4), 2);
        assert_eq!(lam(2), 1);
        assert_eq!(lam(1_000_003), 1_000_002);
    }

    #[test]
    fn valuation_fixtures() {
        assert_eq!(p_adic_valuation(&big(2), &big(12)), 2);
        assert_eq!(p_adic_valuation(&big(3), &big(12)), 1);
        assert_eq!(p_adic_valuation(&big(5), &big(12)), 0);
        assert_eq!(valuation_capped(&big(2), &big(1024), 4), 4);
    }
}
