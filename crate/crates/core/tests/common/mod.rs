//! Oracles that share no code with the library under test.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn pairwise_coprime(a: u64, b: u64, c: u64) -> bool {
    gcd(a, b) == 1 && gcd(a, c) == 1 && gcd(b, c) == 1
}

/// Every `(x, y, z)` in `[1, cap]^3` with `a^x + b^y = c^z`, by brute force
/// in u128. Panics if a power does not fit, so callers keep `cap` small.
pub fn naive_solutions(a: u64, b: u64, c: u64, cap: u32) -> Vec<(u64, u64, u64)> {
    let powers = |base: u64| -> Vec<u128> {
        (1..=cap)
            .map(|e| (base as u128).checked_pow(e).expect("power fits in u128"))
            .collect()
    };
    let (pa, pb, pc) = (powers(a), powers(b), powers(c));
    let mut out = Vec::new();
    for (z, cz) in pc.iter().enumerate() {
        for (y, by) in pb.iter().enumerate() {
            for (x, ax) in pa.iter().enumerate() {
                if ax.checked_add(*by) == Some(*cz) {
                    out.push((x as u64 + 1, y as u64 + 1, z as u64 + 1));
                }
            }
        }
    }
    out.sort_by_key(|&(x, y, z)| (z, y, x));
    out
}

/// `(l, m)` with `u^l + v^m = k` (or `u^l - v^m = k`), exponents in `[1, cap]`.
pub fn naive_two_term(u: u64, v: u64, k: u64, cap: u64, diff: bool) -> Vec<(u64, u64)> {
    let k = BigUint::from(k);
    let mut out = Vec::new();
    let mut ul = BigUint::one();
    for l in 1..=cap {
        ul *= u;
        let mut vm = BigUint::one();
        for m in 1..=cap {
            vm *= v;
            let hit = if diff { ul > vm && &ul - &vm == k } else { &ul + &vm == k };
            if hit {
                out.push((l, m));
            }
            if !diff && vm > k {
                break;
            }
        }
        if !diff && ul > k {
            break;
        }
    }
    out
}

/// `c^q = b^p` for some small exponents, which for bases up to 50 is the
/// only way `log c / log b` can be rational.
pub fn multiplicatively_dependent(b: u64, c: u64) -> bool {
    (1..=6u32).any(|p| (1..=6u32).any(|q| (c as u128).pow(q) == (b as u128).pow(p)))
}

/// `(n, δ)` minimal with `r^n ≡ δ (mod s)`, `δ = ±1`, by stepping powers.
pub fn exhaustive_pm1(r: u64, s: u64) -> (u64, i8) {
    let mut acc = 1u64;
    for n in 1..=s {
        acc = (acc as u128 * r as u128 % s as u128) as u64;
        if acc == 1 {
            return (n, 1);
        }
        if acc == s - 1 {
            return (n, -1);
        }
    }
    panic!("no ±1 power of {r} mod {s}");
}

/// Closed fixed-point interval `[lo, hi] / 2^bits`.
#[derive(Clone)]
struct Fixed {
    lo: BigUint,
    hi: BigUint,
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

impl Fixed {
    fn int(n: u64, bits: u64) -> Self {
        let v = BigUint::from(n) << bits;
        Fixed { lo: v.clone(), hi: v }
    }

    fn mul(&self, o: &Self, bits: u64) -> Self {
        let one = BigUint::one() << bits;
        Fixed {
            lo: (&self.lo * &o.lo) >> bits,
            hi: ceil_div(&(&self.hi * &o.hi), &one),
        }
    }

    fn div(&self, o: &Self, bits: u64) -> Option<Self> {
        if o.lo.is_zero() {
            return None;
        }
        Some(Fixed {
            lo: (&self.lo << bits) / &o.hi,
            hi: ceil_div(&(&self.hi << bits), &o.lo),
        })
    }
}

/// First `count` partial quotients of `log c / log b` via Shanks' scheme:
/// `x0 = c`, `x1 = b`, `a_i = max{n : x_{i+1}^n <= x_i}`,
/// `x_{i+2} = x_i / x_{i+1}^{a_i}`. Only products and quotients of `b` and
/// `c` appear; every step rounds outward, and any comparison the
/// enclosure cannot decide restarts at twice the precision.
pub fn shanks_log_cf(c: u64, b: u64, count: usize) -> Vec<u64> {
    let mut bits = 512;
    loop {
        if let Some(q) = shanks_at(c, b, count, bits) {
            return q;
        }
        bits *= 2;
        assert!(bits <= 1 << 22, "Shanks oracle did not converge for ({c}, {b})");
    }
}

fn shanks_at(c: u64, b: u64, count: usize, bits: u64) -> Option<Vec<u64>> {
    let one = BigUint::one() << bits;
    let mut prev = Fixed::int(c, bits);
    let mut cur = Fixed::int(b, bits);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if cur.lo <= one {
            return None;
        }
        let mut n = 0u64;
        let mut power = Fixed { lo: one.clone(), hi: one.clone() };
        loop {
            let next = power.mul(&cur, bits);
            if next.hi <= prev.lo {
                n += 1;
                power = next;
            } else if next.lo > prev.hi {
                break;
            } else {
                return None;
            }
            if n > 1_000_000 {
                return None;
            }
        }
        out.push(n);
        let rest = prev.div(&power, bits)?;
        prev = cur;
        cur = rest;
    }
    Some(out)
}

/// `floor(10^e)` for a real exponent, exact to ~15 significant digits,
/// which is plenty for a strictly increasing sample.
pub fn pow10_real(e: f64) -> BigUint {
    let whole = e.floor();
    let mantissa = (10f64.powf(e - whole) * 1e15).round().to_u64().unwrap();
    let shift = whole as u32;
    if shift >= 15 {
        BigUint::from(mantissa) * BigUint::from(10u32).pow(shift - 15)
    } else {
        BigUint::from(mantissa) / BigUint::from(10u32).pow(15 - shift)
    }
}
