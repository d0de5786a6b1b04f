use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::prime::{is_prime, small_primes, SIEVE_LIMIT};
use crate::error::{Error, Result};

/// Limits for [`factorize_with`]. Trial division covers every prime below
/// `trial_limit`; whatever composite cofactor remains must fit in
/// `max_cofactor_bits` and split within `rho_iterations` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_limit: u32,
    pub max_cofactor_bits: u64,
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self {
            trial_limit: SIEVE_LIMIT,
            max_cofactor_bits: 128,
            rho_iterations: 1 << 22,
        }
    }
}

/// Prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrimeFactorization {
    factors: Vec<(BigUint, u64)>,
}

impl PrimeFactorization {
    pub(crate) fn from_map(map: BTreeMap<BigUint, u64>) -> Self {
        Self {
            factors: map.into_iter().filter(|(_, e)| *e > 0).collect(),
        }
    }

    pub fn factors(&self) -> &[(BigUint, u64)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &BigUint) -> u64 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// Multiplies the factors back together.
    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e as u32))
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

pub fn factorize(n: &BigUint) -> Result<PrimeFactorization> {
    factorize_with(n, &FactorBudget::default())
}

pub fn factorize_with(n: &BigUint, budget: &FactorBudget) -> Result<PrimeFactorization> {
    if n < &BigUint::from(2u32) {
        return Err(Error::invalid(format!("cannot factor {n}")));
    }
    let mut map = BTreeMap::new();
    let mut rest = n.clone();

    for &p in small_primes() {
        if p > budget.trial_limit {
            break;
        }
        if let Some(r) = rest.to_u64() {
            rest = BigUint::from(trial_u64(r, p, budget.trial_limit, &mut map));
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            *map.entry(pb).or_insert(0) += e;
        }
    }

    if rest.is_one() {
        return Ok(PrimeFactorization::from_map(map));
    }
    let limit = BigUint::from(budget.trial_limit);
    if rest <= &limit * &limit || is_prime(&rest) {
        *map.entry(rest).or_insert(0) += 1;
        return Ok(PrimeFactorization::from_map(map));
    }
    if rest.bits() > budget.max_cofactor_bits {
        return Err(Error::FactoringBudgetExceeded(rest));
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if is_prime(&m) {
            *map.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = rho_split(&m, budget.rho_iterations).ok_or_else(|| Error::FactoringBudgetExceeded(m.clone()))?;
        stack.push(&m / &d);
        stack.push(d);
    }
    Ok(PrimeFactorization::from_map(map))
}

/// Trial division of a word-sized cofactor starting at prime `from`.
/// Returns the unfactored remainder (1 or a prime, or a composite whose
/// smallest factor exceeds `limit`).
fn trial_u64(mut n: u64, from: u32, limit: u32, map: &mut BTreeMap<BigUint, u64>) -> u64 {
    for &p in small_primes().iter().skip_while(|&&p| p < from) {
        if p > limit {
            break;
        }
        let p = p as u64;
        if p * p > n {
            break;
        }
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            *map.entry(BigUint::from(p)).or_insert(0) += e;
        }
    }
    n
}

/// Pollard-Brent rho with fixed seeds; returns a nontrivial divisor of the
/// composite `n` or `None` once the iteration budget is spent.
fn rho_split(n: &BigUint, budget: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let mut spent = 0u64;
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        let mut ys = y.clone();
        const BLOCK: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BLOCK.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BLOCK;
            }
            spent += r;
            if spent > budget {
                return None;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}
