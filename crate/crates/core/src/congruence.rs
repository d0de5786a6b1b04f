//! Least ±1 exponents, their lifting to multiples of the modulus, and the
//! congruences every pair of solutions of `A^X + λB^Y = C^Z` satisfies.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::equation::{Sign, TransformedInstance, TransformedSolution};
use crate::error::{Error, Result};
use crate::numeric::{big, factorize, multiplicative_order, pow, valuation_capped};

/// `r^n1 = s·f + δ1` with `n1` the least exponent making `r^n ≡ ±1 (mod s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderRecord {
    #[serde(with = "crate::bignum_serde")]
    pub r: BigUint,
    #[serde(with = "crate::bignum_serde")]
    pub s: BigUint,
    #[serde(with = "crate::bignum_serde")]
    pub n1: BigUint,
    pub delta1: Sign,
    #[serde(with = "crate::bignum_serde")]
    pub f: BigUint,
}

/// `δ mod m` as a residue in `[0, m)`.
fn sign_residue(d: Sign, m: &BigUint) -> BigUint {
    match d {
        Sign::Plus => BigUint::one() % m,
        Sign::Minus => (m - 1u32) % m,
    }
}

pub fn least_pm1(r: &BigUint, s: &BigUint) -> Result<OrderRecord> {
    if s < &big(3) {
        return Err(Error::ModulusTooSmall(s.clone()));
    }
    if r < &big(2) {
        return Err(Error::invalid(format!("base {r} must be >= 2")));
    }
    let d = multiplicative_order(r, s)?;
    let minus_one = s - 1u32;
    let (n1, delta1) = if d.is_even() && r.modpow(&(&d >> 1u32), s) == minus_one {
        (&d >> 1u32, Sign::Minus)
    } else {
        (d, Sign::Plus)
    };
    if r.modpow(&n1, s) != sign_residue(delta1, s) {
        return Err(Error::InvariantViolation(format!(
            "{r}^{n1} is not {} mod {s}",
            delta1.value()
        )));
    }
    let exp: u32 = n1
        .clone()
        .try_into()
        .map_err(|_| Error::invalid(format!("least exponent {n1} too large to materialize r^n1")))?;
    let power = r.pow(exp);
    let shifted = match delta1 {
        Sign::Plus => power - 1u32,
        Sign::Minus => power + 1u32,
    };
    let (f, rem) = shifted.div_rem(s);
    if !rem.is_zero() || f.is_zero() {
        return Err(Error::InvariantViolation(format!("{r}^{n1} - ({}) not a positive multiple of {s}", delta1.value())));
    }
    Ok(OrderRecord { r: r.clone(), s: s.clone(), n1, delta1, f })
}

/// `true` when every prime divisor of `t` divides `s`.
pub fn radical_divides(t: &BigUint, s: &BigUint) -> bool {
    let mut rest = t.clone();
    loop {
        let g = rest.gcd(s);
        if g.is_one() {
            break;
        }
        while (&rest % &g).is_zero() {
            rest /= &g;
        }
    }
    rest.is_one()
}

/// Candidate `r^{n'} ≡ δ' (mod s·t)` on top of a base record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftQuery {
    base: OrderRecord,
    t: BigUint,
    n_prime: BigUint,
    delta_prime: Sign,
}

impl LiftQuery {
    /// Rejects `t` with a prime not dividing `s`, and `s ≡ 2 (mod 4)`.
    pub fn new(base: OrderRecord, t: BigUint, n_prime: BigUint, delta_prime: Sign) -> Result<Self> {
        if t < big(2) {
            return Err(Error::LiftPrecondition(format!("lift factor {t} must be >= 2")));
        }
        if n_prime.is_zero() {
            return Err(Error::LiftPrecondition("candidate exponent must be >= 1".into()));
        }
        if (&base.s % 4u32) == big(2) {
            return Err(Error::LiftPrecondition(format!("s = {} is 2 mod 4", base.s)));
        }
        if !radical_divides(&t, &base.s) {
            return Err(Error::LiftPrecondition(format!(
                "a prime divisor of t = {t} does not divide s = {}",
                base.s
            )));
        }
        Ok(Self { base, t, n_prime, delta_prime })
    }

    pub fn base(&self) -> &OrderRecord {
        &self.base
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub congruence_holds: bool,
    pub n1_divides: bool,
    pub lift_divisibility_holds: bool,
}

impl LiftReport {
    /// The lifting implication: a true congruence forces both divisibilities.
    pub fn implication_holds(&self) -> bool {
        !self.congruence_holds || (self.n1_divides && self.lift_divisibility_holds)
    }
}

/// Evaluates, independently, `r^{n'} ≡ δ' (mod st)`, `n1 | n'` and
/// `n'/n1 ≡ 0 (mod t/gcd(t, f))`.
pub fn verify_order_lift(q: &LiftQuery) -> LiftReport {
    let OrderRecord { r, s, n1, f, .. } = &q.base;
    let st = s * &q.t;
    let congruence_holds = r.modpow(&q.n_prime, &st) == sign_residue(q.delta_prime, &st);
    let n1_divides = (&q.n_prime % n1).is_zero();
    let modulus = &q.t / q.t.gcd(f);
    let lift_divisibility_holds = n1_divides && ((&q.n_prime / n1) % &modulus).is_zero();
    LiftReport {
        congruence_holds,
        n1_divides,
        lift_divisibility_holds,
    }
}

/// Builds the base record for `(r, s)` and checks the lift in one call.
pub fn verify_order_lift_for(r: u64, s: u64, t: u64, n_prime: u64, delta_prime: Sign) -> Result<LiftReport> {
    if s % 4 == 2 {
        return Err(Error::LiftPrecondition(format!("s = {s} is 2 mod 4")));
    }
    let base = least_pm1(&big(r), &big(s))?;
    let q = LiftQuery::new(base, big(t), big(n_prime), delta_prime)?;
    Ok(verify_order_lift(&q))
}

fn validate_pair(
    inst: &TransformedInstance,
    s1: &TransformedSolution,
    s2: &TransformedSolution,
) -> Result<(TransformedSolution, TransformedSolution, bool)> {
    for s in [s1, s2] {
        if !inst.satisfies(s) {
            return Err(Error::NotASolution(format!("{s} for {inst}")));
        }
    }
    if s1 == s2 {
        return Err(Error::Degenerate(format!("identical solutions {s1}")));
    }
    Ok(if s1.z <= s2.z { (*s1, *s2, false) } else { (*s2, *s1, true) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCongruenceReport {
    pub first: TransformedSolution,
    pub second: TransformedSolution,
    pub swapped: bool,
    /// `X1·Y2 - X2·Y1`.
    pub determinant: i128,
    pub nonzero: bool,
    pub congruence: bool,
}

/// For solutions ordered by `Z1 <= Z2`: `X1Y2 - X2Y1 != 0` and
/// `A^|X1Y2 - X2Y1| ≡ (-λ)^(Y1+Y2) (mod C^Z1)`.
pub fn pair_congruence_check(
    inst: &TransformedInstance,
    s1: &TransformedSolution,
    s2: &TransformedSolution,
) -> Result<PairCongruenceReport> {
    let (p, q, swapped) = validate_pair(inst, s1, s2)?;
    let determinant = p.x as i128 * q.y as i128 - q.x as i128 * p.y as i128;
    let modulus = pow(inst.big_c, p.z);
    let lhs = big(inst.big_a).modpow(&BigUint::from(determinant.unsigned_abs()), &modulus);
    let sign = match inst.lambda.negate() {
        Sign::Plus => Sign::Plus,
        Sign::Minus if (p.y + q.y) % 2 == 0 => Sign::Plus,
        Sign::Minus => Sign::Minus,
    };
    let congruence = lhs == sign_residue(sign, &modulus);
    Ok(PairCongruenceReport {
        first: p,
        second: q,
        swapped,
        determinant,
        nonzero: determinant != 0,
        congruence,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdDividesReport {
    pub first: TransformedSolution,
    pub second: TransformedSolution,
    /// `2 ∤ C` or `4 | C^Z1`.
    pub c_condition: bool,
    /// Cofactor of the least ±1 exponent of `A` modulo `C^Z1`; absent when
    /// `C^Z1 = 2`, where the two signs coincide.
    #[serde(with = "crate::bignum_serde::opt")]
    pub f: Option<BigUint>,
    #[serde(with = "crate::bignum_serde::opt")]
    pub gcd_value: Option<BigUint>,
    /// `gcd(C^(Z2-Z1), f) | Y2`.
    pub divides: Option<bool>,
}

/// `gcd(C^e, f)` assembled prime by prime from the primes of `C`, never
/// forming `C^e`.
pub fn gcd_power_with(c: u64, e: u64, f: &BigUint) -> Result<BigUint> {
    let mut g = BigUint::one();
    if c < 2 || e == 0 || f.is_zero() {
        return Ok(g);
    }
    for (p, vc) in factorize(&big(c))?.factors() {
        let cap = vc * e;
        let v = valuation_capped(p, f, cap);
        g *= p.pow(v as u32);
    }
    Ok(g)
}

/// Checks `gcd(C^(Z2-Z1), f) | Y2` where `Z1` is the least `Z` among
/// `all_solutions`.
pub fn gcd_divides_check(
    inst: &TransformedInstance,
    s1: &TransformedSolution,
    s2: &TransformedSolution,
    all_solutions: &[TransformedSolution],
) -> Result<GcdDividesReport> {
    let (p, q, _) = validate_pair(inst, s1, s2)?;
    if p.z == q.z {
        return Err(Error::Degenerate(format!("Z1 = Z2 = {}", p.z)));
    }
    if let Some(bad) = all_solutions.iter().find(|s| s.z < p.z) {
        return Err(Error::InvalidArgument(format!(
            "{bad} has Z below Z1 = {}, so Z1 is not minimal",
            p.z
        )));
    }
    for s in all_solutions {
        if !inst.satisfies(s) {
            return Err(Error::NotASolution(format!("{s} for {inst}")));
        }
    }
    let c = inst.big_c;
    let modulus = pow(c, p.z);
    let c_condition = c % 2 == 1 || (&modulus % 4u32).is_zero();
    let (f, gcd_value, divides) = if modulus >= big(3) {
        let rec = least_pm1(&big(inst.big_a), &modulus)?;
        let g = gcd_power_with(c, q.z - p.z, &rec.f)?;
        let divides = (big(q.y) % &g).is_zero();
        (Some(rec.f), Some(g), Some(divides))
    } else {
        (None, None, None)
    };
    Ok(GcdDividesReport {
        first: p,
        second: q,
        c_condition,
        f,
        gcd_value,
        divides,
    })
}
