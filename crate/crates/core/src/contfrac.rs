//! Continued fractions of rationals and of `log c / log b`.
//!
//! Log-ratio expansions are certified: the target is enclosed in a rational
//! interval, both endpoints are expanded in lockstep, and a partial quotient
//! is kept only while both endpoints agree on it. Precision doubles until the
//! requested number of quotients is certified.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{log_ratio_enclosure, rat_big, Precision, RatInterval};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealTarget {
    Rational {
        #[serde(with = "crate::bignum_serde")]
        p: BigUint,
        #[serde(with = "crate::bignum_serde")]
        q: BigUint,
    },
    /// `ln c / ln b`, known to be irrational.
    LogRatio { c: u64, b: u64 },
}

impl RealTarget {
    pub fn rational(p: BigUint, q: BigUint) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(RealTarget::Rational { p, q })
    }

    /// Builds `ln c / ln b`, rejecting multiplicatively dependent pairs with
    /// the exact rational value of the ratio.
    pub fn log_ratio(c: u64, b: u64) -> Result<Self> {
        if b < 2 || c < 2 {
            return Err(Error::invalid(format!("log ratio needs b, c >= 2, got c={c} b={b}")));
        }
        if let Some(r) = exact_log_ratio(c, b) {
            return Err(Error::RationalRatio(r));
        }
        Ok(RealTarget::LogRatio { c, b })
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, RealTarget::Rational { .. })
    }

    /// Enclosure of the target; exact for rationals.
    pub fn enclose(&self, bits: u64) -> RatInterval {
        match self {
            RealTarget::Rational { p, q } => RatInterval::point(rat_big(p, q)),
            RealTarget::LogRatio { c, b } => {
                log_ratio_enclosure(&BigUint::from(*c), &BigUint::from(*b), bits)
            }
        }
    }
}

impl fmt::Display for RealTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealTarget::Rational { p, q } => write!(f, "{p}/{q}"),
            RealTarget::LogRatio { c, b } => write!(f, "log {c} / log {b}"),
        }
    }
}

/// `ln c / ln b` as an exact rational when `b` and `c` are powers of a
/// common integer, `None` when they are multiplicatively independent.
///
/// If `b^p = c^q` with `b < c` then `b | c`, so dependence can be decided by
/// peeling factors of the smaller base off the larger one.
pub fn exact_log_ratio(c: u64, b: u64) -> Option<BigRational> {
    fn go(c: u64, b: u64, depth: u32) -> Option<BigRational> {
        debug_assert!(depth < 128);
        match c.cmp(&b) {
            std::cmp::Ordering::Equal => Some(BigRational::one()),
            std::cmp::Ordering::Greater => {
                if !c.is_multiple_of(b) {
                    None
                } else {
                    go(c / b, b, depth + 1).map(|r| r + BigRational::one())
                }
            }
            std::cmp::Ordering::Less => go(b, c, depth + 1).map(|r| r.recip()),
        }
    }
    if b < 2 || c < 2 {
        return None;
    }
    go(c, b, 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub index: usize,
    #[serde(with = "crate::bignum_serde")]
    pub p: BigUint,
    #[serde(with = "crate::bignum_serde")]
    pub q: BigUint,
}

impl Convergent {
    pub fn value(&self) -> BigRational {
        rat_big(&self.p, &self.q)
    }
}

impl fmt::Display for Convergent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    pub target: RealTarget,
    #[serde(with = "crate::bignum_serde::vec")]
    quotients: Vec<BigUint>,
    pub certified_count: usize,
    #[serde(skip)]
    precision: Precision,
}

impl ContinuedFraction {
    pub fn quotients(&self) -> &[BigUint] {
        &self.quotients
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Re-expands a log-ratio target so at least `count` quotients are
    /// certified. Rational expansions are already complete.
    pub fn ensure(&mut self, count: usize) -> Result<()> {
        if self.certified_count >= count || self.target.is_rational() {
            return Ok(());
        }
        if let RealTarget::LogRatio { c, b } = self.target {
            *self = cf_log_ratio_with(c, b, count, &self.precision)?;
        }
        Ok(())
    }

    /// All convergents through index `upto`.
    pub fn convergents(&self, upto: usize) -> Result<Vec<Convergent>> {
        convergents(self, upto)
    }

    /// Interval of reals whose expansion starts with the first `n + 1`
    /// quotients: between `p_n/q_n` and `(p_n + p_{n-1})/(q_n + q_{n-1})`.
    pub fn cylinder(&self, n: usize) -> Result<RatInterval> {
        let cs = self.convergents(n)?;
        let (pm1, qm1) = if n == 0 {
            (BigUint::one(), BigUint::zero())
        } else {
            (cs[n - 1].p.clone(), cs[n - 1].q.clone())
        };
        let a = cs[n].value();
        let b = rat_big(&(&cs[n].p + pm1), &(&cs[n].q + qm1));
        Ok(if a <= b {
            RatInterval::new(a, b)
        } else {
            RatInterval::new(b, a)
        })
    }
}

/// Finite Euclidean expansion of `p/q`, last quotient `>= 2` unless the
/// expansion has a single term.
pub fn cf_of_rational(p: &BigUint, q: &BigUint) -> Result<ContinuedFraction> {
    if q.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    let mut quotients = Vec::new();
    let (mut num, mut den) = (p.clone(), q.clone());
    while !den.is_zero() {
        let (a, r) = num.div_rem(&den);
        quotients.push(a);
        num = den;
        den = r;
    }
    let n = quotients.len();
    Ok(ContinuedFraction {
        target: RealTarget::Rational {
            p: p.clone(),
            q: q.clone(),
        },
        quotients,
        certified_count: n,
        precision: Precision::default(),
    })
}

pub fn convergents(cf: &ContinuedFraction, upto: usize) -> Result<Vec<Convergent>> {
    if upto >= cf.certified_count {
        return Err(Error::BeyondCertified {
            requested: upto + 1,
            available: cf.certified_count,
        });
    }
    let (mut p_prev, mut q_prev) = (BigUint::one(), BigUint::zero());
    let (mut p, mut q) = (cf.quotients[0].clone(), BigUint::one());
    let mut out = Vec::with_capacity(upto + 1);
    out.push(Convergent {
        index: 0,
        p: p.clone(),
        q: q.clone(),
    });
    for (i, a) in cf.quotients.iter().enumerate().take(upto + 1).skip(1) {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent {
            index: i,
            p: p.clone(),
            q: q.clone(),
        });
    }
    Ok(out)
}

/// Partial quotients shared by every point of `iv`, at most `limit` of them.
fn expand_interval(iv: &RatInterval, limit: usize) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut cur = iv.clone();
    while out.len() < limit {
        let Some(a) = cur.common_floor() else { break };
        let a_rat = BigRational::from_integer(a.clone());
        // The target is irrational, so it sits strictly above its floor; an
        // endpoint at the floor leaves the next remainder unbounded.
        if cur.lo <= a_rat || a.is_negative() {
            break;
        }
        out.push(a.magnitude().clone());
        let lo_gap = &cur.lo - &a_rat;
        let hi_gap = &cur.hi - &a_rat;
        cur = RatInterval::new(hi_gap.recip(), lo_gap.recip());
    }
    out
}

pub fn cf_log_ratio(c: u64, b: u64, count: usize) -> Result<ContinuedFraction> {
    cf_log_ratio_with(c, b, count, &Precision::default())
}

/// At least `count` certified partial quotients of `ln c / ln b`.
pub fn cf_log_ratio_with(c: u64, b: u64, count: usize, precision: &Precision) -> Result<ContinuedFraction> {
    let target = RealTarget::log_ratio(c, b)?;
    let count = count.max(1);
    let quotients = precision.certify("certifying partial quotients", |bits| {
        let q = expand_interval(&target.enclose(bits), usize::MAX);
        (q.len() >= count).then_some(q)
    })?;
    let n = quotients.len();
    Ok(ContinuedFraction {
        target,
        quotients,
        certified_count: n,
        precision: *precision,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "index", rename_all = "snake_case")]
pub enum LegendreOutcome {
    /// The inequality holds and the reduced fraction is this convergent.
    Located(usize),
    /// `|α - p/q| >= 1/(2q²)`, so the criterion says nothing.
    NotApplicable,
}

/// Certified `|α - p/q| < 1/(2q²)`.
pub fn legendre_inequality(target: &RealTarget, p: &BigUint, q: &BigUint, precision: &Precision) -> Result<bool> {
    if q.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    let pq = rat_big(p, q);
    let bound = rat_big(&BigUint::one(), &(q * q * 2u32));
    precision.certify("deciding the Legendre inequality", |bits| {
        target.enclose(bits).shift(&-&pq).abs().lt(&bound)
    })
}

/// Index of the convergent equal to `p/q` (after reduction), extending the
/// expansion as needed. `None` if `p/q` is not a convergent.
pub fn convergent_index(cf: &ContinuedFraction, p: &BigUint, q: &BigUint) -> Result<Option<usize>> {
    if q.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    let d = p.gcd(q);
    let (p, q) = if d.is_zero() { (p.clone(), q.clone()) } else { (p / &d, q / &d) };
    let mut cf = cf.clone();
    let mut i = 0;
    loop {
        if i >= cf.certified_count {
            if cf.target.is_rational() {
                return Ok(None);
            }
            let want = (cf.certified_count * 2).max(i + 1);
            cf.ensure(want)?;
        }
        let conv = cf.convergents(i)?.pop().expect("nonempty");
        if conv.p == p && conv.q == q {
            return Ok(Some(i));
        }
        // q_i is nondecreasing and strictly increasing from i = 1 onward.
        if conv.q > q {
            return Ok(None);
        }
        i += 1;
    }
}

pub fn legendre_locate(cf: &ContinuedFraction, p: &BigUint, q: &BigUint) -> Result<LegendreOutcome> {
    if !legendre_inequality(&cf.target, p, q, &cf.precision)? {
        return Ok(LegendreOutcome::NotApplicable);
    }
    match convergent_index(cf, p, q)? {
        Some(i) => Ok(LegendreOutcome::Located(i)),
        None => Err(Error::InvariantViolation(format!(
            "{p}/{q} satisfies the Legendre inequality for {} but is not a convergent",
            cf.target
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapBounds {
    pub lower_holds: bool,
    pub upper_holds: bool,
}

/// Certifies `1/(q_i(q_{i+1}+q_i)) < |α - p_i/q_i| < 1/(q_i q_{i+1})`.
pub fn gap_bounds_check(cf: &ContinuedFraction, i: usize) -> Result<GapBounds> {
    if i + 1 >= cf.certified_count {
        return Err(Error::BeyondCertified {
            requested: i + 2,
            available: cf.certified_count,
        });
    }
    let cs = cf.convergents(i + 1)?;
    let (pi, qi, qn) = (&cs[i].p, &cs[i].q, &cs[i + 1].q);
    let approx = rat_big(pi, qi);
    if let RealTarget::Rational { p, q } = &cf.target {
        if rat_big(p, q) == approx {
            return Err(Error::Degenerate(format!(
                "convergent {i} equals the rational target; the bounds need an irrational target"
            )));
        }
    }
    let one = BigUint::one();
    let lower = rat_big(&one, &(qi * (qn + qi)));
    let upper = rat_big(&one, &(qi * qn));
    cf.precision.certify("certifying convergent gap bounds", |bits| {
        let dist = cf.target.enclose(bits).shift(&-&approx).abs();
        let lower_holds = dist.gt(&lower)?;
        let upper_holds = dist.lt(&upper)?;
        Some(GapBounds {
            lower_holds,
            upper_holds,
        })
    })
}

/// Small helper for callers holding machine integers.
pub fn quotients_u64(cf: &ContinuedFraction) -> Vec<u64> {
    cf.quotients.iter().map(|q| q.to_u64().unwrap_or(u64::MAX)).collect()
}
