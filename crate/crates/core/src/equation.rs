//! The equations `a^x + b^y = c^z`, `u^l + v^m = k`, `u^l - v^m = k` and the
//! sign-twisted forms `A^X + λB^Y = C^Z`, with exhaustive solvers.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{ceil_rat, ln_enclosure, rat};
use crate::numeric::{big, perfect_power_exponent, pow};

/// Constant of the effective exponent bound `max{x,y,z} < 6500 (ln max{a,b,c})^3`.
pub const GELFOND_CONSTANT: u64 = 6500;

/// Exponent cap used by scans unless raised explicitly.
pub const DEFAULT_CAP: u64 = 50;

/// Pairwise coprime bases `(a, b, c)`, each at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTriple")]
pub struct Triple {
    a: u64,
    b: u64,
    c: u64,
}

#[derive(Deserialize)]
struct RawTriple {
    a: u64,
    b: u64,
    c: u64,
}

impl TryFrom<RawTriple> for Triple {
    type Error = Error;
    fn try_from(r: RawTriple) -> Result<Self> {
        Triple::new(r.a, r.b, r.c)
    }
}

impl Triple {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        if a.min(b).min(c) < 2 {
            return Err(Error::invalid(format!("bases must be >= 2, got ({a},{b},{c})")));
        }
        if a.gcd(&b) != 1 || b.gcd(&c) != 1 || a.gcd(&c) != 1 {
            return Err(Error::invalid(format!("bases ({a},{b},{c}) are not pairwise coprime")));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn max_base(&self) -> u64 {
        self.a.max(self.b).max(self.c)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Positive exponents `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u64; 3]", into = "[u64; 3]")]
pub struct Solution {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl From<[u64; 3]> for Solution {
    fn from([x, y, z]: [u64; 3]) -> Self {
        Self { x, y, z }
    }
}

impl From<Solution> for [u64; 3] {
    fn from(s: Solution) -> Self {
        [s.x, s.y, s.z]
    }
}

impl Solution {
    pub fn new(x: u64, y: u64, z: u64) -> Self {
        Self { x, y, z }
    }

    /// Exact substitution into `a^x + b^y = c^z`.
    pub fn solves(&self, t: &Triple) -> bool {
        self.x >= 1
            && self.y >= 1
            && self.z >= 1
            && pow(t.a, self.x) + pow(t.b, self.y) == pow(t.c, self.z)
    }

    /// Order used for persisted solution lists: ascending `(z, y, x)`.
    pub fn zyx_key(&self) -> (u64, u64, u64) {
        (self.z, self.y, self.x)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// Sign λ in `A^X + λB^Y = C^Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Which member of `P(a,b,c)` an instance is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// `(a, b, c, +1)`, solutions map to `(x, y, z)`.
    Abc,
    /// `(c, a, b, -1)`, solutions map to `(z, x, y)`.
    Cab,
    /// `(c, b, a, -1)`, solutions map to `(z, y, x)`.
    Cba,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Abc, Role::Cab, Role::Cba];

    pub fn label(self) -> &'static str {
        match self {
            Role::Abc => "abc",
            Role::Cab => "cab",
            Role::Cba => "cba",
        }
    }
}

/// `(A, B, C, λ)` drawn from `P(a,b,c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TransformedInstance {
    #[serde(rename = "A")]
    pub big_a: u64,
    #[serde(rename = "B")]
    pub big_b: u64,
    #[serde(rename = "C")]
    pub big_c: u64,
    pub lambda: Sign,
    pub origin: Triple,
    pub role: Role,
}

impl TransformedInstance {
    pub fn new(origin: Triple, role: Role) -> Self {
        let (a, b, c) = (origin.a, origin.b, origin.c);
        let (big_a, big_b, big_c, lambda) = match role {
            Role::Abc => (a, b, c, Sign::Plus),
            Role::Cab => (c, a, b, Sign::Minus),
            Role::Cba => (c, b, a, Sign::Minus),
        };
        Self {
            big_a,
            big_b,
            big_c,
            lambda,
            origin,
            role,
        }
    }

    /// Exact check of `A^X + λB^Y = C^Z`.
    pub fn satisfies(&self, s: &TransformedSolution) -> bool {
        if s.x == 0 || s.y == 0 || s.z == 0 {
            return false;
        }
        let ax = pow(self.big_a, s.x);
        let by = pow(self.big_b, s.y);
        let cz = pow(self.big_c, s.z);
        match self.lambda {
            Sign::Plus => ax + by == cz,
            Sign::Minus => ax == cz + by,
        }
    }
}

impl fmt::Display for TransformedInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{:+})",
            self.big_a,
            self.big_b,
            self.big_c,
            self.lambda.value()
        )
    }
}

/// `(X, Y, Z)` for a transformed instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u64; 3]", into = "[u64; 3]")]
pub struct TransformedSolution {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl From<[u64; 3]> for TransformedSolution {
    fn from([x, y, z]: [u64; 3]) -> Self {
        Self { x, y, z }
    }
}

impl From<TransformedSolution> for [u64; 3] {
    fn from(s: TransformedSolution) -> Self {
        [s.x, s.y, s.z]
    }
}

impl TransformedSolution {
    pub fn new(x: u64, y: u64, z: u64) -> Self {
        Self { x, y, z }
    }
}

impl fmt::Display for TransformedSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// `(l, m)` for `u^l ± v^m = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u64; 2]", into = "[u64; 2]")]
pub struct ExponentPair {
    pub l: u64,
    pub m: u64,
}

impl From<[u64; 2]> for ExponentPair {
    fn from([l, m]: [u64; 2]) -> Self {
        Self { l, m }
    }
}

impl From<ExponentPair> for [u64; 2] {
    fn from(p: ExponentPair) -> Self {
        [p.l, p.m]
    }
}

impl ExponentPair {
    pub fn new(l: u64, m: u64) -> Self {
        Self { l, m }
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.l, self.m)
    }
}

/// Certified `⌈6500 (ln max{a,b,c})^3⌉`, rounded outward so it never
/// under-estimates the true bound.
pub fn gelfond_bound(t: &Triple) -> u64 {
    gelfond_bound_for_max(t.max_base())
}

/// The same bound as a function of `max{a,b,c}` alone.
pub fn gelfond_bound_for_max(max: u64) -> u64 {
    let ln = ln_enclosure(&big(max), 128);
    let cube_hi = &ln.hi * &ln.hi * &ln.hi;
    let upper = cube_hi * rat(GELFOND_CONSTANT as i64, 1);
    ceil_rat(&upper).to_u64().expect("bound fits in u64")
}

/// Solutions with every exponent at most `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub triple: Triple,
    /// Effective cap: the requested cap clipped to the exponent bound.
    pub cap: u64,
    /// True when the cap reaches the exponent bound, i.e. the set is all of N(a,b,c).
    pub complete: bool,
    /// Sorted ascending by `(z, y, x)`.
    pub solutions: Vec<Solution>,
}

#[derive(Serialize, Deserialize)]
struct SolutionSetJson {
    a: u64,
    b: u64,
    c: u64,
    cap: u64,
    complete: bool,
    solutions: Vec<Solution>,
}

impl Serialize for SolutionSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        SolutionSetJson {
            a: self.triple.a,
            b: self.triple.b,
            c: self.triple.c,
            cap: self.cap,
            complete: self.complete,
            solutions: self.solutions.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SolutionSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = SolutionSetJson::deserialize(de)?;
        let triple = Triple::new(raw.a, raw.b, raw.c).map_err(serde::de::Error::custom)?;
        Ok(SolutionSet {
            triple,
            cap: raw.cap,
            complete: raw.complete,
            solutions: raw.solutions,
        })
    }
}

impl SolutionSet {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }
}

/// Every solution of `a^x + b^y = c^z` with `max{x,y,z} <= min(cap, bound)`.
///
/// Iterates `z` outermost while `c^z <= a^cap + b^cap`, then `y` while
/// `b^y < c^z`, and tests `c^z - b^y` for membership in the powers of `a`.
pub fn enumerate_solutions(t: &Triple, cap: u64) -> Result<SolutionSet> {
    if cap == 0 {
        return Err(Error::invalid("exponent cap must be >= 1"));
    }
    let bound = gelfond_bound(t);
    let eff = cap.min(bound);
    let a = big(t.a);
    let b = big(t.b);
    let c = big(t.c);
    let reach = a.pow(eff as u32) + b.pow(eff as u32);
    let mut solutions = Vec::new();
    let mut cz = BigUint::from(1u32);
    for z in 1..=eff {
        cz *= &c;
        if cz > reach {
            break;
        }
        let mut by = BigUint::from(1u32);
        for y in 1..=eff {
            by *= &b;
            if by >= cz {
                break;
            }
            let rest = &cz - &by;
            if let Some(x) = perfect_power_exponent(&rest, &a) {
                if x <= eff {
                    solutions.push(Solution { x, y, z });
                }
            }
        }
    }
    for s in &solutions {
        if !s.solves(t) {
            return Err(Error::InvariantViolation(format!("{s} does not solve {t}")));
        }
    }
    Ok(SolutionSet {
        triple: *t,
        cap: eff,
        complete: is_complete(cap, bound),
        solutions,
    })
}

/// Solutions obey `max{x,y,z} < bound`, so a cap at the bound sees them all.
fn is_complete(cap: u64, bound: u64) -> bool {
    cap >= bound
}

pub(crate) fn check_two_term_args(u: u64, v: u64, k: &BigUint) -> Result<()> {
    if u < 2 || v < 2 || k < &big(2) {
        return Err(Error::invalid(format!("need min{{u,v,k}} > 1, got u={u} v={v} k={k}")));
    }
    if u.gcd(&v) != 1 {
        return Err(Error::invalid(format!("gcd({u},{v}) != 1")));
    }
    Ok(())
}

fn at_most_two(kind: &str, u: u64, v: u64, k: &BigUint, pairs: &[ExponentPair]) -> Result<()> {
    if pairs.len() > 2 {
        let list: Vec<String> = pairs.iter().map(|p| p.to_string()).collect();
        return Err(Error::InvariantViolation(format!(
            "{u}^l {kind} {v}^m = {k} has {} solutions: {}",
            pairs.len(),
            list.join(", ")
        )));
    }
    Ok(())
}

/// All `(l, m)` with `u^l + v^m = k`, `l, m <= cap`. More than two is
/// reported as an invariant violation.
pub fn solve_sum(u: u64, v: u64, k: &BigUint, cap: u64) -> Result<Vec<ExponentPair>> {
    check_two_term_args(u, v, k)?;
    let vb = big(v);
    let ub = big(u);
    let mut pairs = Vec::new();
    let mut ul = BigUint::from(1u32);
    for l in 1..=cap {
        ul *= &ub;
        if &ul >= k {
            break;
        }
        let rest = k - &ul;
        if let Some(m) = perfect_power_exponent(&rest, &vb) {
            if m <= cap {
                pairs.push(ExponentPair { l, m });
            }
        }
    }
    at_most_two("+", u, v, k, &pairs)?;
    Ok(pairs)
}

/// All `(l, m)` with `u^l - v^m = k`, `l, m <= cap`.
pub fn solve_diff(u: u64, v: u64, k: &BigUint, cap: u64) -> Result<Vec<ExponentPair>> {
    check_two_term_args(u, v, k)?;
    let vb = big(v);
    let ub = big(u);
    let mut pairs = Vec::new();
    let mut ul = BigUint::from(1u32);
    for l in 1..=cap {
        ul *= &ub;
        if &ul <= k {
            continue;
        }
        let rest = &ul - k;
        if let Some(m) = perfect_power_exponent(&rest, &vb) {
            if m <= cap {
                pairs.push(ExponentPair { l, m });
            }
        }
    }
    at_most_two("-", u, v, k, &pairs)?;
    Ok(pairs)
}

/// `P(a,b,c) = {(a,b,c,+1), (c,a,b,-1), (c,b,a,-1)}` in that order.
pub fn p_set(t: &Triple) -> [TransformedInstance; 3] {
    Role::ALL.map(|r| TransformedInstance::new(*t, r))
}

pub fn map_solution(inst: &TransformedInstance, s: &Solution) -> Result<TransformedSolution> {
    if !s.solves(&inst.origin) {
        return Err(Error::NotASolution(format!("{s} for {}", inst.origin)));
    }
    let mapped = match inst.role {
        Role::Abc => TransformedSolution::new(s.x, s.y, s.z),
        Role::Cab => TransformedSolution::new(s.z, s.x, s.y),
        Role::Cba => TransformedSolution::new(s.z, s.y, s.x),
    };
    if !inst.satisfies(&mapped) {
        return Err(Error::InvariantViolation(format!("{mapped} does not satisfy {inst}")));
    }
    Ok(mapped)
}

/// The triple `(2, 2^k - 1, 2^k + 1)` with its solutions `(1,1,1)` and `(k+2,2,2)`.
pub fn family(k: u64) -> Result<(Triple, [Solution; 2])> {
    if !(2..=62).contains(&k) {
        return Err(Error::invalid(format!("family parameter k must be in 2..=62, got {k}")));
    }
    let t = Triple::new(2, (1 << k) - 1, (1 << k) + 1)?;
    let sols = [Solution::new(1, 1, 1), Solution::new(k + 2, 2, 2)];
    for s in &sols {
        if !s.solves(&t) {
            return Err(Error::InvariantViolation(format!("{s} does not solve family triple {t}")));
        }
    }
    Ok((t, sols))
}

/// `Some(k)` when `t = (2, 2^k - 1, 2^k + 1)` with `k >= 2`.
pub fn family_parameter(t: &Triple) -> Option<u64> {
    if t.a != 2 || t.c < 5 || t.c.checked_sub(t.b) != Some(2) {
        return None;
    }
    let m = t.c - 1;
    (m.is_power_of_two()).then(|| m.trailing_zeros() as u64).filter(|&k| k >= 2)
}
