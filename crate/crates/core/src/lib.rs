//! Exact solver and lemma auditor for the ternary purely exponential
//! Diophantine equation `a^x + b^y = c^z`.
//!
//! - [`numeric`]: big-integer primitives (powers, factoring, orders).
//! - [`interval`]: certified log enclosures and rational intervals.
//! - [`contfrac`]: certified continued fractions of `log c / log b`.
//! - [`congruence`]: least ±1 exponents, order lifting, solution-pair congruences.
//! - [`equation`]: the equations, their exhaustive solvers and transforms.
//! - [`lemma`]: executable verdicts for the structural lemmas.
//! - [`scan`]: batch scanning, JSONL persistence and report verification.

pub mod bignum_serde;
pub mod congruence;
pub mod contfrac;
pub mod equation;
pub mod error;
pub mod interval;
pub mod lemma;
pub mod numeric;
pub mod scan;

pub use error::{Error, Result};
