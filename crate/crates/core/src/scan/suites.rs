//! Lemma suites run on every scanned triple, held in a name-keyed registry.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::contfrac::cf_log_ratio;
use crate::equation::{
    map_solution, p_set, ExponentPair, Sign, SolutionSet, TransformedInstance, TransformedSolution,
};
use crate::error::{Error, Result};
use crate::lemma::{
    check_convergent_x, check_convergent_y, check_gap_diff, check_gap_sum, check_pair_convergent_x,
    check_pair_convergent_y, gcd_divides_report, pair_congruence_report, same_z_report,
    three_solution_reports, LemmaReport,
};
use crate::numeric::pow;

/// Quotients certified up front; convergent lookups extend on demand.
const CF_TERMS: usize = 8;

/// A triple's solutions seen through each member of its P-set.
pub struct RecordContext<'a> {
    pub set: &'a SolutionSet,
    pub transformed: Vec<(TransformedInstance, Vec<TransformedSolution>)>,
}

impl<'a> RecordContext<'a> {
    pub fn new(set: &'a SolutionSet) -> Result<Self> {
        let transformed = p_set(&set.triple)
            .into_iter()
            .map(|inst| {
                let sols = set
                    .solutions
                    .iter()
                    .map(|s| map_solution(&inst, s))
                    .collect::<Result<Vec<_>>>()?;
                Ok((inst, sols))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { set, transformed })
    }
}

pub trait LemmaSuite: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, ctx: &RecordContext<'_>) -> Result<Vec<LemmaReport>>;
}

/// Gap rules on pairs sharing `Z`, plus the at-most-two-per-`Z` count.
pub struct GapSuite;

impl LemmaSuite for GapSuite {
    fn name(&self) -> &'static str {
        "gap"
    }

    fn description(&self) -> &'static str {
        "two-term gap rules on solutions sharing Z in each P-set member"
    }

    fn run(&self, ctx: &RecordContext<'_>) -> Result<Vec<LemmaReport>> {
        let mut out = Vec::new();
        for (inst, sols) in &ctx.transformed {
            if sols.len() < 2 {
                continue;
            }
            out.push(same_z_report(inst, sols)?);
            let mut by_z: BTreeMap<u64, Vec<&TransformedSolution>> = BTreeMap::new();
            for s in sols {
                by_z.entry(s.z).or_default().push(s);
            }
            for (z, group) in by_z {
                for i in 0..group.len() {
                    for j in i + 1..group.len() {
                        let k = pow(inst.big_c, z);
                        let p = ExponentPair::new(group[i].x, group[i].y);
                        let q = ExponentPair::new(group[j].x, group[j].y);
                        let (report, _) = match inst.lambda {
                            Sign::Plus => check_gap_sum(inst.big_a, inst.big_b, &k, p, q)?,
                            Sign::Minus => check_gap_diff(inst.big_a, inst.big_b, &k, p, q)?,
                        };
                        out.push(report);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Convergent criteria for single solutions and pairs.
pub struct ConvergentSuite;

impl LemmaSuite for ConvergentSuite {
    fn name(&self) -> &'static str {
        "convergent"
    }

    fn description(&self) -> &'static str {
        "convergent membership and logarithmic inequalities"
    }

    fn run(&self, ctx: &RecordContext<'_>) -> Result<Vec<LemmaReport>> {
        let sols = &ctx.set.solutions;
        if sols.is_empty() {
            return Ok(Vec::new());
        }
        let t = &ctx.set.triple;
        let cf_cb = cf_log_ratio(t.c(), t.b(), CF_TERMS)?;
        let cf_ca = cf_log_ratio(t.c(), t.a(), CF_TERMS)?;
        let mut out = Vec::new();
        for s in sols {
            out.push(check_convergent_y(t, s, &cf_cb)?);
            out.push(check_convergent_x(t, s, &cf_ca)?);
        }
        for i in 0..sols.len() {
            for j in i + 1..sols.len() {
                out.extend(check_pair_convergent_y(t, &sols[i], &sols[j], &cf_cb)?);
                out.extend(check_pair_convergent_x(t, &sols[i], &sols[j], &cf_ca)?);
            }
        }
        Ok(out)
    }
}

/// Congruences between pairs of solutions of each P-set member.
pub struct PairCongruenceSuite;

impl LemmaSuite for PairCongruenceSuite {
    fn name(&self) -> &'static str {
        "pair-congruence"
    }

    fn description(&self) -> &'static str {
        "pair congruence and gcd divisibility in each P-set member"
    }

    fn run(&self, ctx: &RecordContext<'_>) -> Result<Vec<LemmaReport>> {
        let mut out = Vec::new();
        for (inst, sols) in &ctx.transformed {
            for i in 0..sols.len() {
                for j in i + 1..sols.len() {
                    out.push(pair_congruence_report(inst, &sols[i], &sols[j])?);
                    out.push(gcd_divides_report(inst, &sols[i], &sols[j], sols)?);
                }
            }
        }
        Ok(out)
    }
}

/// Size conclusions drawn from three solutions.
pub struct ThreeSolutionSuite;

impl LemmaSuite for ThreeSolutionSuite {
    fn name(&self) -> &'static str {
        "three-solution"
    }

    fn description(&self) -> &'static str {
        "size bounds forced by three solutions of one P-set member"
    }

    fn run(&self, ctx: &RecordContext<'_>) -> Result<Vec<LemmaReport>> {
        let mut out = Vec::new();
        for (inst, sols) in &ctx.transformed {
            if sols.len() >= 3 {
                out.extend(three_solution_reports(inst, sols)?);
            }
        }
        Ok(out)
    }
}

pub struct SuiteRegistry {
    suites: Vec<Box<dyn LemmaSuite>>,
}

impl Default for SuiteRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

impl SuiteRegistry {
    pub fn empty() -> Self {
        Self { suites: Vec::new() }
    }

    /// The four built-in suites.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        for s in [
            Box::new(GapSuite) as Box<dyn LemmaSuite>,
            Box::new(ConvergentSuite),
            Box::new(PairCongruenceSuite),
            Box::new(ThreeSolutionSuite),
        ] {
            r.register(s).expect("built-in names are distinct");
        }
        r
    }

    pub fn register(&mut self, suite: Box<dyn LemmaSuite>) -> Result<()> {
        if self.get(suite.name()).is_some() {
            return Err(Error::invalid(format!("suite {} already registered", suite.name())));
        }
        self.suites.push(suite);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn LemmaSuite> {
        self.suites.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.iter().map(|s| s.name()).collect()
    }

    /// Suites by name, in registry order; unknown names are an error.
    pub fn select(&self, names: &[String]) -> Result<Vec<&dyn LemmaSuite>> {
        for n in names {
            if self.get(n).is_none() {
                return Err(Error::invalid(format!(
                    "unknown suite {n:?}; known: {}",
                    self.names().join(", ")
                )));
            }
        }
        Ok(self
            .suites
            .iter()
            .filter(|s| names.iter().any(|n| n == s.name()))
            .map(|s| s.as_ref())
            .collect())
    }
}

/// Per-lemma tally for one record or a whole scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub lemma: String,
    pub checked: u64,
    pub applicable: u64,
    pub violations: u64,
    /// Failed conclusion names, present only when something failed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
}

pub fn summarize(reports: &[LemmaReport]) -> Vec<LemmaSummary> {
    let mut by: BTreeMap<&str, LemmaSummary> = BTreeMap::new();
    for r in reports {
        let e = by.entry(&r.lemma).or_insert_with(|| LemmaSummary {
            lemma: r.lemma.clone(),
            checked: 0,
            applicable: 0,
            violations: 0,
            failed: Vec::new(),
        });
        e.checked += 1;
        if r.applicable {
            e.applicable += 1;
        }
        let bad = r.violations();
        if !bad.is_empty() {
            e.violations += 1;
            e.failed.extend(bad.into_iter().map(str::to_string));
        }
    }
    by.into_values().collect()
}

/// Adds `part` into `total`, keyed by lemma.
pub fn merge_summaries(total: &mut BTreeMap<String, LemmaSummary>, part: &[LemmaSummary]) {
    for s in part {
        let e = total.entry(s.lemma.clone()).or_insert_with(|| LemmaSummary {
            lemma: s.lemma.clone(),
            checked: 0,
            applicable: 0,
            violations: 0,
            failed: Vec::new(),
        });
        e.checked += s.checked;
        e.applicable += s.applicable;
        e.violations += s.violations;
        e.failed.extend(s.failed.iter().cloned());
    }
}
