//! Batch scanning of coprime triples with JSON Lines persistence.
//!
//! A scan file holds one header line (configuration and a timestamp), one
//! record line per pairwise-coprime triple in lexicographic `(a, b, c)`
//! order, and a closing summary line. A run stopped by a lemma violation
//! ends with a failure marker instead of the summary. Keys are sorted, so
//! identical configurations give byte-identical files apart from the header.

mod suites;
mod verify;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::equation::{enumerate_solutions, family_parameter, Solution, Triple, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::lemma::threshold_size;
use crate::numeric::big;

pub use suites::{
    merge_summaries, summarize, ConvergentSuite, GapSuite, LemmaSuite, LemmaSummary, PairCongruenceSuite,
    RecordContext, SuiteRegistry, ThreeSolutionSuite,
};
pub use verify::{verify_report, Finding, Verdict};

pub const FORMAT: &str = "tpe-scan/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanConfig {
    pub amax: u64,
    pub bmax: u64,
    pub cmax: u64,
    pub cap: u64,
    /// Worker threads; output does not depend on it.
    pub jobs: usize,
    #[serde(skip)]
    pub out: PathBuf,
    pub suites: Vec<String>,
}

impl ScanConfig {
    /// All registered suites, cap 50, one worker.
    pub fn new(amax: u64, bmax: u64, cmax: u64, out: impl Into<PathBuf>) -> Self {
        Self {
            amax,
            bmax,
            cmax,
            cap: DEFAULT_CAP,
            jobs: 1,
            out: out.into(),
            suites: SuiteRegistry::standard().names().into_iter().map(String::from).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("amax", self.amax), ("bmax", self.bmax), ("cmax", self.cmax)] {
            if v < 2 {
                return Err(Error::invalid(format!("{name} = {v}: bounds must be >= 2")));
            }
        }
        if self.cap < 1 {
            return Err(Error::invalid("cap must be >= 1"));
        }
        if self.jobs < 1 {
            return Err(Error::invalid("jobs must be >= 1"));
        }
        Ok(())
    }

    /// Pairwise-coprime triples in the box, lexicographic.
    pub fn triples(&self) -> Vec<Triple> {
        let mut v = Vec::new();
        for a in 2..=self.amax {
            for b in 2..=self.bmax {
                for c in 2..=self.cmax {
                    if let Ok(t) = Triple::new(a, b, c) {
                        v.push(t);
                    }
                }
            }
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordFlags {
    /// `c` even or at most two solutions.
    pub odd_c_bound_ok: bool,
    pub three_solution_witness: bool,
    pub family_member: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub cap: u64,
    pub complete: bool,
    pub solutions: Vec<Solution>,
    #[serde(rename = "N")]
    pub n: usize,
    pub flags: RecordFlags,
    /// `(min(a,b), max(a,b), c)`: records sharing it differ by swapping
    /// `a` and `b`.
    pub symmetry_class: [u64; 3],
    pub lemmas: Vec<LemmaSummary>,
}

impl ScanRecord {
    pub fn triple(&self) -> [u64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn is_canonical(&self) -> bool {
        self.a <= self.b
    }

    /// Everything wrong with this record that must abort a scan.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.flags.odd_c_bound_ok {
            out.push(format!("odd c = {} with {} solutions", self.c, self.n));
        }
        if self.flags.three_solution_witness {
            if self.c % 2 == 1 {
                out.push("three solutions with odd c".into());
            }
            if big(self.a.max(self.b).max(self.c)) >= threshold_size() {
                out.push("three solutions with max{a,b,c} >= 10^62".into());
            }
        }
        for l in &self.lemmas {
            if l.violations > 0 {
                out.push(format!("lemma {} violated: {}", l.lemma, l.failed.join(", ")));
            }
        }
        out
    }
}

pub fn flags_for(t: &Triple, n: usize) -> RecordFlags {
    RecordFlags {
        odd_c_bound_ok: t.c().is_multiple_of(2) || n <= 2,
        three_solution_witness: n >= 3,
        family_member: family_parameter(t).is_some(),
    }
}

/// Solves one triple and runs the given suites on it.
pub fn process_triple(t: &Triple, cap: u64, suites: &[&dyn LemmaSuite]) -> Result<ScanRecord> {
    let set = enumerate_solutions(t, cap)?;
    let ctx = RecordContext::new(&set)?;
    let mut reports = Vec::new();
    for s in suites {
        reports.extend(s.run(&ctx)?);
    }
    let n = set.count();
    Ok(ScanRecord {
        a: t.a(),
        b: t.b(),
        c: t.c(),
        cap: set.cap,
        complete: set.complete,
        n,
        flags: flags_for(t, n),
        symmetry_class: [t.a().min(t.b()), t.a().max(t.b()), t.c()],
        solutions: set.solutions,
        lemmas: summarize(&reports),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub records: usize,
    pub max_n: usize,
    /// `[a, b, c, N]` for every triple with `N >= 2`.
    pub multi_solution: Vec<[u64; 4]>,
    pub three_solution_witnesses: Vec<[u64; 3]>,
    pub lemma_totals: Vec<LemmaSummary>,
}

impl ScanReport {
    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a ScanRecord>) -> Self {
        let mut rep = ScanReport {
            records: 0,
            max_n: 0,
            multi_solution: Vec::new(),
            three_solution_witnesses: Vec::new(),
            lemma_totals: Vec::new(),
        };
        let mut totals = BTreeMap::new();
        for r in records {
            rep.records += 1;
            rep.max_n = rep.max_n.max(r.n);
            if r.n >= 2 {
                rep.multi_solution.push([r.a, r.b, r.c, r.n as u64]);
            }
            if r.flags.three_solution_witness {
                rep.three_solution_witnesses.push(r.triple());
            }
            merge_summaries(&mut totals, &r.lemmas);
        }
        rep.lemma_totals = totals.into_values().collect();
        rep
    }
}

fn line(kind: &str, body: impl Serialize) -> Result<String> {
    let mut v = serde_json::to_value(body).map_err(|e| Error::InvariantViolation(e.to_string()))?;
    match &mut v {
        Value::Object(m) => {
            m.insert("kind".into(), Value::String(kind.into()));
        }
        _ => unreachable!("scan lines are objects"),
    }
    // serde_json's default map is ordered, so keys come out sorted.
    Ok(serde_json::to_string(&v).expect("value serializes") + "\n")
}

fn header(cfg: &ScanConfig) -> Result<String> {
    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    line(
        "header",
        json!({
            "format": FORMAT,
            "created_unix": created,
            "config": cfg,
            "assumptions": {
                "log_base": "natural",
                "cap": cfg.cap,
                "exponent_bound": "6500 (ln max{a,b,c})^3",
            },
        }),
    )
}

/// Scans the configured box with the standard suites.
pub fn scan_range(cfg: &ScanConfig) -> Result<ScanReport> {
    scan_range_with(cfg, &SuiteRegistry::standard())
}

/// Scans the configured box, writing `cfg.out` as it goes. A lemma
/// violation or invariant failure stops the run after the offending record,
/// appends a failure marker and returns an error.
pub fn scan_range_with(cfg: &ScanConfig, registry: &SuiteRegistry) -> Result<ScanReport> {
    cfg.validate()?;
    let suites = registry.select(&cfg.suites)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let mut out = BufWriter::new(File::create(&cfg.out)?);
    out.write_all(header(cfg)?.as_bytes())?;
    out.flush()?;

    let triples = cfg.triples();
    let chunk = 64 * cfg.jobs;
    let mut done: Vec<ScanRecord> = Vec::with_capacity(triples.len());
    for batch in triples.chunks(chunk) {
        let results: Vec<Result<ScanRecord>> =
            pool.install(|| batch.par_iter().map(|t| process_triple(t, cfg.cap, &suites)).collect());
        for (t, res) in batch.iter().zip(results) {
            let rec = match res {
                Ok(r) => r,
                Err(e) => {
                    fail(&mut out, t, "error", &e.to_string())?;
                    return Err(e);
                }
            };
            out.write_all(line("record", &rec)?.as_bytes())?;
            let problems = rec.problems();
            if !problems.is_empty() {
                let detail = problems.join("; ");
                fail(&mut out, t, "violation", &detail)?;
                let lemma = rec
                    .lemmas
                    .iter()
                    .find(|l| l.violations > 0)
                    .map(|l| l.lemma.clone())
                    .unwrap_or_else(|| "record invariant".into());
                return Err(Error::LemmaViolation {
                    lemma,
                    detail: format!("{t}: {detail}"),
                });
            }
            done.push(rec);
        }
        out.flush()?;
    }
    let report = ScanReport::from_records(&done);
    out.write_all(line("summary", &report)?.as_bytes())?;
    out.flush()?;
    Ok(report)
}

fn fail(out: &mut impl Write, t: &Triple, what: &str, detail: &str) -> Result<()> {
    let marker = json!({ "triple": [t.a(), t.b(), t.c()], "reason": what, "detail": detail });
    out.write_all(line("failure", marker)?.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Record lines of a scan file, for tests and tooling.
pub fn read_records(path: &std::path::Path) -> Result<Vec<ScanRecord>> {
    let text = std::fs::read_to_string(path)?;
    let mut v = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let val: Value = serde_json::from_str(l).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        if val.get("kind").and_then(Value::as_str) == Some("record") {
            v.push(serde_json::from_value(val).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?);
        }
    }
    Ok(v)
}
