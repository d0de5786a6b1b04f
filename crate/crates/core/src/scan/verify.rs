//! Re-validation of a finished scan file from its raw solutions.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::{flags_for, ScanRecord, ScanReport, FORMAT};
use crate::equation::{gelfond_bound, Triple};
use crate::error::{Error, Result};

/// One failed check, located by line number (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub line: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triple: Option<[u64; 3]>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub records: usize,
    pub findings: Vec<Finding>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Checks every record of a completed scan: solutions substitute exactly,
/// `N` matches, ordering and flags are consistent, no lemma violations, and
/// the summary agrees with the records. Malformed or truncated files give
/// [`Error::Parse`]; consistency failures give a verdict with `ok = false`.
pub fn verify_report(path: &Path) -> Result<Verdict> {
    let text = std::fs::read_to_string(path)?;
    let lines: Vec<&str> = text.lines().collect();
    if lines.is_empty() {
        return Err(parse_err(1, "empty file"));
    }
    if !text.ends_with('\n') {
        return Err(parse_err(lines.len(), "last line is not terminated; file truncated"));
    }
    let mut findings = Vec::new();
    let mut records: Vec<ScanRecord> = Vec::new();
    let mut prev: Option<[u64; 3]> = None;
    let mut summary: Option<(usize, ScanReport)> = None;

    for (i, raw) in lines.iter().enumerate() {
        let ln = i + 1;
        let v: Value = serde_json::from_str(raw).map_err(|e| parse_err(ln, e.to_string()))?;
        let kind = v.get("kind").and_then(Value::as_str).unwrap_or("");
        if ln == 1 {
            if kind != "header" || v.get("format").and_then(Value::as_str) != Some(FORMAT) {
                return Err(parse_err(1, format!("expected a {FORMAT} header")));
            }
            continue;
        }
        if summary.is_some() {
            return Err(parse_err(ln, "content after the summary line"));
        }
        match kind {
            "record" => {
                let rec: ScanRecord = serde_json::from_value(v).map_err(|e| parse_err(ln, e.to_string()))?;
                if let Some(p) = prev {
                    if rec.triple() <= p {
                        findings.push(Finding {
                            line: ln,
                            triple: Some(rec.triple()),
                            reason: format!("out of order after {p:?}"),
                        });
                    }
                }
                prev = Some(rec.triple());
                for reason in check_record(&rec) {
                    findings.push(Finding { line: ln, triple: Some(rec.triple()), reason });
                }
                records.push(rec);
            }
            "summary" => {
                let rep: ScanReport = serde_json::from_value(v).map_err(|e| parse_err(ln, e.to_string()))?;
                summary = Some((ln, rep));
            }
            "failure" => findings.push(Finding {
                line: ln,
                triple: None,
                reason: format!("scan stopped: {}", v.get("detail").and_then(Value::as_str).unwrap_or("")),
            }),
            other => return Err(parse_err(ln, format!("unknown line kind {other:?}"))),
        }
    }

    match summary {
        Some((ln, rep)) => {
            let expect = ScanReport::from_records(&records);
            if rep != expect {
                findings.push(Finding {
                    line: ln,
                    triple: None,
                    reason: "summary disagrees with the records".into(),
                });
            }
        }
        None if findings.iter().any(|f| f.reason.starts_with("scan stopped")) => {}
        None => return Err(parse_err(lines.len(), "missing summary line; scan incomplete or truncated")),
    }

    Ok(Verdict {
        ok: findings.is_empty(),
        records: records.len(),
        findings,
    })
}

fn check_record(r: &ScanRecord) -> Vec<String> {
    let mut out = Vec::new();
    let t = match Triple::new(r.a, r.b, r.c) {
        Ok(t) => t,
        Err(e) => return vec![e.to_string()],
    };
    if r.n != r.solutions.len() {
        out.push(format!("N = {} but {} solutions listed", r.n, r.solutions.len()));
    }
    for s in &r.solutions {
        if s.x == 0 || s.y == 0 || s.z == 0 || !s.solves(&t) {
            out.push(format!("{s} does not solve {t}"));
        }
        if s.x.max(s.y).max(s.z) > r.cap {
            out.push(format!("{s} exceeds cap {}", r.cap));
        }
    }
    if !r.solutions.windows(2).all(|w| w[0].zyx_key() < w[1].zyx_key()) {
        out.push("solutions not strictly ascending by (z, y, x)".into());
    }
    let bound = gelfond_bound(&t);
    if r.complete != (r.cap >= bound) {
        out.push(format!("complete = {} inconsistent with cap {} and bound {bound}", r.complete, r.cap));
    }
    let n = r.solutions.len();
    if r.flags != flags_for(&t, n) {
        out.push("flags inconsistent with the solutions".into());
    }
    if n >= 3 && r.c % 2 == 1 {
        out.push(format!("{n} solutions with odd c"));
    }
    if r.symmetry_class != [r.a.min(r.b), r.a.max(r.b), r.c] {
        out.push("wrong symmetry class".into());
    }
    out.extend(r.problems().into_iter().filter(|p| p.starts_with("lemma")));
    out
}
