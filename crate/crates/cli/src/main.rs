use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use tpe::contfrac::{cf_log_ratio, quotients_u64};
use tpe::congruence::least_pm1;
use tpe::equation::{enumerate_solutions, family, solve_diff, solve_sum, Triple, DEFAULT_CAP};
use tpe::lemma::{check_gap_pairs, GapKind};
use tpe::scan::{scan_range, verify_report, ScanConfig, SuiteRegistry};
use tpe::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "tpe", version, about = "Solver and lemma auditor for a^x + b^y = c^z")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// All solutions with exponents up to the cap.
    Solve {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long)]
        json: bool,
    },
    /// Scan a box of triples into a JSON Lines file.
    Scan {
        #[arg(long)]
        amax: u64,
        #[arg(long)]
        bmax: u64,
        #[arg(long)]
        cmax: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated suite names; all by default.
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
    },
    /// Re-check a finished scan file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Partial quotients and convergents of log c / log b.
    Cf {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
    /// Least n with r^n = ±1 mod s.
    Order {
        #[arg(long)]
        r: BigUint,
        #[arg(long)]
        s: BigUint,
    },
    /// Solutions of u^l ± v^m = k and the gap-rule report.
    Gap {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: BigUint,
        #[arg(long, default_value_t = 64)]
        cap: u64,
    },
    /// The triple (2, 2^k - 1, 2^k + 1) and its two solutions.
    Family {
        #[arg(long)]
        k: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Sum,
    Diff,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse { .. } => EXIT_IO,
        Error::InvariantViolation(_)
        | Error::LemmaViolation { .. }
        | Error::PrecisionExhausted { .. }
        | Error::FactoringBudgetExceeded(_) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::Solve { a, b, c, cap, json } => {
            let set = enumerate_solutions(&Triple::new(a, b, c)?, cap)?;
            if json {
                print_json(&set);
            } else {
                let status = if set.complete { "complete" } else { "searched to cap" };
                println!("{} cap {} ({status}): N = {}", set.triple, set.cap, set.count());
                for s in &set.solutions {
                    println!("  {s}");
                }
            }
        }
        Cmd::Scan { amax, bmax, cmax, cap, jobs, out, suites } => {
            let mut cfg = ScanConfig::new(amax, bmax, cmax, out);
            cfg.cap = cap;
            cfg.jobs = jobs;
            if let Some(s) = suites {
                cfg.suites = s;
            }
            let rep = scan_range(&cfg)?;
            println!("{} records, max N = {}", rep.records, rep.max_n);
            for w in &rep.three_solution_witnesses {
                println!("  three solutions: ({},{},{})", w[0], w[1], w[2]);
            }
            for l in &rep.lemma_totals {
                println!(
                    "  lemma {:<13} checked {:>6}  applicable {:>6}  violations {}",
                    l.lemma, l.checked, l.applicable, l.violations
                );
            }
        }
        Cmd::Verify { input } => {
            let v = verify_report(&input)?;
            print_json(&v);
            if !v.ok {
                return Ok(EXIT_VIOLATION);
            }
        }
        Cmd::Cf { c, b, count, json } => {
            let cf = cf_log_ratio(c, b, count)?;
            let shown = count.max(1).min(cf.certified_count);
            let quotients = &quotients_u64(&cf)[..shown];
            let convs = cf.convergents(shown - 1)?;
            if json {
                let convs: Vec<String> = convs.iter().map(|c| c.to_string()).collect();
                print_json(&json!({
                    "target": cf.target,
                    "quotients": quotients,
                    "convergents": convs,
                }));
            } else {
                println!("{}: {quotients:?}", cf.target);
                for cv in convs {
                    println!("  p{0}/q{0} = {cv}", cv.index);
                }
            }
        }
        Cmd::Order { r, s } => print_json(&least_pm1(&r, &s)?),
        Cmd::Gap { kind, u, v, k, cap } => {
            let (pairs, gk) = match kind {
                Kind::Sum => (solve_sum(u, v, &k, cap)?, GapKind::Sum),
                Kind::Diff => (solve_diff(u, v, &k, cap)?, GapKind::Diff),
            };
            let report = if pairs.len() == 2 {
                Some(check_gap_pairs(gk, u, v, &k, &pairs)?.0)
            } else {
                None
            };
            print_json(&json!({ "pairs": pairs, "report": report }));
            if report.as_ref().is_some_and(|r| r.is_violation()) {
                return Ok(EXIT_VIOLATION);
            }
        }
        Cmd::Family { k } => {
            let (t, sols) = family(k)?;
            print_json(&json!({ "triple": t, "solutions": sols, "verified": true }));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Cmd::Scan { suites: Some(ref s), .. } = cli.cmd {
        if let Err(e) = SuiteRegistry::standard().select(s) {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
