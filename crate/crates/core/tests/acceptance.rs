//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! reach stdout.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tpe::congruence::{least_pm1, verify_order_lift_for};
use tpe::contfrac::{cf_log_ratio, gap_bounds_check, legendre_locate, quotients_u64, LegendreOutcome};
use tpe::equation::{
    enumerate_solutions, family, map_solution, p_set, solve_diff, solve_sum, ExponentPair, Sign, Solution, Triple,
    TransformedSolution,
};
use tpe::lemma::{check_gap_pairs, gcd_divides_report, pair_congruence_report, threshold_check, GapKind};
use tpe::scan::{read_records, scan_range, verify_report, ScanConfig, ScanRecord};
use tpe::Error;

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Gate {
    passed: usize,
    failed: usize,
}

impl Gate {
    fn run(&mut self, id: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let res = match (res, budget) {
            (Ok(_), Some(b)) if took > b => Err(format!("took {took:.2?}, budget {b:?}")),
            (r, _) => r,
        };
        let (tag, detail) = match &res {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("{tag} {id:>2} {name:<28} {took:>9.2?}  {detail}");
        if res.is_ok() {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

fn sols(v: &[(u64, u64, u64)]) -> Vec<Solution> {
    v.iter().map(|&(x, y, z)| Solution::new(x, y, z)).collect()
}

fn scan_to(dir: &Path, name: &str, max: u64, cap: u64, jobs: usize, suites: &[&str]) -> Result<Vec<ScanRecord>, String> {
    let path = dir.join(name);
    let mut cfg = ScanConfig::new(max, max, max, &path);
    cfg.cap = cap;
    cfg.jobs = jobs;
    if !suites.is_empty() {
        cfg.suites = suites.iter().map(|s| s.to_string()).collect();
    }
    scan_range(&cfg).map_err(|e| format!("scan failed: {e}"))?;
    read_records(&path).map_err(|e| e.to_string())
}

fn family_fixture() -> Outcome {
    for k in 2..=20u64 {
        let (b, c) = ((1u64 << k) - 1, (1u64 << k) + 1);
        let set = enumerate_solutions(&Triple::new(2, b, c).map_err(|e| e.to_string())?, 50.max(k + 10))
            .map_err(|e| e.to_string())?;
        let expect = sols(&[(1, 1, 1), (k + 2, 2, 2)]);
        ensure!(set.solutions == expect, "k = {k}: got {:?}", set.solutions);
        let (t, pair) = family(k).map_err(|e| e.to_string())?;
        ensure!((t.a(), t.b(), t.c()) == (2, b, c) && pair.to_vec() == expect, "family({k}) disagrees");
    }
    Ok("k = 2..20 give exactly {(1,1,1),(k+2,2,2)}".into())
}

fn known_witness(dir: &Path) -> Outcome {
    let set = enumerate_solutions(&Triple::new(3, 5, 2).unwrap(), 50).map_err(|e| e.to_string())?;
    ensure!(set.solutions == sols(&[(1, 1, 3), (3, 1, 5), (1, 3, 7)]), "(3,5,2): {:?}", set.solutions);
    let recs = scan_to(dir, "box10.jsonl", 10, 50, 1, &[])?;
    let r = recs.iter().find(|r| r.triple() == [3, 5, 2]).ok_or("(3,5,2) missing from scan")?;
    ensure!(r.flags.three_solution_witness && r.n == 3 && r.c % 2 == 0, "record flags {:?}", r.flags);
    let witnesses: Vec<_> = recs.iter().filter(|r| r.n >= 3).map(|r| r.triple()).collect();
    Ok(format!("N = 3 witnesses in [2,10]^3: {witnesses:?}"))
}

fn odd_c_ceiling(dir: &Path) -> Outcome {
    let recs = scan_to(dir, "box30.jsonl", 30, 30, 1, &[])?;
    let odd: Vec<_> = recs.iter().filter(|r| r.c % 2 == 1).collect();
    let worst = odd.iter().map(|r| r.n).max().unwrap_or(0);
    let bad: Vec<_> = odd.iter().filter(|r| r.n > 2).map(|r| r.triple()).collect();
    ensure!(bad.is_empty(), "odd c with N > 2: {bad:?}");
    Ok(format!("{} records, {} with odd c, max N there = {worst}", recs.len(), odd.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut triples = 0;
    let mut total = 0;
    for a in 2..=30 {
        for b in 2..=30 {
            for c in 2..=30 {
                if !pairwise_coprime(a, b, c) {
                    continue;
                }
                let set = enumerate_solutions(&Triple::new(a, b, c).unwrap(), 25).map_err(|e| e.to_string())?;
                let got: Vec<_> = set.solutions.iter().map(|s| (s.x, s.y, s.z)).collect();
                let want = naive_solutions(a, b, c, 25);
                ensure!(got == want, "({a},{b},{c}): solver {got:?}, oracle {want:?}");
                triples += 1;
                total += want.len();
            }
        }
    }
    Ok(format!("{triples} triples, {total} solutions, identical"))
}

fn gap_rules() -> Outcome {
    let (mut instances, mut checked, mut applicable, mut max_count) = (0, 0, 0, 0);
    for u in 2..=100u64 {
        for v in 2..=100u64 {
            if gcd(u, v) != 1 {
                continue;
            }
            // All differences in range at once; the sum oracle is cheap per k.
            let mut diffs: Vec<Vec<(u64, u64)>> = vec![Vec::new(); 101];
            let mut ul = BigUint::one();
            for l in 1..=64u64 {
                ul *= u;
                let mut vm = BigUint::one();
                for m in 1..=64u64 {
                    vm *= v;
                    if vm >= ul {
                        break;
                    }
                    if let Some(d) = (&ul - &vm).to_u64().filter(|d| *d <= 100) {
                        diffs[d as usize].push((l, m));
                    }
                }
            }
            for k in 2..=100u64 {
                let kb = BigUint::from(k);
                for (kind, want) in [
                    (GapKind::Sum, naive_two_term(u, v, k, 64, false)),
                    (GapKind::Diff, diffs[k as usize].clone()),
                ] {
                    let got = match kind {
                        GapKind::Sum => solve_sum(u, v, &kb, 64),
                        GapKind::Diff => solve_diff(u, v, &kb, 64),
                    }
                    .map_err(|e| e.to_string())?;
                    let mut got: Vec<_> = got.iter().map(|p| (p.l, p.m)).collect();
                    got.sort();
                    let mut want = want;
                    want.sort();
                    ensure!(got == want, "{kind:?} ({u},{v},{k}): solver {got:?}, oracle {want:?}");
                    ensure!(got.len() <= 2, "{kind:?} ({u},{v},{k}) has {} solutions", got.len());
                    max_count = max_count.max(got.len());
                    if got.len() == 2 {
                        instances += 1;
                        let pairs: Vec<_> = got.iter().map(|&(l, m)| ExponentPair::new(l, m)).collect();
                        let (rep, witness) = check_gap_pairs(kind, u, v, &kb, &pairs).map_err(|e| e.to_string())?;
                        checked += 1;
                        if rep.applicable {
                            applicable += 1;
                        }
                        ensure!(!rep.is_violation(), "{kind:?} ({u},{v},{k}): {:?}", rep.violations());
                        if let Some(w) = witness {
                            ensure!(w.equations_hold(), "witness equations fail for ({u},{v},{k})");
                            ensure!(w.reconstruct_k() == Some(kb.clone()), "k not rebuilt for ({u},{v},{k})");
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{instances} two-solution instances, {applicable}/{checked} applicable, 0 violations, max count {max_count}"
    ))
}

fn order_machinery() -> Outcome {
    let mut pairs = 0;
    for s in 3..=2000u64 {
        for r in 2..=50u64 {
            if gcd(r, s) != 1 {
                continue;
            }
            let rec = least_pm1(&BigUint::from(r), &BigUint::from(s)).map_err(|e| e.to_string())?;
            let (n, d) = exhaustive_pm1(r, s);
            let delta = if d == 1 { Sign::Plus } else { Sign::Minus };
            ensure!(rec.n1 == BigUint::from(n) && rec.delta1 == delta, "({r},{s}): {rec:?}, oracle ({n},{d})");
            let rn = BigUint::from(r).pow(n as u32);
            let f = if d == 1 { rn - 1u32 } else { rn + 1u32 } / s;
            ensure!(rec.f == f, "({r},{s}): f = {}, oracle {f}", rec.f);
            pairs += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x6c69_6674);
    let (mut queries, mut held) = (0, 0);
    while queries < 10_000 {
        let s = rng.gen_range(3..=2000u64);
        let r = rng.gen_range(2..=50u64);
        if s % 4 == 2 || gcd(r, s) != 1 {
            continue;
        }
        let primes: Vec<u64> = (2..=s).filter(|p| s % p == 0 && (2..*p).all(|d| p % d != 0)).collect();
        let mut t = 1u64;
        for _ in 0..rng.gen_range(1..=3) {
            let p = primes[rng.gen_range(0..primes.len())];
            if s * t * p <= 200_000 {
                t *= p;
            }
        }
        if t < 2 {
            continue;
        }
        let (n2, d2) = exhaustive_pm1(r, s * t);
        let (n_prime, delta) = if rng.gen_bool(0.5) {
            let m = rng.gen_range(1..=4u64);
            let d = if d2 == -1 && m % 2 == 1 { Sign::Minus } else { Sign::Plus };
            (n2 * m, d)
        } else {
            let d = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
            (rng.gen_range(1..=4 * n2), d)
        };
        let rep = verify_order_lift_for(r, s, t, n_prime, delta).map_err(|e| e.to_string())?;
        let st = BigUint::from(s * t);
        let want = match delta {
            Sign::Plus => BigUint::one(),
            Sign::Minus => &st - 1u32,
        };
        let congruent = BigUint::from(r).modpow(&BigUint::from(n_prime), &st) == want;
        ensure!(rep.congruence_holds == congruent, "congruence flag wrong for ({r},{s},{t},{n_prime})");
        ensure!(rep.implication_holds(), "lift fails for r={r} s={s} t={t} n'={n_prime} {delta:?}: {rep:?}");
        if congruent {
            // Independent restatement of the lifted divisibility.
            let (n1, _) = exhaustive_pm1(r, s);
            let f = least_pm1(&BigUint::from(r), &BigUint::from(s)).unwrap().f;
            let need = t / BigUint::from(t).gcd(&f).to_u64().unwrap();
            ensure!(n_prime % n1 == 0 && (n_prime / n1) % need == 0, "oracle lift fails for ({r},{s},{t},{n_prime})");
            held += 1;
        }
        queries += 1;
    }
    Ok(format!("{pairs} (r,s) pairs exact; {queries} lift queries, {held} with the congruence true"))
}

fn continued_fractions() -> Outcome {
    let (mut pairs, mut located, mut probes) = (0, 0, 0);
    for c in 3..=50u64 {
        for b in 2..c {
            if multiplicatively_dependent(b, c) {
                ensure!(cf_log_ratio(c, b, 10).is_err(), "({c},{b}) should be rational");
                continue;
            }
            let cf = cf_log_ratio(c, b, 11).map_err(|e| e.to_string())?;
            let got = &quotients_u64(&cf)[..10];
            let want = shanks_log_cf(c, b, 10);
            ensure!(got == want.as_slice(), "log {c}/log {b}: engine {got:?}, oracle {want:?}");
            for i in 0..10 {
                let g = gap_bounds_check(&cf, i).map_err(|e| e.to_string())?;
                ensure!(g.lower_holds && g.upper_holds, "gap bounds fail at ({c},{b}) index {i}: {g:?}");
            }
            let convs = cf.convergents(9).map_err(|e| e.to_string())?;
            let alpha = (c as f64).ln() / (b as f64).ln();
            for q in 1..=25u64 {
                let p0 = (alpha * q as f64).floor() as u64;
                for p in [p0, p0 + 1] {
                    probes += 1;
                    let (pb, qb) = (BigUint::from(p), BigUint::from(q));
                    match legendre_locate(&cf, &pb, &qb).map_err(|e| e.to_string())? {
                        LegendreOutcome::Located(i) => {
                            let g = pb.gcd(&qb);
                            let conv = convs.get(i).ok_or("located beyond the checked convergents")?;
                            ensure!(conv.p == &pb / &g && conv.q == &qb / &g, "{p}/{q} located at wrong index {i}");
                            located += 1;
                        }
                        LegendreOutcome::NotApplicable => {}
                    }
                }
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs match the oracle; gap bounds at 10 indices each; {located}/{probes} Legendre probes located"))
}

fn modulus_is_two(inst_c: u64, z: u64) -> bool {
    inst_c == 2 && z == 1
}

fn pair_congruences(dir: &Path) -> Outcome {
    let recs = scan_to(dir, "pairs30.jsonl", 30, 30, 1, &["pair-congruence"])?;
    let (mut instances, mut pair_reports, mut applicable) = (0, 0, 0);
    let mut degenerate = Vec::new();
    for r in recs.iter().filter(|r| r.n >= 2) {
        let t = Triple::new(r.a, r.b, r.c).unwrap();
        for inst in p_set(&t) {
            instances += 1;
            let tsols: Vec<TransformedSolution> =
                r.solutions.iter().map(|s| map_solution(&inst, s).unwrap()).collect();
            let zmin = tsols.iter().map(|s| s.z).min().unwrap();
            for i in 0..tsols.len() {
                for j in i + 1..tsols.len() {
                    let (p, q) = if tsols[i].z <= tsols[j].z { (tsols[i], tsols[j]) } else { (tsols[j], tsols[i]) };
                    let rep = pair_congruence_report(&inst, &p, &q).map_err(|e| e.to_string())?;
                    let g = gcd_divides_report(&inst, &p, &q, &tsols).map_err(|e| e.to_string())?;
                    pair_reports += 2;
                    ensure!(!rep.is_violation() && !g.is_violation(), "{inst} {p} {q}: violation");
                    applicable += rep.applicable as usize + g.applicable as usize;

                    // Oracle restatement.
                    let det = p.x as i128 * q.y as i128 - q.x as i128 * p.y as i128;
                    if modulus_is_two(inst.big_c, p.z) {
                        ensure!(!rep.applicable, "{inst}: C^Z1 = 2 must not be applicable");
                        if det == 0 {
                            degenerate.push(format!("{inst} {p} {q} from {t} role {}", inst.role.label()));
                        }
                        continue;
                    }
                    ensure!(rep.applicable && det != 0, "{inst} {p} {q}: determinant {det}");
                    let m = BigUint::from(inst.big_c).pow(p.z as u32);
                    let lhs = BigUint::from(inst.big_a).modpow(&BigUint::from(det.unsigned_abs()), &m);
                    let minus = matches!(inst.lambda, Sign::Plus);
                    let rhs = if minus && (p.y + q.y) % 2 == 1 { &m - 1u32 } else { BigUint::one() % &m };
                    ensure!(lhs == rhs, "{inst} {p} {q}: congruence fails");

                    if p.z < q.z && p.z == zmin {
                        let c_cond = inst.big_c % 2 == 1 || (&m % 4u32).is_zero();
                        ensure!(g.applicable == c_cond, "{inst} {p} {q}: gcd applicability");
                        if let Some(mm) = m.to_u64().filter(|mm| *mm <= 10_000_000) {
                            let (n1, d1) = exhaustive_pm1(inst.big_a % mm, mm);
                            let an = BigUint::from(inst.big_a).pow(n1 as u32);
                            let f = if d1 == 1 { an - 1u32 } else { an + 1u32 } / &m;
                            let gg = BigUint::from(inst.big_c).pow((q.z - p.z) as u32).gcd(&f);
                            let divides = (BigUint::from(q.y) % &gg).is_zero();
                            ensure!(g.conclusions[0].holds == Some(divides), "{inst} {p} {q}: gcd oracle disagrees");
                            ensure!(!c_cond || divides, "{inst} {p} {q}: gcd does not divide Y2");
                        }
                    }
                }
            }
        }
    }
    println!("     info: vanishing determinant, all with C^Z1 = 2 (excluded by precondition):");
    for d in &degenerate {
        println!("       {d}");
    }
    Ok(format!(
        "{instances} P-set instances, {applicable}/{pair_reports} reports applicable, 0 violations; {} with C^Z1 = 2",
        degenerate.len()
    ))
}

fn threshold() -> Outcome {
    let ten = BigUint::from(10u32);
    let at = |t: &BigUint| threshold_check(t).map_err(|e| e.to_string());
    ensure!(at(&ten.pow(62))?, "10^62 should pass");
    ensure!(!at(&ten.pow(37))?, "10^37 should fail");
    // Oracle in log space: ln t > 6 ln 6500 + 18 ln ln t.
    let oracle = |e: f64| {
        let lt = e * 10f64.ln();
        lt - (6.0 * 6500f64.ln() + 18.0 * lt.ln())
    };
    ensure!(oracle(62.0) > 0.5 && oracle(37.0) < -0.5, "oracle margins");
    let mut prev = false;
    let mut flips = 0;
    for i in 0..50 {
        let e = 60.0 + 20.0 * i as f64 / 49.0;
        let v = at(&pow10_real(e))?;
        let m = oracle(e);
        if m.abs() > 1e-6 {
            ensure!(v == (m > 0.0), "10^{e:.3}: predicate {v}, oracle margin {m:.4}");
        }
        if i > 0 {
            ensure!(!prev || v, "not monotone at 10^{e:.3}");
            flips += (v != prev) as u32;
        }
        prev = v;
    }
    ensure!(prev, "10^80 should pass");
    Ok(format!("fixtures hold; 50-point sample monotone, {flips} transition(s)"))
}

fn without_header(path: &Path) -> Result<String, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    Ok(text.lines().skip(1).collect::<Vec<_>>().join("\n"))
}

fn determinism(dir: &Path) -> Outcome {
    let mut bodies = Vec::new();
    for (name, jobs) in [("d1.jsonl", 1), ("d2.jsonl", 1), ("d4.jsonl", 4)] {
        let path = dir.join(name);
        let mut cfg = ScanConfig::new(12, 12, 12, &path);
        cfg.cap = 30;
        cfg.jobs = jobs;
        scan_range(&cfg).map_err(|e| e.to_string())?;
        bodies.push(without_header(&path)?);
        let v = verify_report(&path).map_err(|e| e.to_string())?;
        ensure!(v.ok, "fresh scan fails verification: {:?}", v.findings);
    }
    ensure!(bodies[0] == bodies[1], "repeated scans differ");
    ensure!(bodies[0] == bodies[2], "jobs = 4 changes the output");

    let path = dir.join("d1.jsonl");
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let line = text.lines().position(|l| l.contains("[1,3,7]")).ok_or("no (3,5,2) record")? + 1;
    std::fs::write(&path, text.replacen("[1,3,7]", "[1,3,8]", 1)).map_err(|e| e.to_string())?;
    let v = verify_report(&path).map_err(|e| e.to_string())?;
    ensure!(!v.ok && v.findings.iter().any(|f| f.line == line), "corruption not located: {:?}", v.findings);

    std::fs::write(&path, &text[..text.len() * 2 / 3]).map_err(|e| e.to_string())?;
    ensure!(matches!(verify_report(&path), Err(Error::Parse { .. })), "truncation not reported as a parse error");
    Ok(format!("3 scans identical (jobs 1, 1, 4); corruption found at line {line}; truncation rejected"))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let d = dir.path();
    let mut gate = Gate { passed: 0, failed: 0 };
    let secs = Duration::from_secs;
    gate.run(1, "family fixture", Some(secs(5)), family_fixture);
    gate.run(2, "known N = 3 witness", Some(secs(10)), || known_witness(d));
    gate.run(3, "odd-c ceiling", Some(secs(120)), || odd_c_ceiling(d));
    gate.run(4, "oracle equivalence", None, oracle_equivalence);
    gate.run(5, "gap-rule suites", None, gap_rules);
    gate.run(6, "order machinery", None, order_machinery);
    gate.run(7, "continued fractions", None, continued_fractions);
    gate.run(8, "pair-congruence suites", None, || pair_congruences(d));
    gate.run(9, "threshold predicate", None, threshold);
    gate.run(10, "determinism and persistence", None, || determinism(d));
    println!("acceptance: {} passed, {} failed", gate.passed, gate.failed);
    if gate.failed > 0 {
        std::process::exit(1);
    }
}
