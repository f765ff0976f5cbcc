//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Tolerances: criterion 12 compares the Szpiro exponent with a relative tolerance of
//! 1e-9; every other criterion is an exact comparison. A criterion listed in
//! `KNOWN_FAILURES` must fail with exactly the recorded detail; the run exits nonzero on
//! any other failure, or if a known failure stops failing.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use polyfact::arith::legendre_valuation;
use polyfact::audit::{check_stirling_bound, finsler_sweep, szpiro_exponent, AbcTriple};
use polyfact::bhargava::{bhargava_factorial, bhargava_factorial_by_orderings};
use polyfact::model::{depress_integer, enumerate_tuples, Rhs};
use polyfact::solver::{
    construct_power_family, prune_no_root_mod_q, scan_brocard, search_power, search_special_form_xy,
    search_thue_mahler_form, solve, Certificate, Sign,
};
use polyfact::{parse_equation, BinaryForm, IntPoly, SearchBounds, SearchOptions, SetSpec, SolverError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SZPIRO_REL_TOL: f64 = 1e-9;

/// The factorial lower bound is false at n = 2 (4·(2/e)² ≈ 2.165 > 2! = 2), so "valid
/// for all 2 ≤ n ≤ 1000" cannot hold; it holds from n = 3 on.
const KNOWN_FAILURES: &[(u32, &str)] = &[(12, "stirling bound fails at n in [2]")];

type Outcome = Result<String, String>;

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn check(cond: bool, ok: impl Into<String>, bad: impl Into<String>) -> Outcome {
    if cond {
        Ok(ok.into())
    } else {
        Err(bad.into())
    }
}

fn polyfact(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_polyfact"))
        .args(args)
        .env_remove("POLYFACT_CONFIG_DIR")
        .output()
        .expect("run polyfact")
}

fn c1_brocard_scan() -> Outcome {
    let started = Instant::now();
    let out = polyfact(&["scan-brocard", "--limit", "1000000", "--witnesses", "25"]);
    if out.status.code() != Some(0) {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let confirmed: Vec<u64> =
        report["confirmed"].as_array().ok_or("no confirmed list")?.iter().filter_map(|s| s["n"].as_u64()).collect();
    let secs = started.elapsed().as_secs_f64();
    check(
        confirmed == [4, 5, 7] && report["candidates"] == serde_json::json!([4, 5, 7]),
        format!("confirmed {confirmed:?} in {secs:.1}s"),
        format!("confirmed {confirmed:?}, candidates {}", report["candidates"]),
    )
}

fn c2_scan_cross_validation() -> Outcome {
    let report = scan_brocard(400, 25).map_err(|e| e.to_string())?;
    let mut exact = Vec::new();
    let mut f = BigUint::from(1u32);
    for n in 1..=400u64 {
        f *= n;
        let m = &f + 1u32;
        let r = m.sqrt();
        if &r * &r == m {
            exact.push(n);
        }
    }
    let sieve: BTreeSet<u64> = report.candidates.iter().copied().collect();
    let exact_set: BTreeSet<u64> = exact.iter().copied().collect();
    let diff = sieve.symmetric_difference(&exact_set).count();
    check(diff == 0, format!("sieve = exact = {exact:?}"), format!("{diff} discrepancies: sieve {sieve:?} exact {exact_set:?}"))
}

fn c3_power_search() -> Outcome {
    let eq = parse_equation("1 * n! = x^2").map_err(|e| e.to_string())?;
    let bounds = SearchBounds::new().with("n", 0, 300);
    let pruned = search_power(&eq.lhs, 2, &bounds, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let plain = search_power(&eq.lhs, 2, &bounds, &SearchOptions::unpruned()).map_err(|e| e.to_string())?;
    let got: BTreeSet<(String, String)> =
        pruned.records.iter().map(|r| (r.get("n").unwrap().to_string(), r.get("x").unwrap().to_string())).collect();
    let want: BTreeSet<(String, String)> =
        [("0", "-1"), ("0", "1"), ("1", "-1"), ("1", "1")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let above_10 = pruned
        .pruned
        .iter()
        .filter(|p| p.assignment["n"] > 10 && matches!(p.certificate, Certificate::PruneReason { .. }))
        .count();
    let share = above_10 as f64 / 290.0;
    check(
        got == want && pruned.records == plain.records && share >= 0.95,
        format!("solutions {{(0,±1),(1,±1)}}; {above_10}/290 tuples n > 10 pruned ({:.1}%); pruned = unpruned", share * 100.0),
        format!("solutions {got:?}, pruned share {share:.3}, pruned==unpruned {}", pruned.records == plain.records),
    )
}

fn c4_construction() -> Outcome {
    let mut verified = 0;
    let mut rejected = 0;
    let mut problems = Vec::new();
    for (d, r) in [(2u32, 2usize), (2, 3), (3, 3), (3, 4)] {
        // bases cycle through 1, 2, 3
        let bases: Vec<u64> = (0..r).map(|i| (i % 3) as u64 + 1).collect();
        for t in 1..=3u64 {
            for b in [1i64, 2, -1] {
                match construct_power_family(&BigInt::from(b), &bases, d, t) {
                    Ok(rec) if rec.verified => verified += 1,
                    Ok(_) => problems.push(format!("unverified d={d} r={r} t={t} b={b}")),
                    Err(SolverError::Domain(_)) if b < 0 && d % 2 == 0 => rejected += 1,
                    Err(e) => problems.push(format!("d={d} r={r} t={t} b={b}: {e}")),
                }
            }
        }
    }
    let base = construct_power_family(&BigInt::from(1), &[1, 1], 2, 1).map_err(|e| e.to_string())?;
    let triple = (
        base.get("n1").map(ToString::to_string),
        base.get("n2").map(ToString::to_string),
        base.get("x").map(ToString::to_string),
    );
    let product_ok = factorial(3) * factorial(4) == BigUint::from(144u32) && 12 * 12 == 144;
    let instance_ok = triple == (Some("3".into()), Some("4".into()), Some("12".into())) && base.verified && product_ok;
    check(
        problems.is_empty() && verified == 30 && rejected == 6 && instance_ok,
        format!("{verified}/36 verified, {rejected}/36 rejected as b<0 with d even; (d,r,t)=(2,2,1) gives (3,4,12)"),
        format!("verified {verified}, rejected {rejected}, problems {problems:?}, instance {triple:?}"),
    )
}

fn c5_bhargava() -> Outcome {
    let mut bad = Vec::new();
    for a in 1..=5u64 {
        for b in -3..=3i64 {
            let set = SetSpec::progression(a, b).map_err(|e| e.to_string())?;
            for n in 0..=20u64 {
                let closed = BigUint::from(a).pow(n as u32) * factorial(n);
                let by_orderings = bhargava_factorial_by_orderings(&set, n).map_err(|e| e.to_string())?;
                let value = bhargava_factorial(&set, n).map_err(|e| e.to_string())?;
                if by_orderings != closed || value != closed {
                    bad.push(format!("AP({a},{b}) n={n}"));
                }
                if a == 2 && by_orderings != BigUint::from(2u32).pow(n as u32) * factorial(n) {
                    bad.push(format!("2^n n! at b={b} n={n}"));
                }
            }
        }
    }
    for n in 0..=50u64 {
        if bhargava_factorial_by_orderings(&SetSpec::FullIntegers, n).map_err(|e| e.to_string())? != factorial(n) {
            bad.push(format!("Z n={n}"));
        }
    }
    check(
        bad.is_empty(),
        "AP(A,b) with A<=5, |b|<=3, n<=20 equal A^n n!; n!_Z = n! for n<=50; 2^n n! reproduced",
        format!("mismatches: {bad:?}"),
    )
}

fn c6_qd_prune() -> Outcome {
    let f = BinaryForm::from_i64(&[1, 0, 1]);
    let mut violations = 0;
    let mut divisible = 0;
    for x in 0..9i64 {
        for y in 0..9i64 {
            let v = x * x + y * y;
            if v % 3 == 0 {
                divisible += 1;
                if v % 9 != 0 {
                    violations += 1;
                }
            }
        }
    }
    let cert = prune_no_root_mod_q(&f, 3, 1);
    let eq = parse_equation("1 * n! = x^2 + y^2").map_err(|e| e.to_string())?;
    let bounds = SearchBounds::new().with("n", 0, 12).with("y", -21_900, 21_900);
    let pruned = solve(&eq, &bounds, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let plain = solve(&eq, &bounds, &SearchOptions::unpruned()).map_err(|e| e.to_string())?;
    let same = pruned.records == plain.records;
    check(
        violations == 0 && cert.is_some() && same,
        format!(
            "mod 9: {divisible} pairs with 3|f, none with 9∤f; n<=12: {} records, {} tuples pruned, pruned = unpruned",
            pruned.records.len(),
            pruned.stats.pruned
        ),
        format!("violations {violations}, certificate {cert:?}, same {same}"),
    )
}

fn c7_divisor_solvers() -> Outcome {
    let cap = BigInt::from(1_000_000_000u64);
    let half = 200i64;
    let cases: [(&str, Sign, u32, &[(&str, u64, u64)]); 4] = [
        ("1 * n! * 7^m = x^2*y + y^2*x", Sign::Plus, 1, &[("m", 0, 4), ("n", 0, 10)]),
        ("1 * n! * 7^m = x^2*y - y^2*x", Sign::Minus, 1, &[("m", 0, 4), ("n", 0, 10)]),
        ("1 * m! * 3^m * n! = x^4*y^2 + y^4*x^2", Sign::Plus, 2, &[("m", 0, 6), ("n", 0, 8)]),
        ("1 * m! * 3^m * n! = x^4*y^2 - y^4*x^2", Sign::Minus, 2, &[("m", 0, 6), ("n", 0, 8)]),
    ];
    let mut summary = Vec::new();
    for (text, sign, s, ranges) in cases {
        let eq = parse_equation(text).map_err(|e| e.to_string())?;
        let Rhs::Form(f) = &eq.rhs else { return Err(format!("{text}: not a form")) };
        let vars: Vec<String> = ranges.iter().map(|r| r.0.to_string()).collect();
        let spans: Vec<(u64, u64)> = ranges.iter().map(|r| (r.1, r.2)).collect();
        let mut values: BTreeMap<BigInt, Vec<Vec<u64>>> = BTreeMap::new();
        for t in enumerate_tuples(&vars, &spans) {
            let v = eq.lhs.eval(&t).map_err(|e| e.to_string())?;
            if v <= cap {
                values.entry(v).or_default().push(t.values().copied().collect());
            }
        }
        let mut grid = BTreeSet::new();
        for x in -half..=half {
            for y in -half..=half {
                if num_integer::gcd(x, y) != 1 {
                    continue;
                }
                if let Some(ts) = values.get(&f.eval(&BigInt::from(x), &BigInt::from(y))) {
                    for t in ts {
                        grid.insert((t.clone(), x, y));
                    }
                }
            }
        }
        let mut bounds = SearchBounds::new();
        for (v, lo, hi) in ranges {
            bounds = bounds.with(v, *lo as i64, *hi as i64);
        }
        let out = if s == 1 {
            search_special_form_xy(sign, &eq.lhs, &bounds, &SearchOptions::default())
        } else {
            search_thue_mahler_form(s, sign, &eq.lhs, &bounds, &SearchOptions::default())
        }
        .map_err(|e| e.to_string())?;
        let mut fast = BTreeSet::new();
        for r in &out.records {
            let t = r.lhs_assignment(&eq.lhs).ok_or("unbound lhs")?;
            let (Ok(x), Ok(y)) = (i64::try_from(r.get("x").unwrap()), i64::try_from(r.get("y").unwrap())) else { continue };
            if x.abs() <= half && y.abs() <= half && eq.lhs.eval(&t).map_err(|e| e.to_string())? <= cap {
                fast.insert((t.values().copied().collect::<Vec<_>>(), x, y));
            }
        }
        if fast != grid {
            return Err(format!("{text}: solver {} vs grid {}", fast.len(), grid.len()));
        }
        summary.push(grid.len().to_string());
    }
    Ok(format!("solver = grid on all four equations ({} solutions each)", summary.join("/")))
}

fn c8_finsler() -> Outcome {
    let started = Instant::now();
    let sweep = finsler_sweep::<f64>(100_000);
    let secs = started.elapsed().as_secs_f64();
    check(
        sweep.all_hold && secs < 60.0,
        format!("holds for all n <= 100000 ({secs:.1}s, min log-margin {:.4} at n={})", sweep.min_margin, sweep.min_margin_at),
        format!("all_hold {}, first failure {:?}, {secs:.1}s", sweep.all_hold, sweep.first_failure),
    )
}

fn c9_legendre() -> Outcome {
    let mut bad = Vec::new();
    for p in (2..=50u64).filter(|&p| is_prime(p)) {
        let mut direct = 0u64;
        for n in 0..=200u64 {
            let mut k = n;
            while k > 0 && k % p == 0 {
                k /= p;
                direct += 1;
            }
            if legendre_valuation(n, p).map_err(|e| e.to_string())? != direct {
                bad.push((n, p));
            }
        }
    }
    check(bad.is_empty(), "matches direct factorization for n <= 200, p <= 50", format!("mismatches {bad:?}"))
}

fn c10_depression() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..1000 {
        let d = rng.gen_range(2..=5usize);
        let mut coeffs: Vec<BigInt> = (0..=d).map(|_| BigInt::from(rng.gen_range(-50i64..=50))).collect();
        if coeffs[d] == BigInt::from(0) {
            coeffs[d] = BigInt::from(rng.gen_range(1i64..=7));
        }
        let f = IntPoly::new(coeffs);
        let x = BigInt::from(rng.gen_range(-100_000i64..=100_000));
        let dep = depress_integer(&f, &BigInt::from(1)).map_err(|e| e.to_string())?;
        let z = dep.z_of(&x);
        if dep.q.eval(&z) != &dep.c * f.eval(&x) || dep.q.coeff(d - 1) != BigInt::from(0) {
            return Err(format!("pair {i}: f={f} x={x}"));
        }
    }
    Ok("Q(z) = c·f(x) and zero subleading coefficient for 1000 random pairs".into())
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let mut checked = Vec::new();
    for (preset, every, stops) in
        [("two-factorials-square", "37", ["101", "250"]), ("erdos-oblath-plus", "3", ["4", "5"]), ("xy-sum-7m", "11", ["12", "20"])]
    {
        let run = |extra: &[&str]| {
            let mut args = vec!["solve", "--preset", preset, "--emit-pruned"];
            args.extend_from_slice(extra);
            polyfact(&args)
        };
        let (w1, w8, part, ck) = (path("w1"), path("w8"), path("part"), path("ck"));
        run(&["--workers", "1", "--out", &w1]);
        run(&["--workers", "8", "--out", &w8]);
        let full = std::fs::read(&w1).map_err(|e| e.to_string())?;
        if full != std::fs::read(&w8).map_err(|e| e.to_string())? {
            return Err(format!("{preset}: 1 vs 8 workers differ"));
        }
        let _ = std::fs::remove_file(&ck);
        let a = run(&["--out", &part, "--checkpoint", &ck, "--checkpoint-every", every, "--budget-nodes", stops[0], "--workers", "8"]);
        let b = run(&["--out", &part, "--checkpoint", &ck, "--checkpoint-every", every, "--budget-nodes", stops[1], "--resume"]);
        let c = run(&["--out", &part, "--checkpoint", &ck, "--checkpoint-every", every, "--resume", "--workers", "2"]);
        let codes = (a.status.code(), b.status.code(), c.status.code());
        if codes != (Some(3), Some(3), Some(0)) {
            return Err(format!("{preset}: exit codes {codes:?}"));
        }
        if std::fs::read(&part).map_err(|e| e.to_string())? != full {
            return Err(format!("{preset}: resumed output differs"));
        }
        checked.push(preset);
    }
    Ok(format!("1 vs 8 workers and two-stop resume byte-identical for {}", checked.join(", ")))
}

fn c12_audit() -> Outcome {
    let t = AbcTriple::from_i64(1, 8, 9).map_err(|e| e.to_string())?;
    let s: f64 = szpiro_exponent(&t).map_err(|e| e.to_string())?;
    let expected = 72f64.ln() / 6f64.ln();
    let rel = ((s - expected) / expected).abs();
    let n1 = check_stirling_bound::<f64>(&[1]);
    let failing: Vec<u64> = (2..=1000u64).filter(|&n| !check_stirling_bound::<f64>(&[n]).holds).collect();
    if rel > SZPIRO_REL_TOL || n1.holds {
        return Err(format!("szpiro {s} (rel err {rel:e}), n=1 holds {}", n1.holds));
    }
    if !failing.is_empty() {
        return Err(format!("stirling bound fails at n in {failing:?}"));
    }
    Ok(format!("szpiro(1,8,9) = {s:.10} (rel err {rel:.1e}); n=1 violated; 2..1000 valid"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "Brocard scan to 10^6", c1_brocard_scan),
        (2, "scan vs exact square test, limit 400", c2_scan_cross_validation),
        (3, "n! = x^2 for n <= 300 with pruning", c3_power_search),
        (4, "power family construction", c4_construction),
        (5, "generalized factorials", c5_bhargava),
        (6, "q^d prune validity", c6_qd_prune),
        (7, "divisor solvers vs grid", c7_divisor_solvers),
        (8, "Finsler sweep", c8_finsler),
        (9, "Legendre valuations", c9_legendre),
        (10, "depression transform", c10_depression),
        (11, "determinism", c11_determinism),
        (12, "audit sanity", c12_audit),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let outcome = run();
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id).map(|(_, d)| *d);
        match (&outcome, known) {
            (Ok(detail), None) => println!("[PASS] {id:>2} {name}: {detail}"),
            (Err(detail), Some(k)) if detail == k => println!("[FAIL] {id:>2} {name}: {detail} (known, see notes)"),
            (Err(detail), _) => {
                println!("[FAIL] {id:>2} {name}: {detail}");
                unexpected.push(id);
            }
            (Ok(detail), Some(_)) => {
                println!("[PASS] {id:>2} {name}: {detail} (expected to fail)");
                unexpected.push(id);
            }
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected results for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
