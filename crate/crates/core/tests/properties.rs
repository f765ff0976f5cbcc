use num_bigint::BigInt;
use num_traits::One;
use polyfact::solver::{construct_power_family, proportional_family, solve, Proportion};
use polyfact::{parse_equation, BinaryForm, Certificate, SearchBounds, SearchOptions, SolutionRecord, SolverError};
use proptest::prelude::*;

const SHAPES: [(u32, usize); 4] = [(2, 2), (2, 3), (3, 3), (3, 4)];

#[test]
fn power_family_verifies_for_uniform_bases() {
    for (d, r) in SHAPES {
        for t in 1..=3 {
            for b in [1i64, 2, -1] {
                for a in 1..=3u64 {
                    let res = construct_power_family(&BigInt::from(b), &vec![a; r], d, t);
                    if b < 0 && d % 2 == 0 {
                        assert!(matches!(res, Err(SolverError::Domain(_))), "d={d} b={b}");
                        continue;
                    }
                    let rec = res.unwrap_or_else(|e| panic!("d={d} r={r} t={t} b={b} a={a}: {e}"));
                    assert!(rec.verified, "d={d} r={r} t={t} b={b} a={a}");
                    assert!(matches!(rec.certificate, Certificate::Construction { .. }));
                    if rec.get("x").is_some() {
                        let eq = parse_equation(&rec.equation).unwrap();
                        assert!(rec.recheck(&eq).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn power_family_rejects_short_products() {
    assert!(matches!(construct_power_family(&BigInt::one(), &[1], 2, 1), Err(SolverError::Domain(_))));
    assert!(matches!(construct_power_family(&BigInt::one(), &[1, 1], 2, 0), Err(SolverError::Domain(_))));
}

#[test]
fn proportional_family_verifies() {
    for coeffs in [[1i64, 0, 1], [1, 1, 1], [2, -1, 3]] {
        let f = BinaryForm::from_i64(&coeffs);
        for choice in [Proportion::Diagonal, Proportion::Auto] {
            let rec = proportional_family(&f, &BigInt::one(), &[1, 1], choice, 1).unwrap();
            assert!(rec.verified, "{coeffs:?}");
        }
    }
}

fn lines(out: &polyfact::SearchOutcome) -> Vec<String> {
    out.records.iter().map(|r| serde_json::to_string(r).unwrap()).collect()
}

#[test]
fn results_do_not_depend_on_workers_or_restarts() {
    let cases = [
        ("1 * n! * m! = x^2", SearchBounds::new().with("n", 0, 25).with("m", 0, 25)),
        ("1 * n! = x^3 + y^3", SearchBounds::new().with("n", 0, 9).with("y", -40, 40)),
        ("1 * n! * 7^m = x^2*y + y^2*x ; gcd(x,y)=1", SearchBounds::new().with("n", 0, 9).with("m", 0, 3)),
    ];
    for (text, bounds) in cases {
        let eq = parse_equation(text).unwrap();
        let one = solve(&eq, &bounds, &SearchOptions::with_workers(1)).unwrap();
        let eight = solve(&eq, &bounds, &SearchOptions::with_workers(8)).unwrap();
        assert_eq!(lines(&one), lines(&eight), "{text}");

        let mut chunked = Vec::new();
        let mut start = 0;
        loop {
            let b = SearchBounds { node_budget: Some(7), ..bounds.clone() };
            let out = solve(&eq, &b, &SearchOptions { start, workers: 2, ..Default::default() }).unwrap();
            chunked.extend(lines(&out));
            start = out.next_tuple;
            if out.is_complete() || start >= out.stats.tuples_total {
                break;
            }
        }
        assert_eq!(chunked, lines(&one), "{text}");
    }
}

proptest! {
    #[test]
    fn records_round_trip(n in 0u64..40, x in any::<i64>(), y in any::<i64>()) {
        let mut assignment = std::collections::BTreeMap::new();
        assignment.insert("n".to_string(), BigInt::from(n));
        assignment.insert("x".to_string(), BigInt::from(x));
        assignment.insert("y".to_string(), BigInt::from(y) * BigInt::from(u64::MAX));
        let rec = SolutionRecord {
            equation: "1 * n! = x^2 + y^2".into(),
            assignment,
            verified: false,
            certificate: Certificate::PruneReason { q: 3, v: 1, d: 2 },
        };
        let text = serde_json::to_string(&rec).unwrap();
        let back: SolutionRecord = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, rec);
    }

    #[test]
    fn univariate_search_matches_evaluation(c in -50i64..50, n_hi in 0u64..12) {
        let text = if c < 0 { format!("1 * n! = x^2 - {}", -c) } else { format!("1 * n! = x^2 + {c}") };
        let eq = parse_equation(&text).unwrap();
        let out = solve(&eq, &SearchBounds::new().with("n", 0, n_hi as i64), &SearchOptions::default()).unwrap();
        for r in &out.records {
            prop_assert!(r.recheck(&eq).unwrap());
        }
        // reference: n! - c must be a perfect square
        let mut count = 0;
        let mut f = BigInt::one();
        for n in 0..=n_hi {
            if n > 0 { f *= n; }
            let m = &f - c;
            if m >= BigInt::from(0) {
                let s = m.sqrt();
                if &s * &s == m { count += if s == BigInt::from(0) { 1 } else { 2 }; }
            }
        }
        prop_assert_eq!(out.records.len(), count);
    }
}
