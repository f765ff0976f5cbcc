//! Library results against small, independent reference computations.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use polyfact::arith::legendre_valuation;
use polyfact::bhargava::{bhargava_factorial, bhargava_factorial_by_orderings};
use polyfact::model::{depress_integer, Rhs};
use polyfact::solver::{search_power, search_special_form_xy, search_thue_mahler_form, Sign};
use polyfact::{parse_equation, IntPoly, SearchBounds, SearchOptions, SetSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn trial_valuation(mut k: u64, p: u64) -> u64 {
    let mut v = 0;
    while k > 0 && k % p == 0 {
        k /= p;
        v += 1;
    }
    v
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn naive_factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

#[test]
fn legendre_matches_factoring_every_term() {
    for p in (2..=50).filter(|&p| is_prime(p)) {
        let mut direct = 0;
        for n in 0..=200u64 {
            if n > 0 {
                direct += trial_valuation(n, p);
            }
            assert_eq!(legendre_valuation(n, p).unwrap(), direct, "n={n} p={p}");
        }
    }
}

/// Greedy p-ordering over a finite list, minimizing the valuation of the product of
/// differences; returns `w_n(p)`.
fn greedy_w(elements: &[i64], p: u64, n: usize) -> u64 {
    let mut chosen: Vec<i64> = vec![elements[0]];
    let mut used = vec![false; elements.len()];
    used[0] = true;
    let mut last = 0;
    for _ in 1..=n {
        let mut best: Option<(u64, usize)> = None;
        for (i, &a) in elements.iter().enumerate() {
            if used[i] {
                continue;
            }
            let v: u64 = chosen.iter().map(|&c| trial_valuation((a - c).unsigned_abs(), p)).sum();
            if best.is_none_or(|(bv, _)| v < bv) {
                best = Some((v, i));
            }
        }
        let (v, i) = best.expect("enough elements");
        used[i] = true;
        chosen.push(elements[i]);
        last = v;
    }
    last
}

fn greedy_factorial(elements: &[i64], n: usize) -> BigUint {
    let pmax = (n as u64).max(elements.iter().map(|e| e.unsigned_abs()).max().unwrap_or(2));
    let mut out = BigUint::one();
    for p in (2..=pmax).filter(|&p| is_prime(p)) {
        out *= BigUint::from(p).pow(greedy_w(elements, p, n) as u32);
    }
    out
}

#[test]
fn progression_factorials_match_greedy_orderings() {
    for a in 1..=5u64 {
        for b in -3..=3i64 {
            let set = SetSpec::progression(a, b).unwrap();
            let elements: Vec<i64> = (0..40).map(|k| a as i64 * k + b).collect();
            for n in 0..=12usize {
                let expected = greedy_factorial(&elements, n);
                assert_eq!(bhargava_factorial(&set, n as u64).unwrap(), expected, "AP({a},{b}) n={n}");
                assert_eq!(bhargava_factorial_by_orderings(&set, n as u64).unwrap(), expected, "AP({a},{b}) n={n}");
            }
        }
    }
}

#[test]
fn integers_give_the_ordinary_factorial() {
    for n in 0..=50 {
        assert_eq!(bhargava_factorial(&SetSpec::FullIntegers, n).unwrap(), naive_factorial(n));
        assert_eq!(bhargava_factorial_by_orderings(&SetSpec::FullIntegers, n).unwrap(), naive_factorial(n));
    }
}

#[test]
fn explicit_squares_match_greedy_orderings() {
    let squares: Vec<i64> = (0..7).map(|k| k * k).collect();
    let set = SetSpec::explicit(squares.clone()).unwrap();
    assert_eq!(bhargava_factorial(&set, 3).unwrap(), greedy_factorial(&squares, 3));
}

#[test]
fn depression_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let d = rng.gen_range(2..=5usize);
        let mut coeffs: Vec<BigInt> = (0..=d).map(|_| BigInt::from(rng.gen_range(-30i64..=30))).collect();
        if coeffs[d].is_zero() {
            coeffs[d] = BigInt::from(rng.gen_range(1i64..=9));
        }
        let f = IntPoly::new(coeffs);
        let x = BigInt::from(rng.gen_range(-10_000i64..=10_000));
        let dep = depress_integer(&f, &BigInt::one()).unwrap();
        let z = dep.z_of(&x);
        assert_eq!(dep.q.eval(&z), &dep.c * f.eval(&x), "f={f:?} x={x}");
        assert!(dep.q.coeff(d - 1).is_zero());
        assert!(dep.q.coeff(d).is_one());
    }
}

#[test]
fn squares_of_factorials_up_to_300() {
    let eq = parse_equation("1 * n! = x^2").unwrap();
    let bounds = SearchBounds::new().with("n", 0, 300);
    let mut expected = BTreeSet::new();
    for n in 0..=300u64 {
        let f = naive_factorial(n);
        let r = f.sqrt();
        if &r * &r == f {
            let r = BigInt::from(r);
            expected.insert((n, -r.clone()));
            expected.insert((n, r));
        }
    }
    for prune in [true, false] {
        let opts = SearchOptions { prune, ..Default::default() };
        let out = search_power(&eq.lhs, 2, &bounds, &opts).unwrap();
        let got: BTreeSet<(u64, BigInt)> = out
            .records
            .iter()
            .map(|r| (u64::try_from(r.get("n").unwrap()).unwrap(), r.get("x").unwrap().clone()))
            .collect();
        assert_eq!(got, expected);
    }
}

/// Every coprime pair in the box whose form value is one of the left-hand-side values.
fn grid_oracle(
    lhs_values: &BTreeMap<BigInt, Vec<BTreeMap<String, u64>>>,
    form: impl Fn(i64, i64) -> BigInt,
    half: i64,
) -> BTreeSet<(Vec<u64>, i64, i64)> {
    let mut out = BTreeSet::new();
    for x in -half..=half {
        for y in -half..=half {
            if num_integer::gcd(x, y) != 1 {
                continue;
            }
            if let Some(tuples) = lhs_values.get(&form(x, y)) {
                for t in tuples {
                    out.insert((t.values().copied().collect(), x, y));
                }
            }
        }
    }
    out
}

fn lhs_table(eq_text: &str, ranges: &[(&str, u64, u64)], cap: &BigInt) -> (polyfact::Equation, BTreeMap<BigInt, Vec<BTreeMap<String, u64>>>) {
    let eq = parse_equation(eq_text).unwrap();
    let vars: Vec<String> = ranges.iter().map(|r| r.0.to_string()).collect();
    let spans: Vec<(u64, u64)> = ranges.iter().map(|r| (r.1, r.2)).collect();
    let mut table: BTreeMap<BigInt, Vec<BTreeMap<String, u64>>> = BTreeMap::new();
    for t in polyfact::model::enumerate_tuples(&vars, &spans) {
        let v = eq.lhs.eval(&t).unwrap();
        if v.abs() <= *cap {
            table.entry(v).or_default().push(t);
        }
    }
    (eq, table)
}

#[test]
fn divisor_solvers_match_grid() {
    let cap = BigInt::from(1_000_000_000u64);
    let half = 200;
    let cases: [(&str, Sign, u32, &[(&str, u64, u64)]); 4] = [
        ("1 * n! * 7^m = x^2*y + y^2*x", Sign::Plus, 1, &[("m", 0, 4), ("n", 0, 10)]),
        ("1 * n! * 7^m = x^2*y - y^2*x", Sign::Minus, 1, &[("m", 0, 4), ("n", 0, 10)]),
        ("1 * m! * 3^m * n! = x^4*y^2 + y^4*x^2", Sign::Plus, 2, &[("m", 0, 6), ("n", 0, 8)]),
        ("1 * m! * 3^m * n! = x^4*y^2 - y^4*x^2", Sign::Minus, 2, &[("m", 0, 6), ("n", 0, 8)]),
    ];
    for (text, sign, s, ranges) in cases {
        let (eq, table) = lhs_table(text, ranges, &cap);
        let Rhs::Form(f) = &eq.rhs else { panic!("form expected") };
        let expected = grid_oracle(&table, |x, y| f.eval(&BigInt::from(x), &BigInt::from(y)), half);
        let mut bounds = SearchBounds::new();
        for (v, lo, hi) in ranges {
            bounds = bounds.with(v, *lo as i64, *hi as i64);
        }
        let out = if s == 1 {
            search_special_form_xy(sign, &eq.lhs, &bounds, &SearchOptions::default()).unwrap()
        } else {
            search_thue_mahler_form(s, sign, &eq.lhs, &bounds, &SearchOptions::default()).unwrap()
        };
        let got: BTreeSet<(Vec<u64>, i64, i64)> = out
            .records
            .iter()
            .filter_map(|r| {
                let t = r.lhs_assignment(&eq.lhs).unwrap();
                let x = i64::try_from(r.get("x").unwrap()).ok()?;
                let y = i64::try_from(r.get("y").unwrap()).ok()?;
                let in_box = x.abs() <= half && y.abs() <= half && eq.lhs.eval(&t).unwrap().abs() <= cap;
                in_box.then(|| (t.values().copied().collect(), x, y))
            })
            .collect();
        assert_eq!(got, expected, "{text}");
        assert!(!expected.is_empty(), "{text}");
    }
}

#[test]
fn sums_of_two_squares_prune_is_sound() {
    let eq = parse_equation("1 * n! = x^2 + y^2").unwrap();
    let bounds = SearchBounds::new().with("n", 0, 12).with("y", -21_900, 21_900);
    let pruned = polyfact::solver::solve(&eq, &bounds, &SearchOptions::default()).unwrap();
    let plain = polyfact::solver::solve(&eq, &bounds, &SearchOptions::unpruned()).unwrap();
    assert_eq!(pruned.records, plain.records);
    // reference: all (x, y) with x^2 + y^2 = n!
    let mut expected = BTreeSet::new();
    for n in 0..=12u64 {
        let m = BigInt::from(naive_factorial(n));
        let top = i64::try_from(&m.sqrt()).unwrap();
        for x in -top..=top {
            let rest = &m - BigInt::from(x * x);
            let y = rest.sqrt();
            if &y * &y == rest {
                let y = i64::try_from(&y).unwrap();
                expected.insert((n, x, y));
                expected.insert((n, x, -y));
            }
        }
    }
    let got: BTreeSet<(u64, i64, i64)> = pruned
        .records
        .iter()
        .map(|r| {
            (
                u64::try_from(r.get("n").unwrap()).unwrap(),
                i64::try_from(r.get("x").unwrap()).unwrap(),
                i64::try_from(r.get("y").unwrap()).unwrap(),
            )
        })
        .collect();
    assert_eq!(got, expected);
    assert!(pruned.stats.pruned > 0);
}
