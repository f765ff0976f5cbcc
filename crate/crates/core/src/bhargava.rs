//! Generalized factorials `n!_S` of integer subsets.
//!
//! For a prime `p`, a p-ordering of `S` is built greedily: each new element minimizes the
//! p-adic valuation of its product of differences with the elements already chosen. The
//! sequence of minimal valuations does not depend on the choices made, and `n!_S` is the
//! product over primes of `p` raised to the `n`-th of them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::primes::{is_prime_u64, small_primes, sieve_primes};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BhargavaError {
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("explicit truncation has {have} elements but {needed} are required")]
    TruncationTooShort { have: usize, needed: usize },
    #[error("truncation is unstable: w_{p}({k}) is {small} on the half-length prefix but {full} on the full list")]
    Unstable { p: u64, k: usize, small: u64, full: u64 },
    #[error("invalid set specification: {0}")]
    InvalidSet(String),
}

/// The subset `S ⊆ ℤ` of a generalized factorial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum SetSpec {
    /// All of ℤ; `n!_ℤ = n!`.
    FullIntegers,
    /// `{A·k + b : k ∈ ℤ}`; stored with `0 ≤ b < A`.
    ArithmeticProgression { modulus: u64, offset: i64 },
    /// A finite, strictly increasing list standing in for an infinite set.
    ExplicitTruncation { elements: Vec<i64> },
}

impl SetSpec {
    /// Progression with the offset reduced modulo `modulus` (the factorial is
    /// translation invariant).
    pub fn progression(modulus: u64, offset: i64) -> Result<Self, BhargavaError> {
        if modulus == 0 {
            return Err(BhargavaError::InvalidSet("progression modulus must be at least 1".into()));
        }
        Ok(SetSpec::ArithmeticProgression {
            modulus,
            offset: offset.rem_euclid(modulus as i64),
        })
    }

    /// Sorted, deduplicated explicit list; needs at least two distinct elements.
    pub fn explicit(mut elements: Vec<i64>) -> Result<Self, BhargavaError> {
        elements.sort_unstable();
        elements.dedup();
        if elements.len() < 2 {
            return Err(BhargavaError::InvalidSet(
                "explicit truncation needs at least two distinct elements".into(),
            ));
        }
        Ok(SetSpec::ExplicitTruncation { elements })
    }

    /// Multiplier `A` of the closed form `n!_S = Aⁿ·n!`, when one exists.
    pub fn closed_form_modulus(&self) -> Option<u64> {
        match self {
            SetSpec::FullIntegers => Some(1),
            SetSpec::ArithmeticProgression { modulus, .. } => Some(*modulus),
            SetSpec::ExplicitTruncation { .. } => None,
        }
    }

    /// The first `count` elements used as greedy candidates.
    fn candidates(&self, count: usize) -> Vec<i64> {
        match self {
            SetSpec::FullIntegers => (0..count as i64).collect(),
            SetSpec::ArithmeticProgression { modulus, offset } => {
                (0..count as i64).map(|k| *modulus as i64 * k + offset).collect()
            }
            SetSpec::ExplicitTruncation { elements } => elements.iter().take(count).copied().collect(),
        }
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::FullIntegers => write!(f, "Z"),
            SetSpec::ArithmeticProgression { modulus, offset } => write!(f, "AP({modulus},{offset})"),
            SetSpec::ExplicitTruncation { elements } => {
                write!(f, "{{")?;
                for (i, e) in elements.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl FromStr for SetSpec {
    type Err = BhargavaError;

    /// Accepts `Z`, `AP(A,b)` and `{e1,e2,...}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || BhargavaError::InvalidSet(format!("cannot parse set specification `{s}`"));
        if t == "Z" {
            return Ok(SetSpec::FullIntegers);
        }
        if let Some(inner) = t.strip_prefix("AP(").and_then(|r| r.strip_suffix(')')) {
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            let a: u64 = a.parse().map_err(|_| bad())?;
            let b: i64 = b.parse().map_err(|_| bad())?;
            return SetSpec::progression(a, b);
        }
        if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let elems = inner
                .split(',')
                .map(|e| e.parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            return SetSpec::explicit(elems);
        }
        Err(bad())
    }
}

/// A greedy p-ordering prefix with its minimal valuations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct POrdering {
    pub p: u64,
    pub chosen: Vec<i64>,
    /// `valuations[k] = v_p(∏_{i<k} (chosen[k] - chosen[i]))`.
    pub valuations: Vec<u64>,
}

fn v_p_i64(mut m: i64, p: u64) -> u64 {
    debug_assert!(m != 0);
    let p = p as i64;
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

fn greedy(candidates: &[i64], p: u64, k: usize) -> POrdering {
    let mut acc = vec![0u64; candidates.len()];
    let mut used = vec![false; candidates.len()];
    let mut chosen = Vec::with_capacity(k + 1);
    let mut valuations = Vec::with_capacity(k + 1);
    for _ in 0..=k {
        // ties go to the earliest candidate
        let (idx, &v) = acc
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by_key(|(i, v)| (**v, *i))
            .expect("enough candidates");
        used[idx] = true;
        let a = candidates[idx];
        chosen.push(a);
        valuations.push(v);
        for (j, c) in candidates.iter().enumerate() {
            if !used[j] {
                acc[j] += v_p_i64(c - a, p);
            }
        }
    }
    POrdering { p, chosen, valuations }
}

/// Greedy p-ordering of length `k + 1`.
///
/// Infinite sets are searched over their first `2(k+1)` elements.
pub fn p_ordering(s: &SetSpec, p: u64, k: usize) -> Result<POrdering, BhargavaError> {
    if !is_prime_u64(p) {
        return Err(BhargavaError::NotPrime { p });
    }
    let candidates = match s {
        SetSpec::ExplicitTruncation { elements } => {
            if elements.len() < k + 1 {
                return Err(BhargavaError::TruncationTooShort { have: elements.len(), needed: k + 1 });
            }
            elements.clone()
        }
        _ => s.candidates(2 * (k + 1)),
    };
    Ok(greedy(&candidates, p, k))
}

pub fn factorial(n: u64) -> BigUint {
    fn range_product(lo: u64, hi: u64) -> BigUint {
        // product of lo..=hi
        if lo > hi {
            return BigUint::one();
        }
        if hi - lo < 16 {
            return (lo..=hi).fold(BigUint::one(), |acc, k| acc * k);
        }
        let mid = lo + (hi - lo) / 2;
        range_product(lo, mid) * range_product(mid + 1, hi)
    }
    range_product(2, n)
}

/// `n(n-2)(n-4)···`, with `0!! = 1!! = 1`.
pub fn double_factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut k = n;
    while k >= 2 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// `n!_S` from p-orderings over every prime up to the diameter of `elements`.
fn factorial_from_orderings(elements: &[i64], n: usize) -> Result<(BigUint, Vec<(u64, u64)>), BhargavaError> {
    let s = SetSpec::ExplicitTruncation { elements: elements.to_vec() };
    let diameter = (elements[elements.len() - 1] - elements[0]).unsigned_abs();
    let owned;
    let primes: &[u64] = if diameter <= small_primes().limit() {
        small_primes().range(0, diameter)
    } else {
        owned = sieve_primes(diameter).map_err(|e| BhargavaError::InvalidSet(e.to_string()))?;
        owned.primes()
    };
    let mut value = BigUint::one();
    let mut exps = Vec::new();
    for &p in primes {
        let w = p_ordering(&s, p, n)?.valuations[n];
        if w > 0 {
            value *= num_traits::pow(BigUint::from(p), w as usize);
            exps.push((p, w));
        }
    }
    Ok((value, exps))
}

/// `n!_S`: closed form `Aⁿ·n!` for progressions, p-orderings for explicit truncations.
///
/// An explicit truncation is accepted only if its first half (at least `n + 1`
/// elements) already yields the same valuations as the whole list.
pub fn bhargava_factorial(s: &SetSpec, n: u64) -> Result<BigUint, BhargavaError> {
    match s {
        SetSpec::FullIntegers => Ok(factorial(n)),
        SetSpec::ArithmeticProgression { modulus, .. } => {
            Ok(num_traits::pow(BigUint::from(*modulus), n as usize) * factorial(n))
        }
        SetSpec::ExplicitTruncation { elements } => {
            let n = n as usize;
            let half = elements.len().div_ceil(2).max(n + 1);
            if half >= elements.len() {
                return Err(BhargavaError::TruncationTooShort { have: elements.len(), needed: n + 2 });
            }
            let (small_value, small_exps) = factorial_from_orderings(&elements[..half], n)?;
            let (full_value, full_exps) = factorial_from_orderings(elements, n)?;
            if small_value != full_value {
                let (p, small, full) = first_difference(&small_exps, &full_exps);
                return Err(BhargavaError::Unstable { p, k: n, small, full });
            }
            Ok(full_value)
        }
    }
}

fn first_difference(a: &[(u64, u64)], b: &[(u64, u64)]) -> (u64, u64, u64) {
    let mut primes: Vec<u64> = a.iter().chain(b).map(|(p, _)| *p).collect();
    primes.sort_unstable();
    primes.dedup();
    let get = |v: &[(u64, u64)], p| v.iter().find(|(q, _)| *q == p).map(|(_, e)| *e).unwrap_or(0);
    for p in primes {
        let (x, y) = (get(a, p), get(b, p));
        if x != y {
            return (p, x, y);
        }
    }
    (0, 0, 0)
}

/// `n!_S` computed from p-orderings for every set kind (no closed forms). Used to
/// cross-check the closed forms.
pub fn bhargava_factorial_by_orderings(s: &SetSpec, n: u64) -> Result<BigUint, BhargavaError> {
    let n = n as usize;
    let elements = match s {
        SetSpec::ExplicitTruncation { elements } => elements.clone(),
        _ => s.candidates(2 * (n + 1)),
    };
    if elements.len() < n + 1 {
        return Err(BhargavaError::TruncationTooShort { have: elements.len(), needed: n + 1 });
    }
    factorial_from_orderings(&elements, n).map(|(v, _)| v)
}

/// `n!_S` as a machine integer when it fits.
pub fn bhargava_factorial_u64(s: &SetSpec, n: u64) -> Option<u64> {
    bhargava_factorial(s, n).ok()?.to_u64()
}
