//! Valuation certificates that rule out a tuple before any root finding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::Certificate;
use crate::arith::disc::modified_discriminant;
use crate::arith::primes::{is_prime_u64, small_primes, sieve_primes};
use crate::arith::valuation::factorial_product_valuation;
use crate::model::{Assignment, BinaryForm, FactorialProductLHS};

/// Shows `LHS` is not a `d`-th power.
///
/// Applies once the largest factorial argument `n*` exceeds twice every constant of the
/// left-hand side; the certificate names the smallest prime `q ∈ (n*/2, n*)` above those
/// constants whose valuation is not a multiple of `d`.
pub fn prune_bertrand(lhs: &FactorialProductLHS, assignment: &Assignment, d: u64) -> Option<Certificate> {
    if d < 2 || !lhs.is_closed_form() {
        return None;
    }
    let n_star = lhs.max_factorial_arg(assignment).ok()?;
    let cmax = lhs.constants_max();
    if cmax >= u64::MAX / 2 || n_star <= 2 * cmax {
        return None;
    }
    let lo = n_star / 2;
    let table;
    let window: &[u64] = if n_star <= small_primes().limit() {
        small_primes().range(lo, n_star - 1)
    } else {
        table = sieve_primes(n_star - 1).ok()?;
        table.range(lo, n_star - 1)
    };
    for &q in window {
        // q > n*/2 strictly; for odd n* the floor already excludes n*/2
        if 2 * q <= n_star || q <= cmax {
            continue;
        }
        let v = factorial_product_valuation(lhs, assignment, q).ok()?;
        if v % d != 0 {
            return Some(Certificate::PruneReason { q, v, d });
        }
    }
    None
}

/// Shows `N` with `v_q(N) = v` is not a value of `f`.
///
/// If `f(x,1)` has no root modulo an odd prime `q ∤ a_d`, then `q | f(x,y)` forces
/// `q | y`, hence `q | x`, hence `q^d | f(x,y)`; so `1 ≤ v < d` is impossible.
pub fn prune_no_root_mod_q(f: &BinaryForm, q: u64, v: u64) -> Option<Certificate> {
    let d = f.degree() as u64;
    if q == 2 || !is_prime_u64(q) || v == 0 || v >= d {
        return None;
    }
    if prime_is_admissible(f, q) {
        Some(Certificate::PruneReason { q, v, d })
    } else {
        None
    }
}

/// `q ∤ a_d`, `q ∤ Δ_mod` and no root of `f(x,1)` modulo `q`.
pub fn prime_is_admissible(f: &BinaryForm, q: u64) -> bool {
    let bq = BigInt::from(q);
    if f.a_d().is_multiple_of(&bq) {
        return false;
    }
    match modified_discriminant(f) {
        Ok(delta) if !delta.numer().is_zero() && !delta.numer().is_multiple_of(&bq) => {}
        _ => return false,
    }
    !f.has_root_mod(q)
}

/// Odd primes up to `limit` usable by [`prune_no_root_mod_q`] for `f`.
pub fn admissible_primes(f: &BinaryForm, limit: u64) -> Vec<u64> {
    small_primes()
        .range(2, limit)
        .iter()
        .copied()
        .filter(|&q| prime_is_admissible(f, q))
        .collect()
}

/// `v_q(N)` for a left-hand side, falling back to the value when no closed form exists.
pub(crate) fn lhs_valuation(lhs: &FactorialProductLHS, assignment: &Assignment, value: Option<&BigInt>, q: u64) -> Option<u64> {
    if lhs.is_closed_form() {
        return factorial_product_valuation(lhs, assignment, q).ok();
    }
    let v = value?;
    let bq = BigInt::from(q);
    let mut m = v.clone();
    let mut k = 0;
    while !m.is_zero() && m.is_multiple_of(&bq) {
        m /= &bq;
        k += 1;
    }
    k.to_u64()
}
