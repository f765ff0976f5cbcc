use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::primes::is_prime_u64;
use super::ArithError;
use crate::bhargava::SetSpec;
use crate::model::{Assignment, FactorialKind, FactorialProductLHS};

/// `v_p(n!) = Σ_{i≥1} ⌊n/pⁱ⌋` (Legendre's formula).
pub fn legendre_valuation(n: u64, p: u64) -> Result<u64, ArithError> {
    if !is_prime_u64(p) {
        return Err(ArithError::NotPrime(p));
    }
    Ok(legendre_unchecked(n, p))
}

pub(crate) fn legendre_unchecked(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = n / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    v
}

/// `v_p(m)` for a positive machine integer.
pub fn v_p_u64(mut m: u64, p: u64) -> u64 {
    debug_assert!(m > 0 && p > 1);
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// `v_p(m)` for a nonzero big integer.
pub fn v_p_big(m: &BigInt, p: u64) -> u64 {
    debug_assert!(!m.is_zero());
    if let Some(small) = m.magnitude().to_u64() {
        return v_p_u64(small, p);
    }
    let bp = BigInt::from(p);
    let mut m = m.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// `v_p(n!!)`
pub fn double_factorial_valuation(n: u64, p: u64) -> u64 {
    let k = n / 2;
    let two = u64::from(p == 2);
    if n % 2 == 0 {
        // (2k)!! = 2^k k!
        k * two + legendre_unchecked(k, p)
    } else {
        // (2k+1)!! = (2k+1)! / (2^k k!)
        legendre_unchecked(n, p) - k * two - legendre_unchecked(k, p)
    }
}

/// `v_p` of the left-hand side without expanding it:
/// `v_p(b) + Σᵢ [v_p(nᵢ!_{Sᵢ}) + nᵢ·v_p(Aᵢ)] + Σⱼ zⱼ·[pⱼ = p]`.
pub fn factorial_product_valuation(
    lhs: &FactorialProductLHS,
    assignment: &Assignment,
    p: u64,
) -> Result<u64, ArithError> {
    if !is_prime_u64(p) {
        return Err(ArithError::NotPrime(p));
    }
    let mut v = v_p_big(&lhs.b, p);
    for t in &lhs.factorial_terms {
        let n = *assignment
            .get(&t.var)
            .ok_or_else(|| ArithError::UnboundVariable(t.var.clone()))?;
        v += match &t.kind {
            FactorialKind::Generalized { set } => match set {
                SetSpec::FullIntegers => legendre_unchecked(n, p),
                SetSpec::ArithmeticProgression { modulus, .. } => {
                    legendre_unchecked(n, p) + n * v_p_u64(*modulus, p)
                }
                SetSpec::ExplicitTruncation { .. } => {
                    return Err(ArithError::NonProgressionSet(t.var.clone()))
                }
            },
            FactorialKind::Double => double_factorial_valuation(n, p),
        };
        v += n * v_p_u64(t.base, p);
    }
    for t in &lhs.prime_power_terms {
        let z = *assignment
            .get(&t.var)
            .ok_or_else(|| ArithError::UnboundVariable(t.var.clone()))?;
        if t.prime == p {
            v += z;
        }
    }
    Ok(v)
}
