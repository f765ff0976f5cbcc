//! Prime sieving and deterministic primality for machine-size integers.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::ArithError;

/// Largest sieve limit accepted by [`sieve_primes`].
pub const DEFAULT_SIEVE_LIMIT: u64 = 1 << 30;

/// Bound of the shared small-prime table used for trial division.
pub const SMALL_PRIME_BOUND: u64 = 1 << 20;

/// All primes up to `limit`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes `p` with `lo < p <= hi`.
    pub fn range(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.primes.partition_point(|&p| p <= lo);
        let end = self.primes.partition_point(|&p| p <= hi);
        if start >= end {
            &[]
        } else {
            &self.primes[start..end]
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Sieve of Eratosthenes over odd numbers.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable, ArithError> {
    sieve_primes_with_budget(limit, DEFAULT_SIEVE_LIMIT)
}

pub fn sieve_primes_with_budget(limit: u64, max_limit: u64) -> Result<PrimeTable, ArithError> {
    if limit > max_limit {
        return Err(ArithError::ResourceLimit {
            what: "sieve limit",
            requested: limit,
            allowed: max_limit,
        });
    }
    let mut primes = Vec::new();
    if limit >= 2 {
        primes.push(2);
    }
    if limit >= 3 {
        // bit i stands for the odd number 2i + 1
        let n_odd = ((limit - 1) / 2 + 1) as usize;
        let mut composite = vec![0u64; n_odd.div_ceil(64)];
        let mut i = 1usize;
        while (2 * i + 1) * (2 * i + 1) <= limit as usize {
            if composite[i / 64] >> (i % 64) & 1 == 0 {
                let p = 2 * i + 1;
                let mut j = (p * p) / 2;
                while j < n_odd {
                    composite[j / 64] |= 1 << (j % 64);
                    j += p;
                }
            }
            i += 1;
        }
        for i in 1..n_odd {
            if composite[i / 64] >> (i % 64) & 1 == 0 {
                primes.push((2 * i + 1) as u64);
            }
        }
    }
    Ok(PrimeTable { limit, primes })
}

/// Shared table of primes below [`SMALL_PRIME_BOUND`].
pub fn small_primes() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| sieve_primes(SMALL_PRIME_BOUND).expect("small prime bound within budget"))
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'base: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin over big integers with the first twelve prime bases.
///
/// Deterministic below 3.3·10²⁴; a strong probable-prime test beyond.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'base: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `p` with `lo < p < hi` (open interval).
pub fn prime_in_interval(lo: u64, hi: u64) -> Option<u64> {
    let mut candidate = lo.checked_add(1)?;
    while candidate < hi {
        if is_prime_u64(candidate) {
            return Some(candidate);
        }
        candidate += 1;
    }
    None
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime_u64(c) {
        c += 1;
    }
    c
}

/// The `count` smallest primes exceeding `n`.
pub fn primes_above(n: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut cur = n;
    for _ in 0..count {
        cur = next_prime(cur);
        out.push(cur);
    }
    out
}

/// Product of all primes `p <= n`.
pub fn primorial(n: u64) -> BigUint {
    let table = if n <= SMALL_PRIME_BOUND {
        None
    } else {
        Some(sieve_primes(n).expect("primorial bound within sieve budget"))
    };
    let primes = match &table {
        Some(t) => t.primes(),
        None => small_primes().range(0, n),
    };
    product_tree(primes)
}

fn product_tree(values: &[u64]) -> BigUint {
    match values.len() {
        0 => BigUint::one(),
        1 => BigUint::from(values[0]),
        n if n <= 16 => values.iter().fold(BigUint::one(), |acc, &v| acc * v),
        n => {
            let (l, r) = values.split_at(n / 2);
            product_tree(l) * product_tree(r)
        }
    }
}

/// Legendre symbol style test: is `a` a square modulo the odd prime `p`?
/// Zero counts as a square.
pub fn is_square_mod_prime(a: u64, p: u64) -> bool {
    let a = a % p;
    if a == 0 || p == 2 {
        return true;
    }
    jacobi(a, p) == 1
}

/// Jacobi symbol (a/n) for odd `n`.
pub fn jacobi(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut result = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}
