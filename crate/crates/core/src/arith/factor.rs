use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::primes::{is_prime_big, small_primes};
use super::ArithError;

/// Limits applied by [`factorize_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division runs over primes up to this bound (capped by the shared table).
    pub trial_bound: u64,
    /// Pollard-rho iterations allowed per composite cofactor.
    pub rho_iterations: u64,
    /// Cofactors above this many bits are not attacked with rho.
    pub max_rho_bits: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_bound: 1 << 20, rho_iterations: 2_000_000, max_rho_bits: 160 }
    }
}

/// Prime decomposition `sign · ∏ pᵉ` of a nonzero integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    negative: bool,
    #[serde(with = "factor_list")]
    factors: Vec<(BigUint, u64)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { negative: false, factors: Vec::new() }
    }

    /// Builds a factorization from unordered `(prime, exponent)` pairs; zero exponents
    /// are dropped and repeated primes merged.
    pub fn from_pairs<I>(negative: bool, pairs: I) -> Self
    where
        I: IntoIterator<Item = (BigUint, u64)>,
    {
        let mut map: BTreeMap<BigUint, u64> = BTreeMap::new();
        for (p, e) in pairs {
            if e > 0 {
                *map.entry(p).or_insert(0) += e;
            }
        }
        Factorization { negative, factors: map.into_iter().collect() }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn factors(&self) -> &[(BigUint, u64)] {
        &self.factors
    }

    pub fn exponent_of(&self, p: &BigUint) -> u64 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn value(&self) -> BigInt {
        let mag = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize));
        BigInt::from_biguint(if self.negative { Sign::Minus } else { Sign::Plus }, mag)
    }

    pub fn radical(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, _)| acc * p)
    }

    pub fn mul(&self, other: &Factorization) -> Factorization {
        Factorization::from_pairs(
            self.negative != other.negative,
            self.factors.iter().chain(other.factors.iter()).cloned(),
        )
    }

    pub fn pow(&self, k: u64) -> Factorization {
        Factorization {
            negative: self.negative && k % 2 == 1,
            factors: self.factors.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

mod factor_list {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(BigUint, u64)], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|(p, e)| (p.to_string(), *e)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigUint, u64)>, D::Error> {
        let raw: Vec<(String, u64)> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|(p, e)| p.parse::<BigUint>().map(|p| (p, e)).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Factorizes with the default budget.
pub fn factorize(m: &BigInt) -> Result<Factorization, ArithError> {
    factorize_with(m, &FactorBudget::default())
}

pub fn factorize_i64(m: i64) -> Result<Factorization, ArithError> {
    factorize(&BigInt::from(m))
}

/// Trial division, then Brent's variant of Pollard rho, then a budget error carrying
/// the part that could not be split.
pub fn factorize_with(m: &BigInt, budget: &FactorBudget) -> Result<Factorization, ArithError> {
    if m.is_zero() {
        return Err(ArithError::ZeroArgument("factorize"));
    }
    let negative = m.is_negative();
    let mut rest = m.magnitude().clone();
    let mut pairs: Vec<(BigUint, u64)> = Vec::new();

    let trial_bound = budget.trial_bound.min(small_primes().limit());
    for &p in small_primes().range(0, trial_bound) {
        if rest.is_one() {
            break;
        }
        if let Some(small) = rest.to_u64() {
            if p.saturating_mul(p) > small {
                break;
            }
        }
        let bp = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            pairs.push((bp, e));
        }
    }

    if !rest.is_one() {
        let tb = BigUint::from(trial_bound);
        if rest <= &tb * &tb {
            pairs.push((rest, 1));
        } else {
            split_cofactor(rest, budget, &mut pairs)?;
        }
    }
    Ok(Factorization::from_pairs(negative, pairs))
}

fn split_cofactor(
    n: BigUint,
    budget: &FactorBudget,
    out: &mut Vec<(BigUint, u64)>,
) -> Result<(), ArithError> {
    let mut stack = vec![n];
    while let Some(n) = stack.pop() {
        if n.is_one() {
            continue;
        }
        if is_prime_big(&n) {
            out.push((n, 1));
            continue;
        }
        if let Some(r) = perfect_power_root(&n) {
            let (base, k) = r;
            for _ in 0..k {
                stack.push(base.clone());
            }
            continue;
        }
        if n.bits() > budget.max_rho_bits {
            return Err(ArithError::FactorBudgetExceeded { cofactor: n });
        }
        match pollard_brent(&n, budget.rho_iterations) {
            Some(d) => {
                let other = &n / &d;
                stack.push(d);
                stack.push(other);
            }
            None => return Err(ArithError::FactorBudgetExceeded { cofactor: n }),
        }
    }
    Ok(())
}

fn perfect_power_root(n: &BigUint) -> Option<(BigUint, u64)> {
    let max_k = n.bits();
    for k in 2..=max_k {
        let r = n.nth_root(k as u32);
        if r <= BigUint::one() {
            break;
        }
        if num_traits::pow(r.clone(), k as usize) == *n {
            return Some((r, k));
        }
    }
    None
}

fn pollard_brent(n: &BigUint, max_iter: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut spent = 0u64;
    for c in 1u32..=20 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 128u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += m;
                spent += m.min(r);
                if spent > max_iter {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Product of the distinct primes dividing `m`; `radical(±1) = 1`.
pub fn radical(m: &BigInt) -> Result<BigUint, ArithError> {
    Ok(factorize(m)?.radical())
}

pub fn radical_u64(m: u64) -> u64 {
    let f = factorize(&BigInt::from(m)).expect("u64 values factor within default budget");
    f.radical().to_u64().expect("radical of u64 fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fz(m: i64) -> Factorization {
        factorize_i64(m).unwrap()
    }

    fn pairs(f: &Factorization) -> Vec<(u64, u64)> {
        f.factors().iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect()
    }

    #[test]
    fn examples() {
        let one = fz(1);
        assert!(one.factors().is_empty());
        assert_eq!(one.sign(), 1);

        let m12 = fz(-12);
        assert_eq!(m12.sign(), -1);
        assert_eq!(pairs(&m12), vec![(2, 2), (3, 1)]);

        // 7! + 1 = 71^2
        assert_eq!(pairs(&fz(5041)), vec![(71, 2)]);
    }

    #[test]
    fn zero_rejected() {
        assert!(matches!(factorize_i64(0), Err(ArithError::ZeroArgument(_))));
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(&BigInt::from(1)).unwrap(), BigUint::one());
        assert_eq!(radical(&BigInt::from(-1)).unwrap(), BigUint::one());
        assert_eq!(radical(&BigInt::from(1024)).unwrap(), BigUint::from(2u32));
        assert_eq!(radical(&BigInt::from(12)).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn reconstruct_every_integer_up_to_a_million() {
        for m in 1..=1_000_000i64 {
            let f = fz(m);
            assert_eq!(f.value(), BigInt::from(m));
            assert!(f.factors().iter().all(|(_, e)| *e > 0));
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        }
        for m in [-1i64, -2, -999_983, -1_000_000] {
            assert_eq!(fz(m).value(), BigInt::from(m));
        }
    }

    #[test]
    fn rho_splits_semiprimes() {
        // two primes above the trial-division bound
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        let n = BigInt::from(&p * &q * &q);
        let f = factorize(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.exponent_of(&q), 2);
        assert_eq!(f.exponent_of(&p), 1);
    }

    #[test]
    fn budget_error_carries_cofactor() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(1_000_000_009u64);
        let n = BigInt::from(&p * &q * 12u32);
        let tight = FactorBudget { rho_iterations: 1, ..FactorBudget::default() };
        match factorize_with(&n, &tight) {
            Err(ArithError::FactorBudgetExceeded { cofactor }) => assert_eq!(cofactor, &p * &q),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = fz(-360);
        let s = serde_json::to_string(&f).unwrap();
        let back: Factorization = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
