use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::arith::factor::{factorize, Factorization};
use crate::arith::primes::{is_prime_u64, small_primes, sieve_primes};
use crate::arith::valuation::factorial_product_valuation;
use crate::bhargava::{bhargava_factorial, double_factorial, SetSpec};

/// Values of the left-hand-side variables.
pub type Assignment = BTreeMap<String, u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FactorialKind {
    /// `n!_S`
    Generalized { set: SetSpec },
    /// `n!!`
    Double,
}

/// `n!_S · Aⁿ` (or `n!! · Aⁿ`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorialTerm {
    pub var: String,
    #[serde(flatten)]
    pub kind: FactorialKind,
    pub base: u64,
}

impl FactorialTerm {
    pub fn plain(var: &str) -> Self {
        FactorialTerm {
            var: var.to_string(),
            kind: FactorialKind::Generalized { set: SetSpec::FullIntegers },
            base: 1,
        }
    }

    pub fn with_base(var: &str, base: u64) -> Self {
        FactorialTerm { base, ..FactorialTerm::plain(var) }
    }

    pub fn with_set(var: &str, set: SetSpec) -> Self {
        FactorialTerm { kind: FactorialKind::Generalized { set }, ..FactorialTerm::plain(var) }
    }

    pub fn double(var: &str) -> Self {
        FactorialTerm { kind: FactorialKind::Double, ..FactorialTerm::plain(var) }
    }

    /// Value of the term at `n`.
    pub fn value(&self, n: u64) -> Result<BigUint, ModelError> {
        let fac = match &self.kind {
            FactorialKind::Generalized { set } => bhargava_factorial(set, n)?,
            FactorialKind::Double => double_factorial(n),
        };
        Ok(fac * num_traits::pow(BigUint::from(self.base), n as usize))
    }

    /// Largest constant that the closed-form valuation depends on (bases and moduli).
    pub(crate) fn constants_max(&self) -> u64 {
        let m = match &self.kind {
            FactorialKind::Generalized { set } => set.closed_form_modulus().unwrap_or(1),
            FactorialKind::Double => 2,
        };
        m.max(self.base)
    }
}

/// `pᶻ` with a free exponent variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePowerTerm {
    pub prime: u64,
    pub var: String,
}

/// `b · ∏ nᵢ!_{Sᵢ} Aᵢ^{nᵢ} · ∏ pⱼ^{zⱼ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorialProductLHS {
    #[serde(with = "crate::serde_big::int")]
    pub b: BigInt,
    pub factorial_terms: Vec<FactorialTerm>,
    pub prime_power_terms: Vec<PrimePowerTerm>,
}

impl FactorialProductLHS {
    pub fn new(
        b: BigInt,
        factorial_terms: Vec<FactorialTerm>,
        prime_power_terms: Vec<PrimePowerTerm>,
    ) -> Result<Self, ModelError> {
        let lhs = FactorialProductLHS { b, factorial_terms, prime_power_terms };
        lhs.validate()?;
        Ok(lhs)
    }

    /// `b · n!` in variable `n`.
    pub fn single_factorial(b: i64, var: &str) -> Self {
        FactorialProductLHS::new(BigInt::from(b), vec![FactorialTerm::plain(var)], vec![])
            .expect("valid single factorial")
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.b.is_zero() {
            return Err(ModelError::Semantic("coefficient b must be nonzero".into()));
        }
        let mut seen = BTreeSet::new();
        for v in self.variables() {
            if !seen.insert(v.clone()) {
                return Err(ModelError::Semantic(format!("duplicate variable `{v}`")));
            }
        }
        for t in &self.factorial_terms {
            if t.base == 0 {
                return Err(ModelError::Semantic(format!("base of `{}` must be positive", t.var)));
            }
        }
        let mut primes = BTreeSet::new();
        for t in &self.prime_power_terms {
            if !is_prime_u64(t.prime) {
                return Err(ModelError::Semantic(format!("{} is not prime", t.prime)));
            }
            if !primes.insert(t.prime) {
                return Err(ModelError::Semantic(format!("prime {} listed twice", t.prime)));
            }
        }
        Ok(())
    }

    /// Variables in canonical order: factorial variables, then prime exponents.
    pub fn variables(&self) -> Vec<String> {
        self.factorial_terms
            .iter()
            .map(|t| t.var.clone())
            .chain(self.prime_power_terms.iter().map(|t| t.var.clone()))
            .collect()
    }

    pub fn factorial_variables(&self) -> Vec<String> {
        self.factorial_terms.iter().map(|t| t.var.clone()).collect()
    }

    /// True when every factorial term has a closed-form valuation.
    pub fn is_closed_form(&self) -> bool {
        self.factorial_terms.iter().all(|t| match &t.kind {
            FactorialKind::Generalized { set } => set.closed_form_modulus().is_some(),
            FactorialKind::Double => true,
        })
    }

    pub(crate) fn lookup(&self, assignment: &Assignment, var: &str) -> Result<u64, ModelError> {
        assignment
            .get(var)
            .copied()
            .ok_or_else(|| ModelError::UnboundVariable(var.to_string()))
    }

    /// Exact value of the left-hand side.
    pub fn eval(&self, assignment: &Assignment) -> Result<BigInt, ModelError> {
        let mut acc = self.b.clone();
        for t in &self.factorial_terms {
            let n = self.lookup(assignment, &t.var)?;
            acc *= BigInt::from(t.value(n)?);
        }
        for t in &self.prime_power_terms {
            let z = self.lookup(assignment, &t.var)?;
            acc *= num_traits::pow(BigInt::from(t.prime), z as usize);
        }
        Ok(acc)
    }

    /// Largest factorial argument under the assignment.
    pub fn max_factorial_arg(&self, assignment: &Assignment) -> Result<u64, ModelError> {
        let mut m = 0;
        for t in &self.factorial_terms {
            m = m.max(self.lookup(assignment, &t.var)?);
        }
        Ok(m)
    }

    /// `max{|b|, Aᵢ, pⱼ}`, saturating at `u64::MAX`.
    pub fn constants_max(&self) -> u64 {
        let b = self.b.magnitude().to_u64().unwrap_or(u64::MAX);
        self.factorial_terms
            .iter()
            .map(|t| t.constants_max())
            .chain(self.prime_power_terms.iter().map(|t| t.prime))
            .fold(b, u64::max)
    }

    /// Prime factorization of the left-hand side.
    ///
    /// Closed-form terms are factored through valuations, so no large integer is ever
    /// split; other terms fall back to general factoring.
    pub fn factorization(&self, assignment: &Assignment) -> Result<Factorization, ModelError> {
        if !self.is_closed_form() {
            let v = self.eval(assignment)?;
            return Ok(factorize(&v)?);
        }
        let mut primes: BTreeSet<u64> = BTreeSet::new();
        let mut pairs: Vec<(BigUint, u64)> = Vec::new();
        for (p, e) in factorize(&self.b)?.factors() {
            match p.to_u64() {
                Some(p) => {
                    primes.insert(p);
                }
                // cannot divide any other term
                None => pairs.push((p.clone(), *e)),
            }
        }
        let n_max = self.max_factorial_arg(assignment)?;
        let table;
        let upto: &[u64] = if n_max <= small_primes().limit() {
            small_primes().range(0, n_max)
        } else {
            table = sieve_primes(n_max)?;
            table.primes()
        };
        primes.extend(upto.iter().copied());
        for t in &self.factorial_terms {
            if self.lookup(assignment, &t.var)? == 0 {
                continue;
            }
            for c in [t.base, t.constants_max()] {
                if c > 1 {
                    let f = factorize(&BigInt::from(c))?;
                    primes.extend(f.factors().iter().filter_map(|(p, _)| p.to_u64()));
                }
            }
        }
        for t in &self.prime_power_terms {
            primes.insert(t.prime);
        }
        for p in primes {
            let v = factorial_product_valuation(self, assignment, p)?;
            if v > 0 {
                pairs.push((BigUint::from(p), v));
            }
        }
        Ok(Factorization::from_pairs(self.b.is_negative(), pairs))
    }
}

impl fmt::Display for FactorialProductLHS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.b)?;
        for t in &self.factorial_terms {
            match &t.kind {
                FactorialKind::Generalized { set: SetSpec::FullIntegers } => write!(f, " * {}!", t.var)?,
                FactorialKind::Generalized { set } => write!(f, " * {}!*{}", t.var, set)?,
                FactorialKind::Double => write!(f, " * {}!!", t.var)?,
            }
            if t.base > 1 {
                write!(f, " * {}^{}", t.base, t.var)?;
            }
        }
        for t in &self.prime_power_terms {
            write!(f, " * {}^{}", t.prime, t.var)?;
        }
        Ok(())
    }
}

/// All assignments of `vars` inside the given inclusive ranges, in lexicographic order.
pub fn enumerate_tuples(vars: &[String], ranges: &[(u64, u64)]) -> Vec<Assignment> {
    let mut out = Vec::new();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return out;
    }
    let mut cur: Vec<u64> = ranges.iter().map(|r| r.0).collect();
    loop {
        out.push(vars.iter().cloned().zip(cur.iter().copied()).collect());
        let mut i = cur.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                for j in i + 1..cur.len() {
                    cur[j] = ranges[j].0;
                }
                break;
            }
        }
    }
}
