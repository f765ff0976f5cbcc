use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Float, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Real, ln_big, num, AuditError, AuditReport};
use crate::arith::factor::factorize;

/// Coprime `a + b = c`, stored as `0 < a ≤ b < c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbcTriple {
    #[serde(with = "crate::serde_big::uint")]
    pub a: BigUint,
    #[serde(with = "crate::serde_big::uint")]
    pub b: BigUint,
    #[serde(with = "crate::serde_big::uint")]
    pub c: BigUint,
}

impl AbcTriple {
    /// Checks `a + b = c`, nonzero entries and pairwise coprimality, then canonicalizes.
    ///
    /// Signs and order are free: `(-1, 2, 1)` and `(8, 1, 9)` are accepted.
    pub fn new(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<Self, AuditError> {
        if a + b != *c {
            return Err(AuditError::NotATriple(format!("{a} + {b} != {c}")));
        }
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(AuditError::NotATriple("entries must be nonzero".into()));
        }
        if !a.gcd(b).is_one() {
            return Err(AuditError::NotATriple(format!("gcd({a}, {b}) != 1")));
        }
        // a + b - c = 0: the largest absolute value is the sum of the other two
        let mut v = [a.magnitude().clone(), b.magnitude().clone(), c.magnitude().clone()];
        v.sort();
        let [a, b, c] = v;
        Ok(AbcTriple { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self, AuditError> {
        AbcTriple::new(&a.into(), &b.into(), &c.into())
    }

    pub fn product(&self) -> BigUint {
        &self.a * &self.b * &self.c
    }

    pub fn radical(&self) -> Result<BigUint, AuditError> {
        let mut r = BigUint::one();
        for x in [&self.a, &self.b, &self.c] {
            for (p, _) in factorize(&BigInt::from(x.clone()))?.factors() {
                r *= p;
            }
        }
        Ok(r)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityReport<F> {
    pub triple: AbcTriple,
    #[serde(with = "crate::serde_big::uint")]
    pub radical: BigUint,
    /// `log c / log N(abc)`
    pub quality: F,
    /// `log abc / log N(abc)`
    pub szpiro: F,
}

impl<F: Float + ToPrimitive> QualityReport<F> {
    pub fn to_report(&self) -> AuditReport {
        AuditReport {
            kind: "abc-quality".into(),
            inputs: serde_json::json!({
                "a": self.triple.a.to_string(),
                "b": self.triple.b.to_string(),
                "c": self.triple.c.to_string(),
            }),
            metrics: serde_json::json!({
                "radical": self.radical.to_string(),
                "quality": num(self.quality),
                "szpiro": num(self.szpiro),
            }),
            holds: None,
        }
    }
}

fn log_radical<F: Real>(n: &BigUint) -> Result<F, AuditError> {
    if *n < BigUint::from(2u32) {
        return Err(AuditError::Undefined("radical below 2".into()));
    }
    Ok(ln_big(n))
}

pub fn abc_quality<F: Real>(t: &AbcTriple) -> Result<QualityReport<F>, AuditError> {
    let radical = t.radical()?;
    let ln_n: F = log_radical(&radical)?;
    Ok(QualityReport {
        quality: ln_big::<F>(&t.c) / ln_n,
        szpiro: ln_big::<F>(&t.product()) / ln_n,
        radical,
        triple: t.clone(),
    })
}

/// Smallest `s` with `|abc| ≤ N(abc)^s`.
pub fn szpiro_exponent<F: Real>(t: &AbcTriple) -> Result<F, AuditError> {
    let ln_n: F = log_radical(&t.radical()?)?;
    Ok(ln_big::<F>(&t.product()) / ln_n)
}
