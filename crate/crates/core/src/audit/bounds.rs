use num_bigint::BigUint;
use num_traits::{Float, FromPrimitive, One};
use serde::{Deserialize, Serialize};

use super::{Real, ln_big, num, AuditError, AuditReport};
use crate::arith::primes::{is_prime_u64, primorial};
use crate::bhargava::factorial;
use crate::model::{Assignment, FactorialProductLHS};

/// Outcome of one inequality check; `margin ≥ 0` exactly when it holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck<F> {
    pub holds: bool,
    /// `ln(larger side) - ln(smaller side)` as the inequality is written.
    pub margin: F,
}

fn float<F: FromPrimitive>(v: u64) -> F {
    F::from_u64(v).expect("float")
}

/// `4^r (n₁/e)^{n₁} ··· (n_r/e)^{n_r} ≤ n₁! ··· n_r!`, compared in log space.
///
/// The right side is an exact big integer; a term with `nᵢ = 0` contributes `1` to the
/// left side.
pub fn check_stirling_bound<F: Real>(ns: &[u64]) -> BoundCheck<F> {
    let mut lower = float::<F>(ns.len() as u64) * float::<F>(4).ln();
    let mut product = BigUint::one();
    for &n in ns {
        if n > 0 {
            let nf = float::<F>(n);
            lower = lower + nf * (nf.ln() - F::one());
        }
        product *= factorial(n);
    }
    let margin = ln_big::<F>(&product) - lower;
    BoundCheck { holds: margin >= F::zero(), margin }
}

/// Smallest `n₀` such that the diagonal `n₁ = … = n_r = n` satisfies the bound for every
/// `n₀ ≤ n ≤ n_max`; `None` if it fails at `n_max`.
pub fn stirling_threshold<F: Real>(r: usize, n_max: u64) -> Option<u64> {
    let mut threshold = None;
    for n in (0..=n_max).rev() {
        if check_stirling_bound::<F>(&vec![n; r]).holds {
            threshold = Some(n);
        } else {
            break;
        }
    }
    threshold
}

/// `∏_{p ≤ n} p < 4^n`, decided exactly.
pub fn check_finsler<F: Real>(n: u64) -> BoundCheck<F> {
    let p = primorial(n);
    let holds = p.bits() <= 2 * n;
    let margin = float::<F>(2 * n) * F::LN_2() - ln_big::<F>(&p);
    BoundCheck { holds, margin }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinslerSweep<F> {
    pub n_max: u64,
    pub all_hold: bool,
    pub first_failure: Option<u64>,
    /// Smallest margin over the sweep and where it occurs.
    pub min_margin: F,
    pub min_margin_at: u64,
}

/// Checks the Finsler bound for every `1 ≤ n ≤ n_max`, extending the primorial one prime
/// at a time.
pub fn finsler_sweep<F: Real>(n_max: u64) -> FinslerSweep<F> {
    let mut p = BigUint::one();
    let mut ln_p = F::zero();
    let mut out = FinslerSweep { n_max, all_hold: true, first_failure: None, min_margin: F::infinity(), min_margin_at: 0 };
    for n in 1..=n_max {
        if is_prime_u64(n) {
            p *= n;
            ln_p = ln_p + float::<F>(n).ln();
        }
        if p.bits() > 2 * n && out.all_hold {
            out.all_hold = false;
            out.first_failure = Some(n);
        }
        let margin = float::<F>(2 * n) * F::LN_2() - ln_p;
        if margin < out.min_margin {
            out.min_margin = margin;
            out.min_margin_at = n;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LittleOPoint<F> {
    pub n: u64,
    #[serde(with = "crate::serde_big::uint")]
    pub radical: BigUint,
    #[serde(with = "crate::serde_big::uint")]
    pub value: BigUint,
    pub ratio: F,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LittleOReport<F> {
    pub lhs: String,
    pub points: Vec<LittleOPoint<F>>,
}

impl<F> LittleOReport<F> {
    /// Whether `N(F)/F` never increases from `n₀` on, by exact cross-multiplication.
    pub fn nonincreasing_from(&self, n0: u64) -> bool {
        self.points
            .windows(2)
            .filter(|w| w[0].n >= n0)
            .all(|w| &w[1].radical * &w[0].value <= &w[0].radical * &w[1].value)
    }

    /// Whether `N(F)/F < num/den` at `n`, exactly.
    pub fn ratio_below(&self, n: u64, num: u64, den: u64) -> Option<bool> {
        let p = self.points.iter().find(|p| p.n == n)?;
        Some(&p.radical * den < &p.value * num)
    }
}

/// `N(F)/F` along the diagonal where every variable of `lhs` equals `n`, for `1 ≤ n ≤ n_max`.
pub fn radical_littleo_report<F: Real>(
    lhs: &FactorialProductLHS,
    n_max: u64,
) -> Result<LittleOReport<F>, AuditError> {
    if !lhs.is_closed_form() {
        return Err(AuditError::Unsupported("the left-hand side has no closed-form factorization".into()));
    }
    let vars = lhs.variables();
    let mut points = Vec::new();
    for n in 1..=n_max {
        let a: Assignment = vars.iter().map(|v| (v.clone(), n)).collect();
        let value = lhs.eval(&a)?.magnitude().clone();
        let radical = lhs.factorization(&a)?.radical();
        let ratio = (ln_big::<F>(&radical) - ln_big::<F>(&value)).exp();
        points.push(LittleOPoint { n, radical, value, ratio });
    }
    Ok(LittleOReport { lhs: lhs.to_string(), points })
}

impl<F: Float> BoundCheck<F> {
    pub fn to_report(&self, kind: &str, inputs: serde_json::Value) -> AuditReport {
        AuditReport {
            kind: kind.into(),
            inputs,
            metrics: serde_json::json!({ "margin": num(self.margin) }),
            holds: Some(self.holds),
        }
    }
}

impl<F: Float> FinslerSweep<F> {
    pub fn to_report(&self) -> AuditReport {
        AuditReport {
            kind: "finsler-sweep".into(),
            inputs: serde_json::json!({ "n_max": self.n_max }),
            metrics: serde_json::json!({
                "first_failure": self.first_failure,
                "min_margin": num(self.min_margin),
                "min_margin_at": self.min_margin_at,
            }),
            holds: Some(self.all_hold),
        }
    }
}

impl<F: Float> LittleOReport<F> {
    pub fn to_report(&self) -> AuditReport {
        let series: Vec<serde_json::Value> = self
            .points
            .iter()
            .map(|p| serde_json::json!({ "n": p.n, "radical": p.radical.to_string(), "ratio": num(p.ratio) }))
            .collect();
        AuditReport {
            kind: "radical-littleo".into(),
            inputs: serde_json::json!({ "lhs": self.lhs, "n_max": self.points.last().map(|p| p.n).unwrap_or(0) }),
            metrics: serde_json::json!({ "series": series }),
            holds: None,
        }
    }
}
