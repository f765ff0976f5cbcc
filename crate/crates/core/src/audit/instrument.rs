use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::abc::{abc_quality, AbcTriple, QualityReport};
use super::{Real, ln_abs, num, AuditError, AuditReport};
use crate::model::{depress_integer, Equation, Rhs};
use crate::solver::SolutionRecord;

/// The depressed form of a univariate solution, split into `A + B = C`.
///
/// With `Q(z) = z^d + z^{d-j} R₁(z) = c·F` and `D = gcd(z^j, R₁(z))`:
/// `A = z^j / D`, `B = R₁(z) / D`, `C = c·F / (z^{d-j} D)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstrumentReport<F> {
    #[serde(with = "crate::serde_big::int")]
    pub z: BigInt,
    pub degree: usize,
    pub j: Option<usize>,
    /// `|d·ln|z| - ln|LHS||`
    pub log_gap: Option<F>,
    #[serde(with = "crate::serde_big::int")]
    pub d_gcd: BigInt,
    /// `(A, B, C)` as exact decimal strings.
    pub summands: Option<[String; 3]>,
    pub sum_exact: bool,
    pub quality: Option<QualityReport<F>>,
    /// Why some metric could not be computed.
    pub degenerate: Option<String>,
}

impl<F: Float> InstrumentReport<F> {
    pub fn to_report(&self, record: &SolutionRecord) -> AuditReport {
        let assignment: serde_json::Map<String, serde_json::Value> =
            record.assignment.iter().map(|(k, v)| (k.clone(), v.to_string().into())).collect();
        AuditReport {
            kind: "depressed-solution".into(),
            inputs: serde_json::json!({ "equation": record.equation, "assignment": assignment }),
            metrics: serde_json::json!({
                "z": self.z.to_string(),
                "j": self.j,
                "log_gap": self.log_gap.map(num),
                "D": self.d_gcd.to_string(),
                "summands": self.summands,
                "quality": self.quality.as_ref().map(|q| num(q.quality)),
                "szpiro": self.quality.as_ref().map(|q| num(q.szpiro)),
                "degenerate": self.degenerate,
            }),
            holds: Some(self.sum_exact),
        }
    }
}

/// Depresses the equation at a verified univariate solution and measures the resulting
/// abc triple.
pub fn instrument_solution<F: Real>(
    eq: &Equation,
    record: &SolutionRecord,
) -> Result<InstrumentReport<F>, AuditError> {
    let Rhs::Univariate(f) = &eq.rhs else {
        return Err(AuditError::Unsupported("the right-hand side must be univariate".into()));
    };
    if !record.verified {
        return Err(AuditError::Unsupported("record is not verified".into()));
    }
    let tuple = record
        .lhs_assignment(&eq.lhs)
        .ok_or_else(|| AuditError::Unsupported("record does not bind the left-hand side".into()))?;
    let x = record.get("x").ok_or_else(|| AuditError::Unsupported("record has no x".into()))?;
    let lhs = eq.lhs.eval(&tuple)?;
    if f.eval(x) != lhs {
        return Err(AuditError::Unsupported("record does not satisfy the equation".into()));
    }
    let b = &eq.lhs.b;
    let core = &lhs / b;
    let dep = depress_integer(f, b)?;
    let d = dep.degree();
    let z = dep.z_of(x);
    let mut out = InstrumentReport {
        z: z.clone(),
        degree: d,
        j: None,
        log_gap: None,
        d_gcd: BigInt::zero(),
        summands: None,
        sum_exact: false,
        quality: None,
        degenerate: None,
    };
    if z.abs() <= BigInt::one() {
        out.degenerate = Some(format!("|z| = {} makes the logarithm degenerate", z.abs()));
    } else if let Some(ln_lhs) = ln_abs::<F>(&lhs) {
        let ln_z = ln_abs::<F>(&z).expect("nonzero");
        out.log_gap = Some((F::from_usize(d).expect("float") * ln_z - ln_lhs).abs());
    }
    let Some((j, r1)) = dep.reduced_remainder() else {
        out.degenerate.get_or_insert_with(|| "Q(z) = z^d has no remainder".into());
        return Ok(out);
    };
    out.j = Some(j);
    let zj = num_traits::pow(z.clone(), j);
    let r1z = r1.eval(&z);
    let dg = zj.gcd(&r1z);
    out.d_gcd = dg.clone();
    if dg.is_zero() {
        out.degenerate.get_or_insert_with(|| "z^j and R1(z) both vanish".into());
        return Ok(out);
    }
    let scale = num_traits::pow(z.clone(), d - j) * &dg;
    let cf = &dep.c * &core;
    if scale.is_zero() || !cf.is_multiple_of(&scale) {
        out.degenerate.get_or_insert_with(|| "C is not integral".into());
        return Ok(out);
    }
    let a = &zj / &dg;
    let bb = &r1z / &dg;
    let c = &cf / &scale;
    out.sum_exact = &a + &bb == c;
    out.summands = Some([a.to_string(), bb.to_string(), c.to_string()]);
    if out.sum_exact && !a.is_zero() && !bb.is_zero() && !c.is_zero() {
        // any common factor of two summands divides the third
        let g = a.gcd(&bb);
        let t = AbcTriple::new(&(&a / &g), &(&bb / &g), &(&c / &g))?;
        match abc_quality::<F>(&t) {
            Ok(q) => out.quality = Some(q),
            Err(e) => {
                out.degenerate.get_or_insert_with(|| e.to_string());
            }
        }
    } else if out.sum_exact {
        out.degenerate.get_or_insert_with(|| "a summand is zero".into());
    }
    Ok(out)
}
