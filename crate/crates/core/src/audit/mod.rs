//! Numerical instrumentation of abc-type inequalities and elementary bounds.
//!
//! Every integer quantity is exact. Logarithms of big integers are taken from their top
//! 64 bits plus a power-of-two offset, so nothing overflows a float.

mod abc;
mod bounds;
mod instrument;

use num_bigint::{BigInt, BigUint};
use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::ArithError;
use crate::model::ModelError;

pub use abc::{abc_quality, szpiro_exponent, AbcTriple, QualityReport};
pub use bounds::{
    check_finsler, check_stirling_bound, finsler_sweep, radical_littleo_report, stirling_threshold, BoundCheck,
    FinslerSweep, LittleOPoint, LittleOReport,
};
pub use instrument::{instrument_solution, InstrumentReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("not an abc triple: {0}")]
    NotATriple(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("cannot instrument: {0}")]
    Unsupported(String),
}

/// Floating-point type the real-valued metrics are computed in.
pub trait Real: Float + FromPrimitive + FloatConst {}

impl<T: Float + FromPrimitive + FloatConst> Real for T {}

/// Natural logarithm of a positive big integer.
pub fn ln_big<F: Real>(n: &BigUint) -> F {
    let bits = n.bits();
    if bits <= 64 {
        return F::from_u64(n.to_u64().expect("fits")).expect("float").ln();
    }
    let shift = bits - 64;
    let top: BigUint = n >> shift;
    let top = F::from_u64(top.to_u64().expect("64 bits")).expect("float");
    top.ln() + F::from_u64(shift).expect("float") * F::LN_2()
}

/// `ln |n|`, or `None` for zero.
pub fn ln_abs<F: Real>(n: &BigInt) -> Option<F> {
    (!n.is_zero()).then(|| ln_big(n.magnitude()))
}

/// Serialized audit record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub kind: String,
    pub inputs: serde_json::Value,
    pub metrics: serde_json::Value,
    pub holds: Option<bool>,
}

pub(crate) fn num<F: ToPrimitive>(v: F) -> serde_json::Value {
    v.to_f64()
        .and_then(serde_json::Number::from_f64)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logs_of_large_integers() {
        let n = BigUint::from(10u32).pow(400);
        let l: f64 = ln_big(&n);
        assert!((l - 400.0 * 10f64.ln()).abs() < 1e-9);
        let small: f64 = ln_big(&BigUint::from(5040u32));
        assert!((small - 5040f64.ln()).abs() < 1e-12);
        let f32_version: f32 = ln_big(&n);
        assert!((f32_version as f64 - l).abs() / l < 1e-5);
        assert_eq!(ln_abs::<f64>(&BigInt::zero()), None);
    }
}
