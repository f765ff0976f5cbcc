//! Search, construction and auditing for Diophantine equations of the shape
//!
//! ```text
//! b · n₁!_{S₁} A₁^{n₁} ··· n_r!_{S_r} A_r^{n_r} · p₁^{z₁} ··· p_q^{z_q} = f(x)  or  f(x, y)
//! ```
//!
//! Everything is exact: values are big integers, and real-valued metrics are computed
//! from exact logarithms of big integers.

pub mod arith;
pub mod audit;
pub mod bhargava;
pub mod model;
pub mod poly;
pub mod serde_big;
pub mod solver;

pub use arith::{ArithError, Factorization, PrimeTable};
pub use audit::{AbcTriple, AuditError, AuditReport, QualityReport};
pub use bhargava::{BhargavaError, SetSpec};
pub use model::{parse_equation, BinaryForm, Equation, FactorialProductLHS, ModelError};
pub use poly::Poly;
pub use solver::{Certificate, SearchBounds, SearchOptions, SearchOutcome, SolutionRecord, SolverError};

/// Integer polynomial.
pub type IntPoly = Poly<num_bigint::BigInt>;
/// Polynomial with exact rational coefficients.
pub type RatPoly = Poly<num_rational::BigRational>;
/// Audit metrics in double precision.
pub type QualityReport64 = QualityReport<f64>;
/// Inequality checks in double precision.
pub type BoundCheck64 = audit::BoundCheck<f64>;
