//! Exact integer kernels: primes, valuations, factorization, radicals, roots and
//! discriminants.

pub mod disc;
pub mod factor;
pub mod primes;
pub mod roots;
pub mod valuation;

use num_bigint::BigUint;
use thiserror::Error;

pub use disc::{discriminant, modified_discriminant, resultant};
pub use factor::{factorize, factorize_with, radical, FactorBudget, Factorization};
pub use primes::{is_prime_big, is_prime_u64, prime_in_interval, primorial, sieve_primes, PrimeTable};
pub use roots::integer_nth_root;
pub use valuation::{factorial_product_valuation, legendre_valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{what} {requested} exceeds the configured budget of {allowed}")]
    ResourceLimit { what: &'static str, requested: u64, allowed: u64 },
    #[error("factoring budget exceeded; unfactored cofactor {cofactor}")]
    FactorBudgetExceeded { cofactor: BigUint },
    #[error("{0}: argument must be nonzero")]
    ZeroArgument(&'static str),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("factorial term `{0}` uses a set without a closed-form valuation")]
    NonProgressionSet(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degree {got} is below the required {needed}")]
    DegreeTooSmall { needed: usize, got: usize },
    #[error("form is degenerate: f(x,1) is constant")]
    DegenerateForm,
}
