//! Equation model: left-hand factorial products, right-hand polynomials, the text
//! language and the depression transform.

pub mod depress;
pub mod display;
pub mod equation;
pub mod forms;
pub mod lhs;
pub mod parse;

use thiserror::Error;

use crate::arith::ArithError;
use crate::bhargava::BhargavaError;

pub use depress::{depress_integer, depress_polynomial, DepressedForm};
pub use equation::{Constraints, Equation, Rhs};
pub use forms::{BiPoly, BinaryForm};
pub use lhs::{enumerate_tuples, Assignment, FactorialKind, FactorialProductLHS, FactorialTerm, PrimePowerTerm};
pub use parse::parse_equation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("syntax error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("expected {expected} argument(s), got {got}")]
    Arity { expected: usize, got: usize },
    #[error("degree {got} is below the required {needed}")]
    DegreeTooSmall { needed: usize, got: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Bhargava(#[from] BhargavaError),
}
