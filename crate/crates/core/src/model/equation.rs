use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::forms::{BiPoly, BinaryForm};
use super::lhs::FactorialProductLHS;
use super::{parse_equation, ModelError};
use crate::poly::Poly;

/// Right-hand side after denominators have been cleared into `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rhs {
    /// `f(x)`
    Univariate(Poly<BigInt>),
    /// Homogeneous `f(x, y)`.
    Form(BinaryForm),
    /// Any other `f(x, y)`.
    Bivariate(BiPoly<BigInt>),
}

impl Rhs {
    pub fn kind(&self) -> &'static str {
        match self {
            Rhs::Univariate(_) => "univariate",
            Rhs::Form(_) => "binary-form",
            Rhs::Bivariate(_) => "bivariate",
        }
    }

    pub fn uses_y(&self) -> bool {
        !matches!(self, Rhs::Univariate(_))
    }

    pub fn to_bipoly(&self) -> BiPoly<BigInt> {
        match self {
            Rhs::Univariate(p) => BiPoly::from_univariate_x(p),
            Rhs::Form(f) => f.to_bipoly(),
            Rhs::Bivariate(p) => p.clone(),
        }
    }

    /// Total degree.
    pub fn degree(&self) -> usize {
        match self {
            Rhs::Univariate(p) => p.degree().unwrap_or(0),
            Rhs::Form(f) => f.degree(),
            Rhs::Bivariate(p) => p.total_degree().unwrap_or(0) as usize,
        }
    }

    /// Exact value; `y` must be given exactly when the right-hand side uses it.
    pub fn eval(&self, x: &BigInt, y: Option<&BigInt>) -> Result<BigInt, ModelError> {
        match (self, y) {
            (Rhs::Univariate(p), None) => Ok(p.eval(x)),
            (Rhs::Form(f), Some(y)) => Ok(f.eval(x, y)),
            (Rhs::Bivariate(p), Some(y)) => Ok(p.eval(x, y)),
            (Rhs::Univariate(_), Some(_)) => Err(ModelError::Arity { expected: 1, got: 2 }),
            (_, None) => Err(ModelError::Arity { expected: 2, got: 1 }),
        }
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Univariate(p) => write!(f, "{p}"),
            Rhs::Form(form) => write!(f, "{}", form.to_bipoly()),
            Rhs::Bivariate(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraints {
    /// `gcd(x, y) = 1`
    pub coprime: bool,
    /// Right-hand side was declared a binary form.
    pub form: bool,
    /// Inclusive per-variable ranges.
    pub bounds: BTreeMap<String, (i64, i64)>,
}

impl fmt::Display for Constraints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coprime {
            write!(f, " ; gcd(x,y)=1")?;
        }
        if self.form {
            write!(f, " ; form")?;
        }
        for (v, (lo, hi)) in &self.bounds {
            write!(f, " ; {v}={lo}..{hi}")?;
        }
        Ok(())
    }
}

/// `lhs = rhs` with optional constraints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "EquationRepr", try_from = "EquationRepr")]
pub struct Equation {
    pub lhs: FactorialProductLHS,
    pub rhs: Rhs,
    pub constraints: Constraints,
}

impl Equation {
    /// The equation without its constraint suffix.
    pub fn core_text(&self) -> String {
        format!("{} = {}", self.lhs, self.rhs)
    }

    /// Value of `lhs - rhs`; zero exactly on solutions.
    pub fn residual(
        &self,
        assignment: &super::Assignment,
        x: &BigInt,
        y: Option<&BigInt>,
    ) -> Result<BigInt, ModelError> {
        Ok(self.lhs.eval(assignment)? - self.rhs.eval(x, y)?)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}{}", self.lhs, self.rhs, self.constraints)
    }
}

impl std::str::FromStr for Equation {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_equation(s)
    }
}

#[derive(Serialize, Deserialize)]
struct RhsRepr {
    kind: String,
    text: String,
}

#[derive(Serialize, Deserialize)]
struct EquationRepr {
    lhs: FactorialProductLHS,
    rhs: RhsRepr,
    constraints: Constraints,
}

impl From<Equation> for EquationRepr {
    fn from(eq: Equation) -> Self {
        EquationRepr {
            rhs: RhsRepr { kind: eq.rhs.kind().to_string(), text: eq.rhs.to_string() },
            lhs: eq.lhs,
            constraints: eq.constraints,
        }
    }
}

impl TryFrom<EquationRepr> for Equation {
    type Error = ModelError;
    fn try_from(r: EquationRepr) -> Result<Self, Self::Error> {
        r.lhs.validate()?;
        let text = format!("{} = {}{}", r.lhs, r.rhs.text, r.constraints);
        let eq = parse_equation(&text)?;
        if eq.rhs.kind() != r.rhs.kind {
            return Err(ModelError::Semantic(format!(
                "right-hand side kind `{}` does not match its text",
                r.rhs.kind
            )));
        }
        Ok(eq)
    }
}
