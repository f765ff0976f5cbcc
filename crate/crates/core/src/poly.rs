//! Dense univariate polynomials over any commutative ring from `num-traits`.
//!
//! Coefficients are stored lowest degree first; `coeffs()[i]` multiplies `x^i`.
//! [`Poly::from_top`] indexes from the leading coefficient instead (so `from_top(0)`
//! is the leading coefficient `a₀` of `a₀xᵈ + a₁xᵈ⁻¹ + … + a_d`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T> Poly<T>
where
    T: Clone + Zero + One + PartialEq,
{
    /// Builds from lowest-degree-first coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds from leading-first coefficients.
    pub fn from_leading_first(mut coeffs: Vec<T>) -> Self {
        coeffs.reverse();
        Poly::new(coeffs)
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Poly::new(vec![T::zero(), T::one()])
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    /// Coefficient counted from the top: `from_top(0)` is the leading coefficient.
    pub fn from_top(&self, i: usize) -> T {
        match self.degree() {
            Some(d) if i <= d => self.coeffs[d - i].clone(),
            _ => T::zero(),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for c in self.coeffs.iter() {
            if !k.is_zero() {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Poly::new(out)
    }

    /// `self(g(x))`
    pub fn compose(&self, g: &Poly<T>) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * g) + &Poly::constant(c.clone()))
    }

    /// `self(x + 1) - self(x)`
    pub fn forward_difference(&self) -> Self
    where
        T: Sub<Output = T>,
    {
        let shift = Poly::new(vec![T::one(), T::one()]);
        &self.compose(&shift) - self
    }

    pub fn scale(&self, k: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn map<U, F>(&self, f: F) -> Poly<U>
    where
        U: Clone + Zero + One + PartialEq,
        F: Fn(&T) -> U,
    {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// True when exactly one coefficient is nonzero.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }
}

impl<'a, T> Add<&'a Poly<T>> for &'a Poly<T>
where
    T: Clone + Zero + One + PartialEq,
{
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a, T> Sub<&'a Poly<T>> for &'a Poly<T>
where
    T: Clone + Zero + One + PartialEq + Sub<Output = T>,
{
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a, T> Mul<&'a Poly<T>> for &'a Poly<T>
where
    T: Clone + Zero + One + PartialEq,
{
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T> Neg for &Poly<T>
where
    T: Clone + Zero + One + PartialEq + Neg<Output = T>,
{
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T> Poly<T>
where
    T: Clone + Integer + Signed,
{
    /// Gcd of the coefficients (non-negative; zero for the zero polynomial).
    pub fn content(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |g, c| g.gcd(c))
    }

    pub fn sign_at(&self, x: &T) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Poly<BigRational> {
    /// Multiplies through by the lcm of denominators: returns `(L·self, L)` with integer
    /// coefficients.
    pub fn clear_denominators(&self) -> (Poly<BigInt>, BigInt) {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        (Poly::new(ints), l)
    }
}

impl Poly<BigInt> {
    pub fn to_rational(&self) -> Poly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }
}

impl<T> fmt::Display for Poly<T>
where
    T: Clone + Zero + One + PartialEq + fmt::Display + PartialOrd + Neg<Output = T>,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::model::display::write_univariate(f, self, "x")
    }
}
