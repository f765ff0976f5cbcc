//! Bivariate polynomials and binary forms.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Poly;

/// Sparse polynomial in `x, y`; keys are `(x exponent, y exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T> BiPoly<T>
where
    T: Clone + Zero + One + PartialEq,
{
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        BiPoly::from_terms([((0, 0), c)])
    }

    pub fn x() -> Self {
        BiPoly::from_terms([((1, 0), T::one())])
    }

    pub fn y() -> Self {
        BiPoly::from_terms([((0, 1), T::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), T)>>(terms: I) -> Self {
        let mut map: BTreeMap<(u32, u32), T> = BTreeMap::new();
        for (k, c) in terms {
            let e = map.entry(k).or_insert_with(T::zero);
            *e = e.clone() + c;
        }
        map.retain(|_, c| !c.is_zero());
        BiPoly { terms: map }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), T> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> T {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn uses_x(&self) -> bool {
        self.terms.keys().any(|k| k.0 > 0)
    }

    pub fn uses_y(&self) -> bool {
        self.terms.keys().any(|k| k.1 > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|(i, j)| i + j);
        match degs.next() {
            None => false,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = BiPoly::constant(T::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, k: &T) -> Self {
        BiPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone() * k.clone())))
    }

    pub fn map<U, F>(&self, f: F) -> BiPoly<U>
    where
        U: Clone + Zero + One + PartialEq,
        F: Fn(&T) -> U,
    {
        BiPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        // x-powers and y-powers are cached so each monomial costs one product
        let mut xp: Vec<T> = vec![T::one()];
        let mut yp: Vec<T> = vec![T::one()];
        let mut acc = T::zero();
        for ((i, j), c) in &self.terms {
            while xp.len() <= *i as usize {
                let next = xp.last().unwrap().clone() * x.clone();
                xp.push(next);
            }
            while yp.len() <= *j as usize {
                let next = yp.last().unwrap().clone() * y.clone();
                yp.push(next);
            }
            acc = acc + c.clone() * xp[*i as usize].clone() * yp[*j as usize].clone();
        }
        acc
    }

    /// Polynomial in `x` obtained by fixing `y`.
    pub fn specialize_y(&self, y: &T) -> Poly<T> {
        let deg = self.x_degree() as usize;
        let mut coeffs = vec![T::zero(); deg + 1];
        for ((i, j), c) in &self.terms {
            let yv = num_traits::pow(y.clone(), *j as usize);
            coeffs[*i as usize] = coeffs[*i as usize].clone() + c.clone() * yv;
        }
        Poly::new(coeffs)
    }

    /// Polynomial in `x` when `y` does not occur.
    pub fn to_univariate_x(&self) -> Option<Poly<T>> {
        if self.uses_y() {
            return None;
        }
        Some(self.specialize_y(&T::zero()))
    }

    pub fn from_univariate_x(p: &Poly<T>) -> Self {
        BiPoly::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| ((i as u32, 0), c.clone())))
    }
}

impl<'a, T: Clone + Zero + One + PartialEq> Add<&'a BiPoly<T>> for &'a BiPoly<T> {
    type Output = BiPoly<T>;
    fn add(self, rhs: &BiPoly<T>) -> BiPoly<T> {
        BiPoly::from_terms(self.terms.iter().chain(rhs.terms.iter()).map(|(e, c)| (*e, c.clone())))
    }
}

impl<'a, T: Clone + Zero + One + PartialEq + Neg<Output = T>> Sub<&'a BiPoly<T>> for &'a BiPoly<T> {
    type Output = BiPoly<T>;
    fn sub(self, rhs: &BiPoly<T>) -> BiPoly<T> {
        BiPoly::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c.clone()))
                .chain(rhs.terms.iter().map(|(e, c)| (*e, -c.clone()))),
        )
    }
}

impl<'a, T: Clone + Zero + One + PartialEq> Mul<&'a BiPoly<T>> for &'a BiPoly<T> {
    type Output = BiPoly<T>;
    fn mul(self, rhs: &BiPoly<T>) -> BiPoly<T> {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &rhs.terms {
                out.push(((i + k, j + l), a.clone() * b.clone()));
            }
        }
        BiPoly::from_terms(out)
    }
}

impl<T: Clone + Zero + One + PartialEq + Neg<Output = T>> Neg for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn neg(self) -> BiPoly<T> {
        BiPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, -c.clone())))
    }
}

/// Homogeneous `f(x,y) = a_d xᵈ + a_{d-1} x^{d-1} y + … + a_0 yᵈ`.
///
/// `coeffs()[i]` is `a_i`, the coefficient of `xⁱ y^{d-i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    /// `coeffs[i]` multiplies `xⁱ y^{d-i}` with `d = coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigInt>) -> Option<Self> {
        if coeffs.is_empty() || coeffs.iter().all(|c| c.is_zero()) {
            return None;
        }
        Some(BinaryForm { degree: coeffs.len() - 1, coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        BinaryForm::new(coeffs.iter().map(|&c| BigInt::from(c)).collect()).expect("nonzero form")
    }

    /// Reads a homogeneous nonzero bivariate polynomial.
    pub fn from_bipoly(p: &BiPoly<BigInt>) -> Option<Self> {
        if !p.is_homogeneous() {
            return None;
        }
        let d = p.total_degree()? as usize;
        let coeffs = (0..=d).map(|i| p.coeff(i as u32, (d - i) as u32)).collect();
        BinaryForm::new(coeffs)
    }

    pub fn to_bipoly(&self) -> BiPoly<BigInt> {
        let d = self.degree as u32;
        BiPoly::from_terms(self.coeffs.iter().enumerate().map(|(i, c)| ((i as u32, d - i as u32), c.clone())))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `a_d`, the coefficient of `xᵈ`.
    pub fn a_d(&self) -> &BigInt {
        &self.coeffs[self.degree]
    }

    /// `a_0`, the coefficient of `yᵈ`.
    pub fn a_0(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        // Horner in x/y: ((a_d x + a_{d-1} y) x + a_{d-2} y²) ...
        let mut acc = BigInt::zero();
        let mut ypow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c * &ypow;
            ypow *= y;
        }
        acc
    }

    /// `f(x, 1)`
    pub fn dehomogenize(&self) -> Poly<BigInt> {
        Poly::new(self.coeffs.clone())
    }

    /// `f(x, y₀)` as a polynomial in `x`.
    pub fn specialize_y(&self, y: &BigInt) -> Poly<BigInt> {
        let d = self.degree;
        let mut yp = vec![BigInt::one()];
        for _ in 0..d {
            let next = yp.last().unwrap() * y;
            yp.push(next);
        }
        Poly::new(self.coeffs.iter().enumerate().map(|(i, c)| c * &yp[d - i]).collect())
    }

    /// Does `f(x, 1)` have a root modulo `q`?
    pub fn has_root_mod(&self, q: u64) -> bool {
        let reduced: Vec<i128> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c % BigInt::from(q);
                let r: i128 = r.try_into().expect("residue fits");
                r.rem_euclid(q as i128)
            })
            .collect();
        (0..q as i128).any(|x| {
            let mut acc: i128 = 0;
            for c in reduced.iter().rev() {
                acc = (acc * x + c) % q as i128;
            }
            acc == 0
        })
    }

    pub fn is_positive_somewhere(&self) -> bool {
        self.coeffs.iter().any(|c| c.is_positive())
    }
}
