//! Scaling-and-shift transform to a monic polynomial without a subleading term.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ModelError;
use crate::poly::Poly;

/// Monic integer `Q` with `Q(a₀·d·x + a₁) = d^d·a₀^{d-1}·L·f(x)`, where `f` is the input
/// polynomial, `a₀, a₁` are the two top coefficients of `L·f` and `L` clears its denominators.
///
/// So `f(x) = b·F` holds exactly when `Q(z) = c·F` with `c = L·b·d^d·a₀^{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepressedForm {
    pub q: Poly<BigInt>,
    pub c: BigInt,
    /// `d^d·a₀^{d-1}`
    pub multiplier: BigInt,
    /// `z = z_scale·x + z_shift`
    pub z_scale: BigInt,
    pub z_shift: BigInt,
    /// Denominator cleared from `f`.
    pub clearing: BigInt,
}

impl DepressedForm {
    pub fn degree(&self) -> usize {
        self.q.degree().expect("monic")
    }

    pub fn z_of(&self, x: &BigInt) -> BigInt {
        &self.z_scale * x + &self.z_shift
    }

    /// `c_k`, the coefficient of `z^{d-k}` in `Q`, so `c_0 = 1` and `c_1 = 0`.
    pub fn c_coeff(&self, k: usize) -> BigInt {
        let d = self.degree();
        if k > d {
            BigInt::zero()
        } else {
            self.q.coeff(d - k)
        }
    }

    /// Largest `j` with `c_j ≠ 0`, or `None` when `Q = z^d`.
    pub fn top_index(&self) -> Option<usize> {
        (1..=self.degree()).rev().find(|&k| !self.c_coeff(k).is_zero())
    }

    /// `R(z)/z^{d-j}` for `Q = z^d + R`, together with `j`.
    pub fn reduced_remainder(&self) -> Option<(usize, Poly<BigInt>)> {
        let j = self.top_index()?;
        let d = self.degree();
        let coeffs = self.q.coeffs()[d - j..d].to_vec();
        Some((j, Poly::new(coeffs)))
    }
}

/// Depresses `f` for the equation `f(x) = b·F`.
pub fn depress_polynomial(f: &Poly<BigRational>, b: &BigInt) -> Result<DepressedForm, ModelError> {
    let (ints, l) = f.clear_denominators();
    let mut out = depress_integer(&ints, b)?;
    out.c *= &l;
    out.clearing = l;
    Ok(out)
}

/// [`depress_polynomial`] for integer coefficients.
pub fn depress_integer(f: &Poly<BigInt>, b: &BigInt) -> Result<DepressedForm, ModelError> {
    let d = match f.degree() {
        Some(d) if d >= 2 => d,
        got => return Err(ModelError::DegreeTooSmall { needed: 2, got: got.unwrap_or(0) }),
    };
    let a0 = f.from_top(0);
    let a1 = f.from_top(1);
    let dd = BigInt::from(d as u64);
    let multiplier = num_traits::pow(dd.clone(), d) * num_traits::pow(a0.clone(), d - 1);
    let z_scale = &a0 * &dd;

    // g(y) = d^d a0^{d-1} f(y / (a0 d)) has integer coefficients a_k d^k a0^{k-1}
    // (top-down), then Q(z) = g(z - a1).
    let mut g = vec![BigInt::zero(); d + 1];
    let mut dk = BigInt::one();
    for k in 0..=d {
        let ak = f.from_top(k);
        g[d - k] = if k == 0 {
            BigInt::one()
        } else {
            let a0_pow = num_traits::pow(a0.clone(), k - 1);
            &ak * &dk * a0_pow
        };
        dk *= &dd;
    }
    let g = Poly::new(g);
    let shift = Poly::new(vec![-a1.clone(), BigInt::one()]);
    let q = g.compose(&shift);
    debug_assert!(q.coeff(d - 1).is_zero());
    Ok(DepressedForm {
        c: b * &multiplier,
        q,
        multiplier,
        z_scale,
        z_shift: a1,
        clearing: BigInt::one(),
    })
}

/// Integer division exactness helper for callers that need `Q(z)/c`.
pub fn exact_quotient(a: &BigInt, b: &BigInt) -> Option<BigInt> {
    if b.is_zero() {
        return None;
    }
    let (q, r) = a.div_rem(b);
    r.is_zero().then_some(q)
}
