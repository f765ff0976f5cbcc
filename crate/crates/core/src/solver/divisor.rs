//! Equations `N = ε · x^s y^s (x^s + σ y^s)` solved through the factorization of `N`.
//!
//! For coprime `x, y` the three factors `x^s`, `y^s` and `x^s + σy^s` are pairwise coprime,
//! so every prime power of `N` lands entirely in one of them.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::prune::prime_is_admissible;
use super::{drive, SearchBounds, SearchOptions, SearchOutcome, SolutionRecord, SolverError, TupleOutcome};
use crate::arith::factor::factorize;
use crate::arith::roots::integer_nth_root;
use crate::model::{BinaryForm, Equation, FactorialProductLHS, Rhs};

/// Sign `σ` in `x^s + σ y^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// `ε · x^s y^s (x^s + σ y^s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DivisorShape {
    pub s: u32,
    pub sign: Sign,
    pub negated: bool,
}

impl DivisorShape {
    pub fn new(s: u32, sign: Sign) -> Self {
        DivisorShape { s, sign, negated: false }
    }

    /// Recognizes the shape among binary forms.
    pub fn of_form(f: &BinaryForm) -> Option<Self> {
        let d = f.degree();
        if d == 0 || d % 3 != 0 {
            return None;
        }
        let s = d / 3;
        let c = f.coeffs();
        let outer = &c[2 * s];
        let inner = &c[s];
        let rest_zero = c.iter().enumerate().all(|(i, v)| i == s || i == 2 * s || v.is_zero());
        if !rest_zero || outer.abs() != BigInt::one() || inner.abs() != BigInt::one() {
            return None;
        }
        Some(DivisorShape {
            s: s as u32,
            sign: if inner == outer { Sign::Plus } else { Sign::Minus },
            negated: outer.is_negative(),
        })
    }

    pub fn to_form(self) -> BinaryForm {
        let s = self.s as usize;
        let eps: i64 = if self.negated { -1 } else { 1 };
        let mut c = vec![0i64; 3 * s + 1];
        c[2 * s] = eps;
        c[s] = eps * self.sign.value();
        BinaryForm::from_i64(&c)
    }

    pub fn eval(self, x: &BigInt, y: &BigInt) -> BigInt {
        let xs = num_traits::pow(x.clone(), self.s as usize);
        let ys = num_traits::pow(y.clone(), self.s as usize);
        let v = &xs * &ys * (&xs + &ys * self.sign.value());
        if self.negated {
            -v
        } else {
            v
        }
    }
}

/// Every signed integer `r` with `r^s = v`.
fn signed_roots(v: &BigInt, s: u32) -> Vec<BigInt> {
    if v.is_negative() && s % 2 == 0 {
        return Vec::new();
    }
    let (r, exact) = integer_nth_root(v.magnitude(), s);
    if !exact {
        return Vec::new();
    }
    let r = BigInt::from(r);
    if v.is_negative() {
        vec![-r]
    } else if s % 2 == 0 && !r.is_zero() {
        vec![-r.clone(), r]
    } else {
        vec![r]
    }
}

/// Coprime `(x, y)` with `x^s y^s (x^s + σ y^s) = n`, sorted.
fn coprime_solutions(n: &BigInt, primes: &[(BigUint, u64)], s: u32, sign: Sign) -> BTreeSet<(BigInt, BigInt)> {
    let mut out = BTreeSet::new();
    // part[i] ∈ {0: x^s, 1: y^s, 2: x^s + σy^s}
    fn walk(
        i: usize,
        primes: &[(BigUint, u64)],
        s: u32,
        xs: &BigUint,
        ys: &BigUint,
        emit: &mut dyn FnMut(&BigUint, &BigUint),
    ) {
        if i == primes.len() {
            emit(xs, ys);
            return;
        }
        let (p, e) = &primes[i];
        let pe = num_traits::pow(p.clone(), *e as usize);
        let power_ok = *e % s as u64 == 0;
        if power_ok {
            walk(i + 1, primes, s, &(xs * &pe), ys, emit);
            walk(i + 1, primes, s, xs, &(ys * &pe), emit);
        }
        walk(i + 1, primes, s, xs, ys, emit);
    }
    let sigma = BigInt::from(sign.value());
    walk(0, primes, s, &BigUint::one(), &BigUint::one(), &mut |xa, ya| {
        for xv in [BigInt::from(xa.clone()), -BigInt::from(xa.clone())] {
            for yv in [BigInt::from(ya.clone()), -BigInt::from(ya.clone())] {
                let w = &xv + &sigma * &yv;
                if &xv * &yv * &w != *n {
                    continue;
                }
                for x in signed_roots(&xv, s) {
                    for y in signed_roots(&yv, s) {
                        out.insert((x.clone(), y));
                    }
                }
            }
        }
    });
    out
}

/// `(x, y)` with `shape(x, y) = n`; only coprime pairs when `coprime`.
///
/// Fails when `n = 0` (infinitely many solutions) or `n` cannot be factored.
pub fn divisor_solutions(n: &BigInt, shape: DivisorShape, coprime: bool) -> Result<Vec<(BigInt, BigInt)>, SolverError> {
    if n.is_zero() {
        return Err(SolverError::Domain("the value 0 has infinitely many representations".into()));
    }
    if shape.s == 0 {
        return Err(SolverError::Domain("s must be positive".into()));
    }
    let target = if shape.negated { -n } else { n.clone() };
    let fac = factorize(&target)?;
    let primes: Vec<(BigUint, u64)> = fac.factors().to_vec();
    let k = 3 * shape.s as u64;
    let mut out = BTreeSet::new();
    // common factor g of x and y contributes g^{3s}
    let mut gcds: Vec<(BigInt, Vec<(BigUint, u64)>)> = vec![(BigInt::one(), primes.clone())];
    if !coprime {
        for (idx, (p, e)) in primes.iter().enumerate() {
            let mut next = Vec::new();
            for (g, rest) in &gcds {
                for j in 1..=e / k {
                    let mut r = rest.clone();
                    r[idx].1 -= j * k;
                    next.push((g * num_traits::pow(BigInt::from(p.clone()), j as usize), r));
                }
            }
            gcds.extend(next);
        }
    }
    for (g, rest) in gcds {
        let reduced = &target / num_traits::pow(g.clone(), k as usize);
        let rest: Vec<(BigUint, u64)> = rest.into_iter().filter(|(_, e)| *e > 0).collect();
        for (x, y) in coprime_solutions(&reduced, &rest, shape.s, shape.sign) {
            out.insert((x * &g, y * &g));
        }
    }
    Ok(out.into_iter().collect())
}

/// All `(x, y)` in the given ranges with `shape(x, y) = n`, by direct enumeration.
pub fn grid_solutions(n: &BigInt, shape: DivisorShape, coprime: bool, xr: (i64, i64), yr: (i64, i64)) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    for x in xr.0..=xr.1 {
        for y in yr.0..=yr.1 {
            if coprime && x.gcd(&y) != 1 {
                continue;
            }
            let (bx, by) = (BigInt::from(x), BigInt::from(y));
            if shape.eval(&bx, &by) == *n {
                out.push((bx, by));
            }
        }
    }
    out
}

fn in_range(v: &BigInt, r: Option<(i64, i64)>) -> bool {
    r.is_none_or(|(lo, hi)| *v >= BigInt::from(lo) && *v <= BigInt::from(hi))
}

/// Search of `LHS = shape(x, y)` over the left-hand-side ranges.
///
/// Ranges for `x` and `y` are optional filters. When `N` cannot be factored the tuple is
/// searched on the `x, y` grid instead (ranges then required) and a warning is recorded.
pub(crate) fn search_shape(
    eq: &Equation,
    shape: DivisorShape,
    coprime: bool,
    bounds: &SearchBounds,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SolverError> {
    let (vars, ranges) = bounds.lhs_ranges(&eq.lhs)?;
    let xr = bounds.optional_range("x")?;
    let yr = bounds.optional_range("y")?;
    let text = eq.to_string();
    let form = shape.to_form();
    let d = form.degree() as u64;
    let admissible: Vec<u64> = if opts.prune {
        crate::arith::primes::small_primes()
            .range(2, 50)
            .iter()
            .copied()
            .filter(|&q| prime_is_admissible(&form, q))
            .collect()
    } else {
        Vec::new()
    };
    let fallback = std::sync::atomic::AtomicU64::new(0);
    let mut out = drive(&vars, &ranges, bounds, opts, |t| {
        let n = eq.lhs.eval(t)?;
        for &q in &admissible {
            if let Some(v) = super::prune::lhs_valuation(&eq.lhs, t, Some(&n), q) {
                if v >= 1 && v < d {
                    return Ok(TupleOutcome { records: vec![], pruned: Some(super::Certificate::PruneReason { q, v, d }) });
                }
            }
        }
        let pairs = match divisor_solutions(&n, shape, coprime) {
            Ok(p) => p,
            Err(SolverError::Arith(_)) => {
                let (Some(xr), Some(yr)) = (xr, yr) else {
                    return Err(SolverError::MissingBound("x".into()));
                };
                fallback.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                grid_solutions(&n, shape, coprime, xr, yr)
            }
            Err(e) => return Err(e),
        };
        let records = pairs
            .iter()
            .filter(|(x, y)| in_range(x, xr) && in_range(y, yr))
            .map(|(x, y)| SolutionRecord::exact(&text, t, &[("x", x), ("y", y)]))
            .collect();
        Ok(TupleOutcome { records, pruned: None })
    })?;
    if fallback.into_inner() > 0 {
        out.warnings.push("some values could not be factored; those tuples were searched on the x,y grid".into());
    }
    Ok(out)
}

fn shape_equation(lhs: &FactorialProductLHS, shape: DivisorShape) -> Equation {
    let mut eq = Equation { lhs: lhs.clone(), rhs: Rhs::Form(shape.to_form()), constraints: Default::default() };
    eq.constraints.coprime = true;
    eq
}

/// Coprime solutions of `LHS = xy(x ± y)`.
pub fn search_special_form_xy(
    sign: Sign,
    lhs: &FactorialProductLHS,
    bounds: &SearchBounds,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SolverError> {
    let shape = DivisorShape::new(1, sign);
    search_shape(&shape_equation(lhs, shape), shape, true, bounds, opts)
}

/// Coprime solutions of `LHS = x^s y^s (x^s ± y^s)`.
pub fn search_thue_mahler_form(
    s: u32,
    sign: Sign,
    lhs: &FactorialProductLHS,
    bounds: &SearchBounds,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SolverError> {
    if s == 0 {
        return Err(SolverError::Domain("s must be positive".into()));
    }
    let shape = DivisorShape::new(s, sign);
    search_shape(&shape_equation(lhs, shape), shape, true, bounds, opts)
}

impl std::fmt::Display for DivisorShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let neg = if self.negated { "-" } else { "" };
        write!(f, "{neg}x^{s}*y^{s}*(x^{s} {} y^{s})", self.sign.symbol(), s = self.s)
    }
}
