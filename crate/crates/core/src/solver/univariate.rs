//! All integer solutions of `f(x) = M` by exact bisection on monotone pieces.
//!
//! On the integers `f` is monotone wherever its forward difference `Δf(k) = f(k+1) - f(k)`
//! keeps one sign. The sign pattern of `Δf` is found the same way one level down, so the
//! recursion bottoms out at degree one and never leaves exact arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{drive, SearchBounds, SearchOptions, SearchOutcome, SolutionRecord, SolverError, TupleOutcome};
use crate::model::{Equation, Rhs};
use crate::poly::Poly;

/// `1 + max |aᵢ / a_d|`, rounded up: every real root lies strictly inside `(-B, B)`.
fn cauchy_bound(p: &Poly<BigInt>) -> BigInt {
    let lead = p.leading().abs();
    let d = p.degree().unwrap_or(0);
    let m = p.coeffs()[..d].iter().map(|c| c.abs().div_ceil(&lead)).max().unwrap_or_default();
    m + BigInt::one()
}

/// Partition of `[lo, hi]` into runs where `p` is `≥ 0` everywhere or `≤ 0` everywhere.
fn sign_runs(p: &Poly<BigInt>, lo: &BigInt, hi: &BigInt) -> Vec<(BigInt, BigInt)> {
    if lo > hi {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (a, b, increasing) in monotone_pieces(p, lo, hi) {
        // on a monotone piece the nonnegative points form a suffix (increasing) or a prefix
        let nonneg = |k: &BigInt| !p.eval(k).is_negative();
        let split = if increasing {
            first_true(&a, &b, |k| nonneg(k))
        } else {
            first_true(&a, &b, |k| !nonneg(k))
        };
        match split {
            Some(s) if s > a => {
                out.push((a, &s - 1));
                out.push((s, b));
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// Runs of `[lo, hi]` on which `p` restricted to the integers is monotone, with direction.
fn monotone_pieces(p: &Poly<BigInt>, lo: &BigInt, hi: &BigInt) -> Vec<(BigInt, BigInt, bool)> {
    match p.degree() {
        None | Some(0) => return vec![(lo.clone(), hi.clone(), true)],
        Some(1) => return vec![(lo.clone(), hi.clone(), p.leading().is_positive())],
        _ => {}
    }
    if lo == hi {
        return vec![(lo.clone(), hi.clone(), true)];
    }
    let delta = p.forward_difference();
    sign_runs(&delta, lo, &(hi - 1))
        .into_iter()
        .map(|(a, b)| {
            let increasing = !delta.eval(&a).is_negative() && !delta.eval(&b).is_negative();
            (a, b + 1, increasing)
        })
        .collect()
}

/// Smallest `k ∈ [a, b]` with `pred(k)`, for a predicate that is monotone false→true.
fn first_true(a: &BigInt, b: &BigInt, pred: impl Fn(&BigInt) -> bool) -> Option<BigInt> {
    if !pred(b) {
        return None;
    }
    let (mut lo, mut hi) = (a.clone(), b.clone());
    while lo < hi {
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        if pred(&mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

/// Solver for `f(x) = M` with the monotone structure of `f` computed once.
#[derive(Clone, Debug)]
pub struct UnivariateSolver {
    f: Poly<BigInt>,
    core: (BigInt, BigInt),
    core_pieces: Vec<(BigInt, BigInt, bool)>,
    outer_left_increasing: bool,
    outer_right_increasing: bool,
}

impl UnivariateSolver {
    /// `f` must have degree at least 1.
    pub fn new(f: &Poly<BigInt>) -> Self {
        let d = f.degree().expect("nonzero polynomial");
        assert!(d >= 1, "constant polynomial");
        let delta = f.forward_difference();
        // outside (-C, C) the difference has no sign change
        let c = if delta.degree().unwrap_or(0) >= 1 { cauchy_bound(&delta) + 1 } else { BigInt::one() };
        let core = (-c.clone(), c);
        let core_pieces = monotone_pieces(f, &core.0, &core.1);
        let lead_pos = f.leading().is_positive();
        UnivariateSolver {
            f: f.clone(),
            outer_right_increasing: lead_pos,
            outer_left_increasing: if d % 2 == 1 { lead_pos } else { !lead_pos },
            core,
            core_pieces,
        }
    }

    pub fn poly(&self) -> &Poly<BigInt> {
        &self.f
    }

    /// Every integer `x` with `f(x) = m`, ascending.
    pub fn solve(&self, m: &BigInt) -> Vec<BigInt> {
        let mut shifted = self.f.coeffs().to_vec();
        shifted[0] -= m;
        let g = Poly::new(shifted);
        if g.is_zero() {
            // f ≡ m would need a constant f, excluded in new()
            return Vec::new();
        }
        let b = cauchy_bound(&g);
        let mut pieces: Vec<(BigInt, BigInt, bool)> = Vec::new();
        if -&b < self.core.0 {
            pieces.push((-&b, self.core.0.clone(), self.outer_left_increasing));
        }
        pieces.extend(self.core_pieces.iter().cloned());
        if b > self.core.1 {
            pieces.push((self.core.1.clone(), b.clone(), self.outer_right_increasing));
        }
        let mut out: Vec<BigInt> = Vec::new();
        for (lo, hi, increasing) in pieces {
            let start = if increasing {
                first_true(&lo, &hi, |k| self.f.eval(k) >= *m)
            } else {
                first_true(&lo, &hi, |k| self.f.eval(k) <= *m)
            };
            let Some(mut k) = start else { continue };
            while k <= hi && self.f.eval(&k) == *m {
                out.push(k.clone());
                k += 1;
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Exhaustive search of `LHS = f(x)` over the left-hand-side ranges; `x` may be bounded too.
pub fn solve_univariate(eq: &Equation, bounds: &SearchBounds, opts: &SearchOptions) -> Result<SearchOutcome, SolverError> {
    let Rhs::Univariate(f) = &eq.rhs else {
        return Err(SolverError::WrongRhs { expected: "univariate", got: eq.rhs.kind() });
    };
    if f.degree().unwrap_or(0) < 1 {
        return Err(SolverError::Domain("right-hand side must have degree at least 1".into()));
    }
    let (vars, ranges) = bounds.lhs_ranges(&eq.lhs)?;
    let x_range = bounds.optional_range("x")?;
    let solver = UnivariateSolver::new(f);
    let text = eq.to_string();
    drive(&vars, &ranges, bounds, opts, |t| {
        let m = eq.lhs.eval(t)?;
        let records = solver
            .solve(&m)
            .into_iter()
            .filter(|x| x_range.is_none_or(|(lo, hi)| *x >= BigInt::from(lo) && *x <= BigInt::from(hi)))
            .map(|x| SolutionRecord::exact(&text, t, &[("x", &x)]))
            .collect();
        Ok(TupleOutcome { records, pruned: None })
    })
}
