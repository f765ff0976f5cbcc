//! Bivariate right-hand sides: for each `y` in range the equation becomes `g_y(x) = N`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::divisor::{search_shape, DivisorShape};
use super::prune::{admissible_primes, lhs_valuation};
use super::univariate::UnivariateSolver;
use super::{drive, Certificate, SearchBounds, SearchOptions, SearchOutcome, SolutionRecord, SolverError, TupleOutcome};
use crate::model::{Equation, Rhs};
use crate::poly::Poly;

/// Primes below this bound are tried as no-root certificates.
const PRUNE_PRIME_LIMIT: u64 = 50;

enum Slice {
    Solver(UnivariateSolver),
    Constant(BigInt),
}

struct Grid {
    slices: Vec<(BigInt, Slice)>,
    x_range: Option<(i64, i64)>,
}

impl Grid {
    fn new(bounds: &SearchBounds, specialize: impl Fn(&BigInt) -> Poly<BigInt>) -> Result<Self, SolverError> {
        let (ylo, yhi) = bounds.range("y")?;
        let x_range = bounds.optional_range("x")?;
        let mut slices = Vec::new();
        for y in ylo..=yhi {
            let y = BigInt::from(y);
            let g = specialize(&y);
            let slice = match g.degree() {
                Some(d) if d >= 1 => Slice::Solver(UnivariateSolver::new(&g)),
                _ => Slice::Constant(g.coeff(0)),
            };
            slices.push((y, slice));
        }
        Ok(Grid { slices, x_range })
    }

    /// A constant slice equal to `n` has every `x` as a solution and then needs an `x` range.
    fn solutions(&self, n: &BigInt, coprime: bool) -> Result<Vec<(BigInt, BigInt)>, SolverError> {
        let in_x = |x: &BigInt| self.x_range.is_none_or(|(lo, hi)| *x >= BigInt::from(lo) && *x <= BigInt::from(hi));
        let mut out = Vec::new();
        for (y, slice) in &self.slices {
            let xs: Vec<BigInt> = match slice {
                Slice::Solver(s) => s.solve(n).into_iter().filter(|x| in_x(x)).collect(),
                Slice::Constant(c) if c == n => {
                    let (lo, hi) = self.x_range.ok_or_else(|| SolverError::MissingBound("x".into()))?;
                    (lo..=hi).map(BigInt::from).collect()
                }
                Slice::Constant(_) => Vec::new(),
            };
            for x in xs {
                if coprime && !x.gcd(y).is_one() {
                    continue;
                }
                out.push((x, y.clone()));
            }
        }
        out.sort();
        Ok(out)
    }
}

fn grid_search(
    eq: &Equation,
    grid: &Grid,
    coprime: bool,
    bounds: &SearchBounds,
    opts: &SearchOptions,
    prune: impl Fn(&crate::model::Assignment, &BigInt) -> Option<Certificate> + Sync,
) -> Result<SearchOutcome, SolverError> {
    let (vars, ranges) = bounds.lhs_ranges(&eq.lhs)?;
    let text = eq.to_string();
    drive(&vars, &ranges, bounds, opts, |t| {
        let n = eq.lhs.eval(t)?;
        if let Some(c) = prune(t, &n) {
            return Ok(TupleOutcome { records: vec![], pruned: Some(c) });
        }
        let records = grid
            .solutions(&n, coprime)?
            .iter()
            .map(|(x, y)| SolutionRecord::exact(&text, t, &[("x", x), ("y", y)]))
            .collect();
        Ok(TupleOutcome { records, pruned: None })
    })
}

/// All `(tuple, x, y)` with `LHS = f(x, y)` for a binary form `f` of degree at least 2.
///
/// `y` needs a range; `x` is unrestricted unless a range is given. Forms of the shape
/// `±x^s y^s (x^s ± y^s)` are handled by divisor enumeration and need no `x, y` ranges.
pub fn search_binary_form(
    eq: &Equation,
    bounds: &SearchBounds,
    coprime: bool,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SolverError> {
    let Rhs::Form(f) = &eq.rhs else {
        return Err(SolverError::WrongRhs { expected: "binary-form", got: eq.rhs.kind() });
    };
    if f.degree() < 2 {
        return Err(SolverError::Domain("form degree must be at least 2".into()));
    }
    if let Some(shape) = DivisorShape::of_form(f) {
        return search_shape(eq, shape, coprime, bounds, opts);
    }
    let grid = Grid::new(bounds, |y| f.specialize_y(y))?;
    let d = f.degree() as u64;
    let primes = if opts.prune { admissible_primes(f, PRUNE_PRIME_LIMIT) } else { Vec::new() };
    grid_search(eq, &grid, coprime, bounds, opts, |t, n| {
        primes.iter().find_map(|&q| {
            let v = lhs_valuation(&eq.lhs, t, Some(n), q)?;
            (v >= 1 && v < d).then_some(Certificate::PruneReason { q, v, d })
        })
    })
}

/// Bounded search of `LHS = F(x, y)` for an arbitrary polynomial `F`, one `y` at a time.
///
/// Honors the equation's `gcd(x,y)=1` constraint. No pruning is applied.
pub fn solve_bivariate(eq: &Equation, bounds: &SearchBounds, opts: &SearchOptions) -> Result<SearchOutcome, SolverError> {
    if let Rhs::Univariate(_) = eq.rhs {
        return Err(SolverError::WrongRhs { expected: "bivariate", got: eq.rhs.kind() });
    }
    let p = eq.rhs.to_bipoly();
    if p.is_zero() {
        return Err(SolverError::Domain("right-hand side is zero".into()));
    }
    let grid = Grid::new(bounds, |y| p.specialize_y(y))?;
    grid_search(eq, &grid, eq.constraints.coprime, bounds, opts, |_, _| None)
}
