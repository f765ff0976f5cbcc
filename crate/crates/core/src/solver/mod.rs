//! Searches, constructions and the quadratic-residue scan.
//!
//! Every search walks the left-hand-side tuples in lexicographic order (first variable
//! most significant). Tuples are processed in fixed-size batches on a worker pool and
//! merged in tuple order, so results never depend on the number of workers, and a
//! search can stop after any batch and resume from [`SearchOutcome::next_tuple`].

pub mod brocard;
pub mod divisor;
pub mod forms;
pub mod power;
pub mod prune;
pub mod univariate;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::ArithError;
use crate::model::{Assignment, Equation, FactorialProductLHS, ModelError, Rhs};

pub use brocard::{scan_brocard, BrocardScan, ScanReport};
pub use divisor::{search_special_form_xy, search_thue_mahler_form, Sign};
pub use forms::{search_binary_form, solve_bivariate};
pub use power::{construct_power_family, proportional_family, search_power, Proportion};
pub use prune::{prune_bertrand, prune_no_root_mod_q};
pub use univariate::{solve_univariate, UnivariateSolver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("no range given for variable `{0}`")]
    MissingBound(String),
    #[error("invalid range for `{var}`: {lo}..{hi}")]
    BadBound { var: String, lo: i64, hi: i64 },
    #[error("parameters outside the domain: {0}")]
    Domain(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("this search needs a {expected} right-hand side, got {got}")]
    WrongRhs { expected: &'static str, got: &'static str },
    #[error("scan limit must be at least 2, got {0}")]
    LimitTooSmall(u64),
}

/// Why a record holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// Both sides were evaluated and compared.
    ExactEquality,
    /// `v_q(LHS) = v` rules out the tuple for degree `d`.
    PruneReason { q: u64, v: u64, d: u64 },
    /// Member of the explicit infinite family with parameters `t, R, s, m`.
    Construction {
        t: u64,
        #[serde(with = "crate::serde_big::int")]
        r: BigInt,
        #[serde(with = "crate::serde_big::int")]
        s: BigInt,
        #[serde(with = "crate::serde_big::int")]
        m: BigInt,
        /// Closed form of `x` when it is too large to write out.
        x_closed_form: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub equation: String,
    #[serde(with = "crate::serde_big::int_map")]
    pub assignment: BTreeMap<String, BigInt>,
    pub verified: bool,
    pub certificate: Certificate,
}

impl SolutionRecord {
    pub(crate) fn exact(equation: &str, tuple: &Assignment, extra: &[(&str, &BigInt)]) -> Self {
        let mut assignment: BTreeMap<String, BigInt> =
            tuple.iter().map(|(k, v)| (k.clone(), BigInt::from(*v))).collect();
        for (k, v) in extra {
            assignment.insert(k.to_string(), (*v).clone());
        }
        SolutionRecord { equation: equation.to_string(), assignment, verified: true, certificate: Certificate::ExactEquality }
    }

    pub fn get(&self, var: &str) -> Option<&BigInt> {
        self.assignment.get(var)
    }

    /// Left-hand-side part of the assignment, when every value fits.
    pub fn lhs_assignment(&self, lhs: &FactorialProductLHS) -> Option<Assignment> {
        lhs.variables()
            .into_iter()
            .map(|v| {
                let n = self.assignment.get(&v)?;
                u64::try_from(n).ok().map(|n| (v, n))
            })
            .collect()
    }

    /// Re-evaluates both sides of `eq` under the assignment.
    pub fn recheck(&self, eq: &Equation) -> Result<bool, SolverError> {
        let tuple = self
            .lhs_assignment(&eq.lhs)
            .ok_or_else(|| SolverError::Domain("assignment does not bind the left-hand side".into()))?;
        let x = self.assignment.get("x").ok_or_else(|| ModelError::UnboundVariable("x".into()))?;
        let y = match &eq.rhs {
            Rhs::Univariate(_) => None,
            _ => Some(self.assignment.get("y").ok_or_else(|| ModelError::UnboundVariable("y".into()))?),
        };
        Ok(eq.lhs.eval(&tuple)? == eq.rhs.eval(x, y)?)
    }
}

/// A tuple ruled out without evaluating it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrunedTuple {
    pub assignment: Assignment,
    pub certificate: Certificate,
}

/// Inclusive per-variable ranges plus optional budgets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchBounds {
    pub ranges: BTreeMap<String, (i64, i64)>,
    /// Maximum number of left-hand-side tuples to process.
    pub node_budget: Option<u64>,
    pub wall_clock: Option<Duration>,
}

impl SearchBounds {
    pub fn new() -> Self {
        SearchBounds::default()
    }

    pub fn with(mut self, var: &str, lo: i64, hi: i64) -> Self {
        self.ranges.insert(var.to_string(), (lo, hi));
        self
    }

    /// Ranges from the equation's own constraints, overridden by `self`.
    pub fn merged_with(&self, eq: &Equation) -> SearchBounds {
        let mut out = self.clone();
        for (k, v) in &eq.constraints.bounds {
            out.ranges.entry(k.clone()).or_insert(*v);
        }
        out
    }

    pub fn range(&self, var: &str) -> Result<(i64, i64), SolverError> {
        let (lo, hi) = *self.ranges.get(var).ok_or_else(|| SolverError::MissingBound(var.to_string()))?;
        if lo > hi {
            return Err(SolverError::BadBound { var: var.to_string(), lo, hi });
        }
        Ok((lo, hi))
    }

    pub fn optional_range(&self, var: &str) -> Result<Option<(i64, i64)>, SolverError> {
        match self.ranges.contains_key(var) {
            true => self.range(var).map(Some),
            false => Ok(None),
        }
    }

    /// Natural-number ranges for the left-hand-side variables, in canonical order.
    pub fn lhs_ranges(&self, lhs: &FactorialProductLHS) -> Result<(Vec<String>, Vec<(u64, u64)>), SolverError> {
        let vars = lhs.variables();
        let mut ranges = Vec::with_capacity(vars.len());
        for v in &vars {
            let (lo, hi) = self.range(v)?;
            if lo < 0 {
                return Err(SolverError::BadBound { var: v.clone(), lo, hi });
            }
            ranges.push((lo as u64, hi as u64));
        }
        Ok((vars, ranges))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Apply prune certificates before evaluating tuples.
    pub prune: bool,
    /// Index of the first tuple to process (for resuming).
    pub start: u128,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { workers: 0, prune: true, start: 0 }
    }
}

impl SearchOptions {
    pub fn unpruned() -> Self {
        SearchOptions { prune: false, ..Default::default() }
    }

    pub fn with_workers(workers: usize) -> Self {
        SearchOptions { workers, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Complete,
    NodeBudget,
    WallClock,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub tuples_total: u128,
    pub tuples_done: u128,
    pub found: u64,
    pub pruned: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub records: Vec<SolutionRecord>,
    pub pruned: Vec<PrunedTuple>,
    pub stats: SearchStats,
    pub status: SearchStatus,
    /// Index of the first unprocessed tuple.
    pub next_tuple: u128,
    pub warnings: Vec<String>,
}

impl SearchOutcome {
    pub fn is_complete(&self) -> bool {
        self.status == SearchStatus::Complete
    }

    pub(crate) fn empty(status: SearchStatus) -> Self {
        SearchOutcome {
            records: Vec::new(),
            pruned: Vec::new(),
            stats: SearchStats::default(),
            status,
            next_tuple: 0,
            warnings: Vec::new(),
        }
    }
}

/// Result of handling one tuple.
#[derive(Default)]
pub(crate) struct TupleOutcome {
    pub records: Vec<SolutionRecord>,
    pub pruned: Option<Certificate>,
}

const BATCH: u128 = 256;

/// Tuple at position `index` of the lexicographic enumeration.
pub fn tuple_at(vars: &[String], ranges: &[(u64, u64)], mut index: u128) -> Assignment {
    let mut values = vec![0u64; ranges.len()];
    for i in (0..ranges.len()).rev() {
        let width = (ranges[i].1 - ranges[i].0) as u128 + 1;
        values[i] = ranges[i].0 + (index % width) as u64;
        index /= width;
    }
    vars.iter().cloned().zip(values).collect()
}

pub fn tuple_count(ranges: &[(u64, u64)]) -> u128 {
    ranges
        .iter()
        .map(|(lo, hi)| (hi - lo) as u128 + 1)
        .try_fold(1u128, |acc, w| acc.checked_mul(w))
        .unwrap_or(u128::MAX)
}

pub(crate) fn with_pool<R: Send>(workers: usize, job: impl FnOnce() -> R + Send) -> R {
    if workers == 0 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

pub(crate) fn drive<F>(
    vars: &[String],
    ranges: &[(u64, u64)],
    bounds: &SearchBounds,
    opts: &SearchOptions,
    per_tuple: F,
) -> Result<SearchOutcome, SolverError>
where
    F: Fn(&Assignment) -> Result<TupleOutcome, SolverError> + Sync,
{
    let total = tuple_count(ranges);
    let started = Instant::now();
    let mut out = SearchOutcome::empty(SearchStatus::Complete);
    out.stats.tuples_total = total;
    let mut idx = opts.start.min(total);
    let mut remaining = bounds.node_budget.map(u128::from);
    with_pool(opts.workers, || -> Result<(), SolverError> {
        while idx < total {
            let mut batch = BATCH.min(total - idx);
            if let Some(r) = remaining {
                if r == 0 {
                    out.status = SearchStatus::NodeBudget;
                    break;
                }
                batch = batch.min(r);
            }
            let results: Vec<(Assignment, TupleOutcome)> = (idx..idx + batch)
                .into_par_iter()
                .map(|i| {
                    let t = tuple_at(vars, ranges, i);
                    per_tuple(&t).map(|o| (t, o))
                })
                .collect::<Result<_, _>>()?;
            for (t, o) in results {
                out.stats.found += o.records.len() as u64;
                out.records.extend(o.records);
                if let Some(c) = o.pruned {
                    out.stats.pruned += 1;
                    out.pruned.push(PrunedTuple { assignment: t, certificate: c });
                }
            }
            idx += batch;
            out.stats.tuples_done += batch;
            if let Some(r) = remaining.as_mut() {
                *r -= batch;
            }
            if idx < total && bounds.wall_clock.is_some_and(|w| started.elapsed() >= w) {
                out.status = SearchStatus::WallClock;
                break;
            }
        }
        Ok(())
    })?;
    out.next_tuple = idx;
    Ok(out)
}

/// Dispatches on the right-hand side: univariate, binary form, or general bivariate.
pub fn solve(eq: &Equation, bounds: &SearchBounds, opts: &SearchOptions) -> Result<SearchOutcome, SolverError> {
    let bounds = bounds.merged_with(eq);
    match &eq.rhs {
        Rhs::Univariate(_) => solve_univariate(eq, &bounds, opts),
        Rhs::Form(_) => search_binary_form(eq, &bounds, eq.constraints.coprime, opts),
        Rhs::Bivariate(_) => solve_bivariate(eq, &bounds, opts),
    }
}
