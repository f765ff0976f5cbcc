//! Quadratic-residue sieve for `n! + 1 = x²`.
//!
//! For a prime `p > limit`, `n! + 1` can only be a square when it is a square modulo `p`.
//! Each witness keeps `n! mod p` incrementally; an `n` survives when every witness agrees,
//! and survivors are settled with an exact square root.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{with_pool, SolverError};
use crate::arith::primes::{is_square_mod_prime, mul_mod, primes_above};
use crate::arith::roots::exact_sqrt;
use crate::bhargava::factorial;

/// Default number of witness primes.
pub const DEFAULT_WITNESSES: usize = 25;
/// Survivors above this are reported but not confirmed exactly.
pub const CONFIRM_LIMIT: u64 = 100_000;
const BLOCK: u64 = 1 << 16;
const REJECTED_SAMPLE: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub n: u64,
    /// First witness prime for which `n! + 1` is a non-residue.
    pub witness: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrocardSolution {
    pub n: u64,
    #[serde(with = "crate::serde_big::uint")]
    pub x: BigUint,
}

/// Resumable scan state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrocardScan {
    pub limit: u64,
    pub witnesses: Vec<u64>,
    /// `n_done! mod p` for each witness.
    pub residues: Vec<u64>,
    pub n_done: u64,
    pub candidates: Vec<u64>,
    pub rejected_sample: Vec<Rejection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub limit: u64,
    pub witnesses: Vec<u64>,
    pub scanned_to: u64,
    pub complete: bool,
    /// Every `n` that passed all witnesses.
    pub candidates: Vec<u64>,
    pub confirmed: Vec<BrocardSolution>,
    /// Candidates too large to check exactly.
    pub unconfirmed: Vec<u64>,
    pub rejected_sample: Vec<Rejection>,
}

impl BrocardScan {
    pub fn new(limit: u64, witness_count: usize) -> Result<Self, SolverError> {
        if limit < 2 {
            return Err(SolverError::LimitTooSmall(limit));
        }
        if witness_count == 0 {
            return Err(SolverError::Domain("at least one witness prime is needed".into()));
        }
        let witnesses = primes_above(limit, witness_count);
        Ok(BrocardScan {
            limit,
            residues: vec![1; witnesses.len()],
            witnesses,
            n_done: 0,
            candidates: Vec::new(),
            rejected_sample: Vec::new(),
        })
    }

    pub fn is_complete(&self) -> bool {
        self.n_done >= self.limit
    }

    /// Scans `n` up to `min(upto, limit)`.
    pub fn advance(&mut self, upto: u64, workers: usize) {
        let target = upto.min(self.limit);
        while self.n_done < target {
            let lo = self.n_done + 1;
            let hi = (self.n_done + BLOCK).min(target);
            let len = (hi - lo + 1) as usize;
            let results: Vec<(u64, Vec<bool>)> = with_pool(workers, || {
                self.witnesses
                    .par_iter()
                    .zip(self.residues.par_iter())
                    .map(|(&p, &start)| {
                        let mut r = start;
                        let mut pass = Vec::with_capacity(len);
                        for n in lo..=hi {
                            r = mul_mod(r, n % p, p);
                            pass.push(is_square_mod_prime((r + 1) % p, p));
                        }
                        (r, pass)
                    })
                    .collect()
            });
            for i in 0..len {
                let n = lo + i as u64;
                match results.iter().position(|(_, pass)| !pass[i]) {
                    None => self.candidates.push(n),
                    Some(w) if self.rejected_sample.len() < REJECTED_SAMPLE => {
                        self.rejected_sample.push(Rejection { n, witness: self.witnesses[w] })
                    }
                    Some(_) => {}
                }
            }
            self.residues = results.into_iter().map(|(r, _)| r).collect();
            self.n_done = hi;
        }
    }

    pub fn report(&self) -> ScanReport {
        let mut confirmed = Vec::new();
        let mut unconfirmed = Vec::new();
        for &n in &self.candidates {
            if n > CONFIRM_LIMIT {
                unconfirmed.push(n);
                continue;
            }
            if let Some(x) = exact_sqrt(&(factorial(n) + 1u32)) {
                confirmed.push(BrocardSolution { n, x });
            }
        }
        ScanReport {
            limit: self.limit,
            witnesses: self.witnesses.clone(),
            scanned_to: self.n_done,
            complete: self.is_complete(),
            candidates: self.candidates.clone(),
            confirmed,
            unconfirmed,
            rejected_sample: self.rejected_sample.clone(),
        }
    }
}

/// Full scan of `1 ≤ n ≤ limit` with the given number of witness primes.
pub fn scan_brocard(limit: u64, witness_count: usize) -> Result<ScanReport, SolverError> {
    let mut scan = BrocardScan::new(limit, witness_count)?;
    scan.advance(limit, 0);
    Ok(scan.report())
}
