use std::time::Instant;

use clap::Args;
use polyfact::solver::brocard::BrocardScan;
use serde_json::Value;

use super::solver_failure;
use crate::checkpoint::{run_hash, Checkpoint};
use crate::config::Config;
use crate::output::{tagged, Sink};
use crate::{Budget, Common, Failure, EXIT_PARTIAL};

const DEFAULT_WITNESSES: usize = 25;
/// n values per chunk when checkpointing without an explicit interval.
const DEFAULT_CHUNK: u64 = 1 << 18;

#[derive(Args, Debug, Clone, Default)]
pub struct ScanArgs {
    /// Scan 1 <= n <= LIMIT
    #[arg(long)]
    pub limit: Option<u64>,
    /// Number of witness primes above the limit
    #[arg(long)]
    pub witnesses: Option<usize>,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub budget: Budget,
}

pub fn run(args: &ScanArgs, cfg: &Config) -> Result<u8, Failure> {
    let limit = cfg.or(args.limit, "limit")?.ok_or_else(|| Failure::usage("--limit is required"))?;
    let witnesses = cfg.or(args.witnesses, "witnesses")?.unwrap_or(DEFAULT_WITNESSES);
    let common = args.common.resolve(cfg)?;
    let budget = args.budget.resolve(cfg)?;

    let hash = run_hash(&["scan-brocard".into(), limit.to_string(), witnesses.to_string()]);
    let resumed = match (&budget.checkpoint, budget.resume) {
        (Some(p), true) => Checkpoint::load(p, "scan-brocard", &hash)?,
        _ => None,
    };
    let mut cp = match resumed {
        Some(cp) if cp.scan.is_some() => cp,
        Some(_) => return Err(Failure::usage("checkpoint has no scan state")),
        None => {
            let mut cp = Checkpoint::new("scan-brocard", hash);
            cp.scan = Some(BrocardScan::new(limit, witnesses).map_err(solver_failure)?);
            cp
        }
    };

    let chunk = budget.every.unwrap_or(if budget.checkpoint.is_some() { DEFAULT_CHUNK } else { u64::MAX });
    let started = Instant::now();
    let mut spent: u64 = 0;
    loop {
        let scan = cp.scan.as_mut().expect("scan state");
        if scan.is_complete() {
            break;
        }
        if budget.nodes.is_some_and(|n| spent >= n) || budget.seconds.is_some_and(|s| started.elapsed() >= s) {
            break;
        }
        let mut step = chunk;
        if let Some(n) = budget.nodes {
            step = step.min(n - spent);
        }
        let before = scan.n_done;
        scan.advance(before.saturating_add(step), common.workers);
        spent += scan.n_done - before;
        cp.tuples_done = scan.n_done as u128;
        cp.next_tuple = scan.n_done as u128 + 1;
        if let Some(path) = &budget.checkpoint {
            cp.save(path)?;
        }
    }

    let report = cp.scan.as_ref().expect("scan state").report();
    let mut sink = Sink::open(common.out.as_deref(), common.format, None)?;
    let line = tagged("brocard-scan", serde_json::to_value(&report).expect("serializable"));
    match sink.format() {
        crate::output::Format::Jsonl => sink.emit(&line, &[])?,
        crate::output::Format::Csv => {
            sink.note(&line)?;
            sink.emit(&Value::Null, &["n".into(), "x".into()])?;
            for s in &report.confirmed {
                sink.emit(&Value::Null, &[s.n.to_string(), s.x.to_string()])?;
            }
        }
    }
    sink.flush()?;
    if !report.unconfirmed.is_empty() {
        eprintln!("polyfact: warning: {} candidates above the exact-check limit", report.unconfirmed.len());
    }
    Ok(if report.complete { 0 } else { EXIT_PARTIAL })
}
