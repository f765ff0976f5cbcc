use std::collections::BTreeMap;
use std::time::Instant;

use clap::Args;
use polyfact::solver::{self, SearchStatus};
use polyfact::{SearchBounds, SearchOptions, SolutionRecord};
use serde_json::{json, Value};

use super::{solver_failure, EquationChoice};
use crate::checkpoint::{run_hash, Checkpoint};
use crate::config::Config;
use crate::output::{tagged, Format, Sink};
use crate::{presets, Budget, Common, Failure, EXIT_PARTIAL};

/// Tuples per chunk when checkpointing without an explicit interval.
const DEFAULT_CHUNK: u64 = 4096;

#[derive(Args, Debug, Clone, Default)]
pub struct SolveArgs {
    /// Equation in the DSL, e.g. "1 * n! = x^2 - 1"
    #[arg(long)]
    pub eq: Option<String>,
    /// Built-in equation (see --list-presets)
    #[arg(long)]
    pub preset: Option<String>,
    /// Print the built-in equations and exit
    #[arg(long)]
    pub list_presets: bool,
    /// Search range VAR=LO..HI (repeatable)
    #[arg(long = "bound")]
    pub bounds: Vec<String>,
    /// Evaluate every tuple instead of applying prune certificates first
    #[arg(long)]
    pub no_prune: bool,
    /// Also write one line per pruned tuple
    #[arg(long)]
    pub emit_pruned: bool,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub budget: Budget,
}

fn list_presets() -> u8 {
    for p in presets::PRESETS {
        let bounds: Vec<String> = p.bounds.iter().map(|(v, lo, hi)| format!("{v}={lo}..{hi}")).collect();
        println!("{:<26} {:<55} {:<28} {}", p.name, p.equation, bounds.join(" "), p.about);
    }
    0
}

fn columns(eq: &polyfact::Equation) -> Vec<String> {
    let mut cols = eq.lhs.variables();
    cols.push("x".into());
    if eq.rhs.uses_y() {
        cols.push("y".into());
    }
    cols
}

fn certificate_text(c: &polyfact::Certificate) -> String {
    serde_json::to_string(c).expect("serializable")
}

fn record_cells(cols: &[String], r: &SolutionRecord) -> Vec<String> {
    let mut cells: Vec<String> =
        cols.iter().map(|c| r.get(c).map(ToString::to_string).unwrap_or_default()).collect();
    cells.push(r.verified.to_string());
    cells.push(certificate_text(&r.certificate));
    cells
}

pub fn run(args: &SolveArgs, cfg: &Config) -> Result<u8, Failure> {
    if args.list_presets {
        return Ok(list_presets());
    }
    let choice = EquationChoice::resolve(args.eq.as_deref(), args.preset.as_deref(), cfg)?;
    let eq = &choice.equation;
    let ranges = choice.bounds(cfg, &args.bounds)?;
    let common = args.common.resolve(cfg)?;
    let budget = args.budget.resolve(cfg)?;
    let prune = !(args.no_prune || cfg.flag("no-prune")?);
    let emit_pruned = args.emit_pruned || cfg.flag("emit-pruned")?;
    if budget.checkpoint.is_some() && common.out.is_none() {
        return Err(Failure::usage("--checkpoint needs --out"));
    }

    let bounds_text: Vec<String> = ranges.iter().map(|(v, (lo, hi))| format!("{v}={lo}..{hi}")).collect();
    let hash = run_hash(&[
        "solve".into(),
        eq.to_string(),
        bounds_text.join(","),
        format!("prune={prune}"),
        format!("emit-pruned={emit_pruned}"),
        format!("format={:?}", common.format),
    ]);
    let resumed = match (&budget.checkpoint, budget.resume) {
        (Some(p), true) => Checkpoint::load(p, "solve", &hash)?,
        _ => None,
    };
    let fresh = resumed.is_none();
    let mut cp = resumed.unwrap_or_else(|| Checkpoint::new("solve", hash.clone()));
    let mut sink = Sink::open(common.out.as_deref(), common.format, (!fresh).then_some(cp.output_bytes))?;

    let cols = columns(eq);
    if fresh {
        let header = tagged(
            "equation",
            json!({
                "equation": eq.to_string(),
                "rhs": eq.rhs.kind(),
                "bounds": ranges.iter().map(|(v, r)| (v.clone(), json!([r.0, r.1]))).collect::<BTreeMap<_, _>>(),
                "prune": prune,
            }),
        );
        let mut names = cols.clone();
        names.extend(["verified".to_string(), "certificate".to_string()]);
        match sink.format() {
            Format::Jsonl => sink.emit(&header, &[])?,
            Format::Csv => {
                sink.note(&header)?;
                sink.emit(&Value::Null, &names)?;
            }
        }
    }

    let chunk = budget.every.unwrap_or(if budget.checkpoint.is_some() { DEFAULT_CHUNK } else { u64::MAX });
    let started = Instant::now();
    let mut spent: u64 = 0;
    let mut total: u128 = 0;
    let status = loop {
        let mut step = chunk;
        if let Some(n) = budget.nodes {
            if spent >= n {
                break SearchStatus::NodeBudget;
            }
            step = step.min(n - spent);
        }
        let wall_clock = match budget.seconds {
            Some(s) => {
                let left = s.saturating_sub(started.elapsed());
                if left.is_zero() && cp.next_tuple > 0 {
                    break SearchStatus::WallClock;
                }
                Some(left)
            }
            None => None,
        };
        let sb = SearchBounds {
            ranges: ranges.clone(),
            node_budget: (step != u64::MAX).then_some(step),
            wall_clock,
        };
        let opts = SearchOptions { workers: common.workers, prune, start: cp.next_tuple };
        let outcome = solver::solve(eq, &sb, &opts).map_err(solver_failure)?;
        total = outcome.stats.tuples_total;

        for r in &outcome.records {
            match r.recheck(eq) {
                Ok(true) => {}
                Ok(false) => return Err(Failure::invariant(format!("record failed its recheck: {r:?}"))),
                Err(e) => return Err(Failure::invariant(format!("record cannot be rechecked ({e}): {r:?}"))),
            }
            let line = tagged("solution", serde_json::to_value(r).expect("serializable"));
            sink.emit(&line, &record_cells(&cols, r))?;
        }
        if emit_pruned {
            for p in &outcome.pruned {
                let line = tagged("pruned", serde_json::to_value(p).expect("serializable"));
                let mut cells: Vec<String> =
                    cols.iter().map(|c| p.assignment.get(c).map(ToString::to_string).unwrap_or_default()).collect();
                cells.push("pruned".into());
                cells.push(certificate_text(&p.certificate));
                sink.emit(&line, &cells)?;
            }
        }
        spent = spent.saturating_add(u64::try_from(outcome.stats.tuples_done).unwrap_or(u64::MAX));
        cp.next_tuple = outcome.next_tuple;
        cp.tuples_done += outcome.stats.tuples_done;
        cp.found += outcome.stats.found;
        cp.pruned += outcome.stats.pruned;
        for w in outcome.warnings {
            if !cp.warnings.contains(&w) {
                cp.warnings.push(w);
            }
        }
        let bytes = sink.flush()?;
        if let Some(path) = &budget.checkpoint {
            cp.output_bytes = bytes.unwrap_or(0);
            cp.save(path)?;
        }
        match outcome.status {
            SearchStatus::Complete => break SearchStatus::Complete,
            SearchStatus::WallClock => break SearchStatus::WallClock,
            SearchStatus::NodeBudget if cp.next_tuple >= total => break SearchStatus::Complete,
            SearchStatus::NodeBudget => {}
        }
    };

    let summary = tagged(
        "summary",
        json!({
            "found": cp.found,
            "pruned": cp.pruned,
            "tuples_total": total.to_string(),
            "tuples_done": cp.tuples_done.to_string(),
            "status": status,
            "exhausted": status == SearchStatus::Complete,
            "warnings": cp.warnings,
        }),
    );
    sink.note(&summary)?;
    sink.flush()?;
    for w in &cp.warnings {
        eprintln!("polyfact: warning: {w}");
    }
    Ok(if status == SearchStatus::Complete { 0 } else { EXIT_PARTIAL })
}
