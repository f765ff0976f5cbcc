use std::io::{BufRead, BufReader};
use std::path::PathBuf;

use clap::Args;
use num_bigint::BigInt;
use polyfact::audit::{
    abc_quality, check_stirling_bound, finsler_sweep, instrument_solution, radical_littleo_report, stirling_threshold,
    AbcTriple, AuditReport,
};
use polyfact::{Equation, SolutionRecord};
use serde_json::{json, Value};

use super::parse_equation_text;
use crate::config::Config;
use crate::output::{tagged, Format, Sink};
use crate::{presets, Common, Failure};

const DEFAULT_N_MAX: u64 = 1000;

#[derive(Args, Debug, Clone, Default)]
pub struct AuditArgs {
    /// abc triple a,b,c (repeatable)
    #[arg(long = "triple", allow_hyphen_values = true)]
    pub triples: Vec<String>,
    /// File with one triple per line
    #[arg(long = "triples")]
    pub triples_file: Option<PathBuf>,
    /// JSONL solution records (as written by `solve`); `-` reads stdin
    #[arg(long)]
    pub records: Option<String>,
    /// Check the primorial bound for every n up to N
    #[arg(long)]
    pub finsler: Option<u64>,
    /// Check the factorial lower bound at n1,...,nr
    #[arg(long, value_delimiter = ',')]
    pub stirling: Vec<u64>,
    /// Smallest n from which the diagonal bound holds up to --n-max, for r factorials
    #[arg(long)]
    pub stirling_threshold: Option<usize>,
    /// Radical-to-value ratios along the diagonal of an equation or preset
    #[arg(long)]
    pub littleo: Option<String>,
    #[arg(long)]
    pub n_max: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

fn parse_triple(text: &str) -> Result<AbcTriple, Failure> {
    let parts: Vec<&str> = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    let bad = || Failure::usage(format!("bad triple `{text}`, expected a,b,c"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<BigInt> = parts.iter().map(|p| p.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    AbcTriple::new(&v[0], &v[1], &v[2]).map_err(|e| Failure::usage(format!("triple `{text}`: {e}")))
}

fn skipped(kind: &str, inputs: Value, reason: String) -> AuditReport {
    AuditReport { kind: kind.into(), inputs, metrics: json!({ "error": reason }), holds: None }
}

fn triple_report(t: &AbcTriple) -> AuditReport {
    match abc_quality::<f64>(t) {
        Ok(q) => q.to_report(),
        Err(e) => skipped(
            "abc-quality",
            json!({ "a": t.a.to_string(), "b": t.b.to_string(), "c": t.c.to_string() }),
            e.to_string(),
        ),
    }
}

fn record_report(line: &str, lineno: usize) -> Result<Option<AuditReport>, Failure> {
    let v: Value = serde_json::from_str(line).map_err(|e| Failure::usage(format!("records line {lineno}: {e}")))?;
    if v.get("type").is_some_and(|t| t != "solution") {
        return Ok(None);
    }
    let record: SolutionRecord =
        serde_json::from_value(v).map_err(|e| Failure::usage(format!("records line {lineno}: {e}")))?;
    let eq: Equation = parse_equation_text(&record.equation)?;
    let inputs = json!({ "equation": record.equation, "assignment": record.assignment.iter().map(|(k, v)| (k.clone(), v.to_string())).collect::<std::collections::BTreeMap<_, _>>() });
    Ok(Some(match instrument_solution::<f64>(&eq, &record) {
        Ok(r) => r.to_report(&record),
        Err(e) => skipped("depressed-solution", inputs, e.to_string()),
    }))
}

fn report_cells(r: &AuditReport) -> Vec<String> {
    vec![
        r.kind.clone(),
        r.inputs.to_string(),
        r.metrics.to_string(),
        r.holds.map(|h| h.to_string()).unwrap_or_default(),
    ]
}

pub fn run(args: &AuditArgs, cfg: &Config) -> Result<u8, Failure> {
    let common = args.common.resolve(cfg)?;
    let n_max = cfg.or(args.n_max, "n-max")?.unwrap_or(DEFAULT_N_MAX);
    let mut sink = Sink::open(common.out.as_deref(), common.format, None)?;
    if sink.format() == Format::Csv {
        sink.emit(&Value::Null, &["kind".into(), "inputs".into(), "metrics".into(), "holds".into()])?;
    }
    let mut count = 0usize;
    let mut put = |sink: &mut Sink, r: AuditReport| -> Result<(), Failure> {
        count += 1;
        let line = tagged("audit", serde_json::to_value(&r).expect("serializable"));
        sink.emit(&line, &report_cells(&r))
    };

    let mut triples: Vec<String> = cfg.all("triple").to_vec();
    triples.extend(args.triples.iter().cloned());
    for t in &triples {
        put(&mut sink, triple_report(&parse_triple(t)?))?;
    }
    if let Some(path) = cfg.or(args.triples_file.clone(), "triples")? {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                put(&mut sink, triple_report(&parse_triple(line)?))?;
            }
        }
    }
    if let Some(src) = cfg.or(args.records.clone(), "records")? {
        let reader: Box<dyn BufRead> = if src == "-" {
            Box::new(BufReader::new(std::io::stdin()))
        } else {
            Box::new(BufReader::new(
                std::fs::File::open(&src).map_err(|e| Failure::usage(format!("cannot read {src}: {e}")))?,
            ))
        };
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Failure::usage(format!("cannot read {src}: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            if let Some(r) = record_report(&line, i + 1)? {
                put(&mut sink, r)?;
            }
        }
    }
    if let Some(n) = cfg.or(args.finsler, "finsler")? {
        put(&mut sink, finsler_sweep::<f64>(n).to_report())?;
    }
    if !args.stirling.is_empty() {
        let check = check_stirling_bound::<f64>(&args.stirling);
        put(&mut sink, check.to_report("stirling-bound", json!({ "n": args.stirling })))?;
    }
    if let Some(r) = cfg.or(args.stirling_threshold, "stirling-threshold")? {
        let threshold = stirling_threshold::<f64>(r, n_max);
        put(
            &mut sink,
            AuditReport {
                kind: "stirling-threshold".into(),
                inputs: json!({ "r": r, "n_max": n_max }),
                metrics: json!({ "threshold": threshold }),
                holds: Some(threshold.is_some()),
            },
        )?;
    }
    if let Some(target) = cfg.or(args.littleo.clone(), "littleo")? {
        let text = presets::find(&target).map(|p| p.equation.to_string()).unwrap_or(target);
        let eq = parse_equation_text(&text)?;
        let report = radical_littleo_report::<f64>(&eq.lhs, n_max).map_err(|e| Failure::usage(e.to_string()))?;
        put(&mut sink, report.to_report())?;
    }
    sink.flush()?;
    if count == 0 {
        return Err(Failure::usage("nothing to audit; give --triple, --triples, --records, --finsler, --stirling, --stirling-threshold or --littleo"));
    }
    Ok(0)
}
