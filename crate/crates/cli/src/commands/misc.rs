use clap::Args;
use num_bigint::BigInt;
use polyfact::bhargava::{bhargava_factorial, bhargava_factorial_by_orderings};
use polyfact::model::Rhs;
use polyfact::solver::prune::prime_is_admissible;
use polyfact::solver::prune_no_root_mod_q;
use polyfact::SetSpec;
use serde_json::{json, Value};

use super::{parse_equation_text, parse_span};
use crate::config::Config;
use crate::output::{tagged, Format, Sink};
use crate::{Common, Failure};

/// Largest modulus whose residue pairs are enumerated in full.
const FULL_RESIDUE_LIMIT: u64 = 3000;

#[derive(Args, Debug, Clone, Default)]
pub struct BhargavaArgs {
    /// Z, AP(A,b) or {e1,e2,...}
    #[arg(long)]
    pub set: Option<String>,
    /// N or LO..HI
    #[arg(long)]
    pub n: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

pub fn run_bhargava(args: &BhargavaArgs, cfg: &Config) -> Result<u8, Failure> {
    let common = args.common.resolve(cfg)?;
    let set_text = cfg.or(args.set.clone(), "set")?.unwrap_or_else(|| "Z".into());
    let set: SetSpec = set_text.parse().map_err(|e| Failure::usage(format!("{e}")))?;
    let (lo, hi) = parse_span(&cfg.or(args.n.clone(), "n")?.ok_or_else(|| Failure::usage("--n is required"))?)?;

    let mut sink = Sink::open(common.out.as_deref(), common.format, None)?;
    if sink.format() == Format::Csv {
        sink.emit(&Value::Null, &["set".into(), "n".into(), "value".into(), "orderings_agree".into()])?;
    }
    let mut code = 0;
    for n in lo..=hi {
        let value = bhargava_factorial(&set, n).map_err(|e| Failure::usage(format!("n = {n}: {e}")))?;
        let check = bhargava_factorial_by_orderings(&set, n).ok().map(|v| v == value);
        if check == Some(false) {
            code = 4;
        }
        let line = tagged(
            "bhargava",
            json!({ "set": set.to_string(), "n": n, "value": value.to_string(), "orderings_agree": check }),
        );
        let cells = [
            set.to_string(),
            n.to_string(),
            value.to_string(),
            check.map(|c| c.to_string()).unwrap_or_default(),
        ];
        sink.emit(&line, &cells)?;
    }
    sink.flush()?;
    if code != 0 {
        return Err(Failure::invariant("closed form and p-orderings disagree"));
    }
    Ok(0)
}

#[derive(Args, Debug, Clone, Default)]
pub struct PruneTestArgs {
    /// Binary form f(x, y), e.g. "x^2 + y^2"
    #[arg(long)]
    pub form: Option<String>,
    /// Odd prime q
    #[arg(long)]
    pub q: Option<u64>,
    /// Valuation v_q(N) to rule out
    #[arg(long)]
    pub v: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

fn mod_u64(n: &BigInt, m: u64) -> u64 {
    let r = n % BigInt::from(m);
    let r = if r < BigInt::from(0) { r + BigInt::from(m) } else { r };
    u64::try_from(&r).expect("reduced")
}

/// Enumerates residue pairs and counts those where `q | f` but `q^d ∤ f`.
fn residue_check(f: &polyfact::BinaryForm, q: u64) -> Value {
    let d = f.degree() as u32;
    let qd = q.checked_pow(d);
    let (modulus, full) = match qd {
        Some(m) if m <= FULL_RESIDUE_LIMIT => (m, true),
        _ => (q, false),
    };
    let mut divisible = 0u64;
    let mut counterexamples = 0u64;
    let mut first = Value::Null;
    for x in 0..modulus {
        for y in 0..modulus {
            let v = f.eval(&BigInt::from(x), &BigInt::from(y));
            if mod_u64(&v, q) != 0 {
                continue;
            }
            divisible += 1;
            // without the full modulus, q | x and q | y stands in for q^d | f
            let ok = if full { mod_u64(&v, modulus) == 0 } else { x % q == 0 && y % q == 0 };
            if !ok {
                counterexamples += 1;
                if first.is_null() {
                    first = json!([x, y]);
                }
            }
        }
    }
    json!({
        "modulus": modulus,
        "full": full,
        "pairs": modulus * modulus,
        "divisible_by_q": divisible,
        "counterexamples": counterexamples,
        "first_counterexample": first,
    })
}

pub fn run_prune_test(args: &PruneTestArgs, cfg: &Config) -> Result<u8, Failure> {
    let common = args.common.resolve(cfg)?;
    let text = cfg.or(args.form.clone(), "form")?.ok_or_else(|| Failure::usage("--form is required"))?;
    let q = cfg.or(args.q, "q")?.ok_or_else(|| Failure::usage("--q is required"))?;
    let v = cfg.or(args.v, "v")?.unwrap_or(1);
    let eq = parse_equation_text(&format!("1 * n! = {text}"))?;
    let Rhs::Form(f) = &eq.rhs else {
        return Err(Failure::usage(format!("`{text}` is not a binary form")));
    };
    let certificate = prune_no_root_mod_q(f, q, v);
    let admissible = q != 2 && polyfact::arith::is_prime_u64(q) && prime_is_admissible(f, q);
    let residues = residue_check(f, q);
    let consistent = !admissible || residues["counterexamples"] == 0;
    let line = tagged(
        "prune-test",
        json!({
            "form": text,
            "degree": f.degree(),
            "q": q,
            "v": v,
            "admissible": admissible,
            "certificate": certificate,
            "residues": residues,
        }),
    );
    let mut sink = Sink::open(common.out.as_deref(), common.format, None)?;
    match sink.format() {
        Format::Jsonl => sink.emit(&line, &[])?,
        Format::Csv => {
            sink.emit(&Value::Null, &["q".into(), "v".into(), "admissible".into(), "certificate".into(), "counterexamples".into()])?;
            let cells = [
                q.to_string(),
                v.to_string(),
                admissible.to_string(),
                certificate.as_ref().map(|c| serde_json::to_string(c).expect("serializable")).unwrap_or_default(),
                line["residues"]["counterexamples"].to_string(),
            ];
            sink.emit(&Value::Null, &cells)?;
        }
    }
    sink.flush()?;
    if !consistent {
        return Err(Failure::invariant(format!("q = {q} is admissible but the residue check found counterexamples")));
    }
    Ok(0)
}
