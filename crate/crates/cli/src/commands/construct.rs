use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use polyfact::model::Rhs;
use polyfact::solver::{construct_power_family, proportional_family, Proportion};
use serde_json::{json, Value};

use super::{parse_equation_text, solver_failure};
use crate::config::Config;
use crate::output::{tagged, Format, Sink};
use crate::{Common, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProportionArg {
    Diagonal,
    XMultiple,
    YMultiple,
    Auto,
}

impl std::str::FromStr for ProportionArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <ProportionArg as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct ConstructArgs {
    /// Leading coefficient b
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Bases A1,...,Ar of the factorial terms
    #[arg(long, value_delimiter = ',')]
    pub bases: Vec<u64>,
    /// Number of factorials when every base is 1
    #[arg(long)]
    pub r: Option<usize>,
    /// Power d of x^d (power family only)
    #[arg(long)]
    pub degree: Option<u32>,
    /// Family parameter t >= 1
    #[arg(long)]
    pub t: Option<u64>,
    /// Binary form f(x, y); switches to the proportional family
    #[arg(long)]
    pub form: Option<String>,
    #[arg(long, value_enum)]
    pub proportion: Option<ProportionArg>,
    #[command(flatten)]
    pub common: Common,
}

fn cells(r: &polyfact::SolutionRecord) -> Vec<String> {
    let assignment: Vec<String> = r.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
    vec![r.equation.clone(), assignment.join(" "), r.verified.to_string(), serde_json::to_string(&r.certificate).expect("serializable")]
}

pub fn run(args: &ConstructArgs, cfg: &Config) -> Result<u8, Failure> {
    let common = args.common.resolve(cfg)?;
    let b_text = cfg.or(args.b.clone(), "b")?.unwrap_or_else(|| "1".into());
    let b: BigInt = b_text.trim().parse().map_err(|_| Failure::usage(format!("bad --b `{b_text}`")))?;
    let t = cfg.or(args.t, "t")?.unwrap_or(1);
    let bases = if !args.bases.is_empty() {
        args.bases.clone()
    } else if let Some(list) = cfg.string("bases") {
        list.split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| Failure::usage(format!("bad bases `{list}`"))))
            .collect::<Result<_, _>>()?
    } else {
        match cfg.or(args.r, "r")? {
            Some(r) => vec![1; r],
            None => return Err(Failure::usage("give --bases A1,...,Ar or --r")),
        }
    };
    let form = cfg.or(args.form.clone(), "form")?;

    let record = match form {
        None => {
            let d = cfg.or(args.degree, "degree")?.ok_or_else(|| Failure::usage("--degree is required"))?;
            construct_power_family(&b, &bases, d, t).map_err(solver_failure)?
        }
        Some(text) => {
            let eq = parse_equation_text(&format!("1 * n! = {text}"))?;
            let Rhs::Form(f) = &eq.rhs else {
                return Err(Failure::usage(format!("`{text}` is not a binary form")));
            };
            if eq.lhs.b != BigInt::from(1) {
                return Err(Failure::usage("the form must have integer coefficients"));
            }
            let choice = match cfg.or(args.proportion, "proportion")?.unwrap_or(ProportionArg::Auto) {
                ProportionArg::Diagonal => Proportion::Diagonal,
                ProportionArg::XMultiple => Proportion::XMultiple,
                ProportionArg::YMultiple => Proportion::YMultiple,
                ProportionArg::Auto => Proportion::Auto,
            };
            proportional_family(f, &b, &bases, choice, t).map_err(solver_failure)?
        }
    };

    let mut sink = Sink::open(common.out.as_deref(), common.format, None)?;
    if sink.format() == Format::Csv {
        sink.emit(&Value::Null, &["equation".into(), "assignment".into(), "verified".into(), "certificate".into()])?;
    }
    let line = tagged("solution", serde_json::to_value(&record).expect("serializable"));
    sink.emit(&line, &cells(&record))?;
    sink.flush()?;
    if !record.verified {
        return Err(Failure::invariant(format!("construction did not verify: {}", json!(record))));
    }
    Ok(0)
}
