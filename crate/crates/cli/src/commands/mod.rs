pub mod audit;
pub mod construct;
pub mod misc;
pub mod scan;
pub mod solve;

use std::collections::BTreeMap;

use polyfact::{Equation, SolverError};

use crate::config::Config;
use crate::presets;
use crate::Failure;

pub fn solver_failure(e: SolverError) -> Failure {
    Failure::usage(e.to_string())
}

/// `VAR=LO..HI`, or `VAR=V` for a single value.
pub fn parse_bound(text: &str) -> Result<(String, (i64, i64)), Failure> {
    let bad = || Failure::usage(format!("bad bound `{text}`, expected VAR=LO..HI"));
    let (var, range) = text.split_once('=').ok_or_else(bad)?;
    let var = var.trim();
    if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(bad());
    }
    let (lo, hi) = match range.split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let v: i64 = range.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(Failure::usage(format!("empty range in bound `{text}`")));
    }
    Ok((var.to_string(), (lo, hi)))
}

/// `LO..HI` or a single number.
pub fn parse_span(text: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::usage(format!("bad range `{text}`, expected LO..HI or N"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let v: u64 = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn parse_equation_text(text: &str) -> Result<Equation, Failure> {
    text.parse::<Equation>().map_err(|e| Failure::usage(format!("equation `{text}`: {e}")))
}

/// An equation given as DSL text or a preset name, with the preset's default ranges.
pub struct EquationChoice {
    pub equation: Equation,
    pub preset: Option<&'static presets::Preset>,
}

impl EquationChoice {
    pub fn resolve(eq: Option<&str>, preset: Option<&str>, cfg: &Config) -> Result<Self, Failure> {
        let eq = eq.map(str::to_string).or_else(|| if preset.is_none() { cfg.string("eq") } else { None });
        let preset = preset.map(str::to_string).or_else(|| if eq.is_none() { cfg.string("preset") } else { None });
        match (eq, preset) {
            (Some(_), Some(_)) => Err(Failure::usage("give either --eq or --preset, not both")),
            (None, None) => Err(Failure::usage("an equation is required (--eq or --preset)")),
            (Some(text), None) => Ok(EquationChoice { equation: parse_equation_text(&text)?, preset: None }),
            (None, Some(name)) => {
                let p = presets::find(&name).ok_or_else(|| {
                    let names: Vec<&str> = presets::PRESETS.iter().map(|p| p.name).collect();
                    Failure::usage(format!("unknown preset `{name}`; known presets: {}", names.join(", ")))
                })?;
                Ok(EquationChoice { equation: parse_equation_text(p.equation)?, preset: Some(p) })
            }
        }
    }

    /// Preset ranges, then the equation's own, then the config file, then the command line.
    pub fn bounds(&self, cfg: &Config, cli: &[String]) -> Result<BTreeMap<String, (i64, i64)>, Failure> {
        let mut out = BTreeMap::new();
        if let Some(p) = self.preset {
            for (v, lo, hi) in p.bounds {
                out.insert(v.to_string(), (*lo, *hi));
            }
        }
        out.extend(self.equation.constraints.bounds.clone());
        for b in cfg.all("bound").iter().chain(cli) {
            let (v, r) = parse_bound(b)?;
            out.insert(v, r);
        }
        Ok(out)
    }
}
