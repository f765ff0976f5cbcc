//! Canonical text for polynomials: descending degree, `*` between factors,
//! unit coefficients omitted, `^` for powers.

use std::fmt;
use std::ops::Neg;

use num_traits::{One, Zero};

use super::forms::BiPoly;
use crate::poly::Poly;

fn monomial(vars: &[(&str, u32)]) -> String {
    vars.iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn write_terms<T, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    T: Clone + Zero + One + PartialEq + PartialOrd + fmt::Display + Neg<Output = T>,
    I: IntoIterator<Item = (T, String)>,
{
    let mut first = true;
    for (c, mono) in terms {
        let negative = c < T::zero();
        let mag = if negative { -c } else { c };
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { '-' } else { '+' })?;
        }
        first = false;
        if mono.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{mag}*{mono}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

pub fn write_univariate<T>(f: &mut fmt::Formatter<'_>, p: &Poly<T>, var: &str) -> fmt::Result
where
    T: Clone + Zero + One + PartialEq + PartialOrd + fmt::Display + Neg<Output = T>,
{
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (c.clone(), monomial(&[(var, i as u32)])));
    write_terms(f, terms)
}

pub fn write_bivariate<T>(f: &mut fmt::Formatter<'_>, p: &BiPoly<T>) -> fmt::Result
where
    T: Clone + Zero + One + PartialEq + PartialOrd + fmt::Display + Neg<Output = T>,
{
    let mut keys: Vec<&(u32, u32)> = p.terms().keys().collect();
    keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
    let terms = keys
        .into_iter()
        .map(|k| (p.terms()[k].clone(), monomial(&[("x", k.0), ("y", k.1)])));
    write_terms(f, terms)
}

impl<T> fmt::Display for BiPoly<T>
where
    T: Clone + Zero + One + PartialEq + PartialOrd + fmt::Display + Neg<Output = T>,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bivariate(f, self)
    }
}
