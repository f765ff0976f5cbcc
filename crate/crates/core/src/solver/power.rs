//! Perfect-power equations `LHS = x^d`: exhaustive search and the explicit infinite
//! family for `d ≤ r`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::prune::prune_bertrand;
use super::{drive, Certificate, SearchBounds, SearchOptions, SearchOutcome, SearchStatus, SolutionRecord, SolverError, TupleOutcome};
use crate::arith::factor::factorize;
use crate::arith::primes::small_primes;
use crate::arith::roots::integer_nth_root;
use crate::arith::valuation::legendre_unchecked;
use crate::model::{Assignment, BinaryForm, Equation, FactorialProductLHS, FactorialTerm, Rhs};
use crate::poly::Poly;

/// Largest `m` for which constructed solutions are written out digit by digit.
pub const MATERIALIZE_LIMIT: u64 = 2000;

fn power_equation(lhs: &FactorialProductLHS, d: u32) -> Equation {
    Equation {
        lhs: lhs.clone(),
        rhs: Rhs::Univariate(Poly::monomial(BigInt::one(), d as usize)),
        constraints: Default::default(),
    }
}

/// All tuples in range with `LHS = x^d`, both signs of `x` listed when `d` is even.
pub fn search_power(
    lhs: &FactorialProductLHS,
    d: u32,
    bounds: &SearchBounds,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SolverError> {
    if d == 0 {
        return Err(SolverError::Domain("degree must be positive".into()));
    }
    let (vars, ranges) = bounds.lhs_ranges(lhs)?;
    let text = power_equation(lhs, d).to_string();
    if lhs.b.is_negative() && d % 2 == 0 {
        let mut out = SearchOutcome::empty(SearchStatus::Complete);
        out.stats.tuples_total = super::tuple_count(&ranges);
        out.stats.tuples_done = out.stats.tuples_total;
        out.next_tuple = out.stats.tuples_total;
        out.warnings.push("b < 0 and d even: the left-hand side is never a d-th power".into());
        return Ok(out);
    }
    let mut out = drive(&vars, &ranges, bounds, opts, |t| {
        if opts.prune {
            if let Some(c) = prune_bertrand(lhs, t, d as u64) {
                return Ok(TupleOutcome { records: vec![], pruned: Some(c) });
            }
        }
        let m = lhs.eval(t)?;
        if m.is_negative() && d % 2 == 0 {
            return Ok(TupleOutcome::default());
        }
        let (root, exact) = integer_nth_root(m.magnitude(), d);
        if !exact {
            return Ok(TupleOutcome::default());
        }
        let root = BigInt::from(root);
        let xs = if m.is_negative() {
            vec![-root]
        } else if d % 2 == 0 && !root.is_zero() {
            vec![-root.clone(), root]
        } else {
            vec![root]
        };
        let records = xs.iter().map(|x| SolutionRecord::exact(&text, t, &[("x", x)])).collect();
        Ok(TupleOutcome { records, pruned: None })
    })?;
    if d == 1 {
        out.warnings.push("d = 1: every tuple is a solution; only the tuples in range are listed".into());
    }
    Ok(out)
}

/// `x = sign · P^s · m! · K^t`.
#[derive(Clone, Debug)]
struct PowerWitness {
    negative: bool,
    p: BigInt,
    s: BigInt,
    m: BigInt,
    k: BigInt,
    t: u64,
}

impl PowerWitness {
    fn closed_form(&self) -> String {
        format!("{}{}^{} * {}! * {}^{}", if self.negative { "-" } else { "" }, self.p, self.s, self.m, self.k, self.t)
    }

    fn materialize(&self) -> Option<BigInt> {
        let m = self.m.to_u64().filter(|&m| m <= MATERIALIZE_LIMIT)?;
        let s = self.s.to_usize()?;
        let v = num_traits::pow(self.p.clone(), s)
            * BigInt::from(crate::bhargava::factorial(m))
            * num_traits::pow(self.k.clone(), self.t as usize);
        Some(if self.negative { -v } else { v })
    }
}

/// Formal product `sign · (m!)^e · ∏ p^{e_p}` with unbounded exponents.
#[derive(Debug, PartialEq, Eq, Default)]
struct Formal {
    negative: bool,
    m_fact: u64,
    primes: BTreeMap<BigUint, BigInt>,
}

impl Formal {
    fn add(&mut self, n: &BigInt, times: &BigInt) -> Result<(), SolverError> {
        if n.is_negative() {
            self.negative ^= times.is_odd();
        }
        for (p, e) in factorize(n)?.factors() {
            *self.primes.entry(p.clone()).or_default() += BigInt::from(*e) * times;
        }
        Ok(())
    }

    fn normalized(mut self) -> Self {
        self.primes.retain(|_, e| !e.is_zero());
        self
    }
}

/// Checks `b · ∏ nᵢ! Aᵢ^{nᵢ} = x^d` without expanding `m!`.
///
/// Every `nᵢ` must be `m`, `m + 1`, or small enough to factor its factorial directly.
fn verify_formally(b: &BigInt, a: &[u64], n: &[BigInt], d: u32, w: &PowerWitness) -> Result<bool, SolverError> {
    let one = BigInt::one();
    let mut lhs = Formal::default();
    lhs.add(b, &one)?;
    let m1 = &w.m + 1;
    for (ni, ai) in n.iter().zip(a) {
        if *ni == w.m {
            lhs.m_fact += 1;
        } else if *ni == m1 {
            lhs.m_fact += 1;
            lhs.add(&m1, &one)?;
        } else {
            let Some(small) = ni.to_u64().filter(|&v| v <= small_primes().limit()) else {
                return Ok(false);
            };
            for &p in small_primes().range(0, small) {
                *lhs.primes.entry(BigUint::from(p)).or_default() += BigInt::from(legendre_unchecked(small, p));
            }
        }
        lhs.add(&BigInt::from(*ai), ni)?;
    }
    let dd = BigInt::from(d);
    let mut rhs = Formal { negative: w.negative && d % 2 == 1, m_fact: d as u64, ..Default::default() };
    rhs.add(&w.p, &(&w.s * &dd))?;
    rhs.add(&w.k, &(BigInt::from(w.t) * &dd))?;
    Ok(lhs.normalized() == rhs.normalized())
}

struct Family {
    lhs: FactorialProductLHS,
    n: Vec<BigInt>,
    witness: PowerWitness,
    r_signed: BigInt,
    verified: bool,
}

fn build_family(b: &BigInt, a: &[u64], d: u32, t: u64) -> Result<Family, SolverError> {
    let r = a.len();
    if d < 2 {
        return Err(SolverError::Domain(format!("degree {d} < 2")));
    }
    if d as usize > r {
        return Err(SolverError::Domain(format!("d = {d} exceeds the number of factorial terms r = {r}")));
    }
    if b.is_zero() {
        return Err(SolverError::Domain("b = 0".into()));
    }
    if b.is_negative() && d % 2 == 0 {
        return Err(SolverError::Domain("b < 0 with d even has no solutions".into()));
    }
    if t == 0 {
        return Err(SolverError::Domain("t must be positive".into()));
    }
    if a.contains(&0) {
        return Err(SolverError::Domain("bases must be positive".into()));
    }
    let du = d as usize;
    let big = |v: u64| BigInt::from(v);
    let p: BigInt = a[..du].iter().map(|&v| big(v)).product();
    let tail: BigInt = a[du - 1..].iter().map(|&v| big(v)).product();
    let r_abs = b.abs() * num_traits::pow(p.clone(), du - 1) * tail;
    let k = &r_abs * big(d as u64);
    let exponent = (t as usize)
        .checked_mul(du)
        .and_then(|v| v.checked_sub(1))
        .ok_or_else(|| SolverError::Domain("t too large".into()))?;
    let s: BigInt = num_traits::pow(k.clone(), exponent) - 1;
    let m: BigInt = big(d as u64) * (&s + 1) - 1;
    let mut n = vec![m.clone(); du - 1];
    n.push(&m + 1);
    n.extend(std::iter::repeat_n(BigInt::one(), r - du));
    let terms = (0..r).map(|i| FactorialTerm::with_base(&format!("n{}", i + 1), a[i])).collect();
    let lhs = FactorialProductLHS::new(b.clone(), terms, vec![])?;
    let witness = PowerWitness { negative: b.is_negative(), p, s, m, k, t };
    let mut verified = verify_formally(b, a, &n, d, &witness)?;
    if let Some(x) = witness.materialize() {
        let tuple: Assignment = lhs
            .variables()
            .into_iter()
            .zip(&n)
            .map(|(v, ni)| (v, ni.to_u64().expect("materialized")))
            .collect();
        verified &= lhs.eval(&tuple)? == num_traits::pow(x, du);
    }
    let r_signed = if b.is_negative() { -r_abs } else { r_abs };
    Ok(Family { lhs, n, witness, r_signed, verified })
}

fn family_assignment(f: &Family) -> BTreeMap<String, BigInt> {
    f.lhs.variables().into_iter().zip(f.n.iter().cloned()).collect()
}

/// The explicit solution of `b · ∏ nᵢ! Aᵢ^{nᵢ} = x^d` with parameter `t`.
///
/// With `R = b·(A₁···A_d)^{d-1}·A_d···A_r`, `s = (Rd)^{td-1} - 1` and `m = d(s+1) - 1`, the
/// tuple `n₁ = … = n_{d-1} = m`, `n_d = m + 1`, `n_{d+1} = … = n_r = 1` has
/// `x = (A₁···A_d)^s · m! · (Rd)^t`. For `b < 0` (odd `d`) the family is built from `|b|`
/// and `x` is negated, which works for every `t`.
pub fn construct_power_family(b: &BigInt, a: &[u64], d: u32, t: u64) -> Result<SolutionRecord, SolverError> {
    let fam = build_family(b, a, d, t)?;
    let mut assignment = family_assignment(&fam);
    if let Some(x) = fam.witness.materialize() {
        assignment.insert("x".into(), x);
    }
    Ok(SolutionRecord {
        equation: power_equation(&fam.lhs, d).to_string(),
        assignment,
        verified: fam.verified,
        certificate: Certificate::Construction {
            t,
            r: fam.r_signed,
            s: fam.witness.s.clone(),
            m: fam.witness.m.clone(),
            x_closed_form: fam.witness.closed_form(),
        },
    })
}

/// How `x` and `y` are tied together in [`proportional_family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proportion {
    /// `x = y`, needs a positive coefficient sum.
    Diagonal,
    /// `x = s·y`, needs `a_d > 0`.
    XMultiple,
    /// `y = s·x`, needs `a_0 > 0`.
    YMultiple,
    /// First applicable of the three.
    Auto,
}

fn smallest_positive(f: impl Fn(&BigInt) -> BigInt, limit: &BigInt) -> Option<(BigInt, BigInt)> {
    let mut s = BigInt::one();
    while &s <= limit {
        let v = f(&s);
        if v.is_positive() {
            return Some((s, v));
        }
        s += 1;
    }
    None
}

/// Solutions of `b · ∏ nᵢ! Aᵢ^{nᵢ} = f(x, y)` obtained by fixing the ratio of `x` and `y`.
///
/// Along the chosen line `f` becomes `S·w^d`; the power family for `b·S^{d-1}` gives `X`
/// with `X^d = b·S^{d-1}·∏`, and `w = X / S`.
pub fn proportional_family(
    f: &BinaryForm,
    b: &BigInt,
    a: &[u64],
    choice: Proportion,
    t: u64,
) -> Result<SolutionRecord, SolverError> {
    if !b.is_positive() {
        return Err(SolverError::Hypothesis("b must be positive".into()));
    }
    let d = f.degree() as u32;
    let limit: BigInt = f.coeffs().iter().map(|c| c.abs()).sum::<BigInt>() + 2;
    let diagonal = || {
        let s = f.coefficient_sum();
        s.is_positive().then(|| (Proportion::Diagonal, BigInt::one(), s))
    };
    let x_multiple = || {
        if !f.a_d().is_positive() {
            return None;
        }
        smallest_positive(|s| f.eval(s, &BigInt::one()), &limit).map(|(s, v)| (Proportion::XMultiple, s, v))
    };
    let y_multiple = || {
        if !f.a_0().is_positive() {
            return None;
        }
        smallest_positive(|s| f.eval(&BigInt::one(), s), &limit).map(|(s, v)| (Proportion::YMultiple, s, v))
    };
    let picked = match choice {
        Proportion::Diagonal => diagonal(),
        Proportion::XMultiple => x_multiple(),
        Proportion::YMultiple => y_multiple(),
        Proportion::Auto => diagonal().or_else(x_multiple).or_else(y_multiple),
    };
    let (kind, s, coeff) = picked.ok_or_else(|| {
        SolverError::Hypothesis(format!("no admissible direction ({choice:?}) makes the form positive"))
    })?;

    let b_scaled = b * num_traits::pow(coeff.clone(), d.saturating_sub(1) as usize);
    let fam = build_family(&b_scaled, a, d, t)?;
    // coeff | b_scaled | R, so coeff divides (Rd)^t
    let divisible = num_traits::pow(fam.witness.k.clone(), t as usize).is_multiple_of(&coeff);
    let lhs = FactorialProductLHS { b: b.clone(), ..fam.lhs.clone() };
    let eq = Equation { lhs: lhs.clone(), rhs: Rhs::Form(f.clone()), constraints: Default::default() };
    let mut verified = fam.verified && divisible;
    let mut assignment = family_assignment(&fam);
    let (xs, ys) = match kind {
        Proportion::XMultiple => (format!("{s}*w"), "w".to_string()),
        Proportion::YMultiple => ("w".to_string(), format!("{s}*w")),
        _ => ("w".to_string(), "w".to_string()),
    };
    if let Some(big_x) = fam.witness.materialize() {
        let w = &big_x / &coeff;
        let (x, y) = match kind {
            Proportion::XMultiple => (&s * &w, w),
            Proportion::YMultiple => (w.clone(), &s * &w),
            _ => (w.clone(), w),
        };
        let tuple = fam.n.iter().map(|v| v.to_u64().expect("materialized"));
        let tuple: Assignment = lhs.variables().into_iter().zip(tuple).collect();
        verified &= eq.residual(&tuple, &x, Some(&y))?.is_zero();
        assignment.insert("x".into(), x);
        assignment.insert("y".into(), y);
    }
    Ok(SolutionRecord {
        equation: eq.to_string(),
        assignment,
        verified,
        certificate: Certificate::Construction {
            t,
            r: fam.r_signed,
            s: fam.witness.s.clone(),
            m: fam.witness.m.clone(),
            x_closed_form: format!("x = {xs}, y = {ys}, w = ({}) / {coeff}", fam.witness.closed_form()),
        },
    })
}
