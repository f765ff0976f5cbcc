//! Recursive-descent parser for the equation language.
//!
//! ```text
//! equation   := lhs '=' poly (';' constraint)*
//! lhs        := ['-'] factor ('*' factor)*
//! factor     := INT ['^' (INT | VAR)] | VAR '!' ['!'] ['*' set]
//! set        := 'Z' | 'AP' '(' SINT ',' SINT ')' | '{' SINT (',' SINT)* '}'
//! poly       := ['+' | '-'] term (('+' | '-') term)*
//! term       := power (('*' | '/') power | power)*
//! power      := atom ['^' INT]
//! atom       := INT | 'x' | 'y' | '(' poly ')'
//! constraint := 'gcd' '(' 'x' ',' 'y' ')' '=' '1' | 'form' | VAR '=' SINT '..' SINT
//! ```
//!
//! `A^v` multiplies the factorial term of `v` by `Aᵛ` when `v` has one; otherwise `A`
//! must be prime and `v` becomes a free prime exponent.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::equation::{Constraints, Equation, Rhs};
use super::forms::{BiPoly, BinaryForm};
use super::lhs::{FactorialKind, FactorialProductLHS, FactorialTerm, PrimePowerTerm};
use super::ModelError;
use crate::arith::primes::is_prime_u64;
use crate::bhargava::SetSpec;

const MAX_EXPONENT: u32 = 256;
const RESERVED: [&str; 6] = ["x", "y", "Z", "AP", "gcd", "form"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    DotDot,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ModelError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if c == '.' && bytes.get(i + 1) == Some(&b'.') {
            out.push((Tok::DotDot, i));
            i += 2;
        } else if "*/+-^(),=;!{}".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(ModelError::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

type RatPoly2 = BiPoly<BigRational>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ModelError> {
        Err(ModelError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ModelError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn int(&mut self) -> Result<BigInt, ModelError> {
        match self.bump() {
            Tok::Int(n) => Ok(n),
            _ => {
                self.i -= 1;
                self.err("expected an integer")
            }
        }
    }

    fn signed_int(&mut self) -> Result<BigInt, ModelError> {
        let neg = self.eat('-');
        let n = self.int()?;
        Ok(if neg { -n } else { n })
    }

    fn small<T: TryFrom<BigInt>>(&self, n: BigInt, what: &str) -> Result<T, ModelError> {
        T::try_from(n).or_else(|_| self.err(format!("{what} out of range")))
    }

    fn exponent(&mut self) -> Result<u32, ModelError> {
        let n = self.int()?;
        match n.to_u32() {
            Some(e) if e <= MAX_EXPONENT => Ok(e),
            _ => self.err(format!("exponent larger than {MAX_EXPONENT}")),
        }
    }

    fn set_spec(&mut self) -> Result<SetSpec, ModelError> {
        let pos = self.pos();
        let semantic = |e: crate::bhargava::BhargavaError| ModelError::Parse { pos, msg: e.to_string() };
        match self.peek().clone() {
            Tok::Ident(s) if s == "Z" => {
                self.bump();
                Ok(SetSpec::FullIntegers)
            }
            Tok::Ident(s) if s == "AP" => {
                self.bump();
                self.expect('(')?;
                let a = self.signed_int()?;
                let a: u64 = self.small(a, "modulus")?;
                self.expect(',')?;
                let b = self.signed_int()?;
                let b: i64 = self.small(b, "offset")?;
                self.expect(')')?;
                SetSpec::progression(a, b).map_err(semantic)
            }
            Tok::Sym('{') => {
                self.bump();
                let mut elements = Vec::new();
                loop {
                    let e = self.signed_int()?;
                    elements.push(self.small(e, "set element")?);
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect('}')?;
                SetSpec::explicit(elements).map_err(semantic)
            }
            _ => self.err("expected a set: `Z`, `AP(A,b)` or `{...}`"),
        }
    }

    fn lhs_var(&mut self) -> Result<(String, usize), ModelError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(v) if !RESERVED.contains(&v.as_str()) => Ok((v, pos)),
            Tok::Ident(v) => Err(ModelError::Parse { pos, msg: format!("`{v}` cannot be a left-hand-side variable") }),
            _ => Err(ModelError::Parse { pos, msg: "expected a variable".into() }),
        }
    }

    fn lhs(&mut self) -> Result<FactorialProductLHS, ModelError> {
        let mut b = if self.eat('-') { -BigInt::one() } else { BigInt::one() };
        let mut terms: Vec<FactorialTerm> = Vec::new();
        let mut powers: Vec<(BigInt, String, usize)> = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Int(_) => {
                    let a = self.int()?;
                    if self.eat('^') {
                        match self.peek().clone() {
                            Tok::Int(_) => {
                                let e = self.exponent()?;
                                b *= num_traits::pow(a, e as usize);
                            }
                            _ => {
                                let (v, pos) = self.lhs_var()?;
                                powers.push((a, v, pos));
                            }
                        }
                    } else {
                        b *= a;
                    }
                }
                Tok::Ident(_) => {
                    let (var, pos) = self.lhs_var()?;
                    self.expect('!')?;
                    let kind = if self.eat('!') {
                        FactorialKind::Double
                    } else if *self.peek() == Tok::Sym('*')
                        && matches!(self.peek_at(1), Tok::Ident(s) if s == "Z" || s == "AP")
                        || *self.peek() == Tok::Sym('*') && *self.peek_at(1) == Tok::Sym('{')
                    {
                        self.bump();
                        FactorialKind::Generalized { set: self.set_spec()? }
                    } else {
                        FactorialKind::Generalized { set: SetSpec::FullIntegers }
                    };
                    if terms.iter().any(|t| t.var == var) {
                        return Err(ModelError::Parse { pos, msg: format!("duplicate variable `{var}`") });
                    }
                    terms.push(FactorialTerm { var, kind, base: 1 });
                }
                _ => return self.err("expected an integer or a factorial term"),
            }
            if !self.eat('*') {
                break;
            }
        }
        let mut prime_terms: Vec<PrimePowerTerm> = Vec::new();
        for (a, v, pos) in powers {
            let bad = |msg: String| ModelError::Parse { pos, msg };
            let a = a.to_u64().filter(|&a| a > 0).ok_or_else(|| bad(format!("base of `{v}` out of range")))?;
            if let Some(t) = terms.iter_mut().find(|t| t.var == v) {
                t.base = t.base.checked_mul(a).ok_or_else(|| bad(format!("base of `{v}` out of range")))?;
            } else if prime_terms.iter().any(|t| t.var == v) {
                return Err(bad(format!("duplicate variable `{v}`")));
            } else if !is_prime_u64(a) {
                return Err(bad(format!("{a}^{v}: `{v}` has no factorial, so {a} must be prime")));
            } else {
                prime_terms.push(PrimePowerTerm { prime: a, var: v });
            }
        }
        FactorialProductLHS::new(b, terms, prime_terms)
    }

    fn poly(&mut self) -> Result<RatPoly2, ModelError> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatPoly2, ModelError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    acc = &acc * &self.power()?;
                }
                Tok::Sym('/') => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.power()?;
                    if d.is_zero() || d.total_degree() != Some(0) {
                        return Err(ModelError::Parse { pos, msg: "division only by a nonzero constant".into() });
                    }
                    let inv = d.coeff(0, 0).recip();
                    acc = acc.scale(&inv);
                }
                Tok::Sym('(') | Tok::Ident(_) => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RatPoly2, ModelError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatPoly2, ModelError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(BiPoly::constant(BigRational::from_integer(n))),
            Tok::Ident(v) if v == "x" => Ok(BiPoly::x()),
            Tok::Ident(v) if v == "y" => Ok(BiPoly::y()),
            Tok::Ident(v) => Err(ModelError::Parse {
                pos,
                msg: format!("unknown variable `{v}` on the right-hand side (only x and y)"),
            }),
            Tok::Sym('(') => {
                let p = self.poly()?;
                self.expect(')')?;
                Ok(p)
            }
            _ => Err(ModelError::Parse { pos, msg: "expected a term".into() }),
        }
    }

    fn constraint(&mut self, c: &mut Constraints) -> Result<(), ModelError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) if s == "gcd" => {
                self.bump();
                self.expect('(')?;
                let first = self.bump();
                self.expect(',')?;
                let second = self.bump();
                let xy = |t: &Tok, n: &str| *t == Tok::Ident(n.into());
                if !(xy(&first, "x") && xy(&second, "y") || xy(&first, "y") && xy(&second, "x")) {
                    return Err(ModelError::Parse { pos, msg: "only gcd(x,y)=1 is supported".into() });
                }
                self.expect(')')?;
                self.expect('=')?;
                if self.int()? != BigInt::one() {
                    return Err(ModelError::Parse { pos, msg: "only gcd(x,y)=1 is supported".into() });
                }
                c.coprime = true;
            }
            Tok::Ident(s) if s == "form" => {
                self.bump();
                c.form = true;
            }
            Tok::Ident(v) => {
                self.bump();
                self.expect('=')?;
                let lo = self.signed_int()?;
                let lo: i64 = self.small(lo, "bound")?;
                if *self.peek() != Tok::DotDot {
                    return self.err("expected `..`");
                }
                self.bump();
                let hi = self.signed_int()?;
                let hi: i64 = self.small(hi, "bound")?;
                if lo > hi {
                    return Err(ModelError::Parse { pos, msg: format!("empty range for `{v}`") });
                }
                if c.bounds.insert(v.clone(), (lo, hi)).is_some() {
                    return Err(ModelError::Parse { pos, msg: format!("`{v}` bounded twice") });
                }
            }
            _ => return self.err("expected a constraint"),
        }
        Ok(())
    }
}

fn to_integer_poly(p: &RatPoly2) -> (BiPoly<BigInt>, BigInt) {
    let l = p.terms().values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let lr = BigRational::from_integer(l.clone());
    (p.map(|c| (c * &lr).to_integer()), l)
}

/// Parses an equation such as `1 * n! = x^2 - 1` or `7^m * n! = x^2*y + x*y^2 ; gcd(x,y)=1`.
pub fn parse_equation(text: &str) -> Result<Equation, ModelError> {
    let mut p = Parser { toks: lex(text)?, i: 0 };
    let mut lhs = p.lhs()?;
    p.expect('=')?;
    let rhs_pos = p.pos();
    let rational = p.poly()?;
    let mut constraints = Constraints::default();
    while p.eat(';') {
        p.constraint(&mut constraints)?;
    }
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }

    let (poly, l) = to_integer_poly(&rational);
    lhs.b *= &l;
    let semantic = |msg: &str| ModelError::Semantic(msg.to_string());
    if poly.is_zero() || !poly.uses_x() && !poly.uses_y() {
        return Err(ModelError::Parse { pos: rhs_pos, msg: "right-hand side must involve x".into() });
    }
    let rhs = if poly.uses_y() || constraints.form {
        match BinaryForm::from_bipoly(&poly) {
            Some(f) => Rhs::Form(f),
            None if constraints.form => return Err(semantic("right-hand side declared as form is not homogeneous")),
            None => Rhs::Bivariate(poly),
        }
    } else {
        Rhs::Univariate(poly.to_univariate_x().expect("no y"))
    };
    if constraints.coprime && !rhs.uses_y() {
        return Err(semantic("gcd(x,y)=1 needs a right-hand side in x and y"));
    }
    let mut known: BTreeSet<String> = lhs.variables().into_iter().collect();
    known.insert("x".into());
    if rhs.uses_y() {
        known.insert("y".into());
    }
    for (v, (lo, _)) in &constraints.bounds {
        if !known.contains(v) {
            return Err(ModelError::Semantic(format!("bound on unknown variable `{v}`")));
        }
        if *lo < 0 && v != "x" && v != "y" {
            return Err(ModelError::Semantic(format!("`{v}` ranges over naturals")));
        }
    }
    Ok(Equation { lhs, rhs, constraints })
}
