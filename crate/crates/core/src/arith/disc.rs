//! Resultants and discriminants by the subresultant PRS over an integral domain.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::ArithError;
use crate::model::BinaryForm;
use crate::poly::Poly;

fn pow<T: Clone + One + std::ops::Mul<Output = T>>(x: &T, k: usize) -> T {
    num_traits::pow(x.clone(), k)
}

/// `lc(b)^{deg a - deg b + 1} · a  mod  b`
fn pseudo_remainder<T>(a: &Poly<T>, b: &Poly<T>) -> Poly<T>
where
    T: Clone + Integer + Signed,
{
    let db = b.degree().expect("divisor is nonzero");
    let lb = b.leading();
    let mut r: Vec<T> = a.coeffs().to_vec();
    let Some(da) = a.degree() else { return Poly::zero() };
    if da < db {
        return a.clone();
    }
    let mut steps = da - db + 1;
    let mut deg = da;
    loop {
        if r.len() <= deg || deg < db {
            break;
        }
        let lr = r[deg].clone();
        for c in r.iter_mut() {
            *c = c.clone() * lb.clone();
        }
        if !lr.is_zero() {
            for (i, bc) in b.coeffs().iter().enumerate() {
                let k = deg - db + i;
                r[k] = r[k].clone() - lr.clone() * bc.clone();
            }
        }
        steps -= 1;
        if deg == 0 {
            break;
        }
        deg -= 1;
    }
    // pad the missing multiplications so the result is exactly lc^{δ+1}·a mod b
    let fix = pow(&lb, steps);
    Poly::new(r.into_iter().map(|c| c * fix.clone()).collect())
}

fn exact_div_poly<T>(p: &Poly<T>, k: &T) -> Poly<T>
where
    T: Clone + Integer + Signed,
{
    Poly::new(p.coeffs().iter().map(|c| {
        debug_assert!((c.clone() % k.clone()).is_zero());
        c.clone() / k.clone()
    }).collect())
}

/// Resultant of two polynomials over an integral domain (subresultant algorithm).
pub fn resultant<T>(a: &Poly<T>, b: &Poly<T>) -> T
where
    T: Clone + Integer + Signed,
{
    let (Some(mut da), Some(mut db)) = (a.degree(), b.degree()) else {
        return T::zero();
    };
    if da == 0 {
        return pow(&a.leading(), db);
    }
    if db == 0 {
        return pow(&b.leading(), da);
    }
    let ca = a.content();
    let cb = b.content();
    let mut a = exact_div_poly(a, &ca);
    let mut b = exact_div_poly(b, &cb);
    let mut s = T::one();
    let t = pow(&ca, db) * pow(&cb, da);
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
    }
    let mut g = T::one();
    let mut h = T::one();
    loop {
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = pseudo_remainder(&a, &b);
        a = b;
        da = db;
        if r.is_zero() {
            return T::zero();
        }
        let divisor = g.clone() * pow(&h, delta);
        b = exact_div_poly(&r, &divisor);
        db = b.degree().expect("nonzero remainder");
        g = a.leading();
        // h ← g^δ / h^{δ-1}
        h = if delta == 0 {
            h
        } else {
            pow(&g, delta) / pow(&h, delta - 1)
        };
        if db == 0 {
            break;
        }
    }
    // h ← lc(b)^{deg a} / h^{deg a - 1}
    let lb = b.leading();
    let h = if da == 0 {
        h
    } else {
        pow(&lb, da) / pow(&h, da - 1)
    };
    s * t * h
}

/// `Δ(f) = (-1)^{d(d-1)/2} · Res(f, f') / lc(f)`; degree-one polynomials have Δ = 1.
pub fn discriminant<T>(f: &Poly<T>) -> Result<T, ArithError>
where
    T: Clone + Integer + Signed,
{
    let d = match f.degree() {
        None => return Err(ArithError::ZeroPolynomial),
        Some(0) => return Err(ArithError::DegreeTooSmall { needed: 1, got: 0 }),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(T::one());
    }
    let res = resultant(f, &f.derivative());
    let q = res / f.leading();
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}

/// `Δ_{f(x,1)} / gcd(a_n, …, a_0)^{2n-2}` for a form of degree `n`.
pub fn modified_discriminant(f: &BinaryForm) -> Result<BigRational, ArithError> {
    let n = f.degree();
    if n < 2 {
        return Err(ArithError::DegreeTooSmall { needed: 2, got: n });
    }
    let dehom = f.dehomogenize();
    match dehom.degree() {
        None | Some(0) => return Err(ArithError::DegenerateForm),
        _ => {}
    }
    let disc = discriminant(&dehom)?;
    let g = f.content();
    let denom = num_traits::pow(g, 2 * n - 2);
    Ok(BigRational::new(disc, denom))
}

/// Integer-valued discriminant of a polynomial with `i64` coefficients given leading-first.
pub fn discriminant_of(coeffs_leading_first: &[i64]) -> Result<BigInt, ArithError> {
    let p = Poly::from_leading_first(coeffs_leading_first.iter().map(|&c| BigInt::from(c)).collect());
    discriminant(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn p(v: &[i64]) -> Poly<BigInt> {
        Poly::new(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Sylvester matrix determinant by fraction-free Bareiss elimination.
    fn sylvester_resultant(a: &Poly<BigInt>, b: &Poly<BigInt>) -> BigInt {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for i in 0..=m {
                mat[row][row + i] = a.from_top(i);
            }
        }
        for row in 0..m {
            for i in 0..=n {
                mat[n + row][row + i] = b.from_top(i);
            }
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..size - 1 {
            if mat[k][k].is_zero() {
                let Some(swap) = (k + 1..size).find(|&r| !mat[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                mat.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                    mat[i][j] = v / &prev;
                }
            }
            prev = mat[k][k].clone();
        }
        sign * mat[size - 1][size - 1].clone()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&p(&[-1, 0, 1])).unwrap(), BigInt::from(4));
        assert_eq!(discriminant(&p(&[1, 1, 1])).unwrap(), BigInt::from(-3));
        assert_eq!(discriminant(&p(&[0, -1, 0, 1])).unwrap(), BigInt::from(4));
        // x^3 + px + q: -4p^3 - 27q^2
        assert_eq!(discriminant(&p(&[5, 2, 0, 1])).unwrap(), BigInt::from(-4 * 8 - 27 * 25));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(discriminant(&Poly::<BigInt>::zero()), Err(ArithError::ZeroPolynomial)));
    }

    #[test]
    fn machine_integers() {
        let q: Poly<i64> = Poly::new(vec![-1, 0, 1]);
        assert_eq!(discriminant(&q).unwrap(), 4);
    }

    #[test]
    fn modified_examples() {
        let form = |c: &[i64]| BinaryForm::from_i64(c);
        let r = |n: i64| BigRational::from_integer(BigInt::from(n));
        // coefficients indexed by x-exponent: x^2 + y^2
        assert_eq!(modified_discriminant(&form(&[1, 0, 1])).unwrap(), r(-4));
        assert_eq!(modified_discriminant(&form(&[-2, 0, 2])).unwrap(), r(4));
        assert_eq!(modified_discriminant(&form(&[-1, 0, 1])).unwrap(), r(4));
        // y^2 alone dehomogenizes to a constant
        assert!(matches!(modified_discriminant(&form(&[1, 0, 0])), Err(ArithError::DegenerateForm)));
    }

    proptest! {
        #[test]
        fn resultant_matches_sylvester(
            a in prop::collection::vec(-20i64..20, 2..7),
            b in prop::collection::vec(-20i64..20, 2..6),
        ) {
            let pa = p(&a);
            let pb = p(&b);
            prop_assume!(pa.degree().unwrap_or(0) >= 1 && pb.degree().unwrap_or(0) >= 1);
            prop_assert_eq!(resultant(&pa, &pb), sylvester_resultant(&pa, &pb));
        }

        #[test]
        fn discriminant_matches_sylvester(a in prop::collection::vec(-20i64..20, 3..8)) {
            let pa = p(&a);
            let d = pa.degree().unwrap_or(0);
            prop_assume!(d >= 2);
            let res = sylvester_resultant(&pa, &pa.derivative());
            let mut expected = res / pa.leading();
            if (d * (d - 1) / 2) % 2 == 1 {
                expected = -expected;
            }
            prop_assert_eq!(discriminant(&pa).unwrap(), expected);
        }
    }
}
