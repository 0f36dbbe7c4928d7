//! Dense univariate polynomials over a [`ValuedField`], coefficients low
//! to high. Operations take the field as an explicit context.

use crate::error::{Error, Result};
use crate::valfield::ValuedField;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<E>(pub Vec<E>);

impl<E: Clone> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.0
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff<F: ValuedField<Elem = E>>(&self, k: &F, i: usize) -> E {
        self.0.get(i).cloned().unwrap_or_else(|| k.zero())
    }
}

pub fn trimmed<F: ValuedField>(k: &F, mut c: Vec<F::Elem>) -> Poly<F::Elem> {
    while c.last().is_some_and(|x| k.is_zero(x)) {
        c.pop();
    }
    Poly(c)
}

pub fn constant<F: ValuedField>(k: &F, c: F::Elem) -> Poly<F::Elem> {
    trimmed(k, vec![c])
}

/// `x`.
pub fn var<F: ValuedField>(k: &F) -> Poly<F::Elem> {
    Poly(vec![k.zero(), k.one()])
}

/// `c·x^i`.
pub fn monomial<F: ValuedField>(k: &F, c: F::Elem, i: usize) -> Poly<F::Elem> {
    let mut v = vec![k.zero(); i];
    v.push(c);
    trimmed(k, v)
}

/// Parse a coefficient list (low to high) of element expressions.
pub fn parse<F: ValuedField>(k: &F, coeffs: &[String]) -> Result<Poly<F::Elem>> {
    let c = coeffs.iter().map(|s| k.parse_elem(s)).collect::<Result<Vec<_>>>()?;
    Ok(trimmed(k, c))
}

pub fn add<F: ValuedField>(k: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.0.len().max(b.0.len());
    let c = (0..n)
        .map(|i| match (a.0.get(i), b.0.get(i)) {
            (Some(x), Some(y)) => k.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trimmed(k, c)
}

pub fn neg<F: ValuedField>(k: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    Poly(a.0.iter().map(|x| k.neg(x)).collect())
}

pub fn sub<F: ValuedField>(k: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    add(k, a, &neg(k, b))
}

pub fn scale<F: ValuedField>(k: &F, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
    trimmed(k, a.0.iter().map(|x| k.mul(x, c)).collect())
}

pub fn mul<F: ValuedField>(k: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    if a.is_zero() || b.is_zero() {
        return Poly(Vec::new());
    }
    let mut c = vec![k.zero(); a.0.len() + b.0.len() - 1];
    for (i, x) in a.0.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.0.iter().enumerate() {
            c[i + j] = k.add(&c[i + j], &k.mul(x, y));
        }
    }
    trimmed(k, c)
}

pub fn pow<F: ValuedField>(k: &F, a: &Poly<F::Elem>, e: u32) -> Poly<F::Elem> {
    (0..e).fold(constant(k, k.one()), |acc, _| mul(k, &acc, a))
}

/// Quotient and remainder.
pub type DivRem<E> = (Poly<E>, Poly<E>);

/// Division with remainder by a polynomial with invertible leading
/// coefficient.
pub fn divrem<F: ValuedField>(
    k: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> Result<DivRem<F::Elem>> {
    let db = b.degree().ok_or(Error::DivisionByZero)?;
    let mut r = a.0.clone();
    if r.len() <= db {
        return Ok((Poly(Vec::new()), a.clone()));
    }
    let lead = &b.0[db];
    let lead_inv = k.inv(lead)?;
    let monic = lead == &k.one();
    let mut q = vec![k.zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = if monic { r[i].clone() } else { k.mul(&r[i], &lead_inv) };
        if k.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.0.iter().enumerate() {
            let idx = i - db + j;
            r[idx] = k.sub(&r[idx], &k.mul(&c, bj));
        }
        q[i - db] = c;
    }
    r.truncate(db);
    Ok((trimmed(k, q), trimmed(k, r)))
}

pub fn rem<F: ValuedField>(k: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
    Ok(divrem(k, a, b)?.1)
}

pub fn eval<F: ValuedField>(k: &F, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
    a.0.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
}

/// `a(s·x + c)`.
pub fn compose_affine<F: ValuedField>(
    k: &F,
    a: &Poly<F::Elem>,
    s: &F::Elem,
    c: &F::Elem,
) -> Poly<F::Elem> {
    let lin = trimmed(k, vec![c.clone(), s.clone()]);
    a.0.iter().rev().fold(Poly(Vec::new()), |acc, coef| {
        add(k, &mul(k, &acc, &lin), &constant(k, coef.clone()))
    })
}

/// Binomial coefficient as an integer; degrees here are small.
pub fn binomial(n: usize, r: usize) -> i64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: i128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// The `s`-th Hasse derivative `Σ_i C(i, s) a_i x^{i−s}`.
pub fn hasse_derivative<F: ValuedField>(k: &F, a: &Poly<F::Elem>, s: usize) -> Poly<F::Elem> {
    let c = a
        .0
        .iter()
        .enumerate()
        .skip(s)
        .map(|(i, x)| k.mul(&k.of_i64(binomial(i, s)), x))
        .collect();
    trimmed(k, c)
}

pub fn derivative<F: ValuedField>(k: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    hasse_derivative(k, a, 1)
}

pub fn is_monic<F: ValuedField>(k: &F, a: &Poly<F::Elem>) -> bool {
    a.0.last().is_some_and(|c| c == &k.one())
}

pub fn fmt<F: ValuedField>(k: &F, a: &Poly<F::Elem>) -> String {
    let terms: Vec<String> = a
        .0
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !k.is_zero(c))
        .map(|(i, c)| {
            let cs = k.fmt_elem(c);
            let cs = if cs.contains([' ', '+']) || (i > 0 && cs.starts_with('-')) {
                format!("({cs})")
            } else {
                cs
            };
            match i {
                0 => cs,
                _ => {
                    let xi = if i == 1 { "x".to_string() } else { format!("x^{i}") };
                    if c == &k.one() {
                        xi
                    } else {
                        format!("{cs}*{xi}")
                    }
                }
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valfield::{LaurentField, Qp, QpElem};

    fn qpoly(c: &[i64]) -> Poly<QpElem> {
        let k = Qp::new(2);
        trimmed(&k, c.iter().map(|&x| QpElem::int(x)).collect())
    }

    #[test]
    fn division_and_composition() {
        let k = Qp::new(2);
        let f = qpoly(&[1, 0, 1]);
        let (q, r) = divrem(&k, &f, &qpoly(&[-1, 1])).unwrap();
        assert_eq!(q, qpoly(&[1, 1]));
        assert_eq!(r, qpoly(&[2]));
        let shifted = compose_affine(&k, &f, &QpElem::int(1), &QpElem::int(1));
        assert_eq!(shifted, qpoly(&[2, 2, 1]));
    }

    #[test]
    fn hasse_examples() {
        let k = Qp::new(2);
        let f = qpoly(&[0, 0, 0, 1]);
        assert_eq!(hasse_derivative(&k, &f, 0), f);
        assert_eq!(hasse_derivative(&k, &f, 2), qpoly(&[0, 3]));
        let l = LaurentField::new(3, false, 8);
        let x3 = monomial(&l, l.one(), 3);
        assert_eq!(hasse_derivative(&l, &x3, 3), constant(&l, l.one()));
        assert!(derivative(&l, &x3).is_zero());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn coeffs() -> impl Strategy<Value = Vec<i64>> {
            proptest::collection::vec(-9i64..10, 1..6)
        }

        proptest! {
            // f(x+T) = Σ_s ∂_s f(x) T^s, checked at T = c for integers c
            #[test]
            fn hasse_taylor_identity(f in coeffs(), c in -5i64..6) {
                let k = Qp::new(3);
                let f = qpoly(&f);
                let ce = QpElem::int(c);
                let lhs = compose_affine(&k, &f, &k.one(), &ce);
                let n = f.0.len();
                let mut rhs = Poly(Vec::new());
                for s in 0..n {
                    let term = scale(&k, &hasse_derivative(&k, &f, s), &k.pow(&ce, s as u32));
                    rhs = add(&k, &rhs, &term);
                }
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
