//! `ℚ_p` realized on exact rationals with the `p`-adic valuation.
//!
//! Elements are rationals; small ones are kept as `Ratio<i128>` and spill
//! into arbitrary precision on overflow.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, ToPrimitive, Zero};

use super::fp::{fp_inv, RatFn, ResidueField};
use super::ValuedField;
use crate::error::{Error, Result};

type Small = Ratio<i128>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QpElem {
    Small(Small),
    Big(BigRational),
}

impl QpElem {
    pub fn int(n: i64) -> Self {
        QpElem::Small(Small::from_integer(n as i128))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        QpElem::Small(Small::new(n as i128, d as i128))
    }

    fn big(&self) -> BigRational {
        match self {
            QpElem::Small(r) => {
                BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            }
            QpElem::Big(b) => b.clone(),
        }
    }

    fn demote(b: BigRational) -> Self {
        match (b.numer().to_i128(), b.denom().to_i128()) {
            (Some(n), Some(d)) => QpElem::Small(Small::new_raw(n, d)),
            _ => QpElem::Big(b),
        }
    }

    fn combine(
        &self,
        o: &Self,
        small: impl Fn(&Small, &Small) -> Option<Small>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Self {
        if let (QpElem::Small(a), QpElem::Small(b)) = (self, o) {
            if let Some(r) = small(a, b) {
                return QpElem::Small(r);
            }
        }
        Self::demote(big(self.big(), o.big()))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            QpElem::Small(r) => r.is_zero(),
            QpElem::Big(b) => b.is_zero(),
        }
    }

    pub fn to_big(&self) -> BigRational {
        self.big()
    }

    pub fn from_big(b: BigRational) -> Self {
        Self::demote(b)
    }
}

impl fmt::Display for QpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.big();
        if b.is_integer() {
            write!(f, "{}", b.numer())
        } else {
            write!(f, "{}/{}", b.numer(), b.denom())
        }
    }
}

fn mult_i128(mut n: i128, p: i128) -> i64 {
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

fn mult_big(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    k
}

/// `ℚ` with the `p`-adic valuation; uniformizer `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qp {
    pub p: u64,
}

impl Qp {
    pub fn new(p: u64) -> Self {
        Qp { p }
    }

    fn residue_u64(&self, a: &QpElem) -> u64 {
        let p = self.p;
        match a {
            QpElem::Small(r) => {
                let n = r.numer().rem_euclid(p as i128) as u64;
                let d = r.denom().rem_euclid(p as i128) as u64;
                n * fp_inv(d, p) % p
            }
            QpElem::Big(b) => {
                let pb = BigInt::from(p);
                let red = |x: &BigInt| {
                    let m = ((x % &pb) + &pb) % &pb;
                    m.to_u64().expect("residue fits")
                };
                red(b.numer()) * fp_inv(red(b.denom()), p) % p
            }
        }
    }
}

impl ValuedField for Qp {
    type Elem = QpElem;

    fn zero(&self) -> QpElem {
        QpElem::int(0)
    }

    fn one(&self) -> QpElem {
        QpElem::int(1)
    }

    fn of_i64(&self, n: i64) -> QpElem {
        QpElem::int(n)
    }

    fn add(&self, a: &QpElem, b: &QpElem) -> QpElem {
        a.combine(b, |x, y| x.checked_add(y), |x, y| x + y)
    }

    fn sub(&self, a: &QpElem, b: &QpElem) -> QpElem {
        a.combine(b, |x, y| x.checked_sub(y), |x, y| x - y)
    }

    fn mul(&self, a: &QpElem, b: &QpElem) -> QpElem {
        a.combine(b, |x, y| x.checked_mul(y), |x, y| x * y)
    }

    fn neg(&self, a: &QpElem) -> QpElem {
        match a {
            QpElem::Small(r) if *r.numer() != i128::MIN => QpElem::Small(-r),
            other => QpElem::demote(-other.big()),
        }
    }

    fn inv(&self, a: &QpElem) -> Result<QpElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match a {
            QpElem::Small(r) if *r.numer() != i128::MIN => QpElem::Small(r.recip()),
            other => QpElem::demote(other.big().recip()),
        })
    }

    fn is_zero(&self, a: &QpElem) -> bool {
        a.is_zero()
    }

    fn val(&self, a: &QpElem) -> Result<Option<i64>> {
        if a.is_zero() {
            return Ok(None);
        }
        Ok(Some(match a {
            QpElem::Small(r) => {
                mult_i128(*r.numer(), self.p as i128) - mult_i128(*r.denom(), self.p as i128)
            }
            QpElem::Big(b) => mult_big(b.numer(), self.p) - mult_big(b.denom(), self.p),
        }))
    }

    fn pi_pow(&self, k: i64) -> QpElem {
        let pk = BigInt::from(self.p).pow(k.unsigned_abs() as u32);
        let r = if k >= 0 {
            BigRational::from_integer(pk)
        } else {
            BigRational::new(BigInt::one(), pk)
        };
        QpElem::demote(r)
    }

    fn residue(&self, a: &QpElem) -> Result<RatFn> {
        match self.val(a)? {
            None => Ok(RatFn::zero()),
            Some(v) if v < 0 => Err(Error::validation(format!(
                "residue of {a} with negative value {v}"
            ))),
            Some(v) if v > 0 => Ok(RatFn::zero()),
            Some(_) => Ok(RatFn::constant(self.residue_u64(a), self.p)),
        }
    }

    fn lift(&self, r: &RatFn) -> Result<QpElem> {
        let c = r.as_constant().ok_or_else(|| {
            Error::validation(format!("residue {r} does not lie in F_{}", self.p))
        })?;
        // symmetric lift keeps shifted coefficients small
        let c = c as i64;
        let p = self.p as i64;
        Ok(QpElem::int(if c > p / 2 { c - p } else { c }))
    }

    fn residue_field(&self) -> ResidueField {
        ResidueField { p: self.p, with_u: false }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn variable(&self, _name: &str) -> Option<QpElem> {
        None
    }

    fn fmt_elem(&self, a: &QpElem) -> String {
        a.to_string()
    }

    fn parse_elem(&self, s: &str) -> Result<QpElem> {
        let t = s.trim();
        let plain = |x: &str| x.parse::<BigInt>().ok();
        if let Some((n, d)) = t.split_once('/') {
            if let (Some(n), Some(d)) = (plain(n.trim()), plain(d.trim())) {
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                return Ok(QpElem::demote(BigRational::new(n, d)));
            }
        } else if let Some(n) = plain(t) {
            return Ok(QpElem::demote(BigRational::from_integer(n)));
        }
        super::parse::parse_expr(self, s)
    }

    fn val_int(&self, n: i64) -> Result<Option<i64>> {
        if n == 0 {
            return Ok(None);
        }
        Ok(Some(mult_i128(n as i128, self.p as i128)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        let k = Qp::new(2);
        assert_eq!(k.val(&QpElem::int(12)).unwrap(), Some(2));
        assert_eq!(k.val(&QpElem::int(0)).unwrap(), None);
        assert_eq!(k.val(&QpElem::from_ratio(3, 8)).unwrap(), Some(-3));
        assert_eq!(k.val(&k.pi_pow(-5)).unwrap(), Some(-5));
    }

    #[test]
    fn overflow_spills_to_big() {
        let k = Qp::new(3);
        let big = k.pi_pow(60);
        let sq = k.mul(&big, &big);
        assert!(matches!(sq, QpElem::Big(_)));
        assert_eq!(k.val(&sq).unwrap(), Some(120));
        let back = k.div(&sq, &big).unwrap();
        assert_eq!(back, big);
        assert!(matches!(back, QpElem::Small(_)));
    }

    #[test]
    fn residues() {
        let k = Qp::new(5);
        assert_eq!(k.residue(&QpElem::from_ratio(1, 2)).unwrap(), RatFn::constant(3, 5));
        assert!(k.residue(&QpElem::from_ratio(1, 5)).is_err());
        assert_eq!(k.lift(&RatFn::constant(4, 5)).unwrap(), QpElem::int(-1));
        assert_eq!(k.parse_elem("-7/10").unwrap(), QpElem::from_ratio(-7, 10));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn elem() -> impl Strategy<Value = QpElem> {
            (-2000i64..2000, 1i64..200).prop_map(|(n, d)| QpElem::from_ratio(n, d))
        }

        proptest! {
            #[test]
            fn valuation_axioms(a in elem(), b in elem(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
                let k = Qp::new(p);
                let va = k.val(&a).unwrap();
                let vb = k.val(&b).unwrap();
                let vab = k.val(&k.mul(&a, &b)).unwrap();
                match (va, vb) {
                    (Some(x), Some(y)) => prop_assert_eq!(vab, Some(x + y)),
                    _ => prop_assert_eq!(vab, None),
                }
                let vs = k.val(&k.add(&a, &b)).unwrap();
                let inf = i64::MAX;
                let m = va.unwrap_or(inf).min(vb.unwrap_or(inf));
                prop_assert!(vs.unwrap_or(inf) >= m);
                if va != vb {
                    prop_assert_eq!(vs.unwrap_or(inf), m);
                }
            }
        }
    }
}
