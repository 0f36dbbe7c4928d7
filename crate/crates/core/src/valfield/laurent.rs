//! Truncated Laurent series `F_p((t))` and `F_p(u)((t))` with the
//! `t`-adic valuation and explicit absolute precision.

use std::collections::BTreeMap;

use super::fp::{RatFn, ResidueField};
use super::ValuedField;
use crate::error::{Error, Result};

/// `Σ c_k t^k`, known exactly modulo `t^prec` (`prec = None`: exact).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    terms: BTreeMap<i64, RatFn>,
    prec: Option<i64>,
}

impl Series {
    pub fn exact(terms: impl IntoIterator<Item = (i64, RatFn)>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Series { terms, prec: None }
    }

    pub fn monomial(c: RatFn, k: i64) -> Self {
        Series::exact([(k, c)])
    }

    pub fn terms(&self) -> &BTreeMap<i64, RatFn> {
        &self.terms
    }

    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    fn with_prec(mut self, prec: Option<i64>) -> Self {
        if let Some(n) = prec {
            self.terms.retain(|&k, _| k < n);
        }
        self.prec = prec;
        self
    }

    fn lowest(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Lower bound for the valuation, `None` for exact zero.
    fn low_bound(&self) -> Option<i64> {
        self.lowest().or(self.prec)
    }

    pub fn coeff(&self, k: i64) -> RatFn {
        self.terms.get(&k).cloned().unwrap_or_else(RatFn::zero)
    }
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `F_p((t))`, or `F_p(u)((t))` when `with_u`. Non-monomial inverses are
/// truncated at relative precision `prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentField {
    pub p: u64,
    pub with_u: bool,
    pub prec: i64,
}

impl LaurentField {
    pub fn new(p: u64, with_u: bool, prec: i64) -> Self {
        LaurentField { p, with_u, prec }
    }

    pub fn t(&self) -> Series {
        Series::monomial(RatFn::constant(1, self.p), 1)
    }

    pub fn u(&self) -> Series {
        Series::monomial(RatFn::u(), 0)
    }

    pub fn constant(&self, c: RatFn) -> Series {
        Series::monomial(c, 0)
    }
}

impl ValuedField for LaurentField {
    type Elem = Series;

    fn zero(&self) -> Series {
        Series::exact([])
    }

    fn one(&self) -> Series {
        self.of_i64(1)
    }

    fn of_i64(&self, n: i64) -> Series {
        Series::monomial(RatFn::from_i64(n, self.p), 0)
    }

    fn add(&self, a: &Series, b: &Series) -> Series {
        let p = self.p;
        let mut terms = a.terms.clone();
        for (k, c) in &b.terms {
            let e = terms.entry(*k).or_insert_with(RatFn::zero);
            *e = e.add(c, p);
        }
        terms.retain(|_, c| !c.is_zero());
        Series { terms, prec: None }.with_prec(min_prec(a.prec, b.prec))
    }

    fn sub(&self, a: &Series, b: &Series) -> Series {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &Series, b: &Series) -> Series {
        let p = self.p;
        let prec = match (a.low_bound(), b.low_bound()) {
            (None, _) | (_, None) => return self.zero(),
            (Some(la), Some(lb)) => min_prec(a.prec.map(|x| x + lb), b.prec.map(|x| x + la)),
        };
        let mut terms: BTreeMap<i64, RatFn> = BTreeMap::new();
        for (i, x) in &a.terms {
            for (j, y) in &b.terms {
                let k = i + j;
                if prec.is_some_and(|n| k >= n) {
                    continue;
                }
                let e = terms.entry(k).or_insert_with(RatFn::zero);
                *e = e.add(&x.mul(y, p), p);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Series { terms, prec }
    }

    fn neg(&self, a: &Series) -> Series {
        Series {
            terms: a.terms.iter().map(|(k, c)| (*k, c.neg(self.p))).collect(),
            prec: a.prec,
        }
    }

    fn inv(&self, a: &Series) -> Result<Series> {
        let p = self.p;
        let v = match a.lowest() {
            Some(v) => v,
            None if a.is_exact() => return Err(Error::DivisionByZero),
            None => {
                return Err(Error::PrecisionExhausted(
                    "inverting an element with no known nonzero term".into(),
                ))
            }
        };
        let lead_inv = a.terms[&v].inv(p)?;
        if a.terms.len() == 1 && a.is_exact() {
            return Ok(Series::monomial(lead_inv, -v));
        }
        // relative precision of the result
        let n = match a.prec {
            Some(ap) => (ap - v).min(self.prec),
            None => self.prec,
        };
        let w: Vec<RatFn> = (0..n).map(|k| a.coeff(v + k)).collect();
        let mut b: Vec<RatFn> = Vec::with_capacity(n as usize);
        b.push(lead_inv.clone());
        for k in 1..n as usize {
            let mut s = RatFn::zero();
            for j in 1..=k {
                if !w[j].is_zero() && !b[k - j].is_zero() {
                    s = s.add(&w[j].mul(&b[k - j], p), p);
                }
            }
            b.push(s.mul(&lead_inv, p).neg(p));
        }
        let terms = b.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c));
        Ok(Series::exact(terms).with_prec(Some(n - v)))
    }

    fn is_zero(&self, a: &Series) -> bool {
        a.terms.is_empty() && a.is_exact()
    }

    fn val(&self, a: &Series) -> Result<Option<i64>> {
        match (a.lowest(), a.prec) {
            (Some(v), _) => Ok(Some(v)),
            (None, None) => Ok(None),
            (None, Some(n)) => Err(Error::PrecisionExhausted(format!(
                "element is O(t^{n}); raise the precision"
            ))),
        }
    }

    fn pi_pow(&self, k: i64) -> Series {
        Series::monomial(RatFn::constant(1, self.p), k)
    }

    fn residue(&self, a: &Series) -> Result<RatFn> {
        match a.lowest() {
            Some(v) if v < 0 => Err(Error::validation(format!(
                "residue of an element with negative value {v}"
            ))),
            Some(_) => Ok(a.coeff(0)),
            None if a.prec.is_none_or(|n| n > 0) => Ok(RatFn::zero()),
            None => Err(Error::PrecisionExhausted("residue beyond known precision".into())),
        }
    }

    fn lift(&self, r: &RatFn) -> Result<Series> {
        if !self.with_u && r.as_constant().is_none() {
            return Err(Error::validation(format!("residue {r} does not lie in F_{}", self.p)));
        }
        Ok(Series::monomial(r.clone(), 0))
    }

    fn residue_field(&self) -> ResidueField {
        ResidueField { p: self.p, with_u: self.with_u }
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn variable(&self, name: &str) -> Option<Series> {
        match name {
            "t" => Some(self.t()),
            "u" if self.with_u => Some(self.u()),
            _ => None,
        }
    }

    fn fmt_elem(&self, a: &Series) -> String {
        let mut parts: Vec<String> = a
            .terms
            .iter()
            .map(|(k, c)| {
                let cs = c.to_string();
                match *k {
                    0 => cs,
                    k => {
                        let tk = if k == 1 { "t".to_string() } else { format!("t^{k}") };
                        if c.is_one() {
                            tk
                        } else {
                            format!("{cs}*{tk}")
                        }
                    }
                }
            })
            .collect();
        if let Some(n) = a.prec {
            parts.push(format!("O(t^{n})"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_exponent() {
        let k = LaurentField::new(2, false, 16);
        let x = k.parse_elem("t^3 * (1 + t + t^2)").unwrap();
        assert_eq!(k.val(&x).unwrap(), Some(3));
        assert_eq!(k.val(&k.zero()).unwrap(), None);
        let y = k.parse_elem("t^-1 + 1 + 2*t").unwrap();
        assert_eq!(k.val(&y).unwrap(), Some(-1));
    }

    #[test]
    fn inverse_has_relative_precision() {
        let k = LaurentField::new(3, true, 10);
        let a = k.parse_elem("t*(1 + u*t)").unwrap();
        let b = k.inv(&a).unwrap();
        assert_eq!(b.precision(), Some(9));
        let one = k.mul(&a, &b);
        assert!(k.val(&k.sub(&one, &k.one())).unwrap_or(Some(100)).unwrap_or(100) >= 10);
        assert_eq!(one.coeff(0), RatFn::constant(1, 3));
    }

    #[test]
    fn exhausted_precision_is_refused() {
        let k = LaurentField::new(2, false, 4);
        let a = k.parse_elem("1 + t").unwrap();
        let b = k.inv(&a).unwrap();
        let diff = k.sub(&k.mul(&a, &b), &k.one());
        assert!(matches!(k.val(&diff), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn characteristic_p() {
        let k = LaurentField::new(2, true, 8);
        let two = k.of_i64(2);
        assert!(k.is_zero(&two));
        let r = k.residue(&k.parse_elem("u + t").unwrap()).unwrap();
        assert_eq!(r, RatFn::u());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn series() -> impl Strategy<Value = (Vec<(i64, u64)>, bool)> {
            (proptest::collection::vec((-3i64..6, 0u64..3), 1..5), proptest::bool::ANY)
        }

        fn build(k: &LaurentField, terms: &[(i64, u64)], with_u: bool) -> Series {
            let c = |x: u64| {
                if with_u {
                    RatFn::u().add(&RatFn::constant(x, k.p), k.p)
                } else {
                    RatFn::constant(x, k.p)
                }
            };
            terms.iter().fold(k.zero(), |acc, &(e, x)| k.add(&acc, &Series::monomial(c(x), e)))
        }

        proptest! {
            #[test]
            fn valuation_axioms((ta, ua) in series(), (tb, ub) in series()) {
                let k = LaurentField::new(3, true, 32);
                let a = build(&k, &ta, ua);
                let b = build(&k, &tb, ub);
                let va = k.val(&a).unwrap();
                let vb = k.val(&b).unwrap();
                let vab = k.val(&k.mul(&a, &b)).unwrap();
                match (va, vb) {
                    (Some(x), Some(y)) => prop_assert_eq!(vab, Some(x + y)),
                    _ => prop_assert_eq!(vab, None),
                }
                let vs = k.val(&k.add(&a, &b)).unwrap().unwrap_or(i64::MAX);
                let m = va.unwrap_or(i64::MAX).min(vb.unwrap_or(i64::MAX));
                prop_assert!(vs >= m);
                if va != vb { prop_assert_eq!(vs, m); }
            }

            #[test]
            fn raising_precision_keeps_exact_answers((ta, ua) in series()) {
                let lo = LaurentField::new(2, true, 8);
                let hi = LaurentField::new(2, true, 40);
                let a = build(&lo, &ta, ua);
                if let (Ok(x), Ok(y)) = (lo.inv(&a), hi.inv(&a)) {
                    prop_assert_eq!(lo.val(&x).unwrap(), hi.val(&y).unwrap());
                    for (k, c) in x.terms() {
                        prop_assert_eq!(c, &y.coeff(*k));
                    }
                }
            }
        }
    }
}
