//! Residue-field arithmetic: the prime field `F_p` and the rational
//! function field `F_p(u)`, plus polynomials over them.

use std::fmt;

use crate::error::{Error, Result};

/// Polynomial over `F_p`, coefficients low to high, no trailing zeros.
pub type FpPoly = Vec<u64>;

fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn fp_inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    fp_pow(a, p - 2, p)
}

pub(crate) fn fp_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

pub(crate) fn fp_from_i64(n: i64, p: u64) -> u64 {
    n.rem_euclid(p as i64) as u64
}

pub fn poly_add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut r: FpPoly = (0..a.len().max(b.len()))
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut r);
    r
}

pub fn poly_neg(a: &[u64], p: u64) -> FpPoly {
    a.iter().map(|&x| (p - x) % p).collect()
}

pub fn poly_sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    poly_add(a, &poly_neg(b, p), p)
}

pub fn poly_mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    trim(&mut r);
    r
}

pub fn poly_scale(a: &[u64], c: u64, p: u64) -> FpPoly {
    let mut r: FpPoly = a.iter().map(|&x| x * (c % p) % p).collect();
    trim(&mut r);
    r
}

/// Division with remainder by a nonzero divisor.
pub fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = fp_inv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * lead_inv % p;
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * bj % p) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn poly_monic(a: &[u64], p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => poly_scale(a, fp_inv(l, p), p),
    }
}

pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    poly_monic(&a, p)
}

/// All monic polynomials of the given degree, in a fixed order.
fn monic_of_degree(d: usize, p: u64) -> impl Iterator<Item = FpPoly> {
    let count = p.pow(d as u32);
    (0..count).map(move |mut k| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push(k % p);
            k /= p;
        }
        v.push(1);
        v
    })
}

/// Monic irreducible factorization by trial division (desk-scale degrees).
pub fn poly_factor(a: &[u64], p: u64) -> Vec<(FpPoly, u32)> {
    let mut rest = poly_monic(a, p);
    let mut out = Vec::new();
    let mut d = 1;
    while rest.len() > 1 && 2 * d < rest.len() {
        for cand in monic_of_degree(d, p) {
            let mut k = 0;
            loop {
                let (q, r) = poly_divrem(&rest, &cand, p);
                if !r.is_empty() {
                    break;
                }
                rest = q;
                k += 1;
            }
            if k > 0 {
                out.push((cand, k));
            }
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push((rest, 1));
    }
    out
}

/// An element of `F_p(u)` as a reduced fraction with monic denominator.
/// Elements of `F_p` are the constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: FpPoly,
    den: FpPoly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: Vec::new(), den: vec![1] }
    }

    pub fn constant(c: u64, p: u64) -> Self {
        let mut num = vec![c % p];
        trim(&mut num);
        RatFn { num, den: vec![1] }
    }

    pub fn from_i64(n: i64, p: u64) -> Self {
        Self::constant(fp_from_i64(n, p), p)
    }

    pub fn u() -> Self {
        RatFn { num: vec![0, 1], den: vec![1] }
    }

    pub fn from_poly(num: FpPoly) -> Self {
        let mut num = num;
        trim(&mut num);
        RatFn { num, den: vec![1] }
    }

    pub fn new(num: &[u64], den: &[u64], p: u64) -> Result<Self> {
        let mut den = den.to_vec();
        trim(&mut den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let mut num = num.to_vec();
        trim(&mut num);
        if num.is_empty() {
            return Ok(Self::zero());
        }
        let g = poly_gcd(&num, &den, p);
        let (mut num, _) = poly_divrem(&num, &g, p);
        let (mut den, _) = poly_divrem(&den, &g, p);
        let l = fp_inv(*den.last().unwrap(), p);
        num = poly_scale(&num, l, p);
        den = poly_scale(&den, l, p);
        Ok(RatFn { num, den })
    }

    pub fn num(&self) -> &[u64] {
        &self.num
    }

    pub fn den(&self) -> &[u64] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num == [1] && self.den == [1]
    }

    /// `Some(c)` when the element lies in `F_p`.
    pub fn as_constant(&self) -> Option<u64> {
        match (self.num.len(), self.den.as_slice()) {
            (0, _) => Some(0),
            (1, [1]) => Some(self.num[0]),
            _ => None,
        }
    }

    pub fn add(&self, o: &RatFn, p: u64) -> RatFn {
        if self.den == [1] && o.den == [1] {
            return RatFn::from_poly(poly_add(&self.num, &o.num, p));
        }
        let num = poly_add(&poly_mul(&self.num, &o.den, p), &poly_mul(&o.num, &self.den, p), p);
        RatFn::new(&num, &poly_mul(&self.den, &o.den, p), p).expect("nonzero denominators")
    }

    pub fn neg(&self, p: u64) -> RatFn {
        RatFn { num: poly_neg(&self.num, p), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn, p: u64) -> RatFn {
        self.add(&o.neg(p), p)
    }

    pub fn mul(&self, o: &RatFn, p: u64) -> RatFn {
        if self.den == [1] && o.den == [1] {
            return RatFn::from_poly(poly_mul(&self.num, &o.num, p));
        }
        RatFn::new(&poly_mul(&self.num, &o.num, p), &poly_mul(&self.den, &o.den, p), p)
            .expect("nonzero denominators")
    }

    pub fn inv(&self, p: u64) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFn::new(&self.den, &self.num, p)
    }

    pub fn div(&self, o: &RatFn, p: u64) -> Result<RatFn> {
        Ok(self.mul(&o.inv(p)?, p))
    }

    pub fn pow(&self, e: u64, p: u64) -> RatFn {
        let mut r = RatFn::constant(1, p);
        for _ in 0..e {
            r = r.mul(self, p);
        }
        r
    }

    /// The `p`-th root when the element is a `p`-th power. Since `F_p` is
    /// perfect, this holds exactly when numerator and denominator lie in
    /// `F_p[u^p]`.
    pub fn pth_root(&self, p: u64) -> Option<RatFn> {
        let root = |a: &[u64]| -> Option<FpPoly> {
            let pu = p as usize;
            if a.iter().enumerate().any(|(i, &c)| c != 0 && i % pu != 0) {
                return None;
            }
            Some(a.iter().step_by(pu).copied().collect())
        };
        Some(RatFn { num: root(&self.num)?, den: root(&self.den)? })
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |a: &[u64]| -> String {
            let terms: Vec<String> = a
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| match (i, c) {
                    (0, c) => c.to_string(),
                    (1, 1) => "u".to_string(),
                    (1, c) => format!("{c}*u"),
                    (i, 1) => format!("u^{i}"),
                    (i, c) => format!("{c}*u^{i}"),
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        if self.den == [1] {
            if self.num.len() > 1 && self.num.iter().filter(|&&c| c != 0).count() > 1 {
                write!(f, "({})", show(&self.num))
            } else {
                write!(f, "{}", show(&self.num))
            }
        } else {
            write!(f, "({})/({})", show(&self.num), show(&self.den))
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f)
    }
}

/// Residue field of a base field: `F_p`, or `F_p(u)` when `with_u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueField {
    pub p: u64,
    pub with_u: bool,
}

/// Polynomial over a residue field, coefficients low to high.
pub type ResiduePoly = Vec<RatFn>;

/// Factorization shape of a residue polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorShape {
    Irreducible,
    /// `(y − r)^k` with `k ≥ 2`.
    PowerOfLinear(RatFn),
    /// `φ^k` with `deg φ ≥ 2`, `k ≥ 2`.
    PowerOfHigher,
    /// Has two coprime nonconstant factors.
    Reducible,
}

impl ResidueField {
    pub fn trim(&self, a: &mut ResiduePoly) {
        while a.last().is_some_and(RatFn::is_zero) {
            a.pop();
        }
    }

    pub fn derivative(&self, a: &[RatFn]) -> ResiduePoly {
        let mut d: ResiduePoly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&RatFn::from_i64(i as i64, self.p), self.p))
            .collect();
        self.trim(&mut d);
        d
    }

    /// `dQ/dy ≠ 0`; for an irreducible polynomial this is separability.
    pub fn separable(&self, q: &[RatFn]) -> bool {
        !self.derivative(q).is_empty()
    }

    pub fn eval(&self, a: &[RatFn], y: &RatFn) -> RatFn {
        a.iter()
            .rev()
            .fold(RatFn::zero(), |acc, c| acc.mul(y, self.p).add(c, self.p))
    }

    /// Divide by the monic `y − r`; returns quotient and remainder.
    fn div_linear(&self, a: &[RatFn], r: &RatFn) -> (ResiduePoly, RatFn) {
        let p = self.p;
        let mut q = vec![RatFn::zero(); a.len().saturating_sub(1)];
        let mut carry = RatFn::zero();
        for i in (0..a.len()).rev() {
            let cur = a[i].add(&carry.mul(r, p), p);
            if i == 0 {
                return (q, cur);
            }
            q[i - 1] = cur.clone();
            carry = cur;
        }
        (q, RatFn::zero())
    }

    fn as_fp(&self, a: &[RatFn]) -> Option<FpPoly> {
        a.iter().map(RatFn::as_constant).collect()
    }

    /// Factorization shape of a nonconstant polynomial.
    pub fn classify(&self, a: &[RatFn]) -> Result<FactorShape> {
        let p = self.p;
        let mut a = a.to_vec();
        self.trim(&mut a);
        let n = a.len().saturating_sub(1);
        if n == 0 {
            return Err(Error::validation("cannot classify a constant residue polynomial"));
        }
        if n == 1 {
            return Ok(FactorShape::Irreducible);
        }
        let lead_inv = a[n].inv(p)?;
        let a: ResiduePoly = a.iter().map(|c| c.mul(&lead_inv, p)).collect();
        if let Some(fa) = self.as_fp(&a) {
            let fs = poly_factor(&fa, p);
            return Ok(match fs.as_slice() {
                [(_, 1)] => FactorShape::Irreducible,
                [(phi, _)] if phi.len() == 2 => {
                    FactorShape::PowerOfLinear(RatFn::constant((p - phi[0]) % p, p))
                }
                [_] => FactorShape::PowerOfHigher,
                _ => FactorShape::Reducible,
            });
        }
        // y^p − c over F_p(u): irreducible unless c is a p-th power, in
        // which case it is (y − c^{1/p})^p.
        if n as u64 == p && a[1..n].iter().all(RatFn::is_zero) {
            let c = a[0].neg(p);
            return Ok(match c.pth_root(p) {
                Some(r) => FactorShape::PowerOfLinear(r),
                None => FactorShape::Irreducible,
            });
        }
        if n <= 3 {
            return Ok(match self.find_root(&a)? {
                None => FactorShape::Irreducible,
                Some(r) => {
                    let mut rest = a.clone();
                    let mut k = 0;
                    loop {
                        let (q, rem) = self.div_linear(&rest, &r);
                        if !rem.is_zero() || rest.len() <= 1 {
                            break;
                        }
                        rest = q;
                        k += 1;
                    }
                    if rest.len() == 1 && k >= 2 {
                        FactorShape::PowerOfLinear(r)
                    } else {
                        FactorShape::Reducible
                    }
                }
            });
        }
        Err(Error::Unsupported(format!(
            "irreducibility of a degree-{n} polynomial over F_{p}(u)"
        )))
    }

    /// A root in `F_p(u)` of a monic polynomial, by the rational root
    /// theorem over `F_p[u]`.
    fn find_root(&self, a: &[RatFn]) -> Result<Option<RatFn>> {
        let p = self.p;
        if a[0].is_zero() {
            return Ok(Some(RatFn::zero()));
        }
        // clear denominators
        let mut l: FpPoly = vec![1];
        for c in a {
            let g = poly_gcd(&l, &c.den, p);
            l = poly_divrem(&poly_mul(&l, &c.den, p), &g, p).0;
        }
        let b: Vec<FpPoly> = a
            .iter()
            .map(|c| poly_divrem(&poly_mul(&c.num, &l, p), &c.den, p).0)
            .collect();
        let n = b.len() - 1;
        let tops = divisors(&b[n], p);
        let bottoms = divisors(&b[0], p);
        for s in &bottoms {
            for t in &tops {
                if poly_gcd(s, t, p) != [1] {
                    continue;
                }
                for unit in 1..p {
                    let cand = RatFn::new(&poly_scale(s, unit, p), t, p)?;
                    if self.eval(a, &cand).is_zero() {
                        return Ok(Some(cand));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn fmt_poly(&self, a: &[RatFn]) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let cs = c.to_string();
                match i {
                    0 => cs,
                    _ => {
                        let y = if i == 1 { "y".to_string() } else { format!("y^{i}") };
                        if c.is_one() {
                            y
                        } else {
                            format!("{cs}*{y}")
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
}

/// Monic divisors of a nonzero polynomial over `F_p`.
fn divisors(a: &[u64], p: u64) -> Vec<FpPoly> {
    let mut out: Vec<FpPoly> = vec![vec![1]];
    for (f, k) in poly_factor(a, p) {
        let mut next = Vec::new();
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..k {
                cur = poly_mul(&cur, &f, p);
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: u64, p: u64) -> RatFn {
        RatFn::constant(x, p)
    }

    #[test]
    fn field_axioms_small() {
        let p = 5;
        let u = RatFn::u();
        let a = u.add(&c(2, p), p);
        let inv = a.inv(p).unwrap();
        assert!(a.mul(&inv, p).is_one());
        assert!(a.sub(&a, p).is_zero());
    }

    #[test]
    fn factor_over_fp() {
        let p = 2;
        // y^2 + y + 1 irreducible over F_2
        assert_eq!(poly_factor(&[1, 1, 1], p), vec![(vec![1, 1, 1], 1)]);
        // y^2 + 1 = (y + 1)^2
        assert_eq!(poly_factor(&[1, 0, 1], p), vec![(vec![1, 1], 2)]);
        let p = 3;
        // y^2 - 2 = y^2 + 1 irreducible over F_3
        assert_eq!(poly_factor(&[1, 0, 1], p).len(), 1);
    }

    #[test]
    fn classify_examples() {
        let f2 = ResidueField { p: 2, with_u: false };
        assert_eq!(f2.classify(&[c(1, 2), c(1, 2), c(1, 2)]).unwrap(), FactorShape::Irreducible);
        assert_eq!(
            f2.classify(&[c(1, 2), c(0, 2), c(1, 2)]).unwrap(),
            FactorShape::PowerOfLinear(c(1, 2))
        );
        assert_eq!(f2.classify(&[c(0, 2), c(1, 2), c(1, 2)]).unwrap(), FactorShape::Reducible);
        // (y^2+y+1)^2 = y^4 + y^2 + 1
        assert_eq!(
            f2.classify(&[c(1, 2), c(0, 2), c(1, 2), c(0, 2), c(1, 2)]).unwrap(),
            FactorShape::PowerOfHigher
        );

        let f2u = ResidueField { p: 2, with_u: true };
        let u = RatFn::u();
        // y^2 - u irreducible, inseparable
        let q = vec![u.neg(2), RatFn::zero(), c(1, 2)];
        assert_eq!(f2u.classify(&q).unwrap(), FactorShape::Irreducible);
        assert!(!f2u.separable(&q));
        // y^3 - u irreducible, separable
        let q3 = vec![u.neg(2), RatFn::zero(), RatFn::zero(), c(1, 2)];
        assert_eq!(f2u.classify(&q3).unwrap(), FactorShape::Irreducible);
        assert!(f2u.separable(&q3));
        // y^2 - u^2 = (y - u)^2
        let sq = vec![u.mul(&u, 2).neg(2), RatFn::zero(), c(1, 2)];
        assert_eq!(f2u.classify(&sq).unwrap(), FactorShape::PowerOfLinear(u.clone()));
        // (y - u)(y - 1/u) over F_3(u) has the root 1/u or u
        let p = 3;
        let f3u = ResidueField { p, with_u: true };
        let inv_u = u.inv(p).unwrap();
        let q = vec![c(1, p), u.add(&inv_u, p).neg(p), c(1, p)];
        assert_eq!(f3u.classify(&q).unwrap(), FactorShape::Reducible);
        // y^2 + y + u over F_2(u): no root
        let q = vec![u.clone(), c(1, 2), c(1, 2)];
        assert_eq!(f2u.classify(&q).unwrap(), FactorShape::Irreducible);
    }

    #[test]
    fn pth_roots() {
        let p = 3;
        let u = RatFn::u();
        let x = u.add(&c(1, p), p).inv(p).unwrap();
        let cube = x.pow(3, p);
        assert_eq!(cube.pth_root(p), Some(x));
        assert_eq!(u.pth_root(p), None);
    }
}
