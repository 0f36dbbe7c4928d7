//! Brute-force checks kept apart from the main code paths: the classical
//! different through a discriminant, `δ` through explicit roots, and
//! segment operations through enumeration on finite grids.

pub mod grid;

use crate::error::{Error, Result};
use crate::keypoly::Val;
use crate::ordgrp::{Rat, Value, ValueInf};
use crate::poly::{self, Poly};
use crate::valfield::{Extension, ValuedField};

pub use grid::{
    check_annihilator, check_equal, check_has_min, check_invariance, check_member,
    random_group, segment_bruteforce, GridWindow, RawSegment, SegmentOp, Verdict, MIN_WINDOW_POINTS,
};

/// Determinant by elimination, pivoting on an entry of least value.
fn determinant<F: ValuedField>(k: &F, mut m: Vec<Vec<F::Elem>>) -> Result<F::Elem> {
    let n = m.len();
    let mut det = k.one();
    for col in 0..n {
        let mut best: Option<(usize, i64)> = None;
        for (row, r) in m.iter().enumerate().skip(col) {
            if let Some(v) = k.val(&r[col])? {
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((row, v));
                }
            }
        }
        let Some((piv, _)) = best else { return Ok(k.zero()) };
        if piv != col {
            m.swap(piv, col);
            det = k.neg(&det);
        }
        let pinv = k.inv(&m[col][col])?;
        det = k.mul(&det, &m[col][col]);
        for row in col + 1..n {
            if k.is_zero(&m[row][col]) {
                continue;
            }
            let factor = k.mul(&m[row][col], &pinv);
            let pivot = m[col].clone();
            for (x, y) in m[row].iter_mut().zip(&pivot).skip(col) {
                *x = k.sub(x, &k.mul(&factor, y));
            }
        }
    }
    Ok(det)
}

/// `Res(a, b)` through the Sylvester matrix.
pub fn resultant<F: ValuedField>(k: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<F::Elem> {
    let (da, db) = match (a.degree(), b.degree()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Ok(k.zero()),
    };
    let size = da + db;
    if size == 0 {
        return Ok(k.one());
    }
    let mut m = vec![vec![k.zero(); size]; size];
    for i in 0..db {
        for (j, c) in a.coeffs().iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.coeffs().iter().rev().enumerate() {
            m[db + i][i + j] = c.clone();
        }
    }
    determinant(k, m)
}

/// The different exponent `v(g₀′(η₀))` of `O_K[η₀]`, computed as
/// `v(Res(g₀, g₀′)) / n`: all conjugates of `η₀` share one value, so each
/// contributes equally to the discriminant.
pub fn different_monogenic<F: ValuedField>(l: &Extension<F>) -> Result<ValueInf> {
    let k = &l.base;
    let d = poly::derivative(k, &l.g0);
    if d.is_zero() {
        return Ok(ValueInf::Infinity);
    }
    let res = resultant(k, &l.g0, &d)?;
    Ok(match k.val(&res)? {
        None => ValueInf::Infinity,
        Some(v) => ValueInf::Finite(Value::rank_one(Rat::new(v, l.n as i64))),
    })
}

/// `max v(η − a)` over the roots `a ∈ K` of `f = Π (x − a)`.
pub fn delta_bruteforce<F: ValuedField>(
    l: &Extension<F>,
    f: &Poly<F::Elem>,
    roots: &[F::Elem],
) -> Result<Val> {
    let k = &l.base;
    let product = roots.iter().fold(poly::constant(k, k.one()), |acc, r| {
        poly::mul(k, &acc, &Poly(vec![k.neg(r), k.one()]))
    });
    if product != *f || roots.is_empty() {
        return Err(Error::validation("f is not the product of the given linear factors"));
    }
    let mut best: Option<Val> = None;
    for r in roots {
        let v = l.eval_val(&Poly(vec![k.neg(r), k.one()]))?;
        best = Some(match (best, v) {
            (None, v) => v,
            (Some(None), _) | (_, None) => None,
            (Some(Some(a)), Some(b)) => Some(a.max(b)),
        });
    }
    Ok(best.expect("nonempty roots"))
}
