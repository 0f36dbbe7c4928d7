//! Concrete valued fields with discrete valuation `v: K → ℤ ∪ {∞}`:
//! `ℚ_p` (on exact rationals) and truncated Laurent series over `F_p` or
//! `F_p(u)`. Valuation answers are exact or refused, never approximate.

pub mod extension;
pub mod fp;
pub mod laurent;
pub mod parse;
pub mod qp;

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use extension::{build_extension, normal_form, ConcreteCase, Extension, NormalForm};
pub use fp::{FactorShape, RatFn, ResidueField, ResiduePoly};
pub use laurent::{LaurentField, Series};
pub use qp::{Qp, QpElem};

/// A discretely valued field with normalized value group `ℤ`.
///
/// The field object is an explicit context: elements do not know which
/// field they belong to.
pub trait ValuedField: Clone + Debug {
    type Elem: Clone + Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn of_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Exact zero test; an element known only up to precision is not zero.
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `None` is `∞`.
    fn val(&self, a: &Self::Elem) -> Result<Option<i64>>;
    /// `π^k` for the fixed uniformizer `π` (`p` or `t`).
    fn pi_pow(&self, k: i64) -> Self::Elem;
    /// Residue of an element of nonnegative value.
    fn residue(&self, a: &Self::Elem) -> Result<RatFn>;
    /// A fixed lift of a residue.
    fn lift(&self, r: &RatFn) -> Result<Self::Elem>;
    fn residue_field(&self) -> ResidueField;
    /// `0` for `ℚ_p`, `p` for Laurent series over `F_p`.
    fn characteristic(&self) -> u64;
    fn residue_char(&self) -> u64 {
        self.residue_field().p
    }
    /// Named generators available to the expression parser.
    fn variable(&self, name: &str) -> Option<Self::Elem>;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    fn parse_elem(&self, s: &str) -> Result<Self::Elem> {
        parse::parse_expr(self, s)
    }

    /// Value of the integer `n` viewed in the field.
    fn val_int(&self, n: i64) -> Result<Option<i64>> {
        self.val(&self.of_i64(n))
    }
}

/// Serialized base-field tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "field", deny_unknown_fields)]
pub enum BaseField {
    #[serde(rename = "Qp")]
    Qp { p: u64 },
    /// `F_p((t))` with truncation at relative precision `prec`.
    #[serde(rename = "Fp_t")]
    FpT { p: u64, prec: i64 },
    /// `F_p(u)((t))`.
    #[serde(rename = "Fp_u_t")]
    FpUT { p: u64, prec: i64 },
}

/// A base field descriptor resolved into a usable field.
#[derive(Clone, Debug)]
pub enum AnyField {
    Qp(Qp),
    Laurent(LaurentField),
}

impl BaseField {
    pub fn build(&self) -> Result<AnyField> {
        let check_p = |p: u64| {
            if crate::ordgrp::is_prime(p) && p < (1 << 31) {
                Ok(())
            } else {
                Err(Error::validation(format!("field characteristic {p} is not a usable prime")))
            }
        };
        let check_prec = |prec: i64| {
            if (1..=4096).contains(&prec) {
                Ok(())
            } else {
                Err(Error::validation(format!("precision {prec} outside 1..=4096")))
            }
        };
        Ok(match *self {
            BaseField::Qp { p } => {
                check_p(p)?;
                AnyField::Qp(Qp::new(p))
            }
            BaseField::FpT { p, prec } => {
                check_p(p)?;
                check_prec(prec)?;
                AnyField::Laurent(LaurentField::new(p, false, prec))
            }
            BaseField::FpUT { p, prec } => {
                check_p(p)?;
                check_prec(prec)?;
                AnyField::Laurent(LaurentField::new(p, true, prec))
            }
        })
    }
}
