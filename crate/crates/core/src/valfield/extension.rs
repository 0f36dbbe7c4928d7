//! Finite extensions `L = K[x]/(g)` of a complete discretely valued field
//! in the defectless case, built from Newton polygon and residual
//! polynomial data.
//!
//! The construction keeps an affine change of generator
//! `η = π^k·η₀ + c` such that either `η₀` has value `0` and its residue
//! generates `Lv` (`e = 1`), or `v(η₀) = m/e` with `0 < m < e` and the
//! residue of `η₀^e/π^m` generates `Lv`. In both cases
//! `v(Σ b_i η₀^i) = min_i (v(b_i) + i·v(η₀))` for `deg < n`, which is how
//! [`Extension::eval_val`] computes values.

use num_traits::Zero;

use super::fp::{FactorShape, ResidueField, ResiduePoly};
use super::ValuedField;
use crate::error::{Error, Result};
use crate::ordgrp::{Rat, Value, ValueGroup, ValueInf};
use crate::poly::{self, Poly};

/// Iteration cap for the generator-shifting loop.
const MAX_SHIFTS: usize = 256;

#[derive(Clone, Debug)]
pub struct Extension<F: ValuedField> {
    pub base: F,
    pub g: Poly<F::Elem>,
    pub n: usize,
    pub e: u32,
    pub f: u32,
    /// `η = π^shift_k · η₀ + shift_c`.
    pub shift_k: i64,
    pub shift_c: F::Elem,
    /// Minimal polynomial of `η₀`.
    pub g0: Poly<F::Elem>,
    /// `v(η₀) ∈ [0, 1)`.
    pub v_eta0: Rat,
    /// Minimal polynomial over `Kv` of the residue generator.
    pub residue_minpoly: ResiduePoly,
    /// Whether `O_L = O_K[η₀]`.
    pub monogenic: bool,
}

/// Shape of a concrete extension in the pure-extension taxonomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConcreteCase {
    Trivial,
    PurelyInertial,
    PurelyRamified,
}

/// Build `K[x]/(g)` for a monic `g` whose Newton polygon has one slope and
/// whose residual polynomials lead to an irreducible one.
pub fn build_extension<F: ValuedField>(k: &F, g: &Poly<F::Elem>) -> Result<Extension<F>> {
    let nf = normal_form(k, g)?;
    let n = nf.h.degree().expect("nonconstant");
    if n == 1 {
        return Ok(trivial(k, g, nf.h, nf.shift_k, nf.shift_c));
    }
    let rf = k.residue_field();
    let (m, e) = (*nf.slope.numer(), *nf.slope.denom());
    match nf.shape {
        FactorShape::Irreducible => {
            let f = (n / e as usize) as u32;
            let e = e as u32;
            let monogenic = e == 1 || (f == 1 && m == 1);
            Ok(Extension {
                base: k.clone(),
                g: g.clone(),
                n,
                e,
                f,
                shift_k: nf.shift_k,
                shift_c: nf.shift_c,
                g0: nf.h,
                v_eta0: nf.slope,
                residue_minpoly: nf.residual,
                monogenic,
            })
        }
        FactorShape::Reducible => Err(Error::Reducible(format!(
            "residual polynomial {} has coprime factors",
            rf.fmt_poly(&nf.residual)
        ))),
        FactorShape::PowerOfHigher => Err(Error::NotRegular(format!(
            "residual polynomial {} is a power of an irreducible factor of degree > 1",
            rf.fmt_poly(&nf.residual)
        ))),
        FactorShape::PowerOfLinear(_) => Err(Error::NotRegular(format!(
            "residual polynomial {} is a power of a linear factor at a ramified slope",
            rf.fmt_poly(&nf.residual)
        ))),
    }
}

/// The generator after the order-one normalization `η = π^shift_k·η₀ + shift_c`.
#[derive(Clone, Debug)]
pub struct NormalForm<F: ValuedField> {
    /// Minimal polynomial of `η₀` when `g` is irreducible.
    pub h: Poly<F::Elem>,
    pub shift_k: i64,
    pub shift_c: F::Elem,
    /// `v(η₀) ∈ [0, 1)`.
    pub slope: Rat,
    pub residual: ResiduePoly,
    /// Shape of the residual polynomial; never a power of a linear factor
    /// at an integral slope.
    pub shape: FactorShape,
}

/// Shift and rescale the generator until `g` has one slope whose residual
/// polynomial is not the power of a linear factor, or until a root in `K`
/// or a second slope shows that `g` is reducible.
pub fn normal_form<F: ValuedField>(k: &F, g: &Poly<F::Elem>) -> Result<NormalForm<F>> {
    let n = g.degree().ok_or_else(|| Error::validation("g must be nonconstant"))?;
    if n == 0 {
        return Err(Error::validation("g must be nonconstant"));
    }
    if !poly::is_monic(k, g) {
        return Err(Error::validation("g must be monic"));
    }
    let rf = k.residue_field();
    let mut h = g.clone();
    let mut shift_k: i64 = 0;
    let mut shift_c = k.zero();

    for _ in 0..MAX_SHIFTS {
        let h0 = h.coeff(k, 0);
        if k.is_zero(&h0) {
            if n == 1 {
                return Ok(NormalForm {
                    h,
                    shift_k,
                    shift_c,
                    slope: Rat::zero(),
                    residual: Vec::new(),
                    shape: FactorShape::Irreducible,
                });
            }
            return Err(Error::Reducible("g has a root in K".into()));
        }
        let v0 = k.val(&h0)?.expect("nonzero constant term");
        for i in 1..n {
            if let Some(vi) = k.val(&h.coeff(k, i))? {
                // on or above the segment from (0, v0) to (n, 0)
                if vi * (n as i64) < v0 * ((n - i) as i64) {
                    return Err(Error::MixedSlopes);
                }
            }
        }
        let s = Rat::new(v0, n as i64);
        let kfl = s.floor().to_integer();
        // η_h = π^kfl · η'
        let c: Vec<F::Elem> = (0..=n)
            .map(|i| k.mul(&h.coeff(k, i), &k.pi_pow(kfl * (i as i64 - n as i64))))
            .collect();
        let hp = poly::trimmed(k, c);
        shift_k += kfl;
        let sp = s - Rat::from_integer(kfl);
        let (m, e) = (*sp.numer(), *sp.denom());
        let steps = n / e as usize;
        let mut r: ResiduePoly = Vec::with_capacity(steps + 1);
        for j in 0..=steps {
            let i = j * e as usize;
            let scaled = k.mul(&hp.coeff(k, i), &k.pi_pow(-((steps - j) as i64) * m));
            r.push(k.residue(&scaled)?);
        }
        let shape = if n == 1 { FactorShape::Irreducible } else { rf.classify(&r)? };
        match shape {
            FactorShape::PowerOfLinear(root) if e == 1 => {
                // η' = η'' + lift(root)
                let lifted = k.lift(&root)?;
                h = poly::compose_affine(k, &hp, &k.one(), &lifted);
                shift_c = k.add(&shift_c, &k.mul(&k.pi_pow(shift_k), &lifted));
            }
            shape => return Ok(NormalForm { h: hp, shift_k, shift_c, slope: sp, residual: r, shape }),
        }
    }
    Err(Error::NotRegular(format!(
        "generator normalization did not terminate after {MAX_SHIFTS} shifts"
    )))
}

fn trivial<F: ValuedField>(
    k: &F,
    g: &Poly<F::Elem>,
    h: Poly<F::Elem>,
    shift_k: i64,
    shift_c: F::Elem,
) -> Extension<F> {
    // h = x + a: η₀ = −a
    let a = h.coeff(k, 0);
    let c = k.add(&shift_c, &k.mul(&k.pi_pow(shift_k), &k.neg(&a)));
    Extension {
        base: k.clone(),
        g: g.clone(),
        n: 1,
        e: 1,
        f: 1,
        shift_k: 0,
        shift_c: c,
        g0: poly::var(k),
        v_eta0: Rat::zero(),
        residue_minpoly: vec![super::RatFn::zero(), super::RatFn::constant(1, k.residue_field().p)],
        monogenic: true,
    }
}

impl<F: ValuedField> Extension<F> {
    pub fn value_group(&self) -> ValueGroup {
        ValueGroup::discrete_rank_one(Rat::new(1, self.e as i64))
    }

    pub fn residue_field(&self) -> ResidueField {
        self.base.residue_field()
    }

    pub fn case(&self) -> Result<ConcreteCase> {
        match (self.e, self.f) {
            (1, 1) => Ok(ConcreteCase::Trivial),
            (1, _) => Ok(ConcreteCase::PurelyInertial),
            (_, 1) => Ok(ConcreteCase::PurelyRamified),
            (e, f) => Err(Error::NotPure { e, f }),
        }
    }

    /// `f(π^k x + c)`: `f(η)` rewritten as a polynomial in `η₀`, reduced
    /// modulo `g₀`.
    pub fn in_eta0(&self, f: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
        let k = &self.base;
        let ft = poly::compose_affine(k, f, &k.pi_pow(self.shift_k), &self.shift_c);
        poly::rem(k, &ft, &self.g0)
    }

    /// `v(b(η₀))` for `b` already reduced modulo `g₀`.
    pub fn val_eta0(&self, b: &Poly<F::Elem>) -> Result<Option<Rat>> {
        let k = &self.base;
        let mut best: Option<Rat> = None;
        for (i, c) in b.coeffs().iter().enumerate() {
            if let Some(v) = k.val(c)? {
                let w = Rat::from_integer(v) + self.v_eta0 * Rat::from_integer(i as i64);
                best = Some(best.map_or(w, |b: Rat| b.min(w)));
            }
        }
        Ok(best)
    }

    /// `v(f(η))`, `None` meaning `∞`.
    pub fn eval_val(&self, f: &Poly<F::Elem>) -> Result<Option<Rat>> {
        self.val_eta0(&self.in_eta0(f)?)
    }

    pub fn eval_value(&self, f: &Poly<F::Elem>) -> Result<ValueInf> {
        Ok(match self.eval_val(f)? {
            Some(v) => ValueInf::Finite(Value::rank_one(v)),
            None => ValueInf::Infinity,
        })
    }

    /// `v(η)`.
    pub fn v_eta(&self) -> Result<Option<Rat>> {
        self.eval_val(&poly::var(&self.base))
    }

    /// `v(g′(η))`.
    pub fn v_gprime(&self) -> Result<Option<Rat>> {
        self.eval_val(&poly::derivative(&self.base, &self.g))
    }

    /// `v(g₀′(η₀))`, the exponent of the different when `O_L = O_K[η₀]`.
    pub fn v_g0prime(&self) -> Result<Option<Rat>> {
        let k = &self.base;
        let d = poly::derivative(k, &self.g0);
        self.val_eta0(&poly::rem(k, &d, &self.g0)?)
    }

    /// Residue minimal polynomial of the residue generator.
    pub fn residue_minpoly(&self) -> &ResiduePoly {
        &self.residue_minpoly
    }

    pub fn residue_separable(&self) -> bool {
        self.residue_field().separable(&self.residue_minpoly)
    }

    /// `m` with `v(η₀) = m/e`.
    pub fn eta0_numerator(&self) -> i64 {
        (self.v_eta0 * Rat::from_integer(self.e as i64)).to_integer()
    }
}
