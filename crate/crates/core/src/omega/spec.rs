//! Input descriptions of pure extensions, synthetic or concrete, and their
//! validation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordgrp::{is_prime, multiplicity, Rat, Value, ValueGroup, ValueInf};
use crate::segment::ValueFamily;
use crate::valfield::{BaseField, LaurentField, RatFn, ResidueField, ResiduePoly, ValuedField};

/// Which shape of defining polynomial a spec describes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyKind {
    #[default]
    Generic,
    /// `x^p − x − a`.
    ArtinSchreier,
    /// `x^q − a`.
    Kummer,
}

impl PolyKind {
    fn is_generic(&self) -> bool {
        *self == PolyKind::Generic
    }
}

/// `n` immediate over `K`, with no maximum in `v(η − K)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectSpec {
    pub n: u64,
    pub p: u64,
    pub group: ValueGroup,
    #[serde(rename = "v_eta_K")]
    pub v_eta_k: ValueFamily,
    /// Required for generic specs; implied for Artin–Schreier (`0`) and
    /// Kummer (`vp`, with `vη = 0`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_gprime_eta: Option<ValueInf>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "PolyKind::is_generic")]
    pub kind: PolyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vp: Option<ValueInf>,
}

/// Witness data for the sufficient condition `vp < r(β_d + d·v(η − c))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KummerWitness {
    pub vp: ValueInf,
    pub r: i64,
    pub v_eta_c: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchedSpec {
    pub n: u64,
    pub p: u64,
    pub group: ValueGroup,
    pub d: u64,
    /// Fixed value of `∂_d g`.
    pub beta_d: Value,
    #[serde(rename = "v_eta_K")]
    pub v_eta_k: ValueFamily,
    pub v_gprime_eta: ValueInf,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kummer_witness: Option<KummerWitness>,
}

/// A residue polynomial written with expressions in `u`, low to high.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidueSpec {
    #[serde(default)]
    pub with_u: bool,
    pub coeffs: Vec<String>,
}

impl ResidueSpec {
    pub fn field(&self, p: u64) -> ResidueField {
        ResidueField { p, with_u: self.with_u }
    }

    pub fn parse(&self, p: u64) -> Result<ResiduePoly> {
        if !is_prime(p) {
            return Err(Error::validation("a residue polynomial needs a prime p"));
        }
        let k = LaurentField::new(p, self.with_u, 64);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let s = k.parse_elem(c)?;
            if s.terms().keys().any(|&e| e != 0) {
                return Err(Error::validation(format!("residue coefficient {c:?} involves t")));
            }
            out.push(s.coeff(0));
        }
        self.field(p).trim(&mut out);
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InertialSpec {
    pub n: u64,
    pub p: u64,
    pub group: ValueGroup,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_minpoly: Option<ResidueSpec>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<u64>>,
    pub v_gprime_eta: ValueInf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamifiedSpec {
    pub n: u64,
    pub p: u64,
    /// `vL`.
    pub group: ValueGroup,
    #[serde(rename = "vK")]
    pub v_k: ValueGroup,
    /// `vη`.
    pub gamma: Value,
    /// `v(a_ℓ)` for `ℓ = 0, …, n−1`; `a_n = 1`.
    pub coeff_values: Vec<ValueInf>,
    pub vp: ValueInf,
    #[serde(default, skip_serializing_if = "PolyKind::is_generic")]
    pub kind: PolyKind,
}

/// A defining polynomial over a concrete base field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcreteSpec {
    pub field: BaseField,
    /// Coefficients low to high, as element expressions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<String>>,
    /// The constant `a` of `x^q − a` or `x^p − x − a`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "PolyKind::is_generic")]
    pub kind: PolyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Spec {
    PureDefect(DefectSpec),
    BranchedPure(BranchedSpec),
    PurelyInertial(InertialSpec),
    PurelyRamified(RamifiedSpec),
    Concrete(ConcreteSpec),
}

fn is_power_of_p(n: u64, p: u64) -> bool {
    p >= 2 && n >= 1 && p.checked_pow(multiplicity(n, p)) == Some(n)
}

fn check_p(p: u64, allow_zero: bool) -> Result<()> {
    if (p == 0 && allow_zero) || is_prime(p) {
        Ok(())
    } else if p == 0 {
        Err(Error::validation("residue characteristic 0 is not allowed for this case"))
    } else {
        Err(Error::validation(format!("p = {p} is not prime")))
    }
}

fn check_family(g: &ValueGroup, f: &ValueFamily) -> Result<()> {
    f.validate(g)?;
    if f.has_max() {
        return Err(Error::validation("v(η − K) must not have a maximum"));
    }
    Ok(())
}

fn check_value_inf(g: &ValueGroup, v: &ValueInf) -> Result<()> {
    match v {
        ValueInf::Finite(x) => g.check(x),
        ValueInf::Infinity => Ok(()),
    }
}

/// `p ∤ B`: some element of `B` is prime to `p`.
pub fn p_not_divides(p: u64, b: &[u64]) -> bool {
    p == 0 || b.iter().any(|&k| k % p != 0)
}

fn check_b_basic(b: &[u64], n: u64) -> Result<()> {
    if b.is_empty() {
        return Err(Error::validation("B must be nonempty"));
    }
    if let Some(&k) = b.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::validation(format!("B element {k} outside 1..={n}")));
    }
    Ok(())
}

/// `vℓ` for an integer `ℓ ≥ 1`: `0` if `p ∤ ℓ`, else `mult_p(ℓ)·vp`.
pub fn v_int(l: u64, p: u64, vp: &ValueInf, rank: usize) -> ValueInf {
    let k = multiplicity(l, p);
    if k == 0 {
        return ValueInf::Finite(Value::zero(rank));
    }
    match vp {
        ValueInf::Infinity => ValueInf::Infinity,
        ValueInf::Finite(x) => ValueInf::Finite(x.scale(k as i64)),
    }
}

impl DefectSpec {
    /// `v(g′(η))`, filled in for Artin–Schreier and Kummer specs.
    pub fn gprime_value(&self) -> Result<ValueInf> {
        let r = self.group.rank();
        let implied = match self.kind {
            PolyKind::Generic => None,
            PolyKind::ArtinSchreier => Some(ValueInf::Finite(Value::zero(r))),
            PolyKind::Kummer => Some(
                self.vp
                    .clone()
                    .ok_or_else(|| Error::validation("Kummer defect spec needs vp"))?,
            ),
        };
        match (&self.v_gprime_eta, implied) {
            (Some(v), Some(i)) if *v != i => Err(Error::validation(format!(
                "v_gprime_eta = {v} contradicts the value {i} implied by the polynomial shape"
            ))),
            (Some(v), _) => Ok(v.clone()),
            (None, Some(i)) => Ok(i),
            (None, None) => Err(Error::validation("v_gprime_eta is required")),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_p(self.p, false)?;
        if !is_power_of_p(self.n, self.p) || self.n < 2 {
            return Err(Error::validation(format!(
                "pure defect degree n = {} must be a power of p = {} greater than 1",
                self.n, self.p
            )));
        }
        check_family(&self.group, &self.v_eta_k)?;
        check_value_inf(&self.group, &self.gprime_value()?)?;
        if self.kind != PolyKind::Generic && self.n != self.p {
            return Err(Error::validation("Artin–Schreier and Kummer specs have degree p"));
        }
        if let Some(vp) = &self.vp {
            check_value_inf(&self.group, vp)?;
        }
        if let Some(b) = &self.b {
            check_b_basic(b, self.n)?;
            if let Some(&k) = b.iter().find(|&&k| !is_power_of_p(k, self.p)) {
                return Err(Error::validation(format!(
                    "B element {k} is not a power of p = {}",
                    self.p
                )));
            }
        }
        Ok(())
    }
}

impl BranchedSpec {
    pub fn validate(&self) -> Result<()> {
        check_p(self.p, false)?;
        if !is_power_of_p(self.d, self.p) && self.d != 1 {
            return Err(Error::validation(format!("defect d = {} is not a power of p", self.d)));
        }
        if self.d > self.n {
            return Err(Error::validation(format!("defect d = {} exceeds n = {}", self.d, self.n)));
        }
        check_family(&self.group, &self.v_eta_k)?;
        self.group.check(&self.beta_d)?;
        check_value_inf(&self.group, &self.v_gprime_eta)?;
        if let Some(b) = &self.b {
            check_b_basic(b, self.n)?;
            if !b.contains(&self.d) {
                return Err(Error::validation(format!("d = {} must lie in B", self.d)));
            }
            if !b.contains(&1) {
                if let Some(&k) = b.iter().find(|&&k| k % self.p != 0) {
                    return Err(Error::validation(format!(
                        "1 ∉ B, so every element of B must be a multiple of p; {k} is not"
                    )));
                }
            }
        }
        if let Some(w) = &self.kummer_witness {
            check_value_inf(&self.group, &w.vp)?;
            self.group.check(&w.v_eta_c)?;
        }
        Ok(())
    }
}

impl InertialSpec {
    /// The residue polynomial, if given.
    pub fn residue(&self) -> Result<Option<ResiduePoly>> {
        self.residue_minpoly.as_ref().map(|r| r.parse(self.p)).transpose()
    }

    pub fn validate(&self) -> Result<()> {
        check_p(self.p, true)?;
        check_value_inf(&self.group, &self.v_gprime_eta)?;
        if let ValueInf::Finite(v) = &self.v_gprime_eta {
            if *v < Value::zero(v.rank()) {
                return Err(Error::validation("v(g′(η)) must be nonnegative"));
            }
        }
        if self.n < 2 {
            return Err(Error::validation("a purely inertial extension has degree at least 2"));
        }
        match (self.residue()?, &self.b) {
            (None, None) => Err(Error::validation("give residue_minpoly or B")),
            (Some(q), b) => {
                if q.len() as u64 != self.n + 1 {
                    return Err(Error::validation(format!(
                        "residue minpoly has degree {}, but n = {}",
                        q.len().saturating_sub(1),
                        self.n
                    )));
                }
                if !q[q.len() - 1].is_one() {
                    return Err(Error::validation("residue minpoly must be monic"));
                }
                if let Some(b) = b {
                    let computed = b_of_residue(&q);
                    let given: BTreeSet<u64> = b.iter().copied().collect();
                    if computed != given {
                        return Err(Error::validation(format!(
                            "B = {given:?} differs from the residue exponents {computed:?}"
                        )));
                    }
                }
                Ok(())
            }
            (None, Some(b)) => {
                check_b_basic(b, self.n)?;
                if !b.contains(&self.n) {
                    return Err(Error::validation("B must contain n"));
                }
                Ok(())
            }
        }
    }
}

/// Exponents `k ≥ 1` with nonzero coefficient.
pub fn b_of_residue(q: &[RatFn]) -> BTreeSet<u64> {
    q.iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, _)| k as u64)
        .collect()
}

impl RamifiedSpec {
    /// `vℓ + va_ℓ − (n − ℓ)γ` for `ℓ = 1, …, n`.
    pub fn coefficient_terms(&self) -> Vec<ValueInf> {
        let r = self.group.rank();
        let n = self.n;
        (1..=n)
            .map(|l| {
                let va = if l == n {
                    ValueInf::Finite(Value::zero(r))
                } else {
                    self.coeff_values[l as usize].clone()
                };
                v_int(l, self.p, &self.vp, r)
                    .add(&va)
                    .add_value(&(-self.gamma.scale((n - l) as i64)))
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        check_p(self.p, true)?;
        let (vl, vk) = (&self.group, &self.v_k);
        if vl.rank() != vk.rank() {
            return Err(Error::RankMismatch(vk.rank(), vl.rank()));
        }
        if !vk.is_subgroup_of(vl) {
            return Err(Error::validation("vK must be a subgroup of vL"));
        }
        if self.n < 2 {
            return Err(Error::validation("a purely ramified extension has degree at least 2"));
        }
        vl.check(&self.gamma)?;
        let r = vl.rank();
        if self.gamma <= Value::zero(r) {
            return Err(Error::validation(format!("gamma = {} must be positive", self.gamma)));
        }
        for s in 1..self.n {
            if vk.contains(&self.gamma.scale(s as i64)) {
                return Err(Error::validation(format!(
                    "{s}·gamma lies in vK, so (vL:vK) < n"
                )));
            }
        }
        let n_gamma = self.gamma.scale(self.n as i64);
        if !vk.contains(&n_gamma) {
            return Err(Error::validation("n·gamma must lie in vK"));
        }
        if self.coeff_values.len() as u64 != self.n {
            return Err(Error::validation(format!(
                "coeff_values must list va_0, …, va_{}",
                self.n - 1
            )));
        }
        for v in &self.coeff_values {
            if let ValueInf::Finite(x) = v {
                if !vk.contains(x) {
                    return Err(Error::NotInGroup(format!("{x} (coefficient value, not in vK)")));
                }
            }
        }
        check_value_inf(vk, &self.vp)?;
        if self.coeff_values[0] != ValueInf::Finite(n_gamma) {
            return Err(Error::validation("va_0 must equal n·gamma"));
        }
        let terms = self.coefficient_terms();
        for (l, t) in terms.iter().enumerate().take(self.n as usize - 1) {
            if *t <= ValueInf::Finite(Value::zero(r)) {
                return Err(Error::validation(format!(
                    "vℓ + va_ℓ − (n−ℓ)γ = {t} is not positive for ℓ = {}",
                    l + 1
                )));
            }
        }
        match self.kind {
            PolyKind::Generic => {}
            PolyKind::Kummer => {
                if self.coeff_values[1..].iter().any(|v| !v.is_infinite()) {
                    return Err(Error::validation("a Kummer polynomial x^q − a has no middle terms"));
                }
            }
            PolyKind::ArtinSchreier => {
                if self.n != self.p || !self.vp.is_infinite() {
                    return Err(Error::validation("Artin–Schreier specs need n = p and vp = ∞"));
                }
            }
        }
        Ok(())
    }
}

impl ConcreteSpec {
    pub fn validate(&self) -> Result<()> {
        match (self.kind, &self.g, &self.a) {
            (_, Some(_), Some(_)) => Err(Error::validation("give either g or a, not both")),
            (PolyKind::Generic, None, _) => Err(Error::validation("a generic concrete spec needs g")),
            (PolyKind::Generic, _, _) if self.q.is_some() => {
                Err(Error::validation("q only applies to Kummer specs"))
            }
            (PolyKind::Kummer, None, None) | (PolyKind::ArtinSchreier, None, None) => {
                Err(Error::validation("give g or a"))
            }
            (PolyKind::Kummer, _, _) if self.q.is_none_or(|q| q < 2) => {
                Err(Error::validation("Kummer specs need q ≥ 2"))
            }
            (PolyKind::ArtinSchreier, _, _) if self.q.is_some() => {
                Err(Error::validation("q does not apply to Artin–Schreier specs"))
            }
            _ => Ok(()),
        }
    }

    /// The defining coefficients, low to high.
    pub fn coefficients(&self, p: u64) -> Result<Vec<String>> {
        self.validate()?;
        if let Some(g) = &self.g {
            return Ok(g.clone());
        }
        let a = self.a.clone().expect("validated");
        let neg_a = format!("-({a})");
        Ok(match self.kind {
            PolyKind::Kummer => {
                let q = self.q.expect("validated") as usize;
                let mut c = vec!["0".to_string(); q + 1];
                c[0] = neg_a;
                c[q] = "1".into();
                c
            }
            PolyKind::ArtinSchreier => {
                let mut c = vec!["0".to_string(); p as usize + 1];
                c[0] = neg_a;
                c[1] = "-1".into();
                c[p as usize] = "1".into();
                c
            }
            PolyKind::Generic => unreachable!("validated"),
        })
    }
}

impl Spec {
    pub fn validate(&self) -> Result<()> {
        match self {
            Spec::PureDefect(s) => s.validate(),
            Spec::BranchedPure(s) => s.validate(),
            Spec::PurelyInertial(s) => s.validate(),
            Spec::PurelyRamified(s) => s.validate(),
            Spec::Concrete(s) => s.validate(),
        }
    }
}

/// The rational supremum of an increasing rank-one family, if any.
pub(crate) fn rank_one_sup(f: &ValueFamily) -> Option<Rat> {
    match f {
        ValueFamily::IncToSup { sup, .. } if sup.rank() == 1 => Some(sup.0[0]),
        _ => None,
    }
}

