//! `Ω = Ω_{O_L|O_K}` for pure extensions through the segments `α`, `β`
//! with `Ω ≅ I_α / I_β`, together with the `B`-set criteria that must agree
//! with the comparison `α = β`.

mod concrete;
pub mod spec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordgrp::{
    greatest_isolated_below, quotient_min_positive, ConvexSubgroup, Rat, Value, ValueGroup,
    ValueInf,
};
use crate::segment::{
    annihilator_segment, module_report, segment_of_family, FinalSegment, ModuleReport,
    ValueFamily,
};
pub use spec::{
    b_of_residue, p_not_divides, v_int, BranchedSpec, ConcreteSpec, DefectSpec, InertialSpec,
    KummerWitness, PolyKind, RamifiedSpec, ResidueSpec, Spec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// `L = K`.
    Trivial,
    PureDefect,
    BranchedPure,
    PurelyInertial,
    PurelyRamified,
}

/// Whether `(vL/Δ)_{>0}` has a minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RamifiedSubcase {
    MinimumExists,
    NoMinimum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedInfo {
    pub subcase: RamifiedSubcase,
    /// 1-based start of `Δ`, the greatest isolated subgroup below `vη`.
    pub delta_suffix: usize,
    pub gamma_eta: Value,
    /// `min_ℓ (vℓ + va_ℓ − (n−ℓ)γ)`.
    pub min_term: ValueInf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Annihilator {
    /// `ann(Ω) = I_S ∩ O_L`.
    Segment { segment: FinalSegment },
    /// The classical different `v(g′(η))` of a monogenic extension,
    /// computed by the oracle rather than from segments.
    OracleOnly { value: ValueInf },
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Computed,
    Input,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BSet {
    pub values: Vec<u64>,
    pub provenance: Provenance,
}

/// One independent criterion run against the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub name: String,
    /// What the criterion says about `Ω = (0)`, when it decides it.
    pub claim: Option<bool>,
    pub agrees: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub case: CaseTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramified: Option<RamifiedInfo>,
    pub alpha: Option<FinalSegment>,
    pub beta: Option<FinalSegment>,
    pub module: Option<ModuleReport>,
    pub is_zero: bool,
    pub ann: Annihilator,
    pub b_set: Option<BSet>,
    pub cross_checks: Vec<CrossCheck>,
    pub inconsistent: bool,
    pub notes: Vec<String>,
}

impl OmegaReport {
    fn from_module(case: CaseTag, m: ModuleReport) -> Self {
        OmegaReport {
            case,
            ramified: None,
            alpha: Some(m.alpha.clone()),
            beta: Some(m.beta.clone()),
            is_zero: m.is_zero,
            ann: Annihilator::Segment { segment: m.ann.clone() },
            module: Some(m),
            b_set: None,
            cross_checks: Vec::new(),
            inconsistent: false,
            notes: Vec::new(),
        }
    }

    /// Record a criterion's verdict on `Ω = (0)`.
    fn claim(&mut self, name: &str, claim: Option<bool>, detail: impl Into<String>) {
        let agrees = claim.is_none_or(|c| c == self.is_zero);
        self.cross_checks.push(CrossCheck { name: name.into(), claim, agrees, detail: detail.into() });
    }

    /// Record a consistency check that does not decide `Ω = (0)`.
    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.cross_checks.push(CrossCheck { name: name.into(), claim: None, agrees: ok, detail: detail.into() });
    }

    fn finish(mut self) -> Self {
        self.inconsistent = self.cross_checks.iter().any(|c| !c.agrees);
        self
    }

    pub fn fin_gen(&self) -> Option<bool> {
        self.module.as_ref().map(|m| m.fin_gen)
    }

    pub fn fin_pres(&self) -> Option<bool> {
        self.module.as_ref().map(|m| m.fin_pres)
    }
}

fn zero_inf(rank: usize) -> ValueInf {
    ValueInf::Finite(Value::zero(rank))
}

/// `ClosedAt(v)`, or `Top` for `v = ∞`.
fn closed_at_inf(g: &ValueGroup, v: &ValueInf) -> Result<FinalSegment> {
    match v {
        ValueInf::Infinity => Ok(FinalSegment::Top),
        ValueInf::Finite(x) => FinalSegment::closed_at(g, x),
    }
}

/// Case tag of a spec; concrete specs are classified by constructing the
/// extension.
pub fn classify(spec: &Spec) -> Result<CaseTag> {
    spec.validate()?;
    match spec {
        Spec::PureDefect(s) => s.validate().map(|_| CaseTag::PureDefect),
        Spec::BranchedPure(_) => Ok(CaseTag::BranchedPure),
        Spec::PurelyInertial(_) => Ok(CaseTag::PurelyInertial),
        Spec::PurelyRamified(_) => Ok(CaseTag::PurelyRamified),
        Spec::Concrete(c) => concrete::classify(c),
    }
}

/// `α = −v(η − K)` for pure defect and branched pure specs.
fn alpha_family(g: &ValueGroup, f: &ValueFamily) -> Result<FinalSegment> {
    segment_of_family(g, f, -1, 1, &zero_inf(g.rank()))
}

fn ramified_delta(s: &RamifiedSpec) -> Result<(ConvexSubgroup, RamifiedSubcase)> {
    let delta = greatest_isolated_below(&s.group, &s.gamma)?;
    let sub = match quotient_min_positive(&s.group, delta) {
        Some(_) => RamifiedSubcase::MinimumExists,
        None => RamifiedSubcase::NoMinimum,
    };
    Ok((delta, sub))
}

fn min_inf(vs: &[ValueInf]) -> ValueInf {
    vs.iter().cloned().fold(ValueInf::Infinity, ValueInf::min)
}

pub fn alpha_of(spec: &Spec) -> Result<FinalSegment> {
    spec.validate()?;
    match spec {
        Spec::PureDefect(s) => alpha_family(&s.group, &s.v_eta_k),
        Spec::BranchedPure(s) => alpha_family(&s.group, &s.v_eta_k),
        Spec::PurelyInertial(s) => FinalSegment::closed_at(&s.group, &s.group.zero()),
        Spec::PurelyRamified(s) => {
            let (delta, sub) = ramified_delta(s)?;
            match sub {
                RamifiedSubcase::MinimumExists => FinalSegment::closed_mod(&s.group, &s.group.zero(), delta),
                RamifiedSubcase::NoMinimum => FinalSegment::open_mod(&s.group, &(-&s.gamma), delta),
            }
        }
        Spec::Concrete(c) => concrete::report(c).and_then(|r| {
            r.alpha.ok_or_else(|| Error::Unsupported("no segment description of α".into()))
        }),
    }
}

/// `β`; `None` in the ramified case with a minimum, where the module has no
/// `I_α/I_β` description.
pub fn beta_of(spec: &Spec) -> Result<Option<FinalSegment>> {
    spec.validate()?;
    match spec {
        Spec::PureDefect(s) => {
            segment_of_family(&s.group, &s.v_eta_k, -1, s.n as i64, &s.gprime_value()?).map(Some)
        }
        Spec::BranchedPure(s) => {
            let offset = s.v_gprime_eta.add_value(&(-&s.beta_d));
            segment_of_family(&s.group, &s.v_eta_k, -1, s.d as i64, &offset).map(Some)
        }
        Spec::PurelyInertial(s) => closed_at_inf(&s.group, &s.v_gprime_eta).map(Some),
        Spec::PurelyRamified(s) => {
            let (delta, sub) = ramified_delta(s)?;
            if sub == RamifiedSubcase::MinimumExists {
                return Ok(None);
            }
            match min_inf(&s.coefficient_terms()) {
                ValueInf::Infinity => Ok(Some(FinalSegment::Top)),
                ValueInf::Finite(m) => {
                    FinalSegment::open_mod(&s.group, &(&m - &s.gamma), delta).map(Some)
                }
            }
        }
        Spec::Concrete(c) => concrete::report(c).map(|r| r.beta),
    }
}

pub fn b_set(spec: &Spec) -> Result<Option<BSet>> {
    spec.validate()?;
    let input = |b: &Option<Vec<u64>>| {
        b.as_ref().map(|b| {
            let mut values = b.clone();
            values.sort_unstable();
            values.dedup();
            BSet { values, provenance: Provenance::Input }
        })
    };
    Ok(match spec {
        Spec::PureDefect(s) => input(&s.b),
        Spec::BranchedPure(s) => input(&s.b),
        Spec::PurelyInertial(s) => match s.residue()? {
            Some(q) => Some(BSet { values: b_of_residue(&q).into_iter().collect(), provenance: Provenance::Computed }),
            None => input(&s.b),
        },
        Spec::PurelyRamified(s) => Some(BSet { values: vec![s.n], provenance: Provenance::Computed }),
        Spec::Concrete(c) => concrete::report(c)?.b_set,
    })
}

/// The segments of the ideals `U = I_{α + v r̃}` and `V` with
/// `Ω ≅ U / UV`.
pub fn ckr_segments(s: &DefectSpec, v_rtilde: &Value) -> Result<(FinalSegment, FinalSegment)> {
    s.validate()?;
    let g = &s.group;
    g.check(v_rtilde)?;
    match &s.v_eta_k {
        ValueFamily::IncToSup { sup, .. } if v_rtilde >= sup => {}
        _ => {
            return Err(Error::validation(format!(
                "v r̃ = {v_rtilde} is not above every value of v(η − K)"
            )))
        }
    }
    let u = alpha_family(g, &s.v_eta_k)?.translate(g, v_rtilde)?;
    let v = segment_of_family(g, &s.v_eta_k, -1, s.n as i64 - 1, &s.gprime_value()?)?;
    Ok((u, v))
}

/// A member of `Γ` at least `sup`, for families with a supremum.
fn member_above(g: &ValueGroup, f: &ValueFamily) -> Option<Value> {
    match f {
        ValueFamily::IncToSup { sup, .. } => {
            let r = g.rank();
            let mut v = sup.clone();
            let gen = g.component(r - 1).gen;
            v.0[r - 1] = (sup.0[r - 1] / gen).ceil() * gen;
            Some(v)
        }
        _ => None,
    }
}

fn b_claims(rep: &mut OmegaReport, p: u64, b: &[u64]) {
    rep.claim("one_in_B", Some(b.contains(&1)), format!("B = {b:?}"));
    rep.claim("p_not_divides_B", Some(p_not_divides(p, b)), format!("p = {p}, B = {b:?}"));
}

fn defect_report(s: &DefectSpec) -> Result<OmegaReport> {
    s.validate()?;
    let g = &s.group;
    let vgp = s.gprime_value()?;
    let alpha = alpha_family(g, &s.v_eta_k)?;
    let beta = segment_of_family(g, &s.v_eta_k, -1, s.n as i64, &vgp)?;
    let m = module_report(g, &alpha, &beta)?;
    let mut rep = OmegaReport::from_module(CaseTag::PureDefect, m.clone());
    if let Some(b) = &s.b {
        rep.b_set = b_set(&Spec::PureDefect(s.clone()))?;
        b_claims(&mut rep, s.p, b);
    }
    if let (Some(rho), ValueInf::Finite(vg)) = (spec::rank_one_sup(&s.v_eta_k), &vgp) {
        let n = s.n as i64;
        let bound = Rat::from_integer(1 - n) * rho + vg.0[0];
        let expected = FinalSegment::closed_ext(g, &Value::rank_one(bound))?;
        rep.check(
            "rank_one_annihilator",
            expected == m.ann,
            format!("ann = {}, vb ≥ (1−n)ρ + v(g′(η)) gives {expected}", m.ann),
        );
        let p = Rat::from_integer(s.p as i64);
        let special = match (s.kind, &s.vp) {
            (PolyKind::ArtinSchreier, _) => Some(("artin_schreier_annihilator", (Rat::from_integer(1) - p) * rho)),
            (PolyKind::Kummer, Some(ValueInf::Finite(vp))) => {
                Some(("kummer_annihilator", vp.0[0] + (Rat::from_integer(1) - p) * rho))
            }
            _ => None,
        };
        if let Some((name, b)) = special {
            let expected = FinalSegment::closed_ext(g, &Value::rank_one(b))?;
            rep.check(name, expected == m.ann, format!("closed form gives {expected}"));
        }
    }
    if s.kind == PolyKind::ArtinSchreier {
        let as_beta = segment_of_family(g, &s.v_eta_k, -1, s.p as i64, &zero_inf(g.rank()))?;
        rep.check("artin_schreier_beta", as_beta == m.beta, "β = −p·v(η − K)");
    }
    if let Some(rt) = member_above(g, &s.v_eta_k) {
        let (u, v) = ckr_segments(s, &rt)?;
        let uv = u.sum(g, &v)?;
        let shifted = m.beta.translate(g, &rt)?;
        let mu = module_report(g, &u, &uv)?;
        let same = mu.is_zero == m.is_zero
            && mu.fin_gen == m.fin_gen
            && mu.fin_pres == m.fin_pres
            && mu.ann == m.ann
            && uv == shifted;
        rep.check("ckr_equivalence", same, format!("v r̃ = {rt}, U = {u}, UV = {uv}"));
    }
    if !m.is_zero && matches!(s.v_eta_k, ValueFamily::IncToSup { .. }) {
        rep.check("not_finitely_generated", !m.fin_gen, "α has no smallest element");
    }
    Ok(rep.finish())
}

fn branched_report(s: &BranchedSpec) -> Result<OmegaReport> {
    s.validate()?;
    let spec = Spec::BranchedPure(s.clone());
    let g = &s.group;
    let alpha = alpha_of(&spec)?;
    let beta = beta_of(&spec)?.expect("branched β");
    let m = module_report(g, &alpha, &beta)?;
    let mut rep = OmegaReport::from_module(CaseTag::BranchedPure, m);
    rep.claim("d_equals_one", Some(s.d == 1), format!("d = {}", s.d));
    if let Some(b) = &s.b {
        rep.b_set = b_set(&spec)?;
        b_claims(&mut rep, s.p, b);
    }
    if let Some(w) = &s.kummer_witness {
        let rhs = (&s.beta_d + &w.v_eta_c.scale(s.d as i64)).scale(w.r);
        let met = w.vp < ValueInf::Finite(rhs.clone());
        let claim = met.then_some(true);
        let detail = if met {
            format!("vp = {} < {rhs}: sufficient condition met", w.vp)
        } else {
            format!("vp = {} ≥ {rhs}: sufficient condition not established", w.vp)
        };
        rep.claim("kummer_sufficient_condition", claim, detail);
    }
    Ok(rep.finish())
}

fn residue_claims(rep: &mut OmegaReport, p: u64, residue: Option<(crate::valfield::ResidueField, &[crate::valfield::RatFn])>) {
    if let Some((rf, q)) = residue {
        rep.claim(
            "residue_separable",
            Some(rf.separable(q)),
            format!("residue minpoly {}", rf.fmt_poly(q)),
        );
    }
    if let Some(b) = rep.b_set.clone() {
        rep.claim("p_not_divides_B", Some(p_not_divides(p, &b.values)), format!("p = {p}, B = {:?}", b.values));
    }
}

fn inertial_report(s: &InertialSpec) -> Result<OmegaReport> {
    s.validate()?;
    let spec = Spec::PurelyInertial(s.clone());
    let g = &s.group;
    let m = module_report(g, &alpha_of(&spec)?, &beta_of(&spec)?.expect("inertial β"))?;
    let mut rep = OmegaReport::from_module(CaseTag::PurelyInertial, m);
    rep.b_set = b_set(&spec)?;
    let q = s.residue()?;
    let rf = s.residue_minpoly.as_ref().map(|r| r.field(s.p));
    residue_claims(&mut rep, s.p, rf.zip(q.as_deref()));
    rep.check("finitely_presented", rep.fin_pres() == Some(true), "α and β have smallest elements");
    Ok(rep.finish())
}

fn ramified_report(s: &RamifiedSpec) -> Result<OmegaReport> {
    s.validate()?;
    let spec = Spec::PurelyRamified(s.clone());
    let g = &s.group;
    let (delta, sub) = ramified_delta(s)?;
    let terms = s.coefficient_terms();
    let info = RamifiedInfo {
        subcase: sub,
        delta_suffix: delta.suffix_start(),
        gamma_eta: s.gamma.clone(),
        min_term: min_inf(&terms),
    };
    let alpha = alpha_of(&spec)?;
    let mut rep = match beta_of(&spec)? {
        None => {
            let mut rep = OmegaReport {
                case: CaseTag::PurelyRamified,
                ramified: None,
                alpha: Some(alpha),
                beta: None,
                module: None,
                is_zero: false,
                ann: Annihilator::Unknown,
                b_set: None,
                cross_checks: Vec::new(),
                inconsistent: false,
                notes: vec!["(vL/Δ)_{>0} has a minimum, so Ω ≠ (0); no I_α/I_β description of Ω".into()],
            };
            rep.claim("quotient_minimum", Some(false), format!("Δ = {delta}"));
            rep
        }
        Some(beta) => {
            let m = module_report(g, &alpha, &beta)?;
            let mut rep = OmegaReport::from_module(CaseTag::PurelyRamified, m);
            let witness = terms.iter().position(|t| t.finite().is_some_and(|x| delta.contains(x)));
            rep.claim(
                "exists_l_in_delta",
                Some(witness.is_some()),
                match witness {
                    Some(i) => format!("ℓ = {}: {} ∈ Δ", i + 1, terms[i]),
                    None => format!("no term of {} lies in Δ = {delta}", fmt_list(&terms)),
                },
            );
            if p_not_divides(s.p, &[s.n]) {
                rep.claim("p_not_divides_n", Some(true), format!("p = {}, n = {}", s.p, s.n));
            }
            if s.vp.finite().is_some_and(|x| delta.contains(x)) {
                rep.claim("vp_in_delta", Some(true), format!("vp = {}", s.vp));
            }
            match s.kind {
                PolyKind::Kummer if s.p != s.n => rep.claim("kummer_vq_zero", Some(true), "q ≠ p, so vq = 0"),
                PolyKind::Kummer => {
                    let c = s.vp.finite().is_some_and(|x| delta.contains(x));
                    rep.claim("kummer_vp_in_delta", Some(c), format!("q = p; vp = {}", s.vp));
                }
                PolyKind::ArtinSchreier => rep.claim("artin_schreier_ramified", Some(false), "vp = ∞ > Δ"),
                PolyKind::Generic => {}
            }
            rep
        }
    };
    rep.ramified = Some(info);
    rep.b_set = b_set(&spec)?;
    Ok(rep.finish())
}

fn fmt_list(vs: &[ValueInf]) -> String {
    let parts: Vec<String> = vs.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// The full report: segments, module data, annihilator and every
/// applicable criterion, with `inconsistent` set when any disagrees.
/// `v(g′(η))` for the normalized generator of a concrete extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentReport {
    pub n: usize,
    pub e: u32,
    pub f: u32,
    /// Whether `O_L = O_K[η₀]`, so that the value is the different.
    pub monogenic: bool,
    pub different: ValueInf,
}

pub fn different_report(spec: &Spec) -> Result<DifferentReport> {
    match spec {
        Spec::Concrete(c) => concrete::different(c),
        _ => Err(Error::NotConcrete),
    }
}

pub fn omega_report(spec: &Spec) -> Result<OmegaReport> {
    match spec {
        Spec::PureDefect(s) => defect_report(s),
        Spec::BranchedPure(s) => branched_report(s),
        Spec::PurelyInertial(s) => inertial_report(s),
        Spec::PurelyRamified(s) => ramified_report(s),
        Spec::Concrete(c) => concrete::report(c),
    }
}

/// Report for an extension built directly from a generic defining
/// polynomial.
pub fn extension_report<F: crate::valfield::ValuedField>(l: &crate::valfield::Extension<F>) -> Result<OmegaReport> {
    concrete::extension_report(&l.base, l, PolyKind::Generic, None)
}

fn require_kind(spec: &Spec, kind: PolyKind) -> Result<()> {
    let k = match spec {
        Spec::PureDefect(s) => s.kind,
        Spec::PurelyRamified(s) => s.kind,
        Spec::Concrete(c) => c.kind,
        _ => PolyKind::Generic,
    };
    if k == kind {
        Ok(())
    } else {
        Err(Error::validation(format!("spec is not tagged {kind:?}")))
    }
}

/// Report for `x^p − x − a` (concrete, or a synthetic spec tagged
/// `artin_schreier`).
pub fn artin_schreier_report(spec: &Spec) -> Result<OmegaReport> {
    require_kind(spec, PolyKind::ArtinSchreier)?;
    omega_report(spec)
}

/// Report for `x^q − a` (concrete, or a synthetic spec tagged `kummer`).
pub fn kummer_report(spec: &Spec) -> Result<OmegaReport> {
    require_kind(spec, PolyKind::Kummer)?;
    omega_report(spec)
}

pub(crate) fn ann_of_closed(g: &ValueGroup, beta: &ValueInf) -> Result<FinalSegment> {
    annihilator_segment(g, &FinalSegment::closed_at(g, &g.zero())?, &closed_at_inf(g, beta)?)
}

#[cfg(test)]
mod tests;
