//! Reports for an explicit defining polynomial over `ℚ_p`, `F_p((t))` or
//! `F_p(u)((t))`, where the extension is discretely valued and the pure
//! case is read off `e` and `f`.

use super::spec::{ConcreteSpec, PolyKind, RamifiedSpec};
use super::{ann_of_closed, closed_at_inf, residue_claims, Annihilator, BSet, CaseTag, OmegaReport, Provenance};
use crate::error::{Error, Result};
use crate::ordgrp::{Rat, Value, ValueGroup, ValueInf};
use crate::oracle::different_monogenic;
use crate::poly;
use crate::segment::{module_report, FinalSegment};
use crate::valfield::{build_extension, AnyField, ConcreteCase, Extension, ValuedField};

fn inf_of(v: Option<Rat>) -> ValueInf {
    v.map_or(ValueInf::Infinity, |x| ValueInf::Finite(Value::rank_one(x)))
}

fn int_inf(v: Option<i64>) -> ValueInf {
    inf_of(v.map(Rat::from_integer))
}

pub(crate) fn build<F: ValuedField>(k: &F, c: &ConcreteSpec) -> Result<Extension<F>> {
    let p = k.residue_char();
    if c.kind == PolyKind::ArtinSchreier && k.characteristic() != p {
        return Err(Error::validation("Artin–Schreier polynomials need char K = p"));
    }
    let g = poly::parse(k, &c.coefficients(p)?)?;
    build_extension(k, &g)
}

fn field_case<F: ValuedField>(k: &F, c: &ConcreteSpec) -> Result<CaseTag> {
    Ok(match build(k, c)?.case()? {
        ConcreteCase::Trivial => CaseTag::Trivial,
        ConcreteCase::PurelyInertial => CaseTag::PurelyInertial,
        ConcreteCase::PurelyRamified => CaseTag::PurelyRamified,
    })
}

pub(super) fn classify(c: &ConcreteSpec) -> Result<CaseTag> {
    c.validate()?;
    match c.field.build()? {
        AnyField::Qp(k) => field_case(&k, c),
        AnyField::Laurent(k) => field_case(&k, c),
    }
}

pub(super) fn report(c: &ConcreteSpec) -> Result<OmegaReport> {
    c.validate()?;
    match c.field.build()? {
        AnyField::Qp(k) => field_report(&k, c),
        AnyField::Laurent(k) => field_report(&k, c),
    }
}

/// The oracle different of a concrete extension.
pub(super) fn different(c: &ConcreteSpec) -> Result<super::DifferentReport> {
    fn go<F: ValuedField>(k: &F, c: &ConcreteSpec) -> Result<super::DifferentReport> {
        let l = build(k, c)?;
        Ok(super::DifferentReport {
            n: l.n,
            e: l.e,
            f: l.f,
            monogenic: l.monogenic,
            different: different_monogenic(&l)?,
        })
    }
    c.validate()?;
    match c.field.build()? {
        AnyField::Qp(k) => go(&k, c),
        AnyField::Laurent(k) => go(&k, c),
    }
}

fn field_report<F: ValuedField>(k: &F, c: &ConcreteSpec) -> Result<OmegaReport> {
    extension_report(k, &build(k, c)?, c.kind, c.q)
}

/// Report for an extension already built from `g`; `kind` and `q` describe
/// the shape of `g` for the closed-form checks.
pub(crate) fn extension_report<F: ValuedField>(
    k: &F,
    l: &Extension<F>,
    kind: PolyKind,
    q: Option<u64>,
) -> Result<OmegaReport> {
    match l.case()? {
        ConcreteCase::Trivial => {
            let g = ValueGroup::integers();
            let zero = FinalSegment::closed_at(&g, &g.zero())?;
            let m = module_report(&g, &zero, &zero)?;
            let mut rep = OmegaReport::from_module(CaseTag::Trivial, m);
            rep.notes.push("g is linear, so L = K".into());
            Ok(rep.finish())
        }
        ConcreteCase::PurelyInertial => inertial(k, kind, q, l),
        ConcreteCase::PurelyRamified => ramified(k, kind, l),
    }
}

fn inertial<F: ValuedField>(k: &F, kind: PolyKind, q: Option<u64>, l: &Extension<F>) -> Result<OmegaReport> {
    let g = ValueGroup::integers();
    let p = k.residue_char();
    let vgp = inf_of(l.v_g0prime()?);
    let alpha = FinalSegment::closed_at(&g, &g.zero())?;
    let beta = closed_at_inf(&g, &vgp)?;
    let m = module_report(&g, &alpha, &beta)?;
    let mut rep = OmegaReport::from_module(CaseTag::PurelyInertial, m);
    let rf = l.residue_field();
    let minpoly = l.residue_minpoly().clone();
    rep.b_set = Some(BSet {
        values: super::b_of_residue(&minpoly).into_iter().collect(),
        provenance: Provenance::Computed,
    });
    residue_claims(&mut rep, p, Some((rf, &minpoly)));
    let diff = different_monogenic(l)?;
    let zero = ValueInf::Finite(Value::zero(1));
    rep.claim("oracle_different", Some(diff == zero), format!("v(disc)/n = {diff}"));
    rep.check("different_matches_beta", diff == vgp, format!("oracle {diff}, v(g′(η)) = {vgp}"));
    rep.check("finitely_presented", rep.fin_pres() == Some(true), "α and β have smallest elements");
    let ann = rep.module.as_ref().expect("inertial module").ann.clone();
    let unshifted = k.is_zero(&l.shift_c);
    if kind != PolyKind::Generic && !unshifted {
        rep.notes.push("the residue of η does not generate Lv; closed-form annihilator check skipped".into());
    }
    match kind {
        _ if !unshifted => {}
        PolyKind::Kummer => {
            let q = q.expect("validated") as i64;
            let vq = int_inf(k.val_int(q)?);
            let expected = ann_of_closed(&g, &vq)?;
            rep.check(
                "kummer_inertial_annihilator",
                expected == ann,
                format!("normalized generator: α = 0, β = vq = {vq}"),
            );
        }
        PolyKind::ArtinSchreier => {
            let v_eta = l.v_eta()?.ok_or_else(|| Error::validation("η = 0"))?;
            let p = Rat::from_integer(p as i64);
            let expected = ann_of_closed(&g, &inf_of(Some((Rat::from_integer(1) - p) * v_eta)))?;
            rep.check(
                "artin_schreier_inertial_annihilator",
                expected == ann,
                format!("vη = {v_eta}: va ≥ (p−1)·v c̃ gives {expected}"),
            );
        }
        PolyKind::Generic => {}
    }
    Ok(rep.finish())
}

fn ramified<F: ValuedField>(k: &F, kind: PolyKind, l: &Extension<F>) -> Result<OmegaReport> {
    let p = k.residue_char();
    let e = l.e as i64;
    let vl = ValueGroup::discrete_rank_one(Rat::new(1, e));
    let coeff_values = (0..l.n)
        .map(|i| Ok(int_inf(k.val(&l.g0.coeff(k, i))?)))
        .collect::<Result<Vec<_>>>()?;
    let derived = RamifiedSpec {
        n: l.n as u64,
        p,
        group: vl,
        v_k: ValueGroup::integers(),
        gamma: Value::rank_one(l.v_eta0),
        coeff_values,
        vp: int_inf(k.val_int(p as i64)?),
        kind: PolyKind::Generic,
    };
    let mut rep = super::ramified_report(&derived)?;
    let diff = different_monogenic(l)?;
    rep.claim(
        "oracle_different_positive",
        Some(diff == ValueInf::Finite(Value::zero(1))),
        format!("v(disc)/n = {diff}"),
    );
    rep.ann = if l.monogenic {
        Annihilator::OracleOnly { value: diff }
    } else {
        rep.notes.push("O_L is not known to be monogenic; annihilator not computed".into());
        Annihilator::Unknown
    };
    if kind == PolyKind::ArtinSchreier {
        rep.claim("artin_schreier_ramified", Some(false), "vp = ∞ > Δ");
    }
    Ok(rep.finish())
}
