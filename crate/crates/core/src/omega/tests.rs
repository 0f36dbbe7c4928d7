use super::*;
use proptest::prelude::*;
use serde_json::json;

fn spec(v: serde_json::Value) -> Spec {
    serde_json::from_value(v).expect("spec parses")
}

fn report(v: serde_json::Value) -> OmegaReport {
    omega_report(&spec(v)).expect("report")
}

fn rat(n: i64, d: i64) -> Value {
    Value::rank_one(Rat::new(n, d))
}

fn seg(r: &OmegaReport) -> &FinalSegment {
    match &r.ann {
        Annihilator::Segment { segment } => segment,
        other => panic!("annihilator is {other:?}"),
    }
}

fn check<'a>(r: &'a OmegaReport, name: &str) -> &'a CrossCheck {
    r.cross_checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}"))
}

fn concrete(field: serde_json::Value, g: &[&str]) -> serde_json::Value {
    json!({"case": "concrete", "field": field, "g": g})
}

#[test]
fn unramified_quadratic_over_q2() {
    let r = report(concrete(json!({"field": "Qp", "p": 2}), &["1", "1", "1"]));
    assert_eq!(r.case, CaseTag::PurelyInertial);
    assert!(r.is_zero && !r.inconsistent);
    assert_eq!(r.b_set.as_ref().unwrap().values, vec![1, 2]);
    assert_eq!(r.fin_pres(), Some(true));
}

#[test]
fn inseparable_residue_extension() {
    let r = report(concrete(json!({"field": "Fp_u_t", "p": 2, "prec": 32}), &["-(u + t)", "0", "1"]));
    assert_eq!(r.case, CaseTag::PurelyInertial);
    assert!(!r.is_zero && !r.inconsistent);
    assert_eq!(r.b_set.as_ref().unwrap().values, vec![2]);
    assert_eq!(r.beta, Some(FinalSegment::Top));
    assert_eq!(*seg(&r), FinalSegment::Empty);
    assert_eq!(check(&r, "residue_separable").claim, Some(false));
}

#[test]
fn ramified_with_minimum_uses_the_different() {
    let q2 = json!({"field": "Qp", "p": 2});
    let r = report(concrete(q2.clone(), &["-2", "0", "1"]));
    assert_eq!(r.case, CaseTag::PurelyRamified);
    assert!(!r.is_zero && !r.inconsistent);
    assert_eq!(r.ramified.as_ref().unwrap().subcase, RamifiedSubcase::MinimumExists);
    assert_eq!(r.ann, Annihilator::OracleOnly { value: ValueInf::Finite(rat(3, 2)) });
    let r = report(concrete(q2, &["-2", "0", "0", "1"]));
    assert_eq!(r.ann, Annihilator::OracleOnly { value: ValueInf::Finite(rat(2, 3)) });
    assert!(!r.is_zero && !r.inconsistent);
}

#[test]
fn trivial_extension() {
    let r = report(concrete(json!({"field": "Qp", "p": 3}), &["-5", "1"]));
    assert_eq!(r.case, CaseTag::Trivial);
    assert!(r.is_zero);
}

#[test]
fn reducible_polynomial_is_rejected() {
    let s = spec(concrete(json!({"field": "Qp", "p": 3}), &["-4", "0", "1"]));
    assert!(omega_report(&s).is_err());
}

fn as_defect(p: u64, div: u64, sup: &str) -> serde_json::Value {
    json!({
        "case": "pure_defect", "n": p, "p": p,
        "group": [{"gen": "1", "div": div}],
        "v_eta_K": {"kind": "inc_to_sup", "sup": sup, "attained": false},
        "kind": "artin_schreier"
    })
}

#[test]
fn artin_schreier_defect() {
    let r = report(as_defect(2, 2, "0"));
    assert_eq!(r.alpha, r.beta);
    assert!(r.is_zero && !r.inconsistent);
    assert_eq!(r.fin_gen(), Some(true));

    let r = report(as_defect(3, 3, "-1"));
    assert!(!r.is_zero && !r.inconsistent);
    let g = ValueGroup::divisible_rank_one(Rat::from_integer(1), 3);
    assert_eq!(*seg(&r), FinalSegment::closed_ext(&g, &rat(2, 1)).unwrap());
    assert!(check(&r, "artin_schreier_annihilator").agrees);
    assert!(check(&r, "ckr_equivalence").agrees);
    assert_eq!(r.fin_gen(), Some(false));
    assert_eq!(artin_schreier_report(&spec(as_defect(3, 3, "-1"))).unwrap(), r);
    assert!(kummer_report(&spec(as_defect(3, 3, "-1"))).is_err());
}

#[test]
fn kummer_defect() {
    let r = report(json!({
        "case": "pure_defect", "n": 2, "p": 2,
        "group": [{"gen": "1", "div": 3}],
        "v_eta_K": {"kind": "inc_to_sup", "sup": "1/3", "attained": false},
        "kind": "kummer", "vp": "1"
    }));
    let g = ValueGroup::divisible_rank_one(Rat::from_integer(1), 3);
    assert_eq!(*seg(&r), FinalSegment::closed_ext(&g, &rat(2, 3)).unwrap());
    assert!(check(&r, "kummer_annihilator").agrees);
    assert!(!r.is_zero && !r.inconsistent);
}

#[test]
fn contradicting_b_set_is_inconsistent() {
    let mut s = as_defect(2, 2, "0");
    s["B"] = json!([2]);
    let r = report(s);
    assert!(r.is_zero && r.inconsistent);
    assert!(!check(&r, "one_in_B").agrees);
    let mut s = as_defect(2, 2, "0");
    s["B"] = json!([1, 2]);
    assert!(!report(s).inconsistent);
}

fn branched(d: u64, beta_d: &str, vgp: &str, b: &[u64]) -> serde_json::Value {
    json!({
        "case": "branched_pure", "n": 4, "p": 2, "d": d, "beta_d": beta_d,
        "group": [{"gen": "1", "div": 2}],
        "v_eta_K": {"kind": "inc_to_sup", "sup": "1/2", "attained": false},
        "v_gprime_eta": vgp, "B": b
    })
}

#[test]
fn branched_pure() {
    let r = report(branched(1, "1", "1", &[1, 2]));
    assert!(r.is_zero && !r.inconsistent);
    let r = report(branched(2, "0", "2", &[2, 4]));
    assert!(!r.is_zero && !r.inconsistent);
    assert_eq!(check(&r, "d_equals_one").claim, Some(false));
    assert!(omega_report(&spec(branched(2, "0", "2", &[1, 4]))).is_err());
    assert!(omega_report(&spec(branched(2, "0", "2", &[2, 3]))).is_err());
}

fn ramified(p: u64, vp: &str, kind: &str) -> serde_json::Value {
    json!({
        "case": "purely_ramified", "n": 3, "p": p,
        "group": [{"gen": "1/3", "div": 2}], "vK": [{"gen": "1", "div": 2}],
        "gamma": "1/3", "coeff_values": ["1", "inf", "inf"], "vp": vp, "kind": kind
    })
}

#[test]
fn ramified_without_minimum() {
    let r = report(ramified(5, "1", "kummer"));
    assert_eq!(r.ramified.as_ref().unwrap().subcase, RamifiedSubcase::NoMinimum);
    assert!(r.is_zero && !r.inconsistent);
    assert!(check(&r, "p_not_divides_n").agrees);

    let r = report(ramified(3, "1", "kummer"));
    assert!(!r.is_zero && !r.inconsistent);
    assert_eq!(r.ramified.as_ref().unwrap().min_term, ValueInf::Finite(rat(1, 1)));
    let g = ValueGroup::divisible_rank_one(Rat::new(1, 3), 2);
    assert_eq!(*seg(&r), FinalSegment::closed_at(&g, &rat(1, 1)).unwrap());

    // with vp inside Δ = vL the module vanishes
    let r = report(json!({
        "case": "purely_ramified", "n": 3, "p": 3,
        "group": [{"gen": "1/3", "div": 2}, {"gen": "1"}],
        "vK": [{"gen": "1", "div": 2}, {"gen": "1"}],
        "gamma": "(1/3,0)", "coeff_values": ["(1,0)", "inf", "inf"], "vp": "(0,1)", "kind": "kummer"
    }));
    assert_eq!(r.ramified.as_ref().unwrap().delta_suffix, 2);
    assert!(r.is_zero && !r.inconsistent);
    assert!(check(&r, "vp_in_delta").agrees);
}

#[test]
fn ramified_validation() {
    let mut s = ramified(5, "1", "kummer");
    s["gamma"] = json!("1");
    assert!(omega_report(&spec(s)).is_err());
    let mut s = ramified(5, "1", "kummer");
    s["coeff_values"] = json!(["1", "1", "inf"]);
    assert!(omega_report(&spec(s)).is_err());
}

#[test]
fn inertial_synthetic() {
    let r = report(json!({
        "case": "purely_inertial", "n": 2, "p": 2, "group": [{"gen": "1"}],
        "residue_minpoly": {"with_u": true, "coeffs": ["u", "0", "1"]},
        "v_gprime_eta": "1"
    }));
    assert!(!r.is_zero && !r.inconsistent);
    assert_eq!(*seg(&r), FinalSegment::closed_at(&ValueGroup::integers(), &rat(1, 1)).unwrap());
    let r = report(json!({
        "case": "purely_inertial", "n": 3, "p": 0, "group": [{"gen": "1"}],
        "B": [3], "v_gprime_eta": "0"
    }));
    assert!(r.is_zero && !r.inconsistent);
    let bad = spec(json!({
        "case": "purely_inertial", "n": 3, "p": 2, "group": [{"gen": "1"}],
        "B": [1], "v_gprime_eta": "0"
    }));
    assert!(omega_report(&bad).is_err());
}

#[test]
fn kummer_and_artin_schreier_concrete() {
    let r = kummer_report(&spec(json!({
        "case": "concrete", "field": {"field": "Qp", "p": 3}, "kind": "kummer", "q": 2, "a": "2"
    })))
    .unwrap();
    assert!(r.is_zero && !r.inconsistent);
    assert!(check(&r, "kummer_inertial_annihilator").agrees);

    let r = report(json!({
        "case": "concrete", "field": {"field": "Fp_u_t", "p": 2, "prec": 32}, "kind": "kummer", "q": 2, "a": "u"
    }));
    assert!(!r.is_zero && !r.inconsistent);
    assert_eq!(*seg(&r), FinalSegment::Empty);

    let r = report(json!({
        "case": "concrete", "field": {"field": "Fp_u_t", "p": 2, "prec": 32}, "kind": "artin_schreier", "a": "u"
    }));
    assert_eq!(r.case, CaseTag::PurelyInertial);
    assert!(r.is_zero && !r.inconsistent);

    let r = report(json!({
        "case": "concrete", "field": {"field": "Fp_t", "p": 2, "prec": 32}, "kind": "artin_schreier", "a": "t^-1"
    }));
    assert_eq!(r.case, CaseTag::PurelyRamified);
    assert!(!r.is_zero && !r.inconsistent);

    let as_over_qp = spec(json!({
        "case": "concrete", "field": {"field": "Qp", "p": 2}, "kind": "artin_schreier", "a": "1"
    }));
    assert!(omega_report(&as_over_qp).is_err());
}

#[test]
fn ckr_segments_need_an_upper_bound() {
    let Spec::PureDefect(s) = spec(as_defect(3, 3, "-1")) else { unreachable!() };
    assert!(ckr_segments(&s, &rat(-2, 1)).is_err());
    let (u, v) = ckr_segments(&s, &rat(0, 1)).unwrap();
    let g = &s.group;
    assert_eq!(u.sum(g, &v).unwrap(), beta_of(&Spec::PureDefect(s.clone())).unwrap().unwrap().translate(g, &rat(0, 1)).unwrap());
}

#[test]
fn defect_validation() {
    let mut s = as_defect(2, 2, "0");
    s["n"] = json!(6);
    assert!(omega_report(&spec(s)).is_err());
    let mut s = as_defect(2, 2, "0");
    s["v_eta_K"] = json!({"kind": "finite_max", "values": ["0"]});
    assert!(omega_report(&spec(s)).is_err());
    let mut s = as_defect(2, 2, "0");
    s["v_gprime_eta"] = json!("1");
    assert!(omega_report(&spec(s)).is_err());
}

#[test]
fn report_json_round_trip() {
    for s in [as_defect(3, 3, "-1"), ramified(3, "1", "kummer"), concrete(json!({"field": "Qp", "p": 2}), &["-2", "0", "1"])] {
        let r = report(s);
        let text = serde_json::to_string(&r).unwrap();
        let back: OmegaReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}

proptest! {
    #[test]
    fn defect_annihilator_closed_forms(pi in 0usize..3, num in -12i64..12, den in 1i64..6, kummer: bool, vp in 1i64..4) {
        let p = [2u64, 3, 5][pi];
        // β ⊆ α needs v(g′(η)) ≥ (p − 1)ρ
        let top = if kummer { Rat::new(vp, p as i64 - 1) } else { Rat::from_integer(0) };
        let sup = top - Rat::new(num.abs(), den);
        let mut s = json!({
            "case": "pure_defect", "n": p, "p": p,
            "group": [{"gen": "1", "div": p}],
            "v_eta_K": {"kind": "inc_to_sup", "sup": crate::ordgrp::fmt_rat(&sup), "attained": false},
            "kind": if kummer { "kummer" } else { "artin_schreier" }
        });
        if kummer {
            s["vp"] = json!(vp.to_string());
        }
        let r = report(s);
        prop_assert!(!r.inconsistent, "{:?}", r.cross_checks);
        let name = if kummer { "kummer_annihilator" } else { "artin_schreier_annihilator" };
        prop_assert!(check(&r, name).agrees);
        prop_assert!(check(&r, "rank_one_annihilator").agrees);
    }

    #[test]
    fn b_set_criterion_matches_segments(d_exp in 0u32..3, extra in 0i64..4, bd in -2i64..4) {
        let d = 2u64.pow(d_exp);
        // β ⊆ α needs v(g′(η)) − β_d ≥ (d − 1)/2
        let vgp = bd + (d as i64) / 2 + extra;
        let b: Vec<u64> = if d == 1 { vec![1, 4] } else { vec![d, 4] };
        let s = spec(branched(d, &bd.to_string(), &vgp.to_string(), &b));
        let r = omega_report(&s).unwrap();
        // a claim that contradicts α = β is reported, never hidden
        let claims_zero = d == 1;
        prop_assert_eq!(r.inconsistent, claims_zero != r.is_zero);
    }
}
