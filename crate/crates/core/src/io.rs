//! Spec documents, report options and report rendering.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::omega::{omega_report, Annihilator, CrossCheck, OmegaReport, Provenance, Spec};
use crate::ordgrp::ValueGroup;
use crate::oracle::{check_annihilator, GridWindow, RawSegment, Verdict};
use crate::valfield::BaseField;

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::validation(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportOptions {
    /// Relative precision of Laurent series base fields, overriding `prec`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
    /// Check the annihilator against grid enumeration on windows of this
    /// base bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub version: u32,
    pub spec: Spec,
    #[serde(default)]
    pub options: ReportOptions,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Parse a document, or a bare spec (an object with a `case` field).
pub fn parse_document(text: &str) -> Result<SpecDocument> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    let doc = if v.get("case").is_some() {
        SpecDocument {
            version: DOCUMENT_VERSION,
            spec: serde_json::from_value(v).map_err(parse_err)?,
            options: ReportOptions::default(),
        }
    } else {
        serde_json::from_value(v).map_err(parse_err)?
    };
    if doc.version != DOCUMENT_VERSION {
        return Err(Error::validation(format!(
            "document version {} is not supported (expected {DOCUMENT_VERSION})",
            doc.version
        )));
    }
    if doc.options.window_bound.is_some_and(|b| !(0..=64).contains(&b)) {
        return Err(Error::validation("window_bound must lie in 0..=64"));
    }
    let doc = apply_precision(doc)?;
    doc.spec.validate()?;
    Ok(doc)
}

fn apply_precision(mut doc: SpecDocument) -> Result<SpecDocument> {
    let Some(prec) = doc.options.precision else { return Ok(doc) };
    match &mut doc.spec {
        Spec::Concrete(c) => match &mut c.field {
            BaseField::FpT { prec: p, .. } | BaseField::FpUT { prec: p, .. } => *p = prec,
            BaseField::Qp { .. } => {}
        },
        _ => return Err(Error::validation("precision applies to concrete specs only")),
    }
    Ok(doc)
}

fn spec_group(spec: &Spec) -> Option<&ValueGroup> {
    match spec {
        Spec::PureDefect(s) => Some(&s.group),
        Spec::BranchedPure(s) => Some(&s.group),
        Spec::PurelyInertial(s) => Some(&s.group),
        Spec::PurelyRamified(s) => Some(&s.group),
        Spec::Concrete(_) => None,
    }
}

/// Compute the report of a parsed document.
pub fn run_document(doc: &SpecDocument) -> Result<OmegaReport> {
    let mut report = omega_report(&doc.spec)?;
    if let Some(bound) = doc.options.window_bound {
        grid_check(&doc.spec, bound, &mut report);
    }
    Ok(report)
}

fn grid_check(spec: &Spec, bound: i64, report: &mut OmegaReport) {
    let (Some(g), Some(m)) = (spec_group(spec), report.module.as_ref()) else {
        report.notes.push("grid check needs a synthetic spec with segments α and β".into());
        return;
    };
    let w = GridWindow::covering(g, bound, 2);
    let (a, b) = (RawSegment::from_segment(g, &m.alpha), RawSegment::from_segment(g, &m.beta));
    let verdict = if w.is_large_enough() {
        check_annihilator(&a, &b, &m.ann, &w)
    } else {
        Verdict::Inconclusive { reason: format!("window of {} points is below the size policy", w.size()) }
    };
    let detail = match &verdict {
        Verdict::Agree => format!("agrees on {} points", w.size()),
        Verdict::Disagree { witness } => format!("disagrees at {witness}"),
        Verdict::Inconclusive { reason } => format!("inconclusive: {reason}"),
    };
    report.cross_checks.push(CrossCheck {
        name: "grid annihilator".into(),
        claim: None,
        agrees: !verdict.is_disagree(),
        detail,
    });
    report.inconsistent |= verdict.is_disagree();
}

pub fn to_json(report: &OmegaReport) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

pub fn from_json(text: &str) -> Result<OmegaReport> {
    serde_json::from_str(text).map_err(parse_err)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn to_text(r: &OmegaReport) -> String {
    let mut out = String::new();
    let case = serde_json::to_value(r.case).expect("case tags serialize");
    let _ = writeln!(out, "case: {}", case.as_str().unwrap_or_default());
    if let Some(info) = &r.ramified {
        let sub = serde_json::to_value(info.subcase).expect("subcases serialize");
        let _ = writeln!(
            out,
            "ramified: {}, vη = {}, Δ starts at coordinate {}, min term {}",
            sub.as_str().unwrap_or_default(),
            info.gamma_eta,
            info.delta_suffix,
            info.min_term
        );
    }
    if let Some(a) = &r.alpha {
        let _ = writeln!(out, "alpha: {a}");
    }
    if let Some(b) = &r.beta {
        let _ = writeln!(out, "beta: {b}");
    }
    let _ = writeln!(out, "omega is zero: {}", yes_no(r.is_zero));
    let ann = match &r.ann {
        Annihilator::Segment { segment } => segment.to_string(),
        Annihilator::OracleOnly { value } => format!("different {value}"),
        Annihilator::Unknown => "unknown".into(),
    };
    let _ = writeln!(out, "annihilator: {ann}");
    if let Some(m) = &r.module {
        let _ = writeln!(
            out,
            "finitely generated: {}, finitely presented: {}, single generator: {}",
            yes_no(m.fin_gen),
            yes_no(m.fin_pres),
            yes_no(m.single_generator)
        );
    }
    if let Some(b) = &r.b_set {
        let src = match b.provenance {
            Provenance::Computed => "computed",
            Provenance::Input => "input",
        };
        let vals: Vec<String> = b.values.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "B = {{{}}} ({src})", vals.join(", "));
    }
    for c in &r.cross_checks {
        let mark = if c.agrees { "ok" } else { "CONFLICT" };
        let _ = writeln!(out, "check {}: {mark}: {}", c.name, c.detail);
    }
    let _ = writeln!(out, "inconsistent: {}", yes_no(r.inconsistent));
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

pub fn render(r: &OmegaReport, f: Format) -> String {
    match f {
        Format::Json => to_json(r),
        Format::Text => to_text(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INERTIAL: &str = r#"{"case":"concrete","field":{"field":"Qp","p":2},"g":["1","1","1"]}"#;

    #[test]
    fn bare_spec_and_document_agree() {
        let bare = parse_document(INERTIAL).unwrap();
        let doc = parse_document(&format!(r#"{{"version":1,"spec":{INERTIAL}}}"#)).unwrap();
        assert_eq!(bare, doc);
        assert!(run_document(&doc).unwrap().is_zero);
    }

    #[test]
    fn unknown_fields_and_versions_are_rejected() {
        let extra = format!(r#"{{"version":1,"spec":{INERTIAL},"extra":0}}"#);
        assert!(matches!(parse_document(&extra), Err(Error::Parse(_))));
        let opt = format!(r#"{{"version":1,"spec":{INERTIAL},"options":{{"colour":"red"}}}}"#);
        assert!(matches!(parse_document(&opt), Err(Error::Parse(_))));
        let v2 = format!(r#"{{"version":2,"spec":{INERTIAL}}}"#);
        assert!(matches!(parse_document(&v2), Err(Error::Validation(_))));
        assert!(matches!(parse_document("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn precision_overrides_laurent_fields() {
        let text = r#"{"version":1,"options":{"precision":12},
            "spec":{"case":"concrete","field":{"field":"Fp_t","p":2,"prec":40},"kind":"artin_schreier","a":"t^-1"}}"#;
        let doc = parse_document(text).unwrap();
        let Spec::Concrete(c) = &doc.spec else { panic!() };
        assert_eq!(c.field, BaseField::FpT { p: 2, prec: 12 });
        let synthetic = r#"{"version":1,"options":{"precision":12},
            "spec":{"case":"purely_inertial","n":2,"p":2,"group":[{"gen":"1"}],"B":[2],"v_gprime_eta":"0"}}"#;
        assert!(parse_document(synthetic).is_err());
    }

    #[test]
    fn window_bound_adds_a_grid_check() {
        let text = r#"{"version":1,"options":{"window_bound":2},
            "spec":{"case":"pure_defect","n":3,"p":3,"group":[{"gen":"1","div":3}],
                    "v_eta_K":{"kind":"inc_to_sup","sup":"-1","attained":false},"kind":"artin_schreier"}}"#;
        let r = run_document(&parse_document(text).unwrap()).unwrap();
        let c = r.cross_checks.iter().find(|c| c.name == "grid annihilator").unwrap();
        assert!(c.agrees && c.detail.starts_with("agrees"), "{}", c.detail);
        assert!(!r.inconsistent);
    }

    #[test]
    fn reports_round_trip_and_render() {
        let r = run_document(&parse_document(INERTIAL).unwrap()).unwrap();
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
        assert_eq!(to_json(&r), to_json(&run_document(&parse_document(INERTIAL).unwrap()).unwrap()));
        let t = to_text(&r);
        assert!(t.contains("case: purely_inertial") && t.contains("omega is zero: yes"), "{t}");
    }
}
