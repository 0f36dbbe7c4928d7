//! Verification suites shared by the `selftest` command and the acceptance
//! tests. Each check returns an [`Outcome`]; sizes come from a [`Budget`]
//! so the command line can run a quick pass while the acceptance target
//! runs the full counts.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::keypoly::{
    delta, expand_monomials, normalize_proportional, q_expand, reconstruct, rewrite_nonneg,
    sample_elem, sample_integral, truncation, Val,
};
use crate::omega::{
    ckr_segments, extension_report, omega_report, v_int, Annihilator, DefectSpec, PolyKind, RamifiedSpec,
    Spec,
};
use crate::ordgrp::{Component, Rat, Value, ValueGroup, ValueInf};
use crate::oracle::grid::random_group;
use crate::oracle::{
    delta_bruteforce, different_monogenic, segment_bruteforce, GridWindow, RawSegment, SegmentOp,
    Verdict,
};
use crate::poly::{self, Poly};
use crate::segment::{annihilator_segment, module_report, FinalSegment, ValueFamily};
use crate::valfield::fp::poly_factor;
use crate::valfield::{build_extension, normal_form, Extension, FactorShape, NormalForm, LaurentField, Qp, QpElem, ValuedField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Segments,
    Keypoly,
    Omega,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Segments, Suite::Keypoly, Suite::Omega, Suite::Oracle];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Segments => "segments",
            Suite::Keypoly => "keypoly",
            Suite::Omega => "omega",
            Suite::Oracle => "oracle",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::validation(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    /// Verdicts the enumeration windows could not decide.
    pub inconclusive: usize,
    pub detail: String,
}

impl Outcome {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Outcome { name: name.into(), passed, inconclusive: 0, detail: detail.into() }
    }

    /// Passed with every verdict decided.
    pub fn clean(&self) -> bool {
        self.passed && self.inconclusive == 0
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {}: {}", self.name, self.detail)
    }
}

/// Sample sizes for the randomized checks.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub segment_cases: usize,
    pub mutation_cases: usize,
    pub expansions: usize,
    pub truncation_pairs: usize,
    pub rewrites: usize,
    pub ramified_specs: usize,
    pub defect_specs: usize,
    pub inertial_degree: usize,
    pub inertial_height: i64,
}

impl Budget {
    pub fn quick() -> Self {
        Budget {
            segment_cases: 2_000,
            mutation_cases: 300,
            expansions: 1_000,
            truncation_pairs: 300,
            rewrites: 300,
            ramified_specs: 300,
            defect_specs: 100,
            inertial_degree: 3,
            inertial_height: 4,
        }
    }

    pub fn full() -> Self {
        Budget {
            segment_cases: 10_000,
            mutation_cases: 1_000,
            expansions: 10_000,
            truncation_pairs: 1_000,
            rewrites: 1_000,
            ramified_specs: 1_000,
            defect_specs: 200,
            inertial_degree: 4,
            inertial_height: 20,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Base coordinate bound of the enumeration windows.
    pub window_bound: i64,
    pub seed: u64,
    pub budget: Budget,
}

impl Default for Options {
    fn default() -> Self {
        Options { window_bound: 2, seed: 1, budget: Budget::quick() }
    }
}

pub fn run_suite(suite: Suite, o: &Options) -> Vec<Outcome> {
    let b = &o.budget;
    match suite {
        Suite::Segments => vec![
            curated_segments(o.window_bound),
            segment_oracle(b.segment_cases, o.seed, o.window_bound),
        ],
        Suite::Keypoly => keypoly_layer(b, o.seed),
        Suite::Omega => {
            let defects = defect_corpus(b.defect_specs, o.seed);
            vec![
                spec_corpus(),
                inseparable_witness(),
                ramified_dense_criterion(b.ramified_specs, o.seed),
                defect_closed_forms(b.defect_specs, o.seed),
                ckr_equivalence(&defects),
                finiteness_flags(&defects),
            ]
        }
        Suite::Oracle => vec![
            inertial_reproduction(b.inertial_degree.min(3), b.inertial_height.min(4), &[2, 3, 5]),
            ramified_differents(),
            planted_mutations(b.mutation_cases, o.seed, o.window_bound),
        ],
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn first_failures(fails: &[String]) -> String {
    if fails.is_empty() {
        return String::new();
    }
    let shown: Vec<&str> = fails.iter().take(3).map(String::as_str).collect();
    format!("; first failures: {}", shown.join(" | "))
}

// ----------------------------------------------------------------------
// segments

fn int_group(rank: usize, dense: Option<u64>) -> ValueGroup {
    let c = match dense {
        Some(l) => Component::divisible(Rat::one(), l),
        None => Component::discrete(Rat::one()),
    };
    ValueGroup::new(vec![c; rank]).expect("valid group")
}

fn val(c: &[(i64, i64)]) -> Value {
    Value(c.iter().map(|&(n, d)| Rat::new(n, d)).collect())
}

/// Operations whose verdict is known to be conclusive on a window of at
/// least [`crate::oracle::MIN_WINDOW_POINTS`] points.
fn curated_ops() -> Vec<(ValueGroup, u32, SegmentOp)> {
    let z = ValueGroup::integers();
    let z2 = int_group(1, Some(2));
    let zz = int_group(2, None);
    let mixed = ValueGroup::new(vec![Component::divisible(Rat::one(), 2), Component::discrete(Rat::one())])
        .expect("valid group");
    let closed = |c: &[(i64, i64)]| RawSegment::ClosedAt { s: val(c) };
    vec![
        (z.clone(), 0, SegmentOp::AnnihilatorSegment { alpha: closed(&[(-2, 1)]), beta: closed(&[(3, 1)]) }),
        (z.clone(), 0, SegmentOp::Member { s: RawSegment::OpenAt { s: val(&[(1, 1)]) } }),
        (z2.clone(), 6, SegmentOp::HasMin { s: RawSegment::OpenExt { s: val(&[(0, 1)]) } }),
        (z2.clone(), 3, SegmentOp::HasMin { s: closed(&[(1, 2)]) }),
        (
            z2.clone(),
            3,
            SegmentOp::SegEqual { s: RawSegment::ClosedExt { s: val(&[(1, 3)]) }, t: RawSegment::OpenExt { s: val(&[(1, 3)]) } },
        ),
        (z2, 3, SegmentOp::SegEqual { s: closed(&[(1, 2)]), t: RawSegment::OpenAt { s: val(&[(1, 2)]) } }),
        (zz.clone(), 0, SegmentOp::InvarianceSubgroup { s: RawSegment::ClosedMod { s: val(&[(1, 1), (0, 1)]), delta: 2 } }),
        (zz.clone(), 0, SegmentOp::HasMin { s: closed(&[(1, 1), (2, 1)]) }),
        (zz, 0, SegmentOp::Member { s: RawSegment::OpenMod { s: val(&[(1, 1), (0, 1)]), delta: 2 } }),
        (
            mixed,
            1,
            SegmentOp::AnnihilatorSegment {
                alpha: RawSegment::OpenMod { s: val(&[(-1, 1), (0, 1)]), delta: 2 },
                beta: RawSegment::OpenMod { s: val(&[(1, 1), (0, 1)]), delta: 2 },
            },
        ),
    ]
}

/// A window below the size policy makes every verdict inconclusive.
fn run_op(op: &SegmentOp, w: &GridWindow) -> Result<Verdict> {
    if !w.is_large_enough() {
        return Ok(Verdict::Inconclusive { reason: format!("window of {} points is below the size policy", w.size()) });
    }
    segment_bruteforce(op, w)
}

pub fn curated_segments(window_bound: i64) -> Outcome {
    let ops = curated_ops();
    let mut fails = Vec::new();
    for (g, denom, op) in &ops {
        let w = GridWindow::covering(g, window_bound, *denom);
        match run_op(op, &w) {
            Ok(Verdict::Agree) => {}
            Ok(v) => fails.push(format!("{op:?}: {v:?}")),
            Err(e) => fails.push(format!("{op:?}: {e}")),
        }
    }
    Outcome::new(
        "segment corpus",
        fails.is_empty(),
        format!("{}/{} curated operations agree{}", ops.len() - fails.len(), ops.len(), first_failures(&fails)),
    )
}

/// Largest share of inconclusive verdicts tolerated on random operands.
pub const INCONCLUSIVE_POLICY: f64 = 0.25;

pub fn segment_oracle(cases: usize, seed: u64, window_bound: i64) -> Outcome {
    let mut r = rng(seed, 7);
    let (mut agree, mut inconclusive, mut smallest) = (0usize, 0usize, u128::MAX);
    let mut fails = Vec::new();
    let mut done = 0;
    while done < cases {
        let g = random_group(&mut r);
        let w = GridWindow::for_group(&g, window_bound);
        smallest = smallest.min(w.size());
        let s = RawSegment::random(&g, &mut r);
        let t = RawSegment::random(&g, &mut r);
        let ops = [
            SegmentOp::Member { s: s.clone() },
            SegmentOp::SegEqual { s: s.clone(), t: t.clone() },
            SegmentOp::HasMin { s: s.clone() },
            SegmentOp::InvarianceSubgroup { s: s.clone() },
            SegmentOp::AnnihilatorSegment { alpha: s, beta: t },
        ];
        for op in ops.iter().take(cases - done) {
            done += 1;
            match run_op(op, &w) {
                Ok(Verdict::Agree) => agree += 1,
                Ok(Verdict::Inconclusive { .. }) => inconclusive += 1,
                Ok(Verdict::Disagree { witness }) => fails.push(format!("{op:?}: {witness}")),
                Err(e) => fails.push(format!("{op:?}: {e}")),
            }
        }
    }
    let share = inconclusive as f64 / cases.max(1) as f64;
    let mut out = Outcome::new(
        "segment oracle",
        fails.is_empty() && share <= INCONCLUSIVE_POLICY,
        format!(
            "{cases} operations: {agree} agree, {} disagree, {inconclusive} inconclusive ({:.1}%, policy ≤ {:.0}%); smallest window {smallest} points{}",
            fails.len(),
            100.0 * share,
            100.0 * INCONCLUSIVE_POLICY,
            first_failures(&fails)
        ),
    );
    out.inconclusive = inconclusive;
    out
}

fn shift_raw(raw: &RawSegment, t: &Value) -> RawSegment {
    let mv = |s: &Value| s + t;
    match raw {
        RawSegment::ClosedAt { s } => RawSegment::ClosedAt { s: mv(s) },
        RawSegment::OpenAt { s } => RawSegment::OpenAt { s: mv(s) },
        RawSegment::ClosedMod { s, delta } => RawSegment::ClosedMod { s: mv(s), delta: *delta },
        RawSegment::OpenMod { s, delta } => RawSegment::OpenMod { s: mv(s), delta: *delta },
        RawSegment::OpenExt { s } => RawSegment::OpenExt { s: mv(s) },
        RawSegment::ClosedExt { s } => RawSegment::ClosedExt { s: mv(s) },
        other => other.clone(),
    }
}

/// Wrong claims planted into membership and annihilator answers must never
/// be accepted when the window holds a counterexample.
pub fn planted_mutations(cases: usize, seed: u64, window_bound: i64) -> Outcome {
    let mut r = rng(seed, 11);
    let (mut planted, mut caught) = (0usize, 0usize);
    let mut fails = Vec::new();
    for _ in 0..cases {
        let g = random_group(&mut r);
        let w = GridWindow::for_group(&g, window_bound);
        if !w.is_large_enough() {
            fails.push(format!("window of {} points is below the size policy", w.size()));
            break;
        }
        let s = RawSegment::random(&g, &mut r);
        let k = r.gen_range(0..g.rank());
        let step = match g.component(k).div {
            Some(l) => g.component(k).gen / Rat::from_integer(l as i64),
            None => g.component(k).gen,
        };
        let t = Value::unit(g.rank(), k, if r.gen_bool(0.5) { step } else { -step });
        let m = shift_raw(&s, &t);
        let (Ok(right), Ok(wrong)) = (s.build(&g), m.build(&g)) else { continue };
        let visible = w.points().any(|x| s.contains(&x.0) != m.contains(&x.0));
        if visible {
            planted += 1;
            match crate::oracle::check_member(&s, &wrong, &w) {
                Verdict::Agree => fails.push(format!("member of {s} accepted {m}")),
                _ => caught += 1,
            }
        }
        if let Ok(ann) = annihilator_segment(&g, &right, &right) {
            let bad = ann.translate(&g, &t).unwrap_or(ann.clone());
            let visible = w.points().any(|x| {
                let fx = ValueInf::Finite(x);
                ann.member(&g, &fx).ok() != bad.member(&g, &fx).ok()
            });
            if visible {
                planted += 1;
                match crate::oracle::check_annihilator(&s, &s, &bad, &w) {
                    Verdict::Agree => fails.push(format!("annihilator of {s} accepted {bad}")),
                    _ => caught += 1,
                }
            }
        }
    }
    Outcome::new(
        "oracle soundness",
        fails.is_empty() && planted > 0,
        format!("{caught}/{planted} planted mutations rejected{}", first_failures(&fails)),
    )
}

// ----------------------------------------------------------------------
// key polynomials

fn qpoly(p: u64, c: &[i64]) -> Poly<QpElem> {
    poly::trimmed(&Qp::new(p), c.iter().map(|&x| QpElem::int(x)).collect())
}

fn random_poly<F: ValuedField>(k: &F, r: &mut ChaCha8Rng, max_deg: usize) -> Poly<F::Elem> {
    let d = r.gen_range(0..=max_deg);
    poly::trimmed(k, (0..=d).map(|_| sample_elem(k, r)).collect())
}

fn random_monic<F: ValuedField>(k: &F, r: &mut ChaCha8Rng, max_deg: usize) -> Poly<F::Elem> {
    let d = r.gen_range(1..=max_deg);
    let mut c: Vec<F::Elem> = (0..d).map(|_| sample_elem(k, r)).collect();
    c.push(k.one());
    poly::trimmed(k, c)
}

/// An extension together with a complete set of normalized polynomials.
struct KeyCase<F: ValuedField> {
    name: &'static str,
    l: Extension<F>,
    qs: Vec<Poly<F::Elem>>,
}

fn qp_cases() -> Result<Vec<KeyCase<Qp>>> {
    let mut out = Vec::new();
    for (name, p, g, qs) in [
        ("Q2, x²+x+1", 2, vec![1, 1, 1], vec![vec![0, 1]]),
        ("Q2, x²−5", 2, vec![-5, 0, 1], vec![vec![-1, 1], vec![0, 1]]),
        ("Q3, x³−x−1", 3, vec![-1, -1, 0, 1], vec![vec![0, 1]]),
        ("Q5, x²−2", 5, vec![-2, 0, 1], vec![vec![0, 1]]),
    ] {
        let l = build_extension(&Qp::new(p), &qpoly(p, &g))?;
        let qs: Vec<_> = qs.iter().map(|q| qpoly(p, q)).collect();
        let qs = normalize_proportional(&l, &qs)?;
        out.push(KeyCase { name, l, qs });
    }
    Ok(out)
}

fn laurent_case() -> Result<KeyCase<LaurentField>> {
    let k = LaurentField::new(2, true, 24);
    let g = poly::parse(&k, &["u".into(), "t".into(), "1".into()])?;
    let l = build_extension(&k, &g)?;
    Ok(KeyCase { name: "F2(u)((t)), x²+tx+u", qs: vec![poly::var(&k)], l })
}

fn ramified_extensions() -> Result<Vec<Extension<Qp>>> {
    Ok(vec![
        build_extension(&Qp::new(2), &qpoly(2, &[-2, 0, 1]))?,
        build_extension(&Qp::new(2), &qpoly(2, &[-2, 0, 0, 1]))?,
        build_extension(&Qp::new(3), &qpoly(3, &[3, 3, 1]))?,
    ])
}

fn vadd(a: Val, b: Val) -> Val {
    Some(a? + b?)
}

fn multiplicativity_on<F: ValuedField>(
    l: &Extension<F>,
    r: &mut ChaCha8Rng,
    fails: &mut Vec<String>,
    name: &str,
) -> Result<()> {
    let k = &l.base;
    let c = sample_elem(k, r);
    let q = Poly(vec![k.neg(&c), k.one()]);
    let f = random_poly(k, r, 4);
    let h = random_poly(k, r, 4);
    if f.is_zero() || h.is_zero() {
        return Ok(());
    }
    let fh = poly::mul(k, &f, &h);
    let (tf, th, tfh) = (truncation(l, &f, &q)?, truncation(l, &h, &q)?, truncation(l, &fh, &q)?);
    if tfh != vadd(tf, th) {
        fails.push(format!("{name}: ν_q(fh) = {tfh:?}, ν_q(f)+ν_q(h) = {:?}", vadd(tf, th)));
    }
    let nu = l.eval_val(&f)?;
    let below = match (nu, tf) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a >= b,
    };
    if !below {
        fails.push(format!("{name}: ν(f) = {nu:?} < ν_q(f) = {tf:?}"));
    }
    Ok(())
}

fn rewrite_on<F: ValuedField>(case: &KeyCase<F>, r: &mut ChaCha8Rng, fails: &mut Vec<String>) -> Result<()> {
    let l = &case.l;
    let k = &l.base;
    let f = sample_integral(l, r)?;
    let ms = rewrite_nonneg(l, &f, &case.qs)?;
    let back = poly::rem(k, &expand_monomials(k, &ms, &case.qs), &l.g)?;
    let f_red = poly::rem(k, &f, &l.g)?;
    if back != f_red {
        fails.push(format!("{}: reconstruction differs for {}", case.name, poly::fmt(k, &f)));
    }
    let mut min_v: Option<i64> = None;
    for m in &ms {
        if let Some(v) = k.val(&m.coeff)? {
            if v < 0 {
                fails.push(format!("{}: coefficient of value {v}", case.name));
            }
            min_v = Some(min_v.map_or(v, |x| x.min(v)));
        }
    }
    let nu = l.eval_val(&f)?;
    if nu != min_v.map(Rat::from_integer) {
        fails.push(format!("{}: min v(a) = {min_v:?}, ν(f) = {nu:?}", case.name));
    }
    Ok(())
}

fn delta_on<F: ValuedField>(l: &Extension<F>, r: &mut ChaCha8Rng, fails: &mut Vec<String>) -> Result<()> {
    let k = &l.base;
    let deg = r.gen_range(2..=3);
    let roots: Vec<F::Elem> = (0..deg).map(|_| sample_elem(k, r)).collect();
    let f = roots.iter().fold(poly::constant(k, k.one()), |acc, c| poly::mul(k, &acc, &Poly(vec![k.neg(c), k.one()])));
    let (a, b) = (delta(l, &f)?, delta_bruteforce(l, &f, &roots)?);
    if a != b {
        fails.push(format!("δ({}) = {a:?}, explicit roots give {b:?}", poly::fmt(k, &f)));
    }
    Ok(())
}

pub fn keypoly_layer(b: &Budget, seed: u64) -> Vec<Outcome> {
    match keypoly_inner(b, seed) {
        Ok(v) => v,
        Err(e) => vec![Outcome::new("key polynomials", false, format!("error: {e}"))],
    }
}

fn keypoly_inner(b: &Budget, seed: u64) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();

    let mut r = rng(seed, 21);
    let mut fails = Vec::new();
    for _ in 0..b.expansions {
        let p = [2u64, 3, 5][r.gen_range(0..3)];
        let k = Qp::new(p);
        let f = random_poly(&k, &mut r, 7);
        let q = random_monic(&k, &mut r, 3);
        let parts = q_expand(&k, &f, &q)?;
        let degree_ok = parts.iter().all(|x| x.degree().is_none_or(|d| d < q.degree().unwrap_or(0)));
        if reconstruct(&k, &parts, &q) != f || !degree_ok {
            fails.push(format!("p = {p}: f = {}, q = {}", poly::fmt(&k, &f), poly::fmt(&k, &q)));
        }
    }
    out.push(Outcome::new(
        "q-expansion",
        fails.is_empty(),
        format!("{} random (f, q) reconstructed, {} failures{}", b.expansions, fails.len(), first_failures(&fails)),
    ));

    let mut r = rng(seed, 22);
    let mut fails = Vec::new();
    let qp = qp_cases()?;
    let lc = laurent_case()?;
    let ram = ramified_extensions()?;
    for i in 0..b.truncation_pairs {
        match i % 3 {
            0 => {
                let c = &qp[r.gen_range(0..qp.len())];
                multiplicativity_on(&c.l, &mut r, &mut fails, c.name)?
            }
            1 => multiplicativity_on(&ram[r.gen_range(0..ram.len())], &mut r, &mut fails, "ramified")?,
            _ => multiplicativity_on(&lc.l, &mut r, &mut fails, lc.name)?,
        }
    }
    out.push(Outcome::new(
        "truncation",
        fails.is_empty(),
        format!("{} pairs with linear q: ν_q multiplicative and ν ≥ ν_q{}", b.truncation_pairs, first_failures(&fails)),
    ));

    let mut r = rng(seed, 23);
    let mut fails = Vec::new();
    for i in 0..b.rewrites {
        if i % 5 == 4 {
            rewrite_on(&lc, &mut r, &mut fails)?;
        } else {
            rewrite_on(&qp[i % qp.len()], &mut r, &mut fails)?;
        }
    }
    out.push(Outcome::new(
        "monomial rewriting",
        fails.is_empty(),
        format!("{} cases: reconstruction, integrality and min v(a) = ν(f){}", b.rewrites, first_failures(&fails)),
    ));

    let mut r = rng(seed, 24);
    let mut fails = Vec::new();
    let mut count = 0;
    for c in &qp {
        for _ in 0..20 {
            delta_on(&c.l, &mut r, &mut fails)?;
            count += 1;
        }
    }
    for l in &ram {
        for _ in 0..20 {
            delta_on(l, &mut r, &mut fails)?;
            count += 1;
        }
    }
    for _ in 0..20 {
        delta_on(&lc.l, &mut r, &mut fails)?;
        count += 1;
    }
    out.push(Outcome::new(
        "delta",
        fails.is_empty(),
        format!("{count} split quadratics and cubics: Newton polygon δ equals explicit roots{}", first_failures(&fails)),
    ));
    Ok(out)
}

// ----------------------------------------------------------------------
// omega

/// Specs with their expected verdicts: `(name, spec, is_zero, inconsistent)`.
pub fn spec_examples() -> Vec<(&'static str, &'static str, bool, bool)> {
    vec![
        ("Q2 x²+x+1", r#"{"case":"concrete","field":{"field":"Qp","p":2},"g":["1","1","1"]}"#, true, false),
        ("Q2 x²−2", r#"{"case":"concrete","field":{"field":"Qp","p":2},"g":["-2","0","1"]}"#, false, false),
        ("Q2 x³−2", r#"{"case":"concrete","field":{"field":"Qp","p":2},"g":["-2","0","0","1"]}"#, false, false),
        ("Q3 x²+1", r#"{"case":"concrete","field":{"field":"Qp","p":3},"g":["1","0","1"]}"#, true, false),
        ("Q2 x²−5", r#"{"case":"concrete","field":{"field":"Qp","p":2},"g":["-5","0","1"]}"#, true, false),
        (
            "F2(u)((t)) x²−(u+t)",
            r#"{"case":"concrete","field":{"field":"Fp_u_t","p":2,"prec":32},"g":["-(u + t)","0","1"]}"#,
            false,
            false,
        ),
        (
            "F2(u)((t)) Artin–Schreier a = u",
            r#"{"case":"concrete","field":{"field":"Fp_u_t","p":2,"prec":32},"kind":"artin_schreier","a":"u"}"#,
            true,
            false,
        ),
        (
            "F2((t)) Artin–Schreier a = 1/t",
            r#"{"case":"concrete","field":{"field":"Fp_t","p":2,"prec":32},"kind":"artin_schreier","a":"t^-1"}"#,
            false,
            false,
        ),
        (
            "Q3 Kummer q = 2, a = 2",
            r#"{"case":"concrete","field":{"field":"Qp","p":3},"kind":"kummer","q":2,"a":"2"}"#,
            true,
            false,
        ),
        (
            "defect AS ρ = 0",
            r#"{"case":"pure_defect","n":2,"p":2,"group":[{"gen":"1","div":2}],"v_eta_K":{"kind":"inc_to_sup","sup":"0","attained":false},"kind":"artin_schreier","B":[1,2]}"#,
            true,
            false,
        ),
        (
            "defect AS ρ = −1",
            r#"{"case":"pure_defect","n":3,"p":3,"group":[{"gen":"1","div":3}],"v_eta_K":{"kind":"inc_to_sup","sup":"-1","attained":false},"kind":"artin_schreier","B":[3]}"#,
            false,
            false,
        ),
        (
            "defect with contradicting B",
            r#"{"case":"pure_defect","n":2,"p":2,"group":[{"gen":"1","div":2}],"v_eta_K":{"kind":"inc_to_sup","sup":"0","attained":false},"v_gprime_eta":"0","B":[2]}"#,
            true,
            true,
        ),
        (
            "branched d = 1",
            r#"{"case":"branched_pure","n":4,"p":2,"d":1,"beta_d":"1","group":[{"gen":"1","div":2}],"v_eta_K":{"kind":"inc_to_sup","sup":"1/2","attained":false},"v_gprime_eta":"1","B":[1,2]}"#,
            true,
            false,
        ),
        (
            "inertial inseparable residue",
            r#"{"case":"purely_inertial","n":2,"p":2,"group":[{"gen":"1"}],"residue_minpoly":{"with_u":true,"coeffs":["u","0","1"]},"v_gprime_eta":"1"}"#,
            false,
            false,
        ),
        (
            "ramified dense, p ∤ n",
            r#"{"case":"purely_ramified","n":3,"p":5,"group":[{"gen":"1/3","div":2}],"vK":[{"gen":"1","div":2}],"gamma":"1/3","coeff_values":["1","inf","inf"],"vp":"1","kind":"kummer"}"#,
            true,
            false,
        ),
        (
            "ramified dense, wild",
            r#"{"case":"purely_ramified","n":3,"p":3,"group":[{"gen":"1/3","div":2}],"vK":[{"gen":"1","div":2}],"gamma":"1/3","coeff_values":["1","inf","inf"],"vp":"1","kind":"kummer"}"#,
            false,
            false,
        ),
    ]
}

pub fn spec_corpus() -> Outcome {
    let ex = spec_examples();
    let mut fails = Vec::new();
    for (name, text, zero, inconsistent) in &ex {
        let got = serde_json::from_str::<Spec>(text)
            .map_err(|e| Error::Parse(e.to_string()))
            .and_then(|s| omega_report(&s));
        match got {
            Ok(r) if r.is_zero == *zero && r.inconsistent == *inconsistent => {}
            Ok(r) => fails.push(format!("{name}: is_zero {}, inconsistent {}", r.is_zero, r.inconsistent)),
            Err(e) => fails.push(format!("{name}: {e}")),
        }
    }
    Outcome::new(
        "spec corpus",
        fails.is_empty(),
        format!("{}/{} specs match{}", ex.len() - fails.len(), ex.len(), first_failures(&fails)),
    )
}

pub fn inseparable_witness() -> Outcome {
    let text = r#"{"case":"concrete","field":{"field":"Fp_u_t","p":2,"prec":32},"g":["-(u + t)","0","1"]}"#;
    let spec: Spec = serde_json::from_str(text).expect("well-formed");
    match omega_report(&spec) {
        Ok(r) => {
            let b = r.b_set.as_ref().map(|b| b.values.clone());
            let ok = !r.is_zero
                && b == Some(vec![2])
                && r.beta == Some(FinalSegment::Top)
                && r.ann == Annihilator::Segment { segment: FinalSegment::Empty };
            let beta = r.beta.as_ref().map_or("none".into(), ToString::to_string);
            Outcome::new(
                "inseparable residue",
                ok,
                format!("F2(u)((t)), x²−(u+t): is_zero = {}, B = {b:?}, β = {beta}, ann = {:?}", r.is_zero, r.ann),
            )
        }
        Err(e) => Outcome::new("inseparable residue", false, format!("error: {e}")),
    }
}

/// Δ from the definition: the values whose coordinates vanish up to and
/// including the first nonzero coordinate of `γ`.
fn delta_contains(gamma: &Value, x: &Value) -> bool {
    let j = gamma.0.iter().position(|c| !c.is_zero()).expect("positive γ");
    x.0[..=j].iter().all(Zero::is_zero)
}

fn random_dyadic(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rat {
    Rat::new(r.gen_range(lo * 4..=hi * 4), 4)
}

/// A random valid purely ramified spec over a group `ℤ[1/2]^r`, `n` odd.
fn random_ramified(r: &mut ChaCha8Rng) -> RamifiedSpec {
    let rank = r.gen_range(1..=2);
    let n = [3u64, 5, 7, 9][r.gen_range(0..4)];
    let p = [0u64, 2, 3, 5, 7][r.gen_range(0..5)];
    let j = r.gen_range(0..rank);
    let dense = Component::divisible(Rat::one(), 2);
    let v_k = ValueGroup::new(vec![dense.clone(); rank]).expect("valid");
    let mut comps = vec![dense; rank];
    comps[j] = Component::divisible(Rat::new(1, n as i64), 2);
    let group = ValueGroup::new(comps).expect("valid");
    let a = loop {
        let a = r.gen_range(1..n as i64 * 2);
        if num_integer::gcd(a, n as i64) == 1 {
            break a;
        }
    };
    let mut gamma = Value::zero(rank);
    for i in 0..j {
        gamma.0[i] = Rat::new(r.gen_range(0..=4), 4);
    }
    let sign = if gamma.is_zero() || r.gen_bool(0.5) { 1 } else { -1 };
    gamma.0[j] = Rat::new(sign * a, n as i64);
    for i in j + 1..rank {
        gamma.0[i] = random_dyadic(r, -1, 1);
    }
    let j0 = gamma.first_nonzero().expect("nonzero");
    let vp = if p == 0 || r.gen_bool(0.25) {
        ValueInf::Infinity
    } else {
        let mut v = Value::zero(rank);
        v.0[r.gen_range(0..rank)] = Rat::new(r.gen_range(1..=4), 2);
        ValueInf::Finite(v)
    };
    let mut coeff_values = vec![ValueInf::Finite(gamma.scale(n as i64))];
    for l in 1..n {
        let ValueInf::Finite(vl) = v_int(l, p, &vp, rank) else {
            coeff_values.push(ValueInf::Infinity);
            continue;
        };
        if r.gen_bool(0.5) {
            coeff_values.push(ValueInf::Infinity);
            continue;
        }
        // va_ℓ exceeds (n−ℓ)γ − vℓ first at `pos`; the term lies in Δ iff pos > j0
        let target = &gamma.scale((n - l) as i64) - &vl;
        let pos = if j0 < j && r.gen_bool(0.5) { j } else { j0 };
        let mut x = target.clone();
        x.0[pos] = (target.0[pos] * 4).floor() / 4 + Rat::new(r.gen_range(1..=4), 4);
        for i in pos + 1..rank {
            x.0[i] = random_dyadic(r, -1, 1);
        }
        coeff_values.push(ValueInf::Finite(x));
    }
    RamifiedSpec { n, p, group, v_k, gamma, coeff_values, vp, kind: PolyKind::Generic }
}

pub fn ramified_dense_criterion(count: usize, seed: u64) -> Outcome {
    let mut r = rng(seed, 31);
    let mut fails = Vec::new();
    let (mut zero, mut produced, mut tries) = (0usize, 0usize, 0usize);
    while produced < count && tries < count * 20 {
        tries += 1;
        let s = random_ramified(&mut r);
        if s.validate().is_err() {
            continue;
        }
        produced += 1;
        let rep = match omega_report(&Spec::PurelyRamified(s.clone())) {
            Ok(rep) => rep,
            Err(e) => {
                fails.push(format!("{e}"));
                continue;
            }
        };
        zero += rep.is_zero as usize;
        let in_delta = |v: &ValueInf| v.finite().is_some_and(|x| delta_contains(&s.gamma, x));
        let exists = s.coefficient_terms().iter().any(in_delta);
        let p_not_n = s.p == 0 || !s.n.is_multiple_of(s.p);
        let vp_in = in_delta(&s.vp);
        if rep.is_zero != exists {
            fails.push(format!("n = {}, p = {}, γ = {}: is_zero = {} but ∃ℓ = {exists}", s.n, s.p, s.gamma, rep.is_zero));
        }
        if (p_not_n || vp_in) && !rep.is_zero {
            fails.push(format!("n = {}, p = {}, vp = {}: a corollary forces Ω = 0", s.n, s.p, s.vp));
        }
        if rep.inconsistent {
            fails.push(format!("n = {}, p = {}: report flagged inconsistent", s.n, s.p));
        }
    }
    Outcome::new(
        "ramified criterion",
        fails.is_empty() && produced >= count,
        format!(
            "{produced} synthetic specs over 2-divisible groups ({zero} with Ω = 0); main criterion and both corollaries agree{}",
            first_failures(&fails)
        ),
    )
}

fn defect_spec(p: u64, group: ValueGroup, sup: Value, kind: PolyKind, vgp: Option<Value>, vp: Option<Value>) -> DefectSpec {
    DefectSpec {
        n: p,
        p,
        group,
        v_eta_k: ValueFamily::IncToSup { sup, attained: false },
        v_gprime_eta: vgp.map(ValueInf::Finite),
        b: None,
        kind,
        vp: vp.map(ValueInf::Finite),
    }
}

pub fn defect_closed_forms(count: usize, seed: u64) -> Outcome {
    let mut r = rng(seed, 41);
    let mut fails = Vec::new();
    for i in 0..count {
        let p = [2u64, 3, 5, 7][r.gen_range(0..4)];
        let g = ValueGroup::divisible_rank_one(Rat::one(), p);
        let kummer = i % 2 == 1;
        let vp = Rat::from_integer(r.gen_range(1..=3));
        let top = if kummer { vp / Rat::from_integer(p as i64 - 1) } else { Rat::zero() };
        let rho = top - Rat::new(r.gen_range(0..=30), r.gen_range(1..=7));
        let (kind, vpv) = if kummer { (PolyKind::Kummer, Some(Value::rank_one(vp))) } else { (PolyKind::ArtinSchreier, None) };
        let s = defect_spec(p, g.clone(), Value::rank_one(rho), kind, None, vpv);
        let bound = if kummer { vp } else { Rat::zero() } + (Rat::one() - Rat::from_integer(p as i64)) * rho;
        let expected = FinalSegment::closed_ext(&g, &Value::rank_one(bound));
        match (omega_report(&Spec::PureDefect(s)), expected) {
            (Ok(rep), Ok(exp)) => {
                if rep.ann != (Annihilator::Segment { segment: exp.clone() }) {
                    fails.push(format!("p = {p}, ρ = {rho}, kummer = {kummer}: ann {:?}, closed form {exp}", rep.ann));
                }
            }
            (Err(e), _) | (_, Err(e)) => fails.push(format!("p = {p}, ρ = {rho}: {e}")),
        }
    }
    Outcome::new(
        "defect closed forms",
        fails.is_empty(),
        format!("{count} random (p, ρ): ann = {{vb ≥ (1−p)ρ}} (AS) and {{vb ≥ vp + (1−p)ρ}} (Kummer){}", first_failures(&fails)),
    )
}

/// Defect specs with increasing families: Artin–Schreier, Kummer and
/// generic, of rank 1 and 2.
pub fn defect_corpus(count: usize, seed: u64) -> Vec<DefectSpec> {
    let mut r = rng(seed, 51);
    let mut out = Vec::new();
    for i in 0..count {
        let p = [2u64, 3, 5][r.gen_range(0..3)];
        let dense = Component::divisible(Rat::one(), p);
        match i % 3 {
            0 => {
                let rho = -Rat::new(r.gen_range(0..=12), r.gen_range(1..=5));
                out.push(defect_spec(p, ValueGroup::new(vec![dense]).expect("valid"), Value::rank_one(rho), PolyKind::ArtinSchreier, None, None));
            }
            1 => {
                let vp = Rat::from_integer(r.gen_range(1..=3));
                let rho = vp / Rat::from_integer(p as i64 - 1) - Rat::new(r.gen_range(0..=12), r.gen_range(1..=5));
                let g = ValueGroup::new(vec![dense]).expect("valid");
                out.push(defect_spec(p, g, Value::rank_one(rho), PolyKind::Kummer, None, Some(Value::rank_one(vp))));
            }
            _ => {
                let g = ValueGroup::new(vec![Component::discrete(Rat::one()), dense]).expect("valid");
                let sup = Value(vec![Rat::from_integer(r.gen_range(-2..=2)), Rat::new(r.gen_range(-9..=9), r.gen_range(1..=4))]);
                let n1 = Rat::from_integer(p as i64 - 1);
                // v(g′(η)) ≥ (n−1)·sup keeps β inside α
                let mut vgp = Value(vec![sup.0[0] * n1 + Rat::from_integer(r.gen_range(0..=1)), Rat::zero()]);
                vgp.0[1] = if vgp.0[0] == sup.0[0] * n1 {
                    (sup.0[1] * n1).ceil() + Rat::from_integer(r.gen_range(0..=2))
                } else {
                    Rat::from_integer(r.gen_range(-3..=3))
                };
                out.push(defect_spec(p, g, sup, PolyKind::Generic, Some(vgp), None));
            }
        }
    }
    out
}

pub fn ckr_equivalence(corpus: &[DefectSpec]) -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0;
    for s in corpus {
        let ValueFamily::IncToSup { sup, .. } = &s.v_eta_k else { continue };
        let g = &s.group;
        let r = g.rank();
        let mut rt = sup.clone();
        rt.0[r - 1] = rt.0[r - 1].ceil() + Rat::from_integer(checked as i64 % 3);
        let res = (|| -> Result<bool> {
            let spec = Spec::PureDefect(s.clone());
            let alpha = crate::omega::alpha_of(&spec)?;
            let beta = crate::omega::beta_of(&spec)?.expect("defect β");
            let m = module_report(g, &alpha, &beta)?;
            let (u, v) = ckr_segments(s, &rt)?;
            let mu = module_report(g, &u, &u.sum(g, &v)?)?;
            Ok(mu.is_zero == m.is_zero && mu.fin_gen == m.fin_gen && mu.fin_pres == m.fin_pres && mu.ann == m.ann)
        })();
        checked += 1;
        match res {
            Ok(true) => {}
            Ok(false) => fails.push(format!("p = {}, sup = {sup}: flags differ", s.p)),
            Err(e) => fails.push(format!("p = {}, sup = {sup}: {e}", s.p)),
        }
    }
    Outcome::new(
        "CKR equivalence",
        fails.is_empty() && checked > 0,
        format!("{checked} defect specs: flags of U/UV equal those of I_α/I_β{}", first_failures(&fails)),
    )
}

/// Inertial specs used for the finite-presentation flag.
fn inertial_specs() -> Vec<Spec> {
    let texts = [
        r#"{"case":"purely_inertial","n":2,"p":2,"group":[{"gen":"1"}],"residue_minpoly":{"with_u":true,"coeffs":["u","0","1"]},"v_gprime_eta":"1"}"#,
        r#"{"case":"purely_inertial","n":2,"p":2,"group":[{"gen":"1"}],"residue_minpoly":{"coeffs":["1","1","1"]},"v_gprime_eta":"0"}"#,
        r#"{"case":"purely_inertial","n":3,"p":0,"group":[{"gen":"1"}],"B":[3],"v_gprime_eta":"0"}"#,
        r#"{"case":"purely_inertial","n":2,"p":2,"group":[{"gen":"1","div":3},{"gen":"1"}],"B":[2],"v_gprime_eta":"(0,2)"}"#,
        r#"{"case":"concrete","field":{"field":"Qp","p":5},"g":["2","0","1"]}"#,
        r#"{"case":"concrete","field":{"field":"Fp_u_t","p":3,"prec":24},"g":["-(u + t)","0","0","1"]}"#,
    ];
    texts.iter().map(|t| serde_json::from_str(t).expect("well-formed")).collect()
}

/// Defect specs with increasing families are not finitely generated unless
/// `Ω = 0`; inertial specs are finitely presented.
pub fn finiteness_flags(corpus: &[DefectSpec]) -> Outcome {
    let mut fails = Vec::new();
    let (mut nonzero, mut zero) = (0, 0);
    for s in corpus {
        match omega_report(&Spec::PureDefect(s.clone())) {
            Ok(rep) => {
                if rep.is_zero {
                    zero += 1;
                } else {
                    nonzero += 1;
                }
                if rep.fin_gen() != Some(rep.is_zero) {
                    fails.push(format!("p = {}: fin_gen = {:?}, is_zero = {}", s.p, rep.fin_gen(), rep.is_zero));
                }
            }
            Err(e) => fails.push(e.to_string()),
        }
    }
    let inertial = inertial_specs();
    for s in &inertial {
        match omega_report(s) {
            Ok(rep) if rep.fin_pres() == Some(true) => {}
            Ok(rep) => fails.push(format!("inertial spec: fin_pres = {:?}", rep.fin_pres())),
            Err(e) => fails.push(e.to_string()),
        }
    }
    Outcome::new(
        "finiteness flags",
        fails.is_empty(),
        format!(
            "{nonzero} defect specs with Ω ≠ 0 have fin_gen = false, {zero} with Ω = 0 have fin_gen = true; {} inertial specs have fin_pres = true{}",
            inertial.len(),
            first_failures(&fails)
        ),
    )
}

// ----------------------------------------------------------------------
// oracle

/// Tally of the inertial enumeration.
#[derive(Clone, Debug, Default, Serialize)]
pub struct InertialTally {
    pub enumerated: usize,
    /// Degree one, `L = K`.
    pub trivial: usize,
    pub checked: usize,
    pub reducible: usize,
    pub ramified: usize,
    /// Settled through a generator found beyond the first order.
    pub higher_order: usize,
    pub undetermined: usize,
    pub mismatches: Vec<String>,
}

fn reduce_mod(c: &[i64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = c.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Characteristic polynomial of multiplication by `b(x)` on `K[x]/(g)`.
fn charpoly<F: ValuedField>(k: &F, g: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
    let n = g.degree().unwrap_or(0);
    // column i holds x^i·b mod g
    let mut cols = Vec::with_capacity(n);
    let mut xi = poly::constant(k, k.one());
    for _ in 0..n {
        let c = poly::rem(k, &poly::mul(k, &xi, b), g)?;
        cols.push((0..n).map(|r| c.coeff(k, r)).collect::<Vec<_>>());
        xi = poly::mul(k, &xi, &poly::var(k));
    }
    let a = |r: usize, c: usize| cols[c][r].clone();
    let matmul = |m: &[Vec<F::Elem>]| -> Vec<Vec<F::Elem>> {
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| (0..n).fold(k.zero(), |acc, i| k.add(&acc, &k.mul(&a(r, i), &m[i][c]))))
                    .collect()
            })
            .collect()
    };
    // Faddeev–LeVerrier
    let mut coeffs = vec![k.zero(); n + 1];
    coeffs[n] = k.one();
    let mut m: Vec<Vec<F::Elem>> = vec![vec![k.zero(); n]; n];
    for step in 1..=n {
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = k.add(&row[i], &coeffs[n + 1 - step]);
        }
        let am = matmul(&m);
        let tr = (0..n).fold(k.zero(), |acc, i| k.add(&acc, &am[i][i]));
        coeffs[n - step] = k.neg(&k.div(&tr, &k.of_i64(step as i64))?);
        m = am;
    }
    Ok(poly::trimmed(k, coeffs))
}

/// How one enumerated polynomial was settled.
enum Settled {
    Reducible,
    Ramified,
    Undetermined,
    /// An extension with a monogenic generator of `L`.
    Field(Extension<Qp>),
}

/// Arithmetic in `K[x]/(g)` for the higher-order settling below.
struct Quotient<'a> {
    k: &'a Qp,
    g: &'a Poly<QpElem>,
    n: usize,
}

impl Quotient<'_> {
    fn mul(&self, a: &Poly<QpElem>, b: &Poly<QpElem>) -> Poly<QpElem> {
        poly::rem(self.k, &poly::mul(self.k, a, b), self.g).expect("monic g")
    }

    fn eval(&self, f: &[u64], z: &Poly<QpElem>) -> Poly<QpElem> {
        f.iter().rev().fold(Poly(Vec::new()), |acc, &c| {
            poly::add(self.k, &self.mul(&acc, z), &poly::constant(self.k, QpElem::int(c as i64)))
        })
    }

    fn scale_pi(&self, z: &Poly<QpElem>, j: i64) -> Poly<QpElem> {
        poly::scale(self.k, z, &self.k.pi_pow(j))
    }

    /// `v(z)` for a field `K[x]/(g)`: the characteristic polynomial has a
    /// single slope. `Err` when it has two, which shows `g` reducible;
    /// `None` for a zero norm.
    fn val(&self, z: &Poly<QpElem>) -> std::result::Result<Option<Rat>, ()> {
        let Ok(h) = charpoly(self.k, self.g, z) else { return Ok(None) };
        let n = self.n as i64;
        let Ok(Some(v0)) = self.k.val(&h.coeff(self.k, 0)) else { return Ok(None) };
        for i in 1..self.n {
            if let Ok(Some(vi)) = self.k.val(&h.coeff(self.k, i)) {
                if vi * n < v0 * (n - i as i64) {
                    return Err(());
                }
            }
        }
        Ok(Some(Rat::new(v0, n)))
    }

    /// The irreducible factor of the reduced characteristic polynomial of a
    /// unit, or `Err` when there are two coprime factors.
    fn residue_factor(&self, z: &Poly<QpElem>) -> std::result::Result<Option<Vec<u64>>, ()> {
        let Ok(h) = charpoly(self.k, self.g, z) else { return Ok(None) };
        let p = self.k.residue_char();
        let mut red = Vec::with_capacity(h.coeffs().len());
        for c in h.coeffs() {
            match self.k.residue(c).ok().and_then(|r| r.as_constant()) {
                Some(x) => red.push(x),
                None => return Ok(None),
            }
        }
        match poly_factor(&red, p).as_slice() {
            [(phi, _)] => Ok(Some(phi.clone())),
            _ => Err(()),
        }
    }

    /// `L` presented by a unit whose residue generates `Lv` of degree `n`.
    fn present(&self, z: &Poly<QpElem>) -> Settled {
        match charpoly(self.k, self.g, z).and_then(|h| build_extension(self.k, &h)) {
            Ok(l) if l.n == self.n && l.e == 1 => Settled::Field(l),
            _ => Settled::Undetermined,
        }
    }
}

/// Settle a residual polynomial `φ^k` with `deg φ ≥ 2` at an integral
/// slope by growing the residue field. With `gen` a unit whose residue has
/// degree `m`, `u = Φ(gen)/p^λ` is a unit; either `gen + c·u` has a larger
/// residue degree, or `ū` lies in `F_p(ḡen)` and is subtracted off. An
/// element of non-integral value shows `e > 1`; a unit of residue degree
/// `n` presents `L` through a generator of `O_L`.
fn higher_order(k: &Qp, g: &Poly<QpElem>, nf: &NormalForm<Qp>) -> Settled {
    let n = g.degree().unwrap_or(0);
    let p = k.residue_char();
    let q = Quotient { k, g, n };
    // η₀ = (x − shift_c)/π^shift_k
    let scale = k.pi_pow(-nf.shift_k);
    let mut gen = poly::trimmed(k, vec![k.neg(&k.mul(&nf.shift_c, &scale)), scale]);
    let mut phi = match q.residue_factor(&gen) {
        Ok(Some(phi)) => phi,
        Ok(None) => return Settled::Undetermined,
        Err(()) => return Settled::Reducible,
    };
    'grow: for _ in 0..n {
        let m = phi.len() - 1;
        if m == n {
            return q.present(&gen);
        }
        let mut psi = q.eval(&phi, &gen);
        for _ in 0..12 {
            let lambda = match q.val(&psi) {
                Ok(Some(l)) => l,
                // a nonzero element of norm zero is a zero divisor
                Ok(None) if !psi.is_zero() => return Settled::Reducible,
                Ok(None) => return Settled::Undetermined,
                Err(()) => return Settled::Reducible,
            };
            if !lambda.is_integer() {
                return Settled::Ramified;
            }
            let u = q.scale_pi(&psi, -lambda.to_integer());
            let mut cands = vec![u.clone()];
            cands.extend((1..p as i64).map(|c| poly::add(k, &gen, &poly::scale(k, &u, &k.of_i64(c)))));
            cands.push(poly::add(k, &gen, &q.mul(&gen, &u)));
            for z in cands {
                match q.residue_factor(&z) {
                    Ok(Some(f)) if f.len() - 1 > m => {
                        gen = z;
                        phi = f;
                        continue 'grow;
                    }
                    Ok(Some(_)) => {}
                    Ok(None) | Err(()) => return Settled::Reducible,
                }
            }
            // ū ∈ F_p(ḡen): subtract a lift r(gen)
            let mut next = None;
            for idx in 0..(p as usize).pow(m as u32) {
                let r: Vec<u64> = (0..m).map(|i| (idx / (p as usize).pow(i as u32)) as u64 % p).collect();
                let d = poly::sub(k, &u, &q.eval(&r, &gen));
                if d.is_zero() {
                    return Settled::Undetermined;
                }
                match q.val(&d) {
                    Ok(Some(v)) if v > Rat::zero() => {
                        next = Some(d);
                        break;
                    }
                    Ok(Some(_)) => {}
                    Ok(None) | Err(()) => return Settled::Reducible,
                }
            }
            match next {
                Some(d) => psi = d,
                None => return Settled::Undetermined,
            }
        }
        return Settled::Undetermined;
    }
    Settled::Undetermined
}

/// `gcd(g, g′) = 1` over the rationals.
fn squarefree(k: &Qp, g: &Poly<QpElem>) -> bool {
    let (mut a, mut b) = (g.clone(), poly::derivative(k, g));
    while !b.is_zero() {
        let r = poly::rem(k, &a, &b).expect("nonzero divisor");
        a = b;
        b = r;
    }
    a.degree() == Some(0)
}

fn settle(p: u64, c: &[i64], factors: &[(Vec<u64>, u32)]) -> Settled {
    // two coprime factors mod p lift to a factorization over ℤ_p
    if factors.len() > 1 {
        return Settled::Reducible;
    }
    let k = Qp::new(p);
    let g = qpoly(p, c);
    if !squarefree(&k, &g) {
        return Settled::Reducible;
    }
    match build_extension(&k, &g) {
        Ok(l) if l.e == 1 => Settled::Field(l),
        Ok(_) => Settled::Ramified,
        Err(Error::Reducible(_) | Error::MixedSlopes) => Settled::Reducible,
        Err(Error::NotRegular(_)) => match normal_form(&k, &g) {
            // every root has this non-integral value
            Ok(nf) if !nf.slope.is_integer() => Settled::Ramified,
            Ok(nf) if nf.shape == FactorShape::PowerOfHigher => higher_order(&k, &g, &nf),
            _ => Settled::Undetermined,
        },
        Err(_) => Settled::Undetermined,
    }
}

/// Classify one monic integer polynomial and, when it defines an extension
/// with `e = 1`, compare the four characterizations of `Ω = 0`.
fn inertial_one(p: u64, c: &[i64], t: &mut InertialTally, factors: &mut HashMap<Vec<u64>, Vec<(Vec<u64>, u32)>>) {
    t.enumerated += 1;
    let f = factors.entry(reduce_mod(c, p)).or_insert_with_key(|r| poly_factor(r, p));
    let l = match settle(p, c, f) {
        Settled::Reducible => return t.reducible += 1,
        Settled::Ramified => return t.ramified += 1,
        Settled::Undetermined => return t.undetermined += 1,
        Settled::Field(l) if l.n == 1 => return t.trivial += 1,
        Settled::Field(l) => l,
    };
    t.checked += 1;
    if l.g != qpoly(p, c) {
        t.higher_order += 1;
    }
    let res = (|| -> Result<(bool, bool, bool, bool)> {
        let rep = extension_report(&l)?;
        let sep = l.residue_separable();
        let b = rep.b_set.as_ref().map(|b| crate::omega::p_not_divides(p, &b.values)).unwrap_or(false);
        let diff = different_monogenic(&l)? == ValueInf::Finite(Value::zero(1));
        Ok((rep.is_zero, sep, b, diff))
    })();
    match res {
        Ok((a, b, c2, d)) if a == b && b == c2 && c2 == d => {}
        Ok(v) => t.mismatches.push(format!("p = {p}, g = {c:?}: {v:?}")),
        Err(e) => t.mismatches.push(format!("p = {p}, g = {c:?}: {e}")),
    }
}

pub fn inertial_enumeration(max_degree: usize, height: i64, primes: &[u64]) -> InertialTally {
    let mut t = InertialTally::default();
    for &p in primes {
        let mut factors = HashMap::new();
        for d in 1..=max_degree {
            let width = (2 * height + 1) as usize;
            let total = width.pow(d as u32);
            let mut c = vec![0i64; d + 1];
            c[d] = 1;
            for mut idx in 0..total {
                for ci in c.iter_mut().take(d) {
                    *ci = (idx % width) as i64 - height;
                    idx /= width;
                }
                inertial_one(p, &c, &mut t, &mut factors);
            }
        }
    }
    t
}

pub fn inertial_reproduction(max_degree: usize, height: i64, primes: &[u64]) -> Outcome {
    let t = inertial_enumeration(max_degree, height, primes);
    Outcome::new(
        "inertial reproduction",
        t.mismatches.is_empty() && t.undetermined == 0 && t.checked > 0,
        format!(
            "degree ≤ {max_degree}, height ≤ {height}, p ∈ {primes:?}: {} polynomials; {} with e = 1 and degree ≥ 2 checked (is_zero ⟺ separable ⟺ p ∤ B ⟺ different 0), {} of them through a higher-order generator; {} of degree 1, {} reducible, {} ramified, {} undetermined, {} mismatches{}",
            t.enumerated,
            t.checked,
            t.higher_order,
            t.trivial,
            t.reducible,
            t.ramified,
            t.undetermined,
            t.mismatches.len(),
            first_failures(&t.mismatches)
        ),
    )
}

pub fn ramified_differents() -> Outcome {
    let mut fails = Vec::new();
    for (g, expect) in [(vec![-2, 0, 0, 1], Rat::new(2, 3)), (vec![-2, 0, 1], Rat::new(3, 2))] {
        let res = (|| -> Result<(bool, ValueInf, Annihilator)> {
            let l = build_extension(&Qp::new(2), &qpoly(2, &g))?;
            let rep = extension_report(&l)?;
            Ok((rep.is_zero, different_monogenic(&l)?, rep.ann))
        })();
        match res {
            Ok((false, d, Annihilator::OracleOnly { value })) if d == ValueInf::Finite(Value::rank_one(expect)) && value == d => {}
            Ok(v) => fails.push(format!("{g:?}: {v:?}")),
            Err(e) => fails.push(format!("{g:?}: {e}")),
        }
    }
    Outcome::new(
        "ramified differents",
        fails.is_empty(),
        format!("Q2: x³−2 and x²−2 give Ω ≠ 0 with different 2/3 and 3/2{}", first_failures(&fails)),
    )
}

