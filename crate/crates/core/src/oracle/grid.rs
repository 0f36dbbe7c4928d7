//! Enumeration oracle for segment operations.
//!
//! Segments are given as raw textbook data ([`RawSegment`]) whose
//! membership is decided straight from the definition. A claimed answer is
//! compared against that definition on every point of a finite
//! [`GridWindow`], and on the least members of the segment in a few
//! successively finer windows (for upward-closed sets the least member
//! decides every containment question restricted to a window). The verdict
//! is `Agree` only when the check had the evidence to refute the claim and
//! did not; missing evidence yields `Inconclusive`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ordgrp::{Component, ConvexSubgroup, Rat, Value, ValueGroup, ValueInf};
use crate::segment::{annihilator_segment, seg_equal, FinalSegment};

/// Windows with fewer points than this are never conclusive.
pub const MIN_WINDOW_POINTS: u128 = 1000;

/// Number of refinements used to locate least members.
const REFINEMENTS: u32 = 4;

/// Largest coordinate bound tried by [`GridWindow::covering`].
const MAX_BOUND: i64 = 1 << 12;

/// The points of `Γ` whose coordinates are at most `bound` in absolute
/// value, with dense coordinates restricted to denominators `ℓ^denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridWindow {
    pub group: ValueGroup,
    pub bound: i64,
    pub denom: u32,
    /// Per coordinate: step and number of steps on each side of zero.
    axes: Vec<(Rat, i64)>,
}

impl GridWindow {
    pub fn new(group: &ValueGroup, bound: i64, denom: u32) -> Self {
        let axes = group
            .components()
            .iter()
            .map(|c| {
                let step = match c.div {
                    Some(l) => c.gen / Rat::from_integer((l as i64).pow(denom)),
                    None => c.gen,
                };
                let half = (Rat::from_integer(bound.max(0)) / step).floor().to_integer();
                (step, half)
            })
            .collect();
        GridWindow { group: group.clone(), bound: bound.max(0), denom, axes }
    }

    /// Double `base_bound` until the window has at least
    /// [`MIN_WINDOW_POINTS`] points or the bound cap is reached.
    pub fn covering(group: &ValueGroup, base_bound: i64, denom: u32) -> Self {
        let mut w = GridWindow::new(group, base_bound, denom);
        while w.size() < MIN_WINDOW_POINTS && w.bound > 0 && w.bound < MAX_BOUND {
            w = GridWindow::new(group, w.bound * 2, denom);
        }
        w
    }

    /// The default window for random checks: finer denominators on
    /// smaller ranks so every window stays a few thousand points.
    pub fn for_group(group: &ValueGroup, base_bound: i64) -> Self {
        let denom = match group.rank() {
            1 => 3,
            2 => 2,
            _ => 1,
        };
        GridWindow::covering(group, base_bound, denom)
    }

    pub fn size(&self) -> u128 {
        self.axes.iter().map(|(_, h)| (2 * *h + 1) as u128).product()
    }

    pub fn is_large_enough(&self) -> bool {
        self.size() >= MIN_WINDOW_POINTS
    }

    /// The `idx`-th point in increasing lexicographic order.
    pub fn point(&self, mut idx: u128) -> Value {
        let mut coords = vec![Rat::zero(); self.axes.len()];
        for (i, (step, half)) in self.axes.iter().enumerate().rev() {
            let width = (2 * half + 1) as u128;
            let t = (idx % width) as i64;
            idx /= width;
            coords[i] = *step * Rat::from_integer(t - half);
        }
        Value(coords)
    }

    pub fn points(&self) -> impl Iterator<Item = Value> + '_ {
        (0..self.size()).map(|i| self.point(i))
    }

    pub fn refine(&self) -> Self {
        GridWindow::new(&self.group, self.bound * 2, self.denom + 1)
    }

    /// Whether `x` lies on this grid.
    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.axes.len()
            && x.iter().zip(&self.axes).all(|(c, (step, half))| {
                let q = c / step;
                q.is_integer() && q.to_integer().abs() <= *half
            })
    }

    /// Whether `x` lies within the coordinate bound.
    fn within(&self, x: &[Rat]) -> bool {
        x.iter().all(|c| c.abs() <= Rat::from_integer(self.bound))
    }

    /// Least point of the window inside the upward-closed `member`.
    fn least_member(&self, member: impl Fn(&[Rat]) -> bool) -> Option<Value> {
        let n = self.size();
        if n == 0 || !member(&self.point(n - 1).0) {
            return None;
        }
        let (mut lo, mut hi) = (0u128, n - 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if member(&self.point(mid).0) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(self.point(lo))
    }
}

fn lex(a: &[Rat], b: &[Rat]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// A final segment in textbook form. `delta` is the 1-based start of the
/// convex subgroup `Δ = {x : x_1 = … = x_{delta−1} = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum RawSegment {
    Whole,
    Top,
    Empty,
    ClosedAt { s: Value },
    OpenAt { s: Value },
    ClosedMod { s: Value, delta: usize },
    OpenMod { s: Value, delta: usize },
    /// `{x > ρ}` for any `ρ ∈ ℚ^r`.
    OpenExt { s: Value },
    /// `{x ≥ ρ}` for any `ρ ∈ ℚ^r`.
    ClosedExt { s: Value },
}

impl fmt::Display for RawSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawSegment::Whole => f.write_str("Γ"),
            RawSegment::Top => f.write_str("{∞}"),
            RawSegment::Empty => f.write_str("∅"),
            RawSegment::ClosedAt { s } => write!(f, "x ≥ {s}"),
            RawSegment::OpenAt { s } => write!(f, "x > {s}"),
            RawSegment::ClosedMod { s, delta } => write!(f, "x + Δ{delta} ≥ {s} + Δ{delta}"),
            RawSegment::OpenMod { s, delta } => write!(f, "x + Δ{delta} > {s} + Δ{delta}"),
            RawSegment::OpenExt { s } => write!(f, "x > ext {s}"),
            RawSegment::ClosedExt { s } => write!(f, "x ≥ ext {s}"),
        }
    }
}

impl RawSegment {
    fn anchor(&self) -> Option<&Value> {
        match self {
            RawSegment::ClosedAt { s }
            | RawSegment::OpenAt { s }
            | RawSegment::ClosedMod { s, .. }
            | RawSegment::OpenMod { s, .. }
            | RawSegment::OpenExt { s }
            | RawSegment::ClosedExt { s } => Some(s),
            _ => None,
        }
    }

    /// Membership of a finite point, from the definition.
    pub fn contains(&self, x: &[Rat]) -> bool {
        let in_delta = |d: &[Rat], j: usize| d[..j - 1].iter().all(Zero::is_zero);
        match self {
            RawSegment::Whole => true,
            RawSegment::Top | RawSegment::Empty => false,
            RawSegment::ClosedAt { s } | RawSegment::ClosedExt { s } => lex(x, &s.0) != Ordering::Less,
            RawSegment::OpenAt { s } | RawSegment::OpenExt { s } => lex(x, &s.0) == Ordering::Greater,
            RawSegment::ClosedMod { s, delta } => {
                lex(x, &s.0) != Ordering::Less || in_delta(&sub(x, &s.0), *delta)
            }
            RawSegment::OpenMod { s, delta } => {
                lex(x, &s.0) == Ordering::Greater && !in_delta(&sub(x, &s.0), *delta)
            }
        }
    }

    pub fn contains_inf(&self) -> bool {
        !matches!(self, RawSegment::Empty)
    }

    /// The segment as built by the main implementation.
    pub fn build(&self, g: &ValueGroup) -> Result<FinalSegment> {
        let r = g.rank();
        match self {
            RawSegment::Whole => Ok(FinalSegment::Whole),
            RawSegment::Top => Ok(FinalSegment::Top),
            RawSegment::Empty => Ok(FinalSegment::Empty),
            RawSegment::ClosedAt { s } => FinalSegment::closed_at(g, s),
            RawSegment::OpenAt { s } => FinalSegment::open_at(g, s),
            RawSegment::ClosedMod { s, delta } => {
                FinalSegment::closed_mod(g, s, ConvexSubgroup::from_suffix_start(r, *delta)?)
            }
            RawSegment::OpenMod { s, delta } => {
                FinalSegment::open_mod(g, s, ConvexSubgroup::from_suffix_start(r, *delta)?)
            }
            RawSegment::OpenExt { s } => FinalSegment::open_ext(g, s),
            RawSegment::ClosedExt { s } => FinalSegment::closed_ext(g, s),
        }
    }

    /// The raw form of a canonical segment.
    pub fn from_segment(g: &ValueGroup, s: &FinalSegment) -> Self {
        match s {
            FinalSegment::Whole => RawSegment::Whole,
            FinalSegment::Top => RawSegment::Top,
            FinalSegment::Empty => RawSegment::Empty,
            FinalSegment::Cut(c) => {
                let (k, tau) = (c.level(), c.anchor().clone());
                if !g.component(k - 1).contains(&tau.0[k - 1]) {
                    RawSegment::OpenExt { s: tau }
                } else if c.is_open() {
                    RawSegment::OpenMod { s: tau, delta: k + 1 }
                } else {
                    RawSegment::ClosedMod { s: tau, delta: k + 1 }
                }
            }
        }
    }

    /// Whether the window can witness this segment's boundary: anchors
    /// within bounds, and group-member anchors on the grid.
    fn representable(&self, w: &GridWindow) -> bool {
        match self {
            RawSegment::OpenExt { s } | RawSegment::ClosedExt { s } => w.within(&s.0),
            _ => self.anchor().is_none_or(|s| w.contains(&s.0)),
        }
    }

    /// Least members in the window and its refinements.
    fn least_members(&self, w: &GridWindow) -> Vec<Value> {
        let mut out = Vec::new();
        let mut cur = w.clone();
        for _ in 0..=REFINEMENTS {
            if let Some(m) = cur.least_member(|x| self.contains(x)) {
                out.push(m);
            }
            cur = cur.refine();
        }
        out
    }

    /// A random raw segment whose anchors fit a window of bound `2`.
    pub fn random(g: &ValueGroup, rng: &mut impl Rng) -> Self {
        let r = g.rank();
        let member = |rng: &mut dyn rand::RngCore| {
            Value(
                g.components()
                    .iter()
                    .map(|c| {
                        let k = rng.gen_range(-2i64..=2);
                        match c.div {
                            Some(l) if rng.gen_bool(0.5) => c.gen * Rat::new(k, l as i64),
                            _ => c.gen * Rat::from_integer(k),
                        }
                    })
                    .collect(),
            )
        };
        let ext = |rng: &mut dyn rand::RngCore| {
            let mut v = member(rng);
            let i = rng.gen_range(0..r);
            let d = [1i64, 3, 5, 7][rng.gen_range(0..4)];
            v.0[i] = Rat::new(rng.gen_range(-2 * d..=2 * d), d);
            v
        };
        match rng.gen_range(0..20) {
            0 => RawSegment::Whole,
            1 => RawSegment::Top,
            2 => RawSegment::Empty,
            3..=5 => RawSegment::ClosedAt { s: member(rng) },
            6..=8 => RawSegment::OpenAt { s: member(rng) },
            9..=11 => RawSegment::ClosedMod { s: member(rng), delta: rng.gen_range(1..=r + 1) },
            12..=14 => RawSegment::OpenMod { s: member(rng), delta: rng.gen_range(1..=r + 1) },
            15..=17 => RawSegment::OpenExt { s: ext(rng) },
            _ => RawSegment::ClosedExt { s: ext(rng) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Agree,
    Disagree { witness: String },
    Inconclusive { reason: String },
}

impl Verdict {
    fn disagree(w: impl Into<String>) -> Self {
        Verdict::Disagree { witness: w.into() }
    }

    fn inconclusive(r: impl Into<String>) -> Self {
        Verdict::Inconclusive { reason: r.into() }
    }

    pub fn is_agree(&self) -> bool {
        *self == Verdict::Agree
    }

    pub fn is_disagree(&self) -> bool {
        matches!(self, Verdict::Disagree { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }
}

fn precheck(w: &GridWindow, segs: &[&RawSegment]) -> Option<Verdict> {
    if w.size() == 0 {
        return Some(Verdict::inconclusive("empty window"));
    }
    if let Some(s) = segs.iter().find(|s| !s.representable(w)) {
        return Some(Verdict::inconclusive(format!("{s} is not representable on the window")));
    }
    None
}

fn claimed_member(g: &ValueGroup, s: &FinalSegment, x: &Value) -> bool {
    s.member(g, &ValueInf::Finite(x.clone())).unwrap_or(false)
}

pub fn check_member(raw: &RawSegment, claimed: &FinalSegment, w: &GridWindow) -> Verdict {
    if let Some(v) = precheck(w, &[raw]) {
        return v;
    }
    let g = &w.group;
    if claimed.member(g, &ValueInf::Infinity).unwrap_or(false) != raw.contains_inf() {
        return Verdict::disagree("∞");
    }
    for x in w.points() {
        if claimed_member(g, claimed, &x) != raw.contains(&x.0) {
            return Verdict::disagree(x.to_string());
        }
    }
    Verdict::Agree
}

/// A point in exactly one of `s`, `t`, if the windows show one.
fn difference(s: &RawSegment, t: &RawSegment, w: &GridWindow) -> Option<String> {
    if s.contains_inf() != t.contains_inf() {
        return Some("∞".into());
    }
    if let Some(x) = w.points().find(|x| s.contains(&x.0) != t.contains(&x.0)) {
        return Some(x.to_string());
    }
    let mut cur = w.clone();
    for _ in 0..=REFINEMENTS {
        let ms = cur.least_member(|x| s.contains(x));
        let mt = cur.least_member(|x| t.contains(x));
        if ms != mt {
            let x = match (ms, mt) {
                (Some(a), Some(b)) => if lex(&a.0, &b.0) == Ordering::Less { a } else { b },
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => unreachable!(),
            };
            return Some(x.to_string());
        }
        cur = cur.refine();
    }
    None
}

pub fn check_equal(s: &RawSegment, t: &RawSegment, claimed: bool, w: &GridWindow) -> Verdict {
    if let Some(v) = precheck(w, &[s, t]) {
        return v;
    }
    match (claimed, difference(s, t, w)) {
        (true, Some(x)) => Verdict::disagree(format!("{x} is in exactly one of {s} and {t}")),
        (true, None) | (false, Some(_)) => Verdict::Agree,
        (false, None) => Verdict::inconclusive("no separating point in the windows"),
    }
}

pub fn check_has_min(raw: &RawSegment, claimed: &Option<ValueInf>, w: &GridWindow) -> Verdict {
    if let Some(v) = precheck(w, &[raw]) {
        return v;
    }
    let lows = raw.least_members(w);
    match claimed {
        Some(ValueInf::Infinity) => match lows.first() {
            Some(x) => Verdict::disagree(format!("{x} is a finite member")),
            None if raw.contains_inf() => Verdict::Agree,
            None => Verdict::disagree("∞ is not a member"),
        },
        Some(ValueInf::Finite(m)) => {
            if !raw.contains(&m.0) {
                return Verdict::disagree(format!("claimed minimum {m} is not a member"));
            }
            match lows.iter().find(|x| lex(&x.0, &m.0) == Ordering::Less) {
                Some(x) => Verdict::disagree(format!("{x} is a smaller member")),
                None => Verdict::Agree,
            }
        }
        None => match (lows.first(), lows.last()) {
            (None, _) if raw.contains_inf() => Verdict::disagree("only ∞ is a member"),
            (None, _) => Verdict::Agree,
            (Some(a), Some(b)) if lex(&b.0, &a.0) == Ordering::Less => Verdict::Agree,
            _ => Verdict::inconclusive("least member did not move under refinement"),
        },
    }
}

pub fn check_invariance(raw: &RawSegment, claimed: ConvexSubgroup, w: &GridWindow) -> Verdict {
    if let Some(v) = precheck(w, &[raw]) {
        return v;
    }
    let r = w.group.rank();
    // violated[j-1]: some x ∈ S and positive h ∈ Δ_j with x − h ∉ S
    let mut violated = vec![false; r + 1];
    let lows = raw.least_members(w);
    for h in w.points() {
        let Some(f) = h.0.iter().position(|c| !c.is_zero()) else { continue };
        if h.0[f] < Rat::zero() || violated[f] {
            continue;
        }
        if lows.iter().any(|x| !raw.contains(&sub(&x.0, &h.0))) {
            for v in violated.iter_mut().take(f + 1) {
                *v = true;
            }
        }
    }
    let jc = claimed.suffix_start();
    if violated[jc - 1] {
        return Verdict::disagree(format!("Δ{jc} does not preserve {raw}"));
    }
    if violated[..jc - 1].iter().all(|&v| v) {
        Verdict::Agree
    } else {
        Verdict::inconclusive("a larger subgroup was not refuted on the window")
    }
}

pub fn check_annihilator(
    alpha: &RawSegment,
    beta: &RawSegment,
    claimed: &FinalSegment,
    w: &GridWindow,
) -> Verdict {
    if let Some(v) = precheck(w, &[alpha, beta]) {
        return v;
    }
    let g = &w.group;
    let lows = alpha.least_members(w);
    // b + α ⊆ β on the windows, with b + ∞ = ∞. Only finite b are
    // compared: the zero ideal is represented by `Empty`.
    let oracle = |b: &[Rat]| {
        (!alpha.contains_inf() || beta.contains_inf()) && lows.iter().all(|x| beta.contains(&add(b, &x.0)))
    };
    let mut unresolved = 0usize;
    for b in w.points() {
        match (claimed_member(g, claimed, &b), oracle(&b.0)) {
            (true, false) => return Verdict::disagree(format!("{b} + α ⊄ β")),
            (false, true) => unresolved += 1,
            _ => {}
        }
    }
    if unresolved > 0 {
        Verdict::inconclusive(format!("{unresolved} points not refuted on the windows"))
    } else {
        Verdict::Agree
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum SegmentOp {
    Member { s: RawSegment },
    SegEqual { s: RawSegment, t: RawSegment },
    HasMin { s: RawSegment },
    InvarianceSubgroup { s: RawSegment },
    AnnihilatorSegment { alpha: RawSegment, beta: RawSegment },
}

/// Run the main implementation on `op` and check it on the window.
pub fn segment_bruteforce(op: &SegmentOp, w: &GridWindow) -> Result<Verdict> {
    let g = &w.group;
    Ok(match op {
        SegmentOp::Member { s } => check_member(s, &s.build(g)?, w),
        SegmentOp::SegEqual { s, t } => check_equal(s, t, seg_equal(&s.build(g)?, &t.build(g)?), w),
        SegmentOp::HasMin { s } => check_has_min(s, &s.build(g)?.has_min(), w),
        SegmentOp::InvarianceSubgroup { s } => check_invariance(s, s.build(g)?.invariance_subgroup(g), w),
        SegmentOp::AnnihilatorSegment { alpha, beta } => {
            let a = annihilator_segment(g, &alpha.build(g)?, &beta.build(g)?)?;
            check_annihilator(alpha, beta, &a, w)
        }
    })
}

/// A random group of rank 1 to 3 with components `ℤ`, `½ℤ`, `⅓ℤ`,
/// `ℤ[1/2]` or `ℤ[1/3]`.
pub fn random_group(rng: &mut impl Rng) -> ValueGroup {
    let rank = rng.gen_range(1..=3);
    let comps = (0..rank)
        .map(|_| match rng.gen_range(0..5) {
            0 => Component::discrete(Rat::one()),
            1 => Component::discrete(Rat::new(1, 2)),
            2 => Component::discrete(Rat::new(1, 3)),
            3 => Component::divisible(Rat::one(), 2),
            _ => Component::divisible(Rat::one(), 3),
        })
        .collect();
    ValueGroup::new(comps).expect("valid components")
}
