//! Final segments of `Γ∞` and the modules `I_S` they index.
//!
//! Every final segment produced here has one of three shapes: the whole
//! group, `{∞}`, the empty set, or a *cut*
//!
//! ```text
//! { x ∈ Γ : (x_1, …, x_k) ≥ τ } ∪ {∞}      (closed)
//! { x ∈ Γ : (x_1, …, x_k) > τ } ∪ {∞}      (open)
//! ```
//!
//! for a level `1 ≤ k ≤ r` and a prefix `τ ∈ ℚ^k`. The cut is stored in a
//! canonical form (see [`Cut`]), so set equality is structural equality.
//! The textbook forms `ClosedAt`, `OpenAt`, `ClosedMod`, `OpenMod` and
//! `OpenExt` are constructors and serialization names for cuts.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ordgrp::{ConvexSubgroup, ExtValue, Value, ValueGroup, ValueInf};

/// A canonical cut at level `level`.
///
/// `tau` has full rank with zeros past `level`. Canonical means:
/// - `tau_1, …, tau_{level-1}` are members of their components;
/// - if `tau_level` is not a member (`ext`), its component is dense and the
///   cut is open;
/// - an open cut at a member anchor has a dense component at `level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cut {
    level: usize,
    tau: Value,
    open: bool,
    ext: bool,
}

impl Cut {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn anchor(&self) -> &Value {
        &self.tau
    }

    pub fn is_open(&self) -> bool {
        self.open
    }

    fn admits(&self, x: &Value) -> bool {
        match x.cmp_prefix(&self.tau, self.level) {
            Ordering::Greater => true,
            Ordering::Equal => !self.open,
            Ordering::Less => false,
        }
    }

    /// Whether the cut contains elements whose level-prefix equals `tau`.
    fn attains(&self) -> bool {
        !self.open
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FinalSegment {
    Whole,
    /// `{∞}`.
    Top,
    Empty,
    Cut(Cut),
}

/// Build the canonical segment `{x : P_k(x) ≥ τ}` (or `>` when `open`).
/// `tau` may have nonmember coordinates.
fn canonical_cut(g: &ValueGroup, level: usize, tau: &Value, open: bool) -> Result<FinalSegment> {
    if tau.rank() != g.rank() {
        return Err(Error::RankMismatch(tau.rank(), g.rank()));
    }
    if level == 0 {
        return Ok(if open { FinalSegment::Top } else { FinalSegment::Whole });
    }
    let mut level = level;
    let mut open = open;
    let mut tau = tau.truncate(level);
    let nonmember = (0..level).find(|&i| !g.component(i).contains(&tau.0[i]));
    let mut ext = false;
    if let Some(j) = nonmember {
        // x cannot match tau at coordinate j, so only the first j+1
        // coordinates matter and the inequality is strict there.
        level = j + 1;
        tau = tau.truncate(level);
        let c = g.component(j);
        if c.is_dense() {
            open = true;
            ext = true;
        } else {
            tau.0[j] = c.ceil_member(&tau.0[j]);
            open = false;
        }
    } else if open {
        let c = g.component(level - 1);
        if !c.is_dense() {
            tau.0[level - 1] += c.gen;
            open = false;
        }
    }
    Ok(FinalSegment::Cut(Cut { level, tau, open, ext }))
}

impl FinalSegment {
    /// `{x : x ≥ s}`.
    pub fn closed_at(g: &ValueGroup, s: &Value) -> Result<Self> {
        Self::closed_mod(g, s, ConvexSubgroup::trivial(g.rank()))
    }

    /// `{x : x > s}`.
    pub fn open_at(g: &ValueGroup, s: &Value) -> Result<Self> {
        Self::open_mod(g, s, ConvexSubgroup::trivial(g.rank()))
    }

    /// `{x : x + D ≥ s + D}`.
    pub fn closed_mod(g: &ValueGroup, s: &Value, d: ConvexSubgroup) -> Result<Self> {
        g.check(s)?;
        canonical_cut(g, d.level(), s, false)
    }

    /// `{x : x + D > s + D}`.
    pub fn open_mod(g: &ValueGroup, s: &Value, d: ConvexSubgroup) -> Result<Self> {
        g.check(s)?;
        canonical_cut(g, d.level(), s, true)
    }

    /// `{x ∈ Γ : x > ρ}` for `ρ ∈ ℚ^r` not necessarily in `Γ`.
    pub fn open_ext(g: &ValueGroup, rho: &ExtValue) -> Result<Self> {
        canonical_cut(g, g.rank(), rho, true)
    }

    /// `{x ∈ Γ : x ≥ ρ}` for `ρ ∈ ℚ^r` not necessarily in `Γ`.
    pub fn closed_ext(g: &ValueGroup, rho: &ExtValue) -> Result<Self> {
        canonical_cut(g, g.rank(), rho, false)
    }

    pub fn as_cut(&self) -> Option<&Cut> {
        match self {
            FinalSegment::Cut(c) => Some(c),
            _ => None,
        }
    }

    pub fn member(&self, g: &ValueGroup, x: &ValueInf) -> Result<bool> {
        let x = match x {
            ValueInf::Infinity => return Ok(!matches!(self, FinalSegment::Empty)),
            ValueInf::Finite(x) => x,
        };
        g.check(x)?;
        Ok(match self {
            FinalSegment::Whole => true,
            FinalSegment::Top | FinalSegment::Empty => false,
            FinalSegment::Cut(c) => c.admits(x),
        })
    }

    /// `{t + x : x ∈ S}` for `t ∈ Γ`.
    pub fn translate(&self, g: &ValueGroup, t: &Value) -> Result<Self> {
        g.check(t)?;
        Ok(match self {
            FinalSegment::Cut(c) => {
                let tau = (&c.tau + t).truncate(c.level);
                FinalSegment::Cut(Cut { tau, ..c.clone() })
            }
            other => other.clone(),
        })
    }

    pub fn has_min(&self) -> Option<ValueInf> {
        match self {
            FinalSegment::Top => Some(ValueInf::Infinity),
            FinalSegment::Cut(c) if !c.open && c.level == c.tau.rank() => {
                Some(ValueInf::Finite(c.tau.clone()))
            }
            _ => None,
        }
    }

    /// The largest convex subgroup `H` with `H + S = S`.
    pub fn invariance_subgroup(&self, g: &ValueGroup) -> ConvexSubgroup {
        match self {
            FinalSegment::Cut(c) => ConvexSubgroup::from_first(g.rank(), c.level),
            _ => ConvexSubgroup::whole(g.rank()),
        }
    }

    /// Set inclusion `self ⊆ other`.
    pub fn is_subset(&self, other: &FinalSegment) -> bool {
        use FinalSegment::*;
        match (self, other) {
            (Empty, _) => true,
            (_, Empty) => false,
            (Top, _) => true,
            (_, Top) => false,
            (_, Whole) => true,
            (Whole, Cut(_)) => false,
            (Cut(s), Cut(t)) => cut_le(s, t, &Value::zero(s.tau.rank())),
        }
    }

    /// Pointwise sum `{s + t}`; the index segment of the product `I_S·I_T`.
    pub fn sum(&self, g: &ValueGroup, other: &FinalSegment) -> Result<Self> {
        use FinalSegment::*;
        Ok(match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Top, _) | (_, Top) => Top,
            (Whole, _) | (_, Whole) => Whole,
            (Cut(s), Cut(t)) => {
                let m = s.level.min(t.level);
                let attains = |c: &self::Cut| c.level > m || c.attains();
                let tau = (&s.tau + &t.tau).truncate(m);
                canonical_cut(g, m, &tau, !(attains(s) && attains(t)))?
            }
        })
    }

    pub fn descriptor(&self) -> SegmentDescriptor {
        match self {
            FinalSegment::Whole => SegmentDescriptor::Whole,
            FinalSegment::Top => SegmentDescriptor::Top,
            FinalSegment::Empty => SegmentDescriptor::Empty,
            FinalSegment::Cut(c) => {
                let r = c.tau.rank();
                let s = c.tau.clone();
                let delta_suffix = c.level + 1;
                match (c.level == r, c.open, c.ext) {
                    (_, true, true) => SegmentDescriptor::OpenExt { s, delta_suffix },
                    (true, false, _) => SegmentDescriptor::ClosedAt { s, delta_suffix },
                    (true, true, false) => SegmentDescriptor::OpenAt { s, delta_suffix },
                    (false, false, _) => SegmentDescriptor::ClosedMod { s, delta_suffix },
                    (false, true, false) => SegmentDescriptor::OpenMod { s, delta_suffix },
                }
            }
        }
    }

    /// Validate a descriptor against `g` and canonicalize it.
    pub fn from_descriptor(g: &ValueGroup, d: &SegmentDescriptor) -> Result<Self> {
        use SegmentDescriptor as D;
        let sub = |j: usize| ConvexSubgroup::from_suffix_start(g.rank(), j);
        match d {
            D::Whole => Ok(FinalSegment::Whole),
            D::Top => Ok(FinalSegment::Top),
            D::Empty => Ok(FinalSegment::Empty),
            D::ClosedAt { s, .. } => Self::closed_at(g, s),
            D::OpenAt { s, .. } => Self::open_at(g, s),
            D::ClosedMod { s, delta_suffix } => Self::closed_mod(g, s, sub(*delta_suffix)?),
            D::OpenMod { s, delta_suffix } => Self::open_mod(g, s, sub(*delta_suffix)?),
            D::OpenExt { s, .. } => Self::open_ext(g, s),
        }
    }
}

/// Whether `s + t ⊆ c` for cuts `s`, `c` and a translation `t`.
fn cut_le(s: &Cut, c: &Cut, t: &Value) -> bool {
    let m = s.level.min(c.level);
    let shifted = &s.tau + t;
    match shifted.cmp_prefix(&c.tau, m) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match s.level.cmp(&c.level) {
            Ordering::Equal => !(s.attains() && !c.attains()),
            Ordering::Greater => c.attains(),
            Ordering::Less => !s.attains(),
        },
    }
}

pub fn seg_equal(s: &FinalSegment, t: &FinalSegment) -> bool {
    s == t
}

/// `{b ∈ Γ : b + α ⊆ β}`, the index segment of the annihilator of
/// `I_α / I_β`.
pub fn annihilator_segment(
    g: &ValueGroup,
    alpha: &FinalSegment,
    beta: &FinalSegment,
) -> Result<FinalSegment> {
    use FinalSegment::*;
    Ok(match (alpha, beta) {
        (Empty, _) => Whole,
        (_, Empty) => Empty,
        (Top, _) => Whole,
        (_, Top) => Empty,
        (_, Whole) => Whole,
        (Whole, Cut(_)) => Empty,
        (Cut(a), Cut(b)) => {
            // b' + α ⊆ β is decided by comparing the level-m prefix of
            // b' with τ_β − τ_α; on equality the attainment rules of
            // `cut_le` decide.
            let m = a.level.min(b.level);
            let bound = (&b.tau - &a.tau).truncate(m);
            let on_boundary = match a.level.cmp(&b.level) {
                Ordering::Equal => !(a.attains() && !b.attains()),
                Ordering::Greater => b.attains(),
                Ordering::Less => !a.attains(),
            };
            canonical_cut(g, m, &bound, !on_boundary)?
        }
    })
}

impl fmt::Display for FinalSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.descriptor().fmt(f)
    }
}

/// Serialized shape of a final segment. `delta_suffix` is the 1-based
/// start of the invariance subgroup (`r+1` for the trivial subgroup).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum SegmentDescriptor {
    Whole,
    Top,
    Empty,
    ClosedAt { s: Value, delta_suffix: usize },
    OpenAt { s: Value, delta_suffix: usize },
    ClosedMod { s: Value, delta_suffix: usize },
    OpenMod { s: Value, delta_suffix: usize },
    OpenExt { s: Value, delta_suffix: usize },
}

impl SegmentDescriptor {
    /// Rebuild a segment from a descriptor previously produced by
    /// [`FinalSegment::descriptor`], without a group at hand.
    fn to_canonical(&self) -> Result<FinalSegment> {
        use SegmentDescriptor as D;
        let cut = |s: &Value, ds: usize, open: bool, ext: bool| {
            let level = ds.checked_sub(1).filter(|&l| l >= 1 && l <= s.rank());
            let level = level.ok_or_else(|| {
                Error::Parse(format!("delta_suffix {ds} out of range for rank {}", s.rank()))
            })?;
            if s.0[level..].iter().any(|x| !x.is_zero()) {
                return Err(Error::Parse(format!("anchor {s} has nonzero coordinates past level {level}")));
            }
            Ok(FinalSegment::Cut(Cut { level, tau: s.clone(), open, ext }))
        };
        match self {
            D::Whole => Ok(FinalSegment::Whole),
            D::Top => Ok(FinalSegment::Top),
            D::Empty => Ok(FinalSegment::Empty),
            D::ClosedAt { s, delta_suffix } | D::ClosedMod { s, delta_suffix } => {
                cut(s, *delta_suffix, false, false)
            }
            D::OpenAt { s, delta_suffix } | D::OpenMod { s, delta_suffix } => {
                cut(s, *delta_suffix, true, false)
            }
            D::OpenExt { s, delta_suffix } => cut(s, *delta_suffix, true, true),
        }
    }
}

impl fmt::Display for SegmentDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SegmentDescriptor as D;
        match self {
            D::Whole => f.write_str("Γ"),
            D::Top => f.write_str("{∞}"),
            D::Empty => f.write_str("∅"),
            D::ClosedAt { s, .. } => write!(f, "[{s}, ∞]"),
            D::OpenAt { s, .. } => write!(f, "({s}, ∞]"),
            D::ClosedMod { s, delta_suffix } => write!(f, "[{s} + Δ[{delta_suffix}..], ∞]"),
            D::OpenMod { s, delta_suffix } => write!(f, "({s} + Δ[{delta_suffix}..], ∞]"),
            D::OpenExt { s, .. } => write!(f, "(ext {s}, ∞]"),
        }
    }
}

impl Serialize for FinalSegment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinalSegment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SegmentDescriptor::deserialize(d)?
            .to_canonical()
            .map_err(serde::de::Error::custom)
    }
}

/// A set of values of the shape `v(η − K)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ValueFamily {
    FiniteMax { values: Vec<Value> },
    IncToSup { sup: ExtValue, attained: bool },
    Cofinal,
}

impl ValueFamily {
    pub fn validate(&self, g: &ValueGroup) -> Result<()> {
        match self {
            ValueFamily::FiniteMax { values } => {
                if values.is_empty() {
                    return Err(Error::validation("finite_max family must be nonempty"));
                }
                for v in values {
                    g.check(v)?;
                }
                Ok(())
            }
            ValueFamily::IncToSup { sup, attained } => {
                if *attained {
                    return Err(Error::validation("inc_to_sup family must have attained = false"));
                }
                if sup.rank() != g.rank() {
                    return Err(Error::RankMismatch(sup.rank(), g.rank()));
                }
                let r = g.rank();
                if !g.component(r - 1).is_dense() {
                    return Err(Error::validation(
                        "a strictly increasing family with unattained supremum needs a dense last component",
                    ));
                }
                for i in 0..r - 1 {
                    if !g.component(i).contains(&sup.0[i]) {
                        return Err(Error::validation(format!(
                            "supremum {sup}: coordinate {} must lie in the group",
                            i + 1
                        )));
                    }
                }
                Ok(())
            }
            ValueFamily::Cofinal => Ok(()),
        }
    }

    pub fn has_max(&self) -> bool {
        matches!(self, ValueFamily::FiniteMax { .. })
    }

    /// Strictly increasing sample values below the supremum, for testing
    /// stabilization claims. Empty for families without a supremum.
    pub fn witness(&self, g: &ValueGroup, len: usize) -> Vec<Value> {
        match self {
            ValueFamily::IncToSup { sup, .. } => {
                let r = g.rank();
                let comp = g.component(r - 1);
                let mut out: Vec<Value> = Vec::new();
                let mut k = 0;
                while out.len() < len && k < 64 {
                    let mut v = sup.clone();
                    v.0[r - 1] = comp.member_below(&sup.0[r - 1], k);
                    if out.last().is_none_or(|last| *last < v) {
                        out.push(v);
                    }
                    k += 1;
                }
                out
            }
            ValueFamily::FiniteMax { values } => {
                let mut vs = values.clone();
                vs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
                vs.dedup();
                vs
            }
            ValueFamily::Cofinal => Vec::new(),
        }
    }
}

/// The smallest final segment containing `{offset + sign·scale·x : x ∈ F}`.
pub fn segment_of_family(
    g: &ValueGroup,
    family: &ValueFamily,
    sign: i8,
    scale: i64,
    offset: &ValueInf,
) -> Result<FinalSegment> {
    if scale <= 0 || (sign != 1 && sign != -1) {
        return Err(Error::validation("sign must be ±1 and scale positive"));
    }
    family.validate(g)?;
    let offset = match offset {
        ValueInf::Infinity => return Ok(FinalSegment::Top),
        ValueInf::Finite(o) => o,
    };
    let unsupported = |what: &str| Err(Error::UnsupportedForm(format!("{what} with sign +1")));
    match (family, sign) {
        (ValueFamily::FiniteMax { values }, _) => {
            let pick = values
                .iter()
                .reduce(|a, b| {
                    let take_b = if sign < 0 { b > a } else { b < a };
                    if take_b {
                        b
                    } else {
                        a
                    }
                })
                .expect("validated nonempty");
            let anchor = offset + &pick.scale(scale * sign as i64);
            FinalSegment::closed_ext(g, &anchor)
        }
        (ValueFamily::IncToSup { sup, .. }, -1) => {
            FinalSegment::open_ext(g, &(offset - &sup.scale(scale)))
        }
        (ValueFamily::Cofinal, -1) => Ok(FinalSegment::Whole),
        (ValueFamily::IncToSup { .. }, _) => unsupported("increasing family"),
        (ValueFamily::Cofinal, _) => unsupported("cofinal family"),
    }
}

/// The conclusions about `I_α / I_β` that depend only on the segments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleReport {
    pub alpha: FinalSegment,
    pub beta: FinalSegment,
    pub is_zero: bool,
    pub ann: FinalSegment,
    pub fin_gen: bool,
    pub fin_pres: bool,
    pub single_generator: bool,
}

pub fn module_report(
    g: &ValueGroup,
    alpha: &FinalSegment,
    beta: &FinalSegment,
) -> Result<ModuleReport> {
    if !beta.is_subset(alpha) {
        return Err(Error::validation(format!(
            "beta = {beta} is not contained in alpha = {alpha}"
        )));
    }
    let is_zero = seg_equal(alpha, beta);
    let fin_gen = is_zero || alpha.has_min().is_some();
    let fin_pres = fin_gen && (is_zero || beta.has_min().is_some());
    Ok(ModuleReport {
        alpha: alpha.clone(),
        beta: beta.clone(),
        is_zero,
        ann: annihilator_segment(g, alpha, beta)?,
        fin_gen,
        fin_pres,
        single_generator: fin_gen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordgrp::{Component, Rat};

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    fn z() -> ValueGroup {
        ValueGroup::integers()
    }

    fn z2() -> ValueGroup {
        ValueGroup::divisible_rank_one(Rat::from_integer(1), 2)
    }

    fn half_dense() -> ValueGroup {
        ValueGroup::new(vec![
            Component::discrete(Rat::new(1, 2)),
            Component::divisible(Rat::from_integer(1), 2),
        ])
        .unwrap()
    }

    fn fin(s: &str) -> ValueInf {
        ValueInf::Finite(v(s))
    }

    #[test]
    fn family_segments() {
        let g = z();
        let f = ValueFamily::FiniteMax { values: vec![v("-3"), v("0")] };
        let s = segment_of_family(&g, &f, -1, 1, &fin("0")).unwrap();
        assert_eq!(s, FinalSegment::closed_at(&g, &v("0")).unwrap());

        let g = z2();
        let f = ValueFamily::IncToSup { sup: v("1/3"), attained: false };
        let s = segment_of_family(&g, &f, -1, 1, &fin("0")).unwrap();
        assert_eq!(s, FinalSegment::open_ext(&g, &v("-1/3")).unwrap());
        assert_eq!(
            segment_of_family(&g, &ValueFamily::Cofinal, -1, 3, &fin("5")).unwrap(),
            FinalSegment::Whole
        );
        assert_eq!(
            segment_of_family(&g, &f, -1, 2, &ValueInf::Infinity).unwrap(),
            FinalSegment::Top
        );
        assert!(segment_of_family(&g, &f, 1, 1, &fin("0")).is_err());
    }

    #[test]
    fn membership_examples() {
        let g = z();
        let s = FinalSegment::closed_at(&g, &v("2")).unwrap();
        assert!(s.member(&g, &fin("2")).unwrap());
        assert!(s.member(&g, &fin("3/2")).is_err());
        assert!(s.member(&g, &ValueInf::Infinity).unwrap());

        let g = z2();
        let s = FinalSegment::open_ext(&g, &v("0")).unwrap();
        assert!(s.member(&g, &fin("1/4")).unwrap());
        assert!(!s.member(&g, &fin("0")).unwrap());

        let g = half_dense();
        let delta = ConvexSubgroup::from_suffix_start(2, 2).unwrap();
        let s = FinalSegment::closed_mod(&g, &v("(0,0)"), delta).unwrap();
        assert!(s.member(&g, &fin("(0,-5)")).unwrap());
        assert!(!s.member(&g, &fin("(-1/2,100)")).unwrap());
    }

    #[test]
    fn translation() {
        let g = z();
        let s = FinalSegment::closed_at(&g, &v("3")).unwrap();
        assert_eq!(s.translate(&g, &v("-3")).unwrap(), FinalSegment::closed_at(&g, &v("0")).unwrap());
        assert_eq!(FinalSegment::Whole.translate(&g, &v("7")).unwrap(), FinalSegment::Whole);
        let g = z2();
        let s = FinalSegment::open_ext(&g, &v("-1/3")).unwrap();
        assert_eq!(
            s.translate(&g, &v("5/4")).unwrap(),
            FinalSegment::open_ext(&g, &v("11/12")).unwrap()
        );
    }

    #[test]
    fn equality_examples() {
        let g = z();
        assert!(seg_equal(
            &FinalSegment::closed_at(&g, &v("0")).unwrap(),
            &FinalSegment::open_at(&g, &v("-1")).unwrap()
        ));
        let g = z2();
        assert!(!seg_equal(
            &FinalSegment::open_ext(&g, &v("0")).unwrap(),
            &FinalSegment::closed_at(&g, &v("0")).unwrap()
        ));
        // OpenMod(m − γ, Δ) = OpenMod(−γ, Δ) exactly when m ∈ Δ.
        let g = half_dense();
        let delta = ConvexSubgroup::from_suffix_start(2, 2).unwrap();
        let gamma = v("(1/2,0)");
        let base = FinalSegment::open_mod(&g, &-&gamma, delta).unwrap();
        for (m, in_delta) in [("(0,3)", true), ("(0,-1/4)", true), ("(1/2,0)", false)] {
            let m = v(m);
            let other = FinalSegment::open_mod(&g, &(&m - &gamma), delta).unwrap();
            assert_eq!(seg_equal(&base, &other), in_delta);
        }
    }

    #[test]
    fn ext_anchor_in_group_becomes_open_at() {
        let g = z2();
        let a = FinalSegment::open_ext(&g, &v("1/2")).unwrap();
        let b = FinalSegment::open_at(&g, &v("1/2")).unwrap();
        assert_eq!(a, b);
        assert!(matches!(a.descriptor(), SegmentDescriptor::OpenAt { .. }));
        // in a discrete group an ext anchor is rounded up to a closed cut
        let g = z();
        assert_eq!(
            FinalSegment::open_ext(&g, &v("1/2")).unwrap(),
            FinalSegment::closed_at(&g, &v("1")).unwrap()
        );
    }

    #[test]
    fn minima() {
        let g = z();
        assert_eq!(FinalSegment::closed_at(&g, &v("5")).unwrap().has_min(), Some(fin("5")));
        assert_eq!(FinalSegment::open_at(&g, &v("0")).unwrap().has_min(), Some(fin("1")));
        assert_eq!(FinalSegment::Whole.has_min(), None);
        assert_eq!(FinalSegment::Top.has_min(), Some(ValueInf::Infinity));
        let g = z2();
        assert_eq!(FinalSegment::open_ext(&g, &v("1/3")).unwrap().has_min(), None);
        let g = half_dense();
        let delta = ConvexSubgroup::from_suffix_start(2, 2).unwrap();
        assert_eq!(FinalSegment::closed_mod(&g, &v("(0,0)"), delta).unwrap().has_min(), None);
    }

    #[test]
    fn invariance() {
        let g = half_dense();
        let delta = ConvexSubgroup::from_suffix_start(2, 2).unwrap();
        let s = FinalSegment::open_mod(&g, &v("(-1/2,0)"), delta).unwrap();
        assert_eq!(s.invariance_subgroup(&g), delta);
        let s = FinalSegment::closed_mod(&g, &v("(0,0)"), delta).unwrap();
        assert_eq!(s.invariance_subgroup(&g), delta);
        let g = z();
        let s = FinalSegment::closed_at(&g, &v("0")).unwrap();
        assert!(s.invariance_subgroup(&g).is_trivial());
    }

    #[test]
    fn annihilator_examples() {
        let g = z();
        let a = FinalSegment::closed_at(&g, &v("-2")).unwrap();
        let b = FinalSegment::closed_at(&g, &v("3")).unwrap();
        assert_eq!(annihilator_segment(&g, &a, &b).unwrap(), FinalSegment::closed_at(&g, &v("5")).unwrap());
        let zero = FinalSegment::closed_at(&g, &v("0")).unwrap();
        assert_eq!(annihilator_segment(&g, &zero, &zero).unwrap(), zero);
        assert_eq!(annihilator_segment(&g, &zero, &FinalSegment::Top).unwrap(), FinalSegment::Empty);
        assert_eq!(annihilator_segment(&g, &FinalSegment::Whole, &zero).unwrap(), FinalSegment::Empty);

        // rank one defect shape: {vb ≥ (1−n)ρ + v(g′(η))}
        let g = z2();
        for (rho, n, vg) in [("1/3", 4, "0"), ("-1", 2, "1/2"), ("0", 8, "3")] {
            let rho = v(rho);
            let vg = v(vg);
            let alpha = FinalSegment::open_ext(&g, &-&rho).unwrap();
            let beta = FinalSegment::open_ext(&g, &(&vg - &rho.scale(n))).unwrap();
            let expected = FinalSegment::closed_ext(&g, &(&rho.scale(1 - n) + &vg)).unwrap();
            assert_eq!(annihilator_segment(&g, &alpha, &beta).unwrap(), expected);
        }
    }

    #[test]
    fn reports() {
        let g = z2();
        let s = FinalSegment::open_ext(&g, &v("0")).unwrap();
        let r = module_report(&g, &s, &s).unwrap();
        assert!(r.is_zero && r.fin_gen && r.fin_pres);
        assert_eq!(r.ann, FinalSegment::closed_at(&g, &v("0")).unwrap());

        let g = z();
        let a = FinalSegment::closed_at(&g, &v("0")).unwrap();
        let b = FinalSegment::closed_at(&g, &v("2")).unwrap();
        let r = module_report(&g, &a, &b).unwrap();
        assert!(!r.is_zero && r.fin_gen && r.fin_pres);
        assert_eq!(r.ann, b);
        assert!(module_report(&g, &b, &a).is_err());

        let g = z2();
        let a = FinalSegment::open_ext(&g, &v("1/3")).unwrap();
        let b = FinalSegment::open_ext(&g, &v("2/3")).unwrap();
        let r = module_report(&g, &a, &b).unwrap();
        assert!(!r.fin_gen && !r.fin_pres && !r.is_zero);
    }

    #[test]
    fn sums() {
        let g = z2();
        let a = FinalSegment::open_ext(&g, &v("-1/3")).unwrap();
        let b = FinalSegment::open_ext(&g, &v("1/3")).unwrap();
        assert_eq!(a.sum(&g, &b).unwrap(), FinalSegment::open_at(&g, &v("0")).unwrap());
        let c = FinalSegment::closed_at(&g, &v("1")).unwrap();
        assert_eq!(c.sum(&g, &c).unwrap(), FinalSegment::closed_at(&g, &v("2")).unwrap());
        assert_eq!(c.sum(&g, &FinalSegment::Top).unwrap(), FinalSegment::Top);
    }

    #[test]
    fn descriptor_serialization() {
        let g = half_dense();
        let s = FinalSegment::closed_at(&g, &v("(1/2,0)")).unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"form":"closed_at","s":"(1/2,0)","delta_suffix":3}"#);
        let delta = ConvexSubgroup::from_suffix_start(2, 2).unwrap();
        for seg in [
            s,
            FinalSegment::open_mod(&g, &v("(-1/2,0)"), delta).unwrap(),
            FinalSegment::open_ext(&g, &v("(0,1/3)")).unwrap(),
            FinalSegment::Top,
            FinalSegment::Empty,
        ] {
            let back: FinalSegment = serde_json::from_str(&serde_json::to_string(&seg).unwrap()).unwrap();
            assert_eq!(back, seg);
            assert_eq!(FinalSegment::from_descriptor(&g, &seg.descriptor()).unwrap(), seg);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn window(g: &ValueGroup) -> Vec<Value> {
            // coarse grid sufficient for rank one ℤ[1/2]
            assert_eq!(g.rank(), 1);
            (-48..=48).map(|k| Value::rank_one(Rat::new(k, 8))).collect()
        }

        fn seg_strategy() -> impl Strategy<Value = FinalSegment> {
            let g = z2();
            prop_oneof![
                Just(FinalSegment::Whole),
                Just(FinalSegment::Top),
                (-16i64..16, 1i64..4, proptest::bool::ANY).prop_map(move |(n, d, open)| {
                    let x = Value::rank_one(Rat::new(n, [1, 2, 3][d as usize - 1] * 2));
                    if open {
                        FinalSegment::open_ext(&g, &x).unwrap()
                    } else {
                        FinalSegment::closed_ext(&g, &x).unwrap()
                    }
                }),
            ]
        }

        proptest! {
            #[test]
            fn upward_closed(s in seg_strategy()) {
                let g = z2();
                let w = window(&g);
                for (i, x) in w.iter().enumerate() {
                    if s.member(&g, &ValueInf::Finite(x.clone())).unwrap() {
                        for y in &w[i..] {
                            prop_assert!(s.member(&g, &ValueInf::Finite(y.clone())).unwrap());
                        }
                    }
                }
            }

            #[test]
            fn translate_roundtrip(s in seg_strategy(), k in -20i64..20) {
                let g = z2();
                let t = Value::rank_one(Rat::new(k, 4));
                let back = s.translate(&g, &t).unwrap().translate(&g, &-&t).unwrap();
                prop_assert_eq!(back, s);
            }

            #[test]
            fn equality_matches_window(a in seg_strategy(), b in seg_strategy()) {
                let g = z2();
                let same = window(&g).iter().all(|x| {
                    let x = ValueInf::Finite(x.clone());
                    a.member(&g, &x).unwrap() == b.member(&g, &x).unwrap()
                });
                // anchors have denominators dividing 12; the window step 1/8
                // cannot separate two ext anchors in the same eighth, so only
                // the forward direction is asserted
                if seg_equal(&a, &b) {
                    prop_assert!(same);
                }
            }

            #[test]
            fn subset_matches_window(a in seg_strategy(), b in seg_strategy()) {
                let g = z2();
                if a.is_subset(&b) {
                    for x in window(&g) {
                        let x = ValueInf::Finite(x);
                        if a.member(&g, &x).unwrap() {
                            prop_assert!(b.member(&g, &x).unwrap());
                        }
                    }
                }
            }
        }
    }
}
