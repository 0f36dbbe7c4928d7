//! Polynomial layer over a constructed extension `L = K(η)`:
//! `q`-expansions, truncations `ν_q`, Hasse derivatives, Newton polygons,
//! `δ(f)`, `K`-proportional normalization, monomial rewriting, stable
//! values and sampled generation checks. Throughout, `ν(f) = v(f(η))`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordgrp::Rat;
use crate::poly::{self, Poly};
use crate::valfield::{Extension, ValuedField};

pub use crate::poly::hasse_derivative;

/// `None` stands for `∞`.
pub type Val = Option<Rat>;

fn val_add(a: Val, b: Val) -> Val {
    Some(a? + b?)
}

fn val_min(a: Val, b: Val) -> Val {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// The coefficients `f_0, …, f_r` of `f = Σ f_ℓ q^ℓ`, `deg f_ℓ < deg q`.
pub fn q_expand<F: ValuedField>(
    k: &F,
    f: &Poly<F::Elem>,
    q: &Poly<F::Elem>,
) -> Result<Vec<Poly<F::Elem>>> {
    if !poly::is_monic(k, q) {
        return Err(Error::validation("q must be monic of positive degree"));
    }
    expand(k, f, q)
}

/// The `q`-expansion for any `q` of positive degree; normalized key
/// polynomials are scalar multiples of monic ones.
fn expand<F: ValuedField>(
    k: &F,
    f: &Poly<F::Elem>,
    q: &Poly<F::Elem>,
) -> Result<Vec<Poly<F::Elem>>> {
    if q.degree().is_none_or(|d| d == 0) {
        return Err(Error::validation("q must have positive degree"));
    }
    let mut out = Vec::new();
    let mut rest = f.clone();
    while !rest.is_zero() {
        let (quo, rem) = poly::divrem(k, &rest, q)?;
        out.push(rem);
        rest = quo;
    }
    if out.is_empty() {
        out.push(Poly(Vec::new()));
    }
    Ok(out)
}

/// `Σ f_ℓ q^ℓ`.
pub fn reconstruct<F: ValuedField>(
    k: &F,
    parts: &[Poly<F::Elem>],
    q: &Poly<F::Elem>,
) -> Poly<F::Elem> {
    parts
        .iter()
        .rev()
        .fold(Poly(Vec::new()), |acc, p| poly::add(k, &poly::mul(k, &acc, q), p))
}

/// `ν_q(f) = min_ℓ ν(f_ℓ q^ℓ)`.
pub fn truncation<F: ValuedField>(
    l: &Extension<F>,
    f: &Poly<F::Elem>,
    q: &Poly<F::Elem>,
) -> Result<Val> {
    let k = &l.base;
    let parts = expand(k, f, q)?;
    let vq = l.eval_val(q)?;
    let mut best: Val = None;
    for (i, fl) in parts.iter().enumerate() {
        if fl.is_zero() {
            continue;
        }
        let vf = l.eval_val(fl)?;
        let term = if i == 0 {
            vf
        } else {
            val_add(vf, vq.map(|v| v * Rat::from_integer(i as i64)))
        };
        best = val_min(best, term);
    }
    Ok(best)
}

/// Lower convex hull of points `(s, w_s)`, with slopes weakly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(i64, Rat)>,
    /// `(slope, horizontal length)` per edge.
    pub slopes: Vec<(Rat, i64)>,
}

pub fn newton_polygon(points: &[(i64, Rat)]) -> NewtonPolygon {
    let mut pts: Vec<(i64, Rat)> = points.to_vec();
    pts.sort_by_key(|p| p.0);
    let mut hull: Vec<(i64, Rat)> = Vec::new();
    for p in pts {
        if let Some(last) = hull.last() {
            if last.0 == p.0 {
                if p.1 < last.1 {
                    hull.pop();
                } else {
                    continue;
                }
            }
        }
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or above the segment a–p
            let lhs = (b.1 - a.1) * Rat::from_integer(p.0 - a.0);
            let rhs = (p.1 - a.1) * Rat::from_integer(b.0 - a.0);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let slopes = hull
        .windows(2)
        .map(|w| ((w[1].1 - w[0].1) / Rat::from_integer(w[1].0 - w[0].0), w[1].0 - w[0].0))
        .collect();
    NewtonPolygon { vertices: hull, slopes }
}

/// `δ(f) = max{ν(x − a) : f(a) = 0}`, read off the Newton polygon of
/// `f(η + T) = Σ_s ∂_s f(η) T^s`: the root values are the negated slopes.
pub fn delta<F: ValuedField>(l: &Extension<F>, f: &Poly<F::Elem>) -> Result<Val> {
    let k = &l.base;
    let n = f.degree().ok_or_else(|| Error::validation("delta of the zero polynomial"))?;
    if n == 0 {
        return Err(Error::validation("delta of a constant polynomial"));
    }
    let mut points = Vec::with_capacity(n + 1);
    for s in 0..=n {
        if let Some(w) = l.eval_val(&hasse_derivative(k, f, s))? {
            points.push((s as i64, w));
        }
    }
    if points.first().is_none_or(|p| p.0 != 0) {
        return Ok(None);
    }
    let np = newton_polygon(&points);
    Ok(np.slopes.first().map(|(s, _)| -*s))
}

/// Compare `δ(f)` with `δ(q)`.
pub fn delta_cmp<F: ValuedField>(
    l: &Extension<F>,
    f: &Poly<F::Elem>,
    q: &Poly<F::Elem>,
) -> Result<std::cmp::Ordering> {
    let key = |v: Val| v.map_or((1, Rat::zero()), |x| (0, x));
    Ok(key(delta(l, f)?).cmp(&key(delta(l, q)?)))
}

/// Replace each `q` by `q/a` with `v(a) = ν(q)`, leaving the support
/// generator `g` untouched.
pub fn normalize_proportional<F: ValuedField>(
    l: &Extension<F>,
    qs: &[Poly<F::Elem>],
) -> Result<Vec<Poly<F::Elem>>> {
    let k = &l.base;
    qs.iter()
        .map(|q| {
            if *q == l.g {
                return Ok(q.clone());
            }
            match l.eval_val(q)? {
                None => Ok(q.clone()),
                Some(v) if v.is_integer() => {
                    let a_inv = k.pi_pow(-v.to_integer());
                    Ok(poly::scale(k, q, &a_inv))
                }
                Some(v) => Err(Error::Ramified(v.to_string())),
            }
        })
        .collect()
}

/// `a · Π Q_i^{λ_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial<E> {
    pub coeff: E,
    pub exponents: Vec<u32>,
}

/// Write `f` (reduced modulo `g`) as `Σ a_ℓ Q^{λ_ℓ}` with `a_ℓ ∈ O_K` and
/// `min v(a_ℓ) = ν(f)`, by induction on the degree.
pub fn rewrite_nonneg<F: ValuedField>(
    l: &Extension<F>,
    f: &Poly<F::Elem>,
    qs: &[Poly<F::Elem>],
) -> Result<Vec<Monomial<F::Elem>>> {
    let k = &l.base;
    let f = if f.degree().is_some_and(|d| d >= l.n) { poly::rem(k, f, &l.g)? } else { f.clone() };
    match l.eval_val(&f)? {
        Some(v) if v < Rat::zero() => {
            return Err(Error::validation(format!("ν(f) = {v} is negative")))
        }
        None if !f.is_zero() => return Err(Error::validation("f lies in the support of ν")),
        _ => {}
    }
    let mut out = Vec::new();
    rewrite_rec(l, &f, qs, &mut out)?;
    Ok(out)
}

fn rewrite_rec<F: ValuedField>(
    l: &Extension<F>,
    f: &Poly<F::Elem>,
    qs: &[Poly<F::Elem>],
    out: &mut Vec<Monomial<F::Elem>>,
) -> Result<()> {
    let k = &l.base;
    let d = match f.degree() {
        None => return Ok(()),
        Some(d) => d,
    };
    if d == 0 {
        out.push(Monomial { coeff: f.coeff(k, 0), exponents: vec![0; qs.len()] });
        return Ok(());
    }
    let nu = l.eval_val(f)?;
    // the highest-degree q with deg q ≤ deg f and ν_q(f) = ν(f)
    let mut order: Vec<usize> = (0..qs.len()).filter(|&i| qs[i].degree().is_some_and(|e| e >= 1 && e <= d)).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(qs[i].degree()));
    for i in order {
        if truncation(l, f, &qs[i])? != nu {
            continue;
        }
        let parts = expand(k, f, &qs[i])?;
        for (ell, part) in parts.iter().enumerate() {
            let start = out.len();
            rewrite_rec(l, part, qs, out)?;
            for m in &mut out[start..] {
                m.exponents[i] += ell as u32;
            }
        }
        return Ok(());
    }
    Err(Error::IncompleteSet(format!("degree {d}")))
}

/// `Σ a_ℓ Q^{λ_ℓ}` as a polynomial.
pub fn expand_monomials<F: ValuedField>(
    k: &F,
    ms: &[Monomial<F::Elem>],
    qs: &[Poly<F::Elem>],
) -> Poly<F::Elem> {
    ms.iter().fold(Poly(Vec::new()), |acc, m| {
        let term = m
            .exponents
            .iter()
            .zip(qs)
            .fold(poly::constant(k, m.coeff.clone()), |t, (&e, q)| poly::mul(k, &t, &poly::pow(k, q, e)));
        poly::add(k, &acc, &term)
    })
}

/// The eventual constant value of `v(f(c_i))` along approximants `c_i`,
/// witnessed by at least `min_tail` equal trailing values.
pub fn stable_value<F: ValuedField>(
    k: &F,
    f: &Poly<F::Elem>,
    approximants: &[F::Elem],
    min_tail: usize,
) -> Result<Option<i64>> {
    if f.degree().is_none_or(|d| d == 0) {
        return k.val(&f.coeff(k, 0));
    }
    let vals = approximants
        .iter()
        .map(|c| k.val(&poly::eval(k, f, c)))
        .collect::<Result<Vec<_>>>()?;
    let last = *vals.last().ok_or(Error::NoStabilizationWitnessed)?;
    let tail = vals.iter().rev().take_while(|&&v| v == last).count();
    if tail >= min_tail.max(1) {
        Ok(last)
    } else {
        Err(Error::NoStabilizationWitnessed)
    }
}

/// Candidate generators of `O_L` over `O_K`.
#[derive(Clone, Debug)]
pub enum Generators<E> {
    /// `O_K[η]`.
    Eta,
    /// `O_K[η/h : h ∈ K, v(h) < v(η)]`.
    ScaledEta,
    /// `O_K[Q(η) : Q ∈ Qs]` for a `K`-proportional set.
    KeyPolys(Vec<Poly<E>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationVerdict {
    pub pass: bool,
    pub trials: usize,
    pub counterexample: Option<String>,
}

/// A random element of `K` of the form `a·π^j`, plus `u` when available.
pub fn sample_elem<F: ValuedField>(k: &F, rng: &mut ChaCha8Rng) -> F::Elem {
    let a = k.of_i64(rng.gen_range(-20..=20));
    let mut x = k.mul(&a, &k.pi_pow(rng.gen_range(-2..=3)));
    if let Some(u) = k.variable("u") {
        if rng.gen_bool(0.5) {
            let b = k.of_i64(rng.gen_range(1..=4));
            x = k.add(&x, &k.mul(&k.mul(&b, &u), &k.pi_pow(rng.gen_range(0..=3))));
        }
    }
    x
}

/// A random `b ∈ O_L` as a polynomial in `η` of degree `< n`.
pub fn sample_integral<F: ValuedField>(l: &Extension<F>, rng: &mut ChaCha8Rng) -> Result<Poly<F::Elem>> {
    let k = &l.base;
    loop {
        let c = (0..l.n).map(|_| sample_elem(k, rng)).collect();
        let b = poly::trimmed(k, c);
        if b.is_zero() {
            continue;
        }
        let v = l.eval_val(&b)?.expect("nonzero element of degree < n");
        let shift = (-v).ceil().to_integer().max(0);
        return Ok(poly::scale(k, &b, &k.pi_pow(shift)));
    }
}

/// Sampled check that every `b ∈ O_L` lies in the ring generated by the
/// candidates. An oracle, not a proof.
pub fn check_generation<F: ValuedField>(
    l: &Extension<F>,
    gens: &Generators<F::Elem>,
    trials: usize,
    seed: u64,
) -> Result<GenerationVerdict> {
    let k = &l.base;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = l.v_eta()?.ok_or_else(|| Error::validation("η = 0"))?;
    for _ in 0..trials {
        let b = sample_integral(l, &mut rng)?;
        let ok = match gens {
            Generators::Eta | Generators::ScaledEta => {
                // the η-power basis representation is unique
                let vh = match gens {
                    Generators::Eta => Rat::zero(),
                    _ => gamma.ceil() - Rat::from_integer(1),
                };
                let mut ok = true;
                for (i, c) in b.coeffs().iter().enumerate() {
                    if let Some(v) = k.val(c)? {
                        if Rat::from_integer(v) + vh * Rat::from_integer(i as i64) < Rat::zero() {
                            ok = false;
                        }
                    }
                }
                ok
            }
            Generators::KeyPolys(qs) => match rewrite_nonneg(l, &b, qs) {
                Ok(ms) => {
                    let rebuilt = poly::rem(k, &expand_monomials(k, &ms, qs), &l.g)?;
                    let integral = ms.iter().try_fold(true, |acc, m| {
                        Ok::<_, Error>(acc && k.val(&m.coeff)?.is_none_or(|v| v >= 0))
                    })?;
                    rebuilt == b && integral
                }
                Err(Error::IncompleteSet(_)) => false,
                Err(e) => return Err(e),
            },
        };
        if !ok {
            return Ok(GenerationVerdict {
                pass: false,
                trials,
                counterexample: Some(poly::fmt(k, &b)),
            });
        }
    }
    Ok(GenerationVerdict { pass: true, trials, counterexample: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valfield::{build_extension, LaurentField, Qp, QpElem};

    fn qpoly(c: &[i64]) -> Poly<QpElem> {
        poly::trimmed(&Qp::new(2), c.iter().map(|&x| QpElem::int(x)).collect())
    }

    fn r(n: i64, d: i64) -> Val {
        Some(Rat::new(n, d))
    }

    #[test]
    fn q_expansion_examples() {
        let k = Qp::new(2);
        let q = qpoly(&[-1, 1]);
        assert_eq!(q_expand(&k, &q, &q).unwrap(), vec![Poly(vec![]), qpoly(&[1])]);
        assert_eq!(
            q_expand(&k, &qpoly(&[1, 0, 1]), &q).unwrap(),
            vec![qpoly(&[2]), qpoly(&[2]), qpoly(&[1])]
        );
        let f = qpoly(&[3, 1]);
        assert_eq!(q_expand(&k, &f, &qpoly(&[1, 0, 1])).unwrap(), vec![f]);
    }

    #[test]
    fn truncation_examples() {
        let k = Qp::new(2);
        let l = build_extension(&k, &qpoly(&[-2, 0, 1])).unwrap();
        let g = l.g.clone();
        assert_eq!(truncation(&l, &g, &qpoly(&[0, 1])).unwrap(), r(1, 1));
        let f = qpoly(&[1, 0, 0, 1]);
        assert!(truncation(&l, &f, &g).unwrap().is_some());
        assert_eq!(truncation(&l, &poly::mul(&k, &f, &g), &g).unwrap(), None);
        let q = qpoly(&[0, 1]);
        assert_eq!(truncation(&l, &q, &q).unwrap(), r(1, 2));
    }

    #[test]
    fn delta_examples() {
        let k = Qp::new(2);
        let l = build_extension(&k, &qpoly(&[-2, 0, 1])).unwrap();
        assert_eq!(delta(&l, &l.g).unwrap(), None);
        assert_eq!(delta(&l, &qpoly(&[0, 1])).unwrap(), r(1, 2));
        assert_eq!(delta(&l, &qpoly(&[-4, 0, 1])).unwrap(), r(1, 2));
        assert_eq!(
            delta_cmp(&l, &qpoly(&[0, 1]), &l.g).unwrap(),
            std::cmp::Ordering::Less
        );
    }

    #[test]
    fn newton_polygon_hull() {
        let pts = [(0, Rat::from_integer(3)), (1, Rat::from_integer(1)), (2, Rat::from_integer(2)), (3, Rat::zero())];
        let np = newton_polygon(&pts);
        assert_eq!(np.vertices.len(), 3);
        assert_eq!(np.slopes, vec![(Rat::from_integer(-2), 1), (Rat::new(-1, 2), 2)]);
        assert_eq!(np.slopes.iter().map(|s| s.1).sum::<i64>(), 3);
    }

    #[test]
    fn normalization() {
        let k = Qp::new(2);
        let inert = build_extension(&k, &qpoly(&[1, 1, 1])).unwrap();
        let x = qpoly(&[0, 1]);
        assert_eq!(normalize_proportional(&inert, std::slice::from_ref(&x)).unwrap(), vec![x.clone()]);
        // q(η) = 4η for q = x² + 5x + 1
        let out = normalize_proportional(&inert, &[qpoly(&[1, 5, 1])]).unwrap();
        assert_eq!(out[0], poly::trimmed(&k, vec![QpElem::from_ratio(1, 4), QpElem::from_ratio(5, 4), QpElem::from_ratio(1, 4)]));
        assert_eq!(inert.eval_val(&out[0]).unwrap(), Some(Rat::zero()));
        let ram = build_extension(&k, &qpoly(&[-2, 0, 1])).unwrap();
        assert_eq!(normalize_proportional(&ram, &[x]).unwrap_err(), Error::Ramified("1/2".into()));
    }

    #[test]
    fn rewriting_examples() {
        let k = Qp::new(2);
        let l = build_extension(&k, &qpoly(&[1, 1, 1])).unwrap();
        let qs = vec![qpoly(&[0, 1])];
        let ms = rewrite_nonneg(&l, &qpoly(&[0, 1]), &qs).unwrap();
        assert_eq!(ms, vec![Monomial { coeff: QpElem::int(0), exponents: vec![0] }, Monomial { coeff: QpElem::int(1), exponents: vec![1] }]
            .into_iter()
            .filter(|m| m.coeff != QpElem::int(0))
            .collect::<Vec<_>>());
        let ms = rewrite_nonneg(&l, &qpoly(&[2, 1]), &qs).unwrap();
        assert_eq!(ms.len(), 2);
        assert_eq!(expand_monomials(&k, &ms, &qs), qpoly(&[2, 1]));
        let ms = rewrite_nonneg(&l, &qpoly(&[0, 4]), &qs).unwrap();
        assert_eq!(ms, vec![Monomial { coeff: QpElem::int(4), exponents: vec![1] }]);
        assert!(rewrite_nonneg(&l, &qpoly(&[0, 1]), &[]).is_err());
    }

    #[test]
    fn stable_values() {
        let k = Qp::new(2);
        assert_eq!(stable_value(&k, &qpoly(&[12]), &[], 3).unwrap(), Some(2));
        let cs: Vec<QpElem> = [3, 5, 7, 9].iter().map(|&c| QpElem::int(c)).collect();
        assert_eq!(stable_value(&k, &qpoly(&[0, 1]), &cs, 3).unwrap(), Some(0));
        let cs: Vec<QpElem> = [2, 4, 8].iter().map(|&c| QpElem::int(c)).collect();
        assert_eq!(stable_value(&k, &qpoly(&[0, 1]), &cs, 2), Err(Error::NoStabilizationWitnessed));
        // g′ = −1 + 2x in characteristic 2 is the constant −1
        let l = LaurentField::new(2, false, 16);
        let gp = poly::parse(&l, &["-1".into(), "2".into()]).unwrap();
        assert_eq!(stable_value(&l, &gp, &[], 1).unwrap(), Some(0));
    }

    #[test]
    fn generation_examples() {
        let k = Qp::new(2);
        let inert = build_extension(&k, &qpoly(&[1, 1, 1])).unwrap();
        let v = check_generation(&inert, &Generators::Eta, 200, 7).unwrap();
        assert!(v.pass);
        let v = check_generation(&inert, &Generators::KeyPolys(vec![qpoly(&[0, 1])]), 200, 7).unwrap();
        assert!(v.pass);
        let ram = build_extension(&k, &qpoly(&[-2, 0, 1])).unwrap();
        assert!(check_generation(&ram, &Generators::Eta, 200, 7).unwrap().pass);
        // η = 2ζ does not generate
        let scaled = build_extension(&k, &qpoly(&[4, 2, 1])).unwrap();
        let v = check_generation(&scaled, &Generators::Eta, 200, 7).unwrap();
        assert!(!v.pass && v.counterexample.is_some());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn expansion_reconstructs(
                f in proptest::collection::vec(-20i64..21, 1..8),
                q in proptest::collection::vec(-20i64..21, 1..4),
            ) {
                let k = Qp::new(3);
                let mut q = q;
                q.push(1);
                let (f, q) = (qpoly(&f), qpoly(&q));
                let parts = q_expand(&k, &f, &q).unwrap();
                prop_assert!(parts.iter().all(|p| p.degree().is_none_or(|d| d < q.degree().unwrap())));
                prop_assert_eq!(reconstruct(&k, &parts, &q), f);
            }

            #[test]
            fn truncation_is_multiplicative_for_linear_q(
                a in proptest::collection::vec(-9i64..10, 1..4),
                b in proptest::collection::vec(-9i64..10, 1..4),
                c in -9i64..10,
            ) {
                let k = Qp::new(2);
                let l = build_extension(&k, &qpoly(&[-2, 0, 1])).unwrap();
                let q = qpoly(&[c, 1]);
                let (fa, fb) = (qpoly(&a), qpoly(&b));
                prop_assume!(!fa.is_zero() && !fb.is_zero());
                let ta = truncation(&l, &fa, &q).unwrap();
                let tb = truncation(&l, &fb, &q).unwrap();
                let tab = truncation(&l, &poly::mul(&k, &fa, &fb), &q).unwrap();
                prop_assert_eq!(tab, val_add(ta, tb));
                let nu = l.eval_val(&fa).unwrap();
                prop_assert!(nu.unwrap_or(Rat::from_integer(1000)) >= ta.unwrap());
            }
        }
    }
}
