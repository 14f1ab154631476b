//! Cayley graph exploration: ball profiles, diameters, girth of generator
//! pairs, random-generator statistics and diameter scaling fits.
//!
//! Balls are taken over `S̄ = S ∪ S^{-1} ∪ {id}`, so word letters carry
//! exponents in `{-1, 0, 1}` and ball sizes are monotone.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matgroup::{closure, random_element, BallWalker, Elem, ElemKey, ElemSet, GroupCtx, ENUMERATION_CAP};
use crate::rng::stream;
use crate::stats::{linear_fit, median};
use crate::sumprod::{dickson_gen_test, GenVerdict};

/// Groups up to this order get exact diameters in random-generator runs.
pub const EXACT_DIAMETER_ORDER: u128 = 1_000_000;

fn check_enumerable(ctx: &GroupCtx) -> Result<()> {
    if ctx.order() > ENUMERATION_CAP {
        return Err(Error::SizeCap { what: format!("{ctx}"), size: ctx.order(), cap: ENUMERATION_CAP });
    }
    Ok(())
}

/// `|S̄^r|` for `r = 0..=r_max`.
pub fn ball_profile(ctx: &GroupCtx, s: &ElemSet, r_max: usize) -> Result<Vec<usize>> {
    check_enumerable(ctx)?;
    let gens = s.symmetrize(ctx).to_elems(ctx);
    let mut w = BallWalker::from_identity(ctx, &gens, ENUMERATION_CAP as usize)?;
    w.advance_to(r_max)?;
    Ok((0..=r_max).map(|r| w.size_at(r)).collect())
}

/// Full profile `|S̄^r|` up to the first radius covering the group.
pub fn full_profile(ctx: &GroupCtx, s: &ElemSet) -> Result<Vec<usize>> {
    check_enumerable(ctx)?;
    let gens = s.symmetrize(ctx).to_elems(ctx);
    let mut w = BallWalker::from_identity(ctx, &gens, ENUMERATION_CAP as usize)?;
    w.run_to_closure()?;
    let size = w.size();
    if size as u128 != ctx.order() {
        return Err(Error::pre(format!(
            "the generators span a proper subgroup of order {size} (|G| = {})",
            ctx.order()
        )));
    }
    let sizes = w.sizes();
    let first_full = sizes.iter().position(|&x| x == size).unwrap();
    Ok(sizes[..=first_full].to_vec())
}

/// Least `r` with `S̄^r = G`.
pub fn diameter(ctx: &GroupCtx, s: &ElemSet) -> Result<usize> {
    Ok(full_profile(ctx, s)?.len() - 1)
}

/// `⌈log|G| / log|S̄|⌉`: no ball of smaller radius can cover the group.
pub fn counting_bound(ctx: &GroupCtx, s: &ElemSet) -> usize {
    let sbar = s.symmetrize(ctx).len() as f64;
    if sbar <= 1.0 {
        return 0;
    }
    ((ctx.order() as f64).ln() / sbar.ln() - 1e-12).ceil() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Girth {
    Found(u32),
    /// No relation of length up to `2·explored_radius + 1` exists.
    NotFound { explored_radius: u32 },
}

impl Girth {
    pub fn value(&self) -> Option<u32> {
        match self {
            Girth::Found(g) => Some(*g),
            Girth::NotFound { .. } => None,
        }
    }
}

/// `⌈log|G| / (2 log 3)⌉ + 4`.
pub fn girth_budget(ctx: &GroupCtx) -> u32 {
    ((ctx.order() as f64).ln() / (2.0 * 3f64.ln())).ceil() as u32 + 4
}

/// Length of the shortest nonempty reduced word in `a^{±1}, b^{±1}` that
/// evaluates to the identity.
///
/// Breadth-first search from the identity in the Cayley multigraph with one
/// edge `g — g·x` per generator `x ∈ {a, b}` (loops and parallel edges kept).
/// Every non-tree edge between depths `d1` and `d2` closes a walk of length
/// `d1 + d2 + 1` spelling a nontrivial reduced word; by vertex transitivity the
/// minimum over non-tree edges is the girth. After level `d` is expanded all
/// shorter cycles have been seen, so the search stops early once the best
/// length is at most `2d + 3`, and gives up after `radius_budget` levels.
pub fn girth(ctx: &GroupCtx, a: &Elem, b: &Elem, radius_budget: u32) -> Girth {
    // letters: 0 = a, 1 = a^-1, 2 = b, 3 = b^-1; inverse letter is l ^ 1
    let letters = [*a, ctx.inverse(a), *b, ctx.inverse(b)];
    const ROOT: u8 = u8::MAX;
    let mut seen: HashMap<ElemKey, (u32, u8)> = HashMap::new();
    let id = ctx.identity();
    seen.insert(ctx.key(&id), (0, ROOT));
    let mut frontier = vec![(id, ROOT)];
    let mut best: Option<u32> = None;
    for d in 0..=radius_budget {
        let mut next = Vec::new();
        for &(v, last) in &frontier {
            for (x, g) in letters.iter().enumerate() {
                let x = x as u8;
                if last != ROOT && x == last ^ 1 {
                    continue;
                }
                let w = ctx.mul(&v, g);
                let kw = ctx.key(&w);
                match seen.get(&kw) {
                    None => {
                        seen.insert(kw, (d + 1, x));
                        next.push((w, x));
                    }
                    Some(&(dw, _)) => {
                        let len = d + dw + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        if let Some(b) = best {
            if b <= 2 * d + 3 || next.is_empty() {
                return Girth::Found(b);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    match best {
        Some(b) if b <= 2 * radius_budget + 3 => Girth::Found(b),
        _ => Girth::NotFound { explored_radius: radius_budget },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub index: u64,
    pub a: ElemKey,
    pub b: ElemKey,
    /// `None` when generation could not be decided.
    pub generates: Option<bool>,
    /// Exact diameter of `{a, b}`; only for generating pairs in groups of
    /// order up to [`EXACT_DIAMETER_ORDER`].
    pub diameter: Option<usize>,
    pub girth: Girth,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomStats {
    pub trials: Vec<TrialResult>,
    pub generation_fraction: Option<f64>,
    pub diameter_median: Option<f64>,
    pub diameter_max: Option<usize>,
    pub girth_median: Option<f64>,
}

fn generates(ctx: &GroupCtx, s: &ElemSet) -> Result<Option<bool>> {
    if ctx.n() == 2 && ctx.field().degree() == 1 && ctx.field().p() >= 5 {
        return Ok(Some(dickson_gen_test(ctx, s)?.verdict == GenVerdict::GeneratesSl2));
    }
    if ctx.order() <= ENUMERATION_CAP {
        let h = closure(ctx, &s.symmetrize(ctx).to_elems(ctx), ctx.order() as usize)?;
        return Ok(Some(h.len() as u128 == ctx.order()));
    }
    Ok(None)
}

/// Generation, diameter and girth for `trials` seeded random pairs. Trial `i`
/// draws from its own substream, so results do not depend on scheduling.
pub fn random_generator_stats(ctx: &GroupCtx, trials: u64, seed: u64) -> Result<RandomStats> {
    let budget = girth_budget(ctx);
    let results: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, "random-pair", i);
            let a = random_element(ctx, &mut rng);
            let b = random_element(ctx, &mut rng);
            let s = ElemSet::from_elems(ctx, [a, b]);
            let gen = generates(ctx, &s)?;
            let diameter = if gen == Some(true) && ctx.order() <= EXACT_DIAMETER_ORDER {
                Some(diameter(ctx, &s)?)
            } else {
                None
            };
            Ok(TrialResult {
                index: i,
                a: ctx.key(&a),
                b: ctx.key(&b),
                generates: gen,
                diameter,
                girth: girth(ctx, &a, &b, budget),
            })
        })
        .collect::<Result<_>>()?;
    let decided: Vec<bool> = results.iter().filter_map(|t| t.generates).collect();
    let diams: Vec<f64> = results.iter().filter_map(|t| t.diameter.map(|d| d as f64)).collect();
    let girths: Vec<f64> = results.iter().filter_map(|t| t.girth.value().map(f64::from)).collect();
    Ok(RandomStats {
        generation_fraction: (!decided.is_empty())
            .then(|| decided.iter().filter(|&&g| g).count() as f64 / decided.len() as f64),
        diameter_median: median(&diams),
        diameter_max: results.iter().filter_map(|t| t.diameter).max(),
        girth_median: median(&girths),
        trials: results,
    })
}

fn ser_u128<S: serde::Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CayleyReport {
    pub p: u32,
    pub k: u32,
    pub n: usize,
    #[serde(serialize_with = "ser_u128")]
    pub group_order: u128,
    pub generators: String,
    pub diameter: usize,
    pub ball_sizes: Vec<usize>,
    pub girth: Option<Girth>,
}

/// Diameter and ball profile of `S`; the girth is filled in for two-element
/// generating sets.
pub fn cayley_report(ctx: &GroupCtx, s: &ElemSet, generators: &str) -> Result<CayleyReport> {
    let ball_sizes = full_profile(ctx, s)?;
    let girth = (s.len() == 2).then(|| {
        let e = s.to_elems(ctx);
        girth(ctx, &e[0], &e[1], girth_budget(ctx))
    });
    Ok(CayleyReport {
        p: ctx.field().p(),
        k: ctx.field().degree(),
        n: ctx.n(),
        group_order: ctx.order(),
        generators: generators.to_string(),
        diameter: ball_sizes.len() - 1,
        ball_sizes,
        girth,
    })
}

/// `diam ≈ C1·(log|G|)^{C2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingFit {
    pub c1: f64,
    pub c2: f64,
    pub r2: f64,
    pub points: usize,
}

/// Least squares of `log diam` on `log log|G|` over `(|G|, diam)` pairs.
pub fn scaling_fit_points(points: &[(f64, f64)]) -> Result<ScalingFit> {
    let mut orders: Vec<f64> = points.iter().map(|p| p.0).collect();
    orders.sort_by(f64::total_cmp);
    orders.dedup();
    if orders.len() < 4 {
        return Err(Error::pre("a scaling fit needs at least four distinct group orders"));
    }
    if points.iter().any(|&(g, d)| g <= std::f64::consts::E || d <= 0.0) {
        return Err(Error::pre("orders must exceed e and diameters must be positive"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln().ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(ScalingFit { c1: fit.intercept.exp(), c2: fit.slope, r2: fit.r2, points: points.len() })
}

pub fn scaling_fit(reports: &[CayleyReport]) -> Result<ScalingFit> {
    let pts: Vec<(f64, f64)> = reports.iter().map(|r| (r.group_order as f64, r.diameter as f64)).collect();
    scaling_fit_points(&pts)
}
