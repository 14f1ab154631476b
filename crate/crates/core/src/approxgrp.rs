//! Product sets and approximate subgroups.
//!
//! Everything here is exact: product sets are computed pair by pair (bounded
//! by [`PAIR_BUDGET`]) and every certificate is re-verified by a membership
//! scan before it is returned.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matgroup::{BallWalker, Elem, ElemKey, ElemSet, GroupCtx, Marks};

/// Maximum number of products formed by a single product-set computation.
pub const PAIR_BUDGET: u128 = 1_000_000_000;

fn check_pairs(a: usize, b: usize) -> Result<()> {
    let pairs = a as u128 * b as u128;
    if pairs > PAIR_BUDGET {
        return Err(Error::budget(format!(
            "{a} x {b} = {pairs} products exceed the pair budget of {PAIR_BUDGET}; use sampling instead"
        )));
    }
    Ok(())
}

/// `A·B = {ab : a in A, b in B}`.
pub fn product_set(ctx: &GroupCtx, a: &ElemSet, b: &ElemSet) -> Result<ElemSet> {
    check_pairs(a.len(), b.len())?;
    let left = a.to_elems(ctx);
    let right = b.to_elems(ctx);
    if ctx.index_space().is_some() {
        let marks = Marks::new(ctx);
        left.par_iter().for_each(|x| {
            for y in &right {
                marks.insert(ctx, &ctx.mul(x, y));
            }
        });
        return Ok(ElemSet::from_keys(marks.into_keys(ctx)));
    }
    let chunks: Vec<Vec<ElemKey>> = left
        .par_chunks(64)
        .map(|chunk| {
            let mut keys: Vec<ElemKey> =
                chunk.iter().flat_map(|x| right.iter().map(move |y| ctx.key(&ctx.mul(x, y)))).collect();
            keys.sort_unstable();
            keys.dedup();
            keys
        })
        .collect();
    Ok(ElemSet::from_keys(chunks.into_iter().flatten()))
}

/// `A^m = {a_1 … a_m}` for `m >= 1`.
///
/// When `A` contains the identity, `A^m` is the ball of radius `m` and is
/// grown frontier by frontier, so each level only multiplies the new
/// elements. Otherwise the product is formed directly `m - 1` times.
pub fn power_set(ctx: &GroupCtx, a: &ElemSet, m: usize) -> Result<ElemSet> {
    if m == 0 {
        return Err(Error::pre("power_set needs m >= 1"));
    }
    if a.is_empty() || m == 1 {
        return Ok(a.clone());
    }
    if a.contains_elem(ctx, &ctx.identity()) {
        let gens = a.to_elems(ctx);
        let mut walker = BallWalker::from_identity(ctx, &gens, usize::MAX)?;
        while walker.radius() < m && !walker.is_closed() {
            check_pairs(walker.frontier().len(), gens.len())?;
            walker.step()?;
        }
        return Ok(walker.into_set());
    }
    let mut acc = a.clone();
    for _ in 1..m {
        acc = product_set(ctx, &acc, a)?;
    }
    Ok(acc)
}

/// `|A^3| / |A|` and `log|A^3| / log|A|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tripling {
    pub size: usize,
    pub triple_size: usize,
    pub ratio: f64,
    /// `None` when `|A| = 1`.
    pub exponent: Option<f64>,
}

pub fn tripling(ctx: &GroupCtx, a: &ElemSet) -> Result<Tripling> {
    if a.is_empty() {
        return Err(Error::pre("tripling of an empty set"));
    }
    let a2 = product_set(ctx, a, a)?;
    let a3 = product_set(ctx, &a2, a)?;
    Ok(tripling_from_sizes(a.len(), a3.len()))
}

pub(crate) fn tripling_from_sizes(size: usize, triple_size: usize) -> Tripling {
    let exponent = (size > 1).then(|| (triple_size as f64).ln() / (size as f64).ln());
    Tripling { size, triple_size, ratio: triple_size as f64 / size as f64, exponent }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverMethod {
    GreedyCover,
}

/// Witness that `A` is a `K`-approximate subgroup: `A·A ⊆ X·A`, `X = X^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxCertificate {
    pub k_certified: usize,
    pub x: ElemSet,
    pub method: CoverMethod,
}

/// Which side the covering translates act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `target ⊆ X·base`
    Left,
    /// `target ⊆ base·X`
    Right,
}

/// Scans `target` and checks every element lies in `X·base` (or `base·X`).
pub fn verify_cover(ctx: &GroupCtx, target: &ElemSet, x: &ElemSet, base: &ElemSet, side: Side) -> bool {
    let xs: Vec<Elem> = x.elems(ctx).map(|g| ctx.inverse(&g)).collect();
    let targets = target.to_elems(ctx);
    targets.par_iter().all(|y| {
        xs.iter().any(|xi| {
            let r = match side {
                Side::Left => ctx.mul(xi, y),
                Side::Right => ctx.mul(y, xi),
            };
            base.contains_elem(ctx, &r)
        })
    })
}

/// Greedy cover of `A·A` by left translates of `A`.
///
/// The identity is placed first (it covers `A` itself). Then, in ascending key
/// order, each element `y` of `A·A` not yet covered becomes a centre, and its
/// inverse is added alongside so `X` stays symmetric. `|X|` is an upper bound
/// on the least `K`, not the least `K` itself.
pub fn approx_certify(ctx: &GroupCtx, a: &ElemSet) -> Result<ApproxCertificate> {
    if !a.is_symmetric_with_identity(ctx) {
        return Err(Error::pre("approx_certify needs a symmetric set containing the identity"));
    }
    let aa = product_set(ctx, a, a)?;
    let base = a.to_elems(ctx);
    let mut covered = vec![false; aa.len()];
    let mut centres: Vec<Elem> = Vec::new();
    let add_centre = |c: Elem, covered: &mut Vec<bool>, centres: &mut Vec<Elem>| {
        if centres.contains(&c) {
            return;
        }
        for b in &base {
            if let Some(i) = aa.position(ctx.key(&ctx.mul(&c, b))) {
                covered[i] = true;
            }
        }
        centres.push(c);
    };
    add_centre(ctx.identity(), &mut covered, &mut centres);
    for i in 0..aa.len() {
        if covered[i] {
            continue;
        }
        let y = ctx.decode_unchecked(aa.keys()[i]);
        add_centre(y, &mut covered, &mut centres);
        add_centre(ctx.inverse(&y), &mut covered, &mut centres);
    }
    let x = ElemSet::from_elems(ctx, centres);
    if !verify_cover(ctx, &aa, &x, a, Side::Left) || !x.is_inverse_closed(ctx) {
        return Err(Error::pre("greedy cover failed verification"));
    }
    Ok(ApproxCertificate { k_certified: x.len(), x, method: CoverMethod::GreedyCover })
}

/// Witness that `B` `K`-controls `A`: `|B| <= K|A|`, `|X| <= K` and
/// `A ⊆ (X·B) ∩ (B·X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlCertificate {
    pub k: usize,
    pub x: ElemSet,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ControlOutcome {
    Certified(ControlCertificate),
    /// No certificate within `k_max`; `best_k` is what the greedy search reached.
    Failed { best_k: usize },
}

const CANDIDATE_LIMIT: usize = 256;

fn greedy_cover(ctx: &GroupCtx, target: &ElemSet, base: &ElemSet, side: Side) -> ElemSet {
    let targets = target.to_elems(ctx);
    let base_inv: Vec<Elem> = base.elems(ctx).map(|b| ctx.inverse(&b)).collect();
    let mut covered = vec![false; targets.len()];
    let mut centres = Vec::new();
    let hits = |c: &Elem, covered: &[bool]| -> Vec<usize> {
        let ci = ctx.inverse(c);
        (0..targets.len())
            .filter(|&i| !covered[i])
            .filter(|&i| {
                let r = match side {
                    Side::Left => ctx.mul(&ci, &targets[i]),
                    Side::Right => ctx.mul(&targets[i], &ci),
                };
                base.contains_elem(ctx, &r)
            })
            .collect()
    };
    let id = ctx.identity();
    for i in hits(&id, &covered) {
        covered[i] = true;
    }
    centres.push(id);
    while let Some(first) = covered.iter().position(|&c| !c) {
        let y = targets[first];
        let best = base_inv
            .iter()
            .take(CANDIDATE_LIMIT)
            .map(|bi| match side {
                Side::Left => ctx.mul(&y, bi),
                Side::Right => ctx.mul(bi, &y),
            })
            .map(|c| (hits(&c, &covered), c))
            .max_by(|(h1, c1), (h2, c2)| h1.len().cmp(&h2.len()).then(ctx.key(c2).cmp(&ctx.key(c1))))
            .expect("base is nonempty");
        for i in best.0 {
            covered[i] = true;
        }
        centres.push(best.1);
    }
    ElemSet::from_elems(ctx, centres)
}

pub fn control_certify(ctx: &GroupCtx, a: &ElemSet, b: &ElemSet, k_max: usize) -> Result<ControlOutcome> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::pre("control_certify needs nonempty sets"));
    }
    let left = greedy_cover(ctx, a, b, Side::Left);
    let right = greedy_cover(ctx, a, b, Side::Right);
    let x = left.union(&right);
    debug_assert!(verify_cover(ctx, a, &x, b, Side::Left) && verify_cover(ctx, a, &x, b, Side::Right));
    let k = x.len().max(b.len().div_ceil(a.len()));
    if k <= k_max {
        Ok(ControlOutcome::Certified(ControlCertificate { k, x }))
    } else {
        Ok(ControlOutcome::Failed { best_k: k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthVerdict {
    ReachedNearFull,
    StalledProperSubgroup,
    Growing,
}

/// Sizes of `S^{3^i}` until they pass `|G|^{1-δ}` or stop growing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub radii: Vec<u64>,
    pub sizes: Vec<usize>,
    /// `sizes[i + 1] / sizes[i]`.
    pub tripling_ratios: Vec<f64>,
    pub verdict: GrowthVerdict,
    pub threshold: f64,
    /// Set when a budget stopped the iteration early.
    pub partial: bool,
}

const MAX_GROWTH_ROUNDS: u32 = 39;

pub fn growth_iterate(ctx: &GroupCtx, s: &ElemSet, delta: f64) -> Result<GrowthReport> {
    if !s.is_symmetric_with_identity(ctx) {
        return Err(Error::pre("growth_iterate needs a symmetric set containing the identity"));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::pre("delta must lie in [0, 1)"));
    }
    let threshold = (ctx.order() as f64).powf(1.0 - delta);
    let gens = s.to_elems(ctx);
    let mut walker = BallWalker::from_identity(ctx, &gens, usize::MAX)?;
    let mut report = GrowthReport {
        radii: Vec::new(),
        sizes: Vec::new(),
        tripling_ratios: Vec::new(),
        verdict: GrowthVerdict::Growing,
        threshold,
        partial: false,
    };
    for i in 0..MAX_GROWTH_ROUNDS {
        let radius = 3u64.pow(i);
        let mut budget_hit = false;
        while (walker.radius() as u64) < radius && !walker.is_closed() {
            if check_pairs(walker.frontier().len(), gens.len()).is_err() {
                budget_hit = true;
                break;
            }
            walker.step()?;
        }
        if budget_hit {
            report.partial = true;
            return Ok(report);
        }
        let size = walker.size_at(radius as usize);
        if let Some(&prev) = report.sizes.last() {
            report.tripling_ratios.push(size as f64 / prev as f64);
        }
        report.radii.push(radius);
        report.sizes.push(size);
        if size as f64 >= threshold {
            report.verdict = GrowthVerdict::ReachedNearFull;
            return Ok(report);
        }
        let n = report.sizes.len();
        if n >= 2 && report.sizes[n - 1] == report.sizes[n - 2] {
            report.verdict = GrowthVerdict::StalledProperSubgroup;
            return Ok(report);
        }
    }
    Ok(report)
}

/// Outcome of the `A^3 = G` test above the quasirandomness threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GowersOutcome {
    pub set_size: usize,
    /// `|G| / d_min^{1/3}`.
    pub threshold: f64,
    /// `|A| > threshold`; when false the result is reported, not predicted.
    pub precondition_holds: bool,
    pub triple_size: usize,
    pub a3_is_group: bool,
}

pub fn gowers_check(ctx: &GroupCtx, a: &ElemSet, d_min: u64) -> Result<GowersOutcome> {
    if d_min == 0 {
        return Err(Error::pre("d_min must be positive"));
    }
    let threshold = ctx.order() as f64 / (d_min as f64).cbrt();
    let a2 = product_set(ctx, a, a)?;
    let a3 = product_set(ctx, &a2, a)?;
    Ok(GowersOutcome {
        set_size: a.len(),
        threshold,
        precondition_holds: a.len() as f64 > threshold,
        triple_size: a3.len(),
        a3_is_group: a3.len() as u128 == ctx.order(),
    })
}

/// Smallest set size strictly above the Gowers threshold.
pub fn gowers_min_size(ctx: &GroupCtx, d_min: u64) -> usize {
    let t = ctx.order() as f64 / (d_min as f64).cbrt();
    t.floor() as usize + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{closure, enumerate_group, random_element, random_symmetric_set};
    use crate::rng::stream;

    fn brute_product(ctx: &GroupCtx, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let mut keys = Vec::new();
        for x in a.elems(ctx) {
            for y in b.elems(ctx) {
                keys.push(ctx.key(&ctx.mul(&x, &y)));
            }
        }
        ElemSet::from_keys(keys)
    }

    #[test]
    fn product_set_examples() {
        let ctx = GroupCtx::sl(2, 5, 1).unwrap();
        let h = closure(&ctx, &[ctx.transvection(0, 1, 1)], 100).unwrap();
        assert_eq!(product_set(&ctx, &h, &h).unwrap(), h);

        let g = ctx.elem(&[1, 1, 1, 2]).unwrap();
        let a = ElemSet::from_elems(&ctx, [ctx.identity(), g]);
        let expected = ElemSet::from_elems(&ctx, [ctx.identity(), g, ctx.mul(&g, &g)]);
        assert_eq!(product_set(&ctx, &a, &a).unwrap(), expected);

        let s = ctx.elementary_set();
        assert_eq!(s.len(), 5);
        assert_eq!(product_set(&ctx, &s, &s).unwrap(), brute_product(&ctx, &s, &s));
    }

    #[test]
    fn sparse_and_dense_products_agree() {
        // SL_3(F_11) has no dense index; SL_2(F_11) does
        for ctx in [GroupCtx::sl(3, 11, 1).unwrap(), GroupCtx::sl(2, 11, 1).unwrap()] {
            let mut rng = stream(9, "sparse", 0);
            let a = ElemSet::from_elems(&ctx, (0..40).map(|_| random_element(&ctx, &mut rng)));
            let b = ElemSet::from_elems(&ctx, (0..30).map(|_| random_element(&ctx, &mut rng)));
            assert_eq!(product_set(&ctx, &a, &b).unwrap(), brute_product(&ctx, &a, &b));
        }
    }

    #[test]
    fn budget_error() {
        let ctx = GroupCtx::sl(2, 101, 1).unwrap();
        let mut rng = stream(1, "budget", 0);
        let a = ElemSet::from_elems(&ctx, (0..40_000).map(|_| random_element(&ctx, &mut rng)));
        assert!(matches!(product_set(&ctx, &a, &a), Err(Error::Budget(_))));
    }

    #[test]
    fn power_set_examples() {
        let ctx = GroupCtx::sl(2, 11, 1).unwrap();
        let s = ctx.elementary_set();
        assert_eq!(power_set(&ctx, &s, 1).unwrap(), s);
        let mut prev = s.clone();
        for m in 2..6 {
            let pm = power_set(&ctx, &s, m).unwrap();
            assert!(prev.is_subset(&pm));
            // oracle: repeated brute-force products
            let mut direct = s.clone();
            for _ in 1..m {
                direct = brute_product(&ctx, &direct, &s);
            }
            assert_eq!(pm, direct);
            prev = pm;
        }
        // without the identity: repeated products
        let t = ElemSet::from_elems(&ctx, [ctx.transvection(0, 1, 1), ctx.transvection(1, 0, 1)]);
        let t3 = power_set(&ctx, &t, 3).unwrap();
        assert_eq!(t3, brute_product(&ctx, &brute_product(&ctx, &t, &t), &t));
        assert!(power_set(&ctx, &t, 0).is_err());
    }

    #[test]
    fn tripling_examples() {
        let ctx = GroupCtx::sl(2, 5, 1).unwrap();
        let g = enumerate_group(&ctx).unwrap();
        assert_eq!(tripling(&ctx, &g).unwrap().ratio, 1.0);
        let c = closure(&ctx, &[ctx.elem(&[1, 1, 1, 2]).unwrap()], 1000).unwrap();
        assert_eq!(tripling(&ctx, &c).unwrap().ratio, 1.0);
        assert!(tripling(&ctx, &ElemSet::new()).is_err());
    }

    #[test]
    fn certificate_of_subgroup_is_trivial() {
        let ctx = GroupCtx::sl(2, 7, 1).unwrap();
        let h = closure(&ctx, &[ctx.transvection(0, 1, 1), ctx.diag(&[3, 5]).unwrap()], 1000).unwrap();
        let cert = approx_certify(&ctx, &h).unwrap();
        assert_eq!(cert.k_certified, 1);
        assert_eq!(cert.x, ElemSet::singleton(&ctx, &ctx.identity()));
    }

    #[test]
    fn certificate_of_progression() {
        let ctx = GroupCtx::sl(2, 101, 1).unwrap();
        let g = ctx.elem(&[1, 1, 1, 2]).unwrap();
        let n = 6;
        assert!(ctx.element_order(&g) > 4 * n);
        let gi = ctx.inverse(&g);
        let mut elems = vec![ctx.identity()];
        let (mut up, mut down) = (ctx.identity(), ctx.identity());
        for _ in 0..n {
            up = ctx.mul(&up, &g);
            down = ctx.mul(&down, &gi);
            elems.push(up);
            elems.push(down);
        }
        let a = ElemSet::from_elems(&ctx, elems);
        let cert = approx_certify(&ctx, &a).unwrap();
        assert!(cert.k_certified <= 3, "K = {}", cert.k_certified);
        assert!(verify_cover(&ctx, &product_set(&ctx, &a, &a).unwrap(), &cert.x, &a, Side::Left));
    }

    #[test]
    fn certificate_of_random_set_is_sound() {
        let ctx = GroupCtx::sl(2, 101, 1).unwrap();
        let a = random_symmetric_set(&ctx, 20, &mut stream(3, "cert", 0)).unwrap().symmetrize(&ctx);
        let cert = approx_certify(&ctx, &a).unwrap();
        assert!(cert.x.is_inverse_closed(&ctx));
        let aa = product_set(&ctx, &a, &a).unwrap();
        assert!(verify_cover(&ctx, &aa, &cert.x, &a, Side::Left));
        for m in 1..=4 {
            let am = power_set(&ctx, &a, m).unwrap().len() as f64;
            assert!(am <= (cert.k_certified as f64).powi(m as i32 - 1) * a.len() as f64);
        }
        let no_id = random_symmetric_set(&ctx, 20, &mut stream(3, "cert", 1)).unwrap();
        assert!(approx_certify(&ctx, &no_id).is_err());
    }

    #[test]
    fn control_examples() {
        let ctx = GroupCtx::sl(2, 11, 1).unwrap();
        let s = ctx.elementary_set();
        let b2 = power_set(&ctx, &s, 2).unwrap();
        match control_certify(&ctx, &b2, &b2, 1).unwrap() {
            ControlOutcome::Certified(c) => {
                assert_eq!(c.k, 1);
                assert_eq!(c.x, ElemSet::singleton(&ctx, &ctx.identity()));
            }
            other => panic!("{other:?}"),
        }
        // A ⊆ B with |B| <= 2|A|
        let a = b2.filter(&ctx, |g| ctx.trace(g) != 3);
        assert!(b2.len() <= 2 * a.len());
        match control_certify(&ctx, &a, &b2, 2).unwrap() {
            ControlOutcome::Certified(c) => assert!(c.k <= 2),
            other => panic!("{other:?}"),
        }
        // a ball is not controlled by a much smaller set
        let b4 = power_set(&ctx, &s, 4).unwrap();
        assert!(matches!(control_certify(&ctx, &b4, &s, 2).unwrap(), ControlOutcome::Failed { .. }));
        // covering soundness on a non-trivial instance
        if let ControlOutcome::Certified(c) = control_certify(&ctx, &b4, &b2, 1000).unwrap() {
            assert!(verify_cover(&ctx, &b4, &c.x, &b2, Side::Left));
            assert!(verify_cover(&ctx, &b4, &c.x, &b2, Side::Right));
        } else {
            panic!("expected a certificate");
        }
    }

    #[test]
    fn growth_examples() {
        let ctx = GroupCtx::sl(2, 7, 1).unwrap();
        let g = enumerate_group(&ctx).unwrap();
        let r = growth_iterate(&ctx, &g, 0.1).unwrap();
        assert_eq!(r.verdict, GrowthVerdict::ReachedNearFull);
        assert_eq!(r.radii, vec![1]);

        let c = closure(&ctx, &[ctx.transvection(0, 1, 1)], 100).unwrap();
        let cyc = ElemSet::from_elems(&ctx, [ctx.transvection(0, 1, 1), ctx.transvection(0, 1, 6)]).symmetrize(&ctx);
        let r = growth_iterate(&ctx, &cyc, 0.1).unwrap();
        assert_eq!(r.verdict, GrowthVerdict::StalledProperSubgroup);
        assert_eq!(*r.sizes.last().unwrap(), c.len());

        let ctx = GroupCtx::sl(2, 31, 1).unwrap();
        let r = growth_iterate(&ctx, &ctx.elementary_set(), 0.1).unwrap();
        assert_eq!(r.verdict, GrowthVerdict::ReachedNearFull);
        assert!(r.sizes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.sizes.iter().all(|&s| s as u128 <= ctx.order()));
    }

    #[test]
    fn gowers_examples() {
        let ctx = GroupCtx::sl(2, 5, 1).unwrap();
        let g = enumerate_group(&ctx).unwrap();
        assert!(gowers_check(&ctx, &g, 2).unwrap().a3_is_group);
        assert_eq!(gowers_min_size(&ctx, 2), 96);
        let a = random_symmetric_set(&ctx, 96, &mut stream(1, "gowers", 0)).unwrap();
        let out = gowers_check(&ctx, &a, 2).unwrap();
        assert!(out.precondition_holds);
        assert!(out.a3_is_group);
        let small = random_symmetric_set(&ctx, 10, &mut stream(1, "gowers", 1)).unwrap();
        assert!(!gowers_check(&ctx, &small, 2).unwrap().precondition_holds);
    }

    #[test]
    fn power_bound_on_balls() {
        let ctx = GroupCtx::sl(2, 11, 1).unwrap();
        let s = ctx.elementary_set();
        for r in 1..=3 {
            let a = power_set(&ctx, &s, r).unwrap();
            let cert = approx_certify(&ctx, &a).unwrap();
            let k = cert.k_certified as f64;
            for m in 1..=5 {
                let am = power_set(&ctx, &a, m).unwrap().len() as f64;
                assert!(am <= k.powi(m as i32 - 1) * a.len() as f64, "r={r} m={m}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_set(ctx: &GroupCtx, seed: u64, size: usize) -> ElemSet {
            let mut rng = stream(seed, "prop", 0);
            ElemSet::from_elems(ctx, (0..size).map(|_| random_element(ctx, &mut rng)))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn product_matches_double_loop(seed in any::<u64>(), na in 1usize..20, nb in 1usize..20) {
                let ctx = GroupCtx::sl(2, 7, 1).unwrap();
                let a = small_set(&ctx, seed, na);
                let b = small_set(&ctx, seed.wrapping_add(1), nb);
                let ab = product_set(&ctx, &a, &b).unwrap();
                prop_assert_eq!(&ab, &brute_product(&ctx, &a, &b));
                prop_assert!(ab.len() >= a.len().max(b.len()));
            }

            #[test]
            fn balls_are_monotone(seed in any::<u64>(), size in 1usize..4) {
                let ctx = GroupCtx::sl(2, 11, 1).unwrap();
                let s = small_set(&ctx, seed, size).symmetrize(&ctx);
                let mut prev = power_set(&ctx, &s, 1).unwrap();
                for m in 2..5 {
                    let next = power_set(&ctx, &s, m).unwrap();
                    prop_assert!(prev.is_subset(&next));
                    prop_assert!(next.len() as u128 <= ctx.order());
                    prev = next;
                }
            }

            #[test]
            fn certificates_are_sound(seed in any::<u64>(), size in 1usize..12) {
                let ctx = GroupCtx::sl(2, 13, 1).unwrap();
                let a = small_set(&ctx, seed, size).symmetrize(&ctx);
                let cert = approx_certify(&ctx, &a).unwrap();
                let aa = product_set(&ctx, &a, &a).unwrap();
                prop_assert!(verify_cover(&ctx, &aa, &cert.x, &a, Side::Left));
                prop_assert!(cert.x.is_inverse_closed(&ctx));
                let b = power_set(&ctx, &a, 2).unwrap();
                if let ControlOutcome::Certified(c) = control_certify(&ctx, &b, &a, usize::MAX).unwrap() {
                    prop_assert!(verify_cover(&ctx, &b, &c.x, &a, Side::Left));
                    prop_assert!(verify_cover(&ctx, &b, &c.x, &a, Side::Right));
                    prop_assert!(a.len() <= c.k * b.len());
                } else {
                    prop_assert!(false, "unbounded control must certify");
                }
            }
        }
    }
}
