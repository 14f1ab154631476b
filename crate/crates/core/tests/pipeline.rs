//! Cross-module checks: the same quantity reached along two routes.

use growthlab::approxgrp::{growth_iterate, power_set, product_set, tripling, GrowthVerdict};
use growthlab::cayley::{ball_profile, diameter, full_profile};
use growthlab::matgroup::{closure, enumerate_group, random_element, ENUMERATION_CAP};
use growthlab::rng::stream;
use growthlab::sumprod::{lift_sl2, sum_prod_sizes, ScalarSet};
use growthlab::varieties::{empirical_dimension, involved_tori, lp_exponent, torus_count, VarietySpec};
use growthlab::{ElemSet, GroupCtx};
use proptest::prelude::*;

#[test]
fn ball_profile_matches_power_sets() {
    let ctx = GroupCtx::sl(2, 13, 1).unwrap();
    let s = ctx.elementary_set();
    let profile = ball_profile(&ctx, &s, 6).unwrap();
    for (r, &size) in profile.iter().enumerate().skip(1) {
        assert_eq!(power_set(&ctx, &s, r).unwrap().len(), size, "radius {r}");
    }
}

#[test]
fn growth_radii_are_ball_sizes() {
    let ctx = GroupCtx::sl(2, 17, 1).unwrap();
    let s = ctx.elementary_set();
    let r = growth_iterate(&ctx, &s, 0.1).unwrap();
    let profile = full_profile(&ctx, &s).unwrap();
    let last = profile.len() - 1;
    for (&radius, &size) in r.radii.iter().zip(&r.sizes) {
        assert_eq!(size, profile[(radius as usize).min(last)]);
    }
    assert_eq!(r.verdict, GrowthVerdict::ReachedNearFull);
    assert!(diameter(&ctx, &s).unwrap() as u64 <= *r.radii.last().unwrap() * 3 + 1);
}

#[test]
fn census_on_whole_group_matches_torus_count() {
    for p in [5, 7, 11] {
        let ctx = GroupCtx::sl(2, p, 1).unwrap();
        let g = enumerate_group(&ctx).unwrap();
        let c = involved_tori(&ctx, &g).unwrap();
        assert_eq!(c.involved_count, torus_count(&ctx).unwrap());
        assert!(c.partition_holds());
    }
}

#[test]
fn sl3_split_torus_exponent() {
    // |T(F_p)| = (p-1)^2 and dim T / dim G = 2/8
    let ctx = GroupCtx::sl(3, 5, 1).unwrap();
    let g = enumerate_group(&ctx).unwrap();
    let t = VarietySpec::split_torus(&ctx).unwrap();
    let r = lp_exponent(&ctx, &g, &t, 1).unwrap();
    assert_eq!(r.intersection_size, 16);
    assert_eq!(r.predicted_exponent, 0.25);
}

#[test]
fn group_dimension_from_point_counts() {
    let fit = empirical_dimension(&[11, 13, 17, 19, 23, 29, 31], |p| Ok(GroupCtx::sl(2, p, 1)?.order())).unwrap();
    assert!((fit.slope - 3.0).abs() < 0.02, "{fit:?}");
    let fit3 = empirical_dimension(&[5, 7, 11, 13, 17, 19, 23, 29, 31], |p| Ok(GroupCtx::sl(3, p, 1)?.order())).unwrap();
    assert!((fit3.slope - 8.0).abs() < 0.05, "{fit3:?}");
}

#[test]
fn subfield_units_lift_into_sl2_f7() {
    // A = F_7^* inside F_49: the lift has all of its entries in F_7, so its
    // tripling stays inside SL_2(F_7) and fills it.
    let ctx = GroupCtx::sl(2, 7, 2).unwrap();
    let f = *ctx.field();
    let units = ScalarSet::new(f, (1..7).map(|x| f.from_int(x))).unwrap();
    let sp = sum_prod_sizes(&units).unwrap();
    assert_eq!(sp.prod_size, 6);
    let x = lift_sl2(&ctx, &units).unwrap();
    assert_eq!(x.len(), 6 * 6 * 6);
    let t = tripling(&ctx, &x).unwrap();
    assert_eq!(t.triple_size, 336);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// A random pair either reaches `|G|^{0.9}` or stalls on exactly its
    /// closure.
    #[test]
    fn growth_verdict_matches_closure(seed in 0u64..10_000, p in prop::sample::select(vec![7u64, 11, 13, 17])) {
        let ctx = GroupCtx::sl(2, p, 1).unwrap();
        let mut rng = stream(seed, "pipeline", 0);
        let a = random_element(&ctx, &mut rng);
        let b = random_element(&ctx, &mut rng);
        let s = ElemSet::from_elems(&ctx, [a, b]).symmetrize(&ctx);
        let h = closure(&ctx, &s.to_elems(&ctx), ENUMERATION_CAP as usize).unwrap();
        let r = growth_iterate(&ctx, &s, 0.1).unwrap();
        let full = (ctx.order() as f64).powf(0.9);
        match r.verdict {
            GrowthVerdict::ReachedNearFull => prop_assert!(*r.sizes.last().unwrap() as f64 >= full),
            GrowthVerdict::StalledProperSubgroup => {
                prop_assert_eq!(*r.sizes.last().unwrap(), h.len());
                prop_assert!((h.len() as f64) < full);
            }
            GrowthVerdict::Growing => prop_assert!(r.partial),
        }
    }

    /// `|A·B| >= max(|A|, |B|)` and `(A·B)^{-1} = B^{-1}·A^{-1}`.
    #[test]
    fn product_of_random_sets(seed in 0u64..10_000, na in 1usize..30, nb in 1usize..30) {
        let ctx = GroupCtx::sl(2, 11, 1).unwrap();
        let mut rng = stream(seed, "pipeline-sets", 0);
        let a = ElemSet::from_elems(&ctx, (0..na).map(|_| random_element(&ctx, &mut rng)));
        let b = ElemSet::from_elems(&ctx, (0..nb).map(|_| random_element(&ctx, &mut rng)));
        let ab = product_set(&ctx, &a, &b).unwrap();
        prop_assert!(ab.len() >= a.len().max(b.len()));
        let inv = |x: &ElemSet| ElemSet::from_elems(&ctx, x.elems(&ctx).map(|g| ctx.inverse(&g)));
        prop_assert_eq!(inv(&ab), product_set(&ctx, &inv(&b), &inv(&a)).unwrap());
    }
}
