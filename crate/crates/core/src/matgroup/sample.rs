use rand::Rng;

use super::{Elem, ElemSet, GroupCtx};
use crate::error::{Error, Result};
use crate::finfield::Fq;

/// Uniform element of `SL_n(F_q)`.
///
/// Draws a uniform invertible matrix by rejection and scales its first row by
/// `det^{-1}`. The scaling map `GL_n -> SL_n` is `(q - 1)`-to-one, so the
/// result is exactly uniform.
pub fn random_element<R: Rng + ?Sized>(ctx: &GroupCtx, rng: &mut R) -> Elem {
    let f = ctx.field();
    let n = ctx.n();
    let mut entries = vec![0 as Fq; n * n];
    loop {
        for e in entries.iter_mut() {
            *e = rng.random_range(0..ctx.q());
        }
        let det = ctx.det_of(&entries);
        if det == 0 {
            continue;
        }
        let s = f.inv(det).expect("det is nonzero");
        for e in entries.iter_mut().take(n) {
            *e = f.mul(*e, s);
        }
        return Elem::raw(n, &entries);
    }
}

/// Random set closed under inversion with at least `size` elements, built by
/// adding uniform elements together with their inverses. May overshoot by one.
pub fn random_symmetric_set<R: Rng + ?Sized>(ctx: &GroupCtx, size: usize, rng: &mut R) -> Result<ElemSet> {
    if size as u128 > ctx.order() {
        return Err(Error::pre(format!("cannot pick {size} elements from a group of order {}", ctx.order())));
    }
    let mut keys = std::collections::BTreeSet::new();
    while keys.len() < size {
        let g = random_element(ctx, rng);
        keys.insert(ctx.key(&g));
        keys.insert(ctx.key(&ctx.inverse(&g)));
    }
    Ok(ElemSet::from_keys(keys))
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use statrs::distribution::{ChiSquared, ContinuousCDF};

    use super::*;
    use crate::rng::stream;

    #[test]
    fn uniform_on_sl2_f5() {
        let ctx = GroupCtx::sl(2, 5, 1).unwrap();
        let mut rng = stream(2024, "chi2", 0);
        let draws = 120_000;
        let mut counts: HashMap<u128, u64> = HashMap::new();
        for _ in 0..draws {
            let g = random_element(&ctx, &mut rng);
            assert_eq!(ctx.det(&g), 1);
            *counts.entry(ctx.key(&g).0).or_default() += 1;
        }
        assert_eq!(counts.len(), 120);
        let expected = draws as f64 / 120.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let critical = ChiSquared::new(119.0).unwrap().inverse_cdf(0.999);
        assert!(chi2 < critical, "chi2 = {chi2}, critical = {critical}");
    }

    #[test]
    fn determinant_one_and_reproducible() {
        let ctx = GroupCtx::sl(3, 7, 1).unwrap();
        let mut a = stream(5, "det", 0);
        let mut b = stream(5, "det", 0);
        for _ in 0..10_000 {
            let g = random_element(&ctx, &mut a);
            assert_eq!(ctx.det(&g), 1);
            assert_eq!(g, random_element(&ctx, &mut b));
        }
    }

    #[test]
    fn symmetric_sets() {
        let ctx = GroupCtx::sl(2, 101, 1).unwrap();
        let s = random_symmetric_set(&ctx, 20, &mut stream(1, "sym", 0)).unwrap();
        assert!(s.len() == 20 || s.len() == 21);
        assert!(s.is_inverse_closed(&ctx));
        assert!(random_symmetric_set(&GroupCtx::sl(2, 2, 1).unwrap(), 7, &mut stream(1, "sym", 0)).is_err());
    }
}
