use rayon::prelude::*;

use super::{closure, BallWalker, Elem, ElemSet, GroupCtx, ENUMERATION_CAP};
use crate::error::{Error, Result};

const PAIR_CAP: u128 = 100_000_000;

/// Checks that `S^{2d-1} ∩ Γ_0` generates `Γ_0`, where `Γ = <S>` and
/// `Γ_0 = {g in Γ : member(g)}` has index `d`.
///
/// `S` must be symmetric and contain the identity. The membership predicate is
/// verified to cut out a subgroup of index exactly `d` before the check runs.
pub fn finite_index_generation_check<F>(ctx: &GroupCtx, s: &ElemSet, member: F, d: usize) -> Result<bool>
where
    F: Fn(&Elem) -> bool + Sync,
{
    if d == 0 {
        return Err(Error::pre("index must be positive"));
    }
    if !s.is_symmetric_with_identity(ctx) {
        return Err(Error::pre("S must be symmetric and contain the identity"));
    }
    let gens = s.to_elems(ctx);
    let gamma = closure(ctx, &gens, ENUMERATION_CAP as usize)?;
    let sub = gamma.filter(ctx, |g| member(g));
    check_subgroup(ctx, &sub)?;
    if gamma.len() % sub.len() != 0 || gamma.len() / sub.len() != d {
        return Err(Error::pre(format!(
            "subgroup has index {} in a group of order {}, expected {d}",
            gamma.len() as f64 / sub.len() as f64,
            gamma.len()
        )));
    }
    let mut ball = BallWalker::from_identity(ctx, &gens, ENUMERATION_CAP as usize)?;
    ball.advance_to(2 * d - 1)?;
    let short = ball.into_set().intersection(&sub);
    let generated = closure(ctx, &short.to_elems(ctx), ENUMERATION_CAP as usize)?;
    Ok(generated.len() == sub.len())
}

fn check_subgroup(ctx: &GroupCtx, sub: &ElemSet) -> Result<()> {
    if !sub.contains_elem(ctx, &ctx.identity()) {
        return Err(Error::pre("membership predicate excludes the identity"));
    }
    if (sub.len() as u128).pow(2) > PAIR_CAP {
        return Err(Error::budget("subgroup too large for a closure check"));
    }
    let elems = sub.to_elems(ctx);
    let closed = elems.par_iter().all(|x| {
        sub.contains_elem(ctx, &ctx.inverse(x)) && elems.iter().all(|y| sub.contains_elem(ctx, &ctx.mul(x, y)))
    });
    if closed {
        Ok(())
    } else {
        Err(Error::pre("membership predicate is not closed under products and inverses"))
    }
}
