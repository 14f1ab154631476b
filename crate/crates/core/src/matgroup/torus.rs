//! Centralizers and maximal tori.
//!
//! For a regular semisimple `g` in `SL_n(F_q)` the centralizer is the group of
//! rational points of the unique maximal torus through `g`. Tori are therefore
//! handled as point sets, identified by the smallest non-central key.

use serde::Serialize;

use super::{enumerate_group, Elem, ElemKey, ElemSet, GroupCtx, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::finfield::Fq;

/// Canonical identifier of a maximal torus: the minimum key of its
/// non-central rational points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TorusId(pub ElemKey);

/// Where a centralizer is taken.
#[derive(Debug, Clone, Copy)]
pub enum Ambient<'a> {
    Whole,
    Set(&'a ElemSet),
}

/// `{h in ambient : hg = gh}`.
///
/// Over the whole group and for non-derogatory `g` the centralizer is read off
/// the commutant `F_q[g]`, which costs `q^n` determinant evaluations. Any
/// other case falls back to scanning the ambient set.
pub fn centralizer_set(ctx: &GroupCtx, g: &Elem, ambient: Ambient<'_>) -> Result<ElemSet> {
    match ambient {
        Ambient::Set(set) => {
            if set.len() as u128 > ENUMERATION_CAP {
                return Err(Error::SizeCap { what: "ambient".into(), size: set.len() as u128, cap: ENUMERATION_CAP });
            }
            Ok(set.filter(ctx, |h| ctx.commutes(g, h)))
        }
        Ambient::Whole if ctx.is_nonderogatory(g) => Ok(commutant_points(ctx, g)),
        Ambient::Whole => {
            let all = enumerate_group(ctx)?;
            Ok(all.filter(ctx, |h| ctx.commutes(g, h)))
        }
    }
}

/// Determinant-one elements of `span{I, g, …, g^{n-1}}`.
fn commutant_points(ctx: &GroupCtx, g: &Elem) -> ElemSet {
    let f = ctx.field();
    let n = ctx.n();
    let mut powers = vec![ctx.identity()];
    for i in 1..n {
        powers.push(ctx.mul(&powers[i - 1], g));
    }
    let q = ctx.q();
    let mut coeffs = vec![0 as Fq; n];
    let mut keys = Vec::new();
    let mut entries = vec![0 as Fq; n * n];
    loop {
        for (idx, e) in entries.iter_mut().enumerate() {
            *e = coeffs
                .iter()
                .zip(&powers)
                .fold(0, |acc, (&c, m)| f.add(acc, f.mul(c, m.entries()[idx])));
        }
        if ctx.det_of(&entries) == 1 {
            keys.push(ctx.key(&super::Elem::raw(n, &entries)));
        }
        let mut i = 0;
        loop {
            if i == n {
                return ElemSet::from_keys(keys);
            }
            coeffs[i] += 1;
            if coeffs[i] < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

/// The maximal torus through a regular semisimple `g`.
pub fn torus_key(ctx: &GroupCtx, g: &Elem) -> Result<TorusId> {
    if !ctx.is_regular_ss(g)? {
        return Err(Error::pre("torus_key needs a regular semisimple element"));
    }
    let z = commutant_points(ctx, g);
    let id = z.elems(ctx).find(|h| !ctx.is_central(h)).map(|h| TorusId(ctx.key(&h)));
    id.ok_or_else(|| Error::pre("centralizer has no non-central point"))
}

/// `{x in G : x^{-1} T x = T}` for a point set `T`, by scanning the group.
pub fn normalizer_set(ctx: &GroupCtx, t: &ElemSet) -> Result<ElemSet> {
    let all = enumerate_group(ctx)?;
    let elems = t.to_elems(ctx);
    Ok(all.filter(ctx, |x| elems.iter().all(|h| t.contains_elem(ctx, &ctx.conj(h, x)))))
}
