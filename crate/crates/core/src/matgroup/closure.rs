use rayon::prelude::*;

use super::{Elem, ElemSet, GroupCtx, Marks};
use crate::error::{Error, Result};

/// Hard cap on explicitly enumerated groups and closures.
pub const ENUMERATION_CAP: u128 = 10_000_000;

const PAR_THRESHOLD: usize = 512;

/// Level-synchronous breadth-first expansion of `start · gens^{≤ r}`.
///
/// The visited structure accumulates every element reached so far, so after
/// `r` steps it holds the ball of radius `r`. Each frontier is sorted by key
/// before the next step; the visited set is the same for any thread count.
pub struct BallWalker<'a> {
    ctx: &'a GroupCtx,
    gens: Vec<Elem>,
    marks: Marks,
    frontier: Vec<Elem>,
    sizes: Vec<usize>,
    cap: usize,
}

impl<'a> BallWalker<'a> {
    pub fn new(ctx: &'a GroupCtx, start: &[Elem], gens: &[Elem], cap: usize) -> Result<Self> {
        let marks = Marks::new(ctx);
        let mut frontier: Vec<Elem> = start.iter().copied().filter(|g| marks.insert(ctx, g)).collect();
        frontier.sort_by_key(|g| ctx.key(g));
        let size = frontier.len();
        if size > cap {
            return Err(cap_error(size, cap));
        }
        Ok(BallWalker { ctx, gens: gens.to_vec(), marks, frontier, sizes: vec![size], cap })
    }

    /// Starts from the identity.
    pub fn from_identity(ctx: &'a GroupCtx, gens: &[Elem], cap: usize) -> Result<Self> {
        Self::new(ctx, &[ctx.identity()], gens, cap)
    }

    pub fn radius(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn size(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    /// `|ball(r)|` for `r = 0..=radius()`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// True once a step produced no new element.
    pub fn is_closed(&self) -> bool {
        self.frontier.is_empty()
    }

    pub fn frontier(&self) -> &[Elem] {
        &self.frontier
    }

    pub fn contains(&self, g: &Elem) -> bool {
        self.marks.contains(self.ctx, g)
    }

    /// Expands one level; returns the number of new elements.
    pub fn step(&mut self) -> Result<usize> {
        let ctx = self.ctx;
        let gens = &self.gens;
        let marks = &self.marks;
        let expand = |x: &Elem, out: &mut Vec<Elem>| {
            for s in gens {
                let y = ctx.mul(x, s);
                if marks.insert(ctx, &y) {
                    out.push(y);
                }
            }
        };
        let mut next: Vec<Elem> = if self.frontier.len() < PAR_THRESHOLD {
            let mut out = Vec::new();
            for x in &self.frontier {
                expand(x, &mut out);
            }
            out
        } else {
            self.frontier
                .par_chunks(256)
                .flat_map_iter(|chunk| {
                    let mut out = Vec::new();
                    for x in chunk {
                        expand(x, &mut out);
                    }
                    out
                })
                .collect()
        };
        next.par_sort_unstable_by_key(|g| ctx.key(g));
        let added = next.len();
        let size = self.size() + added;
        self.frontier = next;
        self.sizes.push(size);
        if size > self.cap {
            return Err(cap_error(size, self.cap));
        }
        Ok(added)
    }

    /// Steps until the radius reaches `r` or the ball closes.
    pub fn advance_to(&mut self, r: usize) -> Result<()> {
        while self.radius() < r && !self.is_closed() {
            self.step()?;
        }
        Ok(())
    }

    /// Steps until no new element appears.
    pub fn run_to_closure(&mut self) -> Result<()> {
        while !self.is_closed() {
            self.step()?;
        }
        Ok(())
    }

    /// Size of the ball of radius `r`, which must not exceed the current radius
    /// unless the ball is already closed.
    pub fn size_at(&self, r: usize) -> usize {
        assert!(r <= self.radius() || self.is_closed());
        self.sizes[r.min(self.radius())]
    }

    pub fn into_set(self) -> ElemSet {
        ElemSet::from_sorted_keys(self.marks.into_keys(self.ctx))
    }
}

fn cap_error(size: usize, cap: usize) -> Error {
    Error::SizeCap { what: "ball".into(), size: size as u128, cap: cap as u128 }
}

/// The subgroup generated by `gens`.
pub fn closure(ctx: &GroupCtx, gens: &[Elem], cap: usize) -> Result<ElemSet> {
    let mut w = BallWalker::from_identity(ctx, gens, cap)?;
    w.run_to_closure()?;
    Ok(w.into_set().with_symmetric_flag(true))
}

/// Every element of `SL_n(F_q)`, by closure of the elementary transvections.
pub fn enumerate_group(ctx: &GroupCtx) -> Result<ElemSet> {
    if ctx.order() > ENUMERATION_CAP {
        return Err(Error::SizeCap {
            what: format!("{ctx}"),
            size: ctx.order(),
            cap: ENUMERATION_CAP,
        });
    }
    closure(ctx, &ctx.elementary_generators(), ENUMERATION_CAP as usize)
}
