use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use super::{Elem, ElemKey, GroupCtx};

/// Largest dense index space (in bits) backed by a bitset: 32 MiB.
pub const DENSE_INDEX_LIMIT: usize = 1 << 28;

/// Concurrent membership marks over group elements.
///
/// Dense when the group has a small index space, hashed otherwise. Both
/// variants give the same answers; only the memory profile differs.
pub(crate) enum Marks {
    Dense(Vec<AtomicU64>),
    Sparse(Mutex<HashSet<ElemKey>>),
}

impl Marks {
    pub fn new(ctx: &GroupCtx) -> Self {
        match ctx.index_space() {
            Some(space) => {
                let words = space.div_ceil(64);
                Marks::Dense((0..words).map(|_| AtomicU64::new(0)).collect())
            }
            None => Marks::Sparse(Mutex::new(HashSet::new())),
        }
    }

    /// Marks `g`; true iff it was not marked before. Safe to call concurrently,
    /// and exactly one caller wins for each element.
    #[inline]
    pub fn insert(&self, ctx: &GroupCtx, g: &Elem) -> bool {
        match self {
            Marks::Dense(words) => {
                let i = ctx.index_of(g);
                let bit = 1u64 << (i % 64);
                words[i / 64].fetch_or(bit, Ordering::Relaxed) & bit == 0
            }
            Marks::Sparse(set) => set.lock().unwrap().insert(ctx.key(g)),
        }
    }

    #[inline]
    pub fn contains(&self, ctx: &GroupCtx, g: &Elem) -> bool {
        match self {
            Marks::Dense(words) => {
                let i = ctx.index_of(g);
                words[i / 64].load(Ordering::Relaxed) & (1u64 << (i % 64)) != 0
            }
            Marks::Sparse(set) => set.lock().unwrap().contains(&ctx.key(g)),
        }
    }

    /// All marked elements, as sorted keys.
    pub fn into_keys(self, ctx: &GroupCtx) -> Vec<ElemKey> {
        let mut keys: Vec<ElemKey> = match self {
            Marks::Dense(words) => {
                let mut out = Vec::new();
                for (w, word) in words.into_iter().enumerate() {
                    let mut bits = word.into_inner();
                    while bits != 0 {
                        let b = bits.trailing_zeros() as usize;
                        out.push(ctx.key(&ctx.elem_at(w * 64 + b)));
                        bits &= bits - 1;
                    }
                }
                out
            }
            Marks::Sparse(set) => set.into_inner().unwrap().into_iter().collect(),
        };
        keys.sort_unstable();
        keys
    }
}
