use super::{Elem, ElemKey, GroupCtx};

/// A deduplicated set of group elements, stored as ascending keys.
///
/// Iteration order is ascending key order, so every computation that walks a
/// set is deterministic. Equality compares members only.
#[derive(Debug, Clone, Default)]
pub struct ElemSet {
    keys: Vec<ElemKey>,
    symmetric: bool,
}

impl PartialEq for ElemSet {
    fn eq(&self, other: &Self) -> bool {
        self.keys == other.keys
    }
}

impl Eq for ElemSet {}

impl ElemSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_keys(keys: impl IntoIterator<Item = ElemKey>) -> Self {
        let mut keys: Vec<ElemKey> = keys.into_iter().collect();
        keys.sort_unstable();
        keys.dedup();
        ElemSet { keys, symmetric: false }
    }

    /// Wraps keys that are already strictly ascending.
    pub(crate) fn from_sorted_keys(keys: Vec<ElemKey>) -> Self {
        debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));
        ElemSet { keys, symmetric: false }
    }

    pub fn from_elems(ctx: &GroupCtx, elems: impl IntoIterator<Item = Elem>) -> Self {
        Self::from_keys(elems.into_iter().map(|g| ctx.key(&g)))
    }

    pub fn singleton(ctx: &GroupCtx, g: &Elem) -> Self {
        ElemSet { keys: vec![ctx.key(g)], symmetric: false }
    }

    /// Sets the symmetric-closure flag. Callers must only set it when the set
    /// really contains the identity and is closed under inversion.
    pub(crate) fn with_symmetric_flag(mut self, flag: bool) -> Self {
        self.symmetric = flag;
        self
    }

    /// Whether the set is known to be symmetric with identity.
    pub fn symmetric_flag(&self) -> bool {
        self.symmetric
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[ElemKey] {
        &self.keys
    }

    pub fn contains(&self, key: ElemKey) -> bool {
        self.keys.binary_search(&key).is_ok()
    }

    pub fn contains_elem(&self, ctx: &GroupCtx, g: &Elem) -> bool {
        self.contains(ctx.key(g))
    }

    /// Position of `key` in ascending order.
    pub fn position(&self, key: ElemKey) -> Option<usize> {
        self.keys.binary_search(&key).ok()
    }

    pub fn elems<'a>(&'a self, ctx: &'a GroupCtx) -> impl Iterator<Item = Elem> + 'a {
        self.keys.iter().map(move |&k| ctx.decode_unchecked(k))
    }

    pub fn to_elems(&self, ctx: &GroupCtx) -> Vec<Elem> {
        self.elems(ctx).collect()
    }

    /// Checks that the set contains the identity and is closed under inversion.
    pub fn is_symmetric_with_identity(&self, ctx: &GroupCtx) -> bool {
        self.contains_elem(ctx, &ctx.identity()) && self.is_inverse_closed(ctx)
    }

    pub fn is_inverse_closed(&self, ctx: &GroupCtx) -> bool {
        self.elems(ctx).all(|g| self.contains_elem(ctx, &ctx.inverse(&g)))
    }

    /// `S ∪ S^{-1} ∪ {id}`.
    pub fn symmetrize(&self, ctx: &GroupCtx) -> ElemSet {
        let mut keys = self.keys.clone();
        keys.extend(self.elems(ctx).map(|g| ctx.key(&ctx.inverse(&g))));
        keys.push(ctx.key(&ctx.identity()));
        Self::from_keys(keys).with_symmetric_flag(true)
    }

    /// `S ∪ S^{-1}` without forcing the identity in.
    pub fn inverse_closure(&self, ctx: &GroupCtx) -> ElemSet {
        let mut keys = self.keys.clone();
        keys.extend(self.elems(ctx).map(|g| ctx.key(&ctx.inverse(&g))));
        Self::from_keys(keys)
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut keys = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.keys.len() && j < other.keys.len() {
            let (a, b) = (self.keys[i], other.keys[j]);
            if a < b {
                keys.push(a);
                i += 1;
            } else if b < a {
                keys.push(b);
                j += 1;
            } else {
                keys.push(a);
                i += 1;
                j += 1;
            }
        }
        keys.extend_from_slice(&self.keys[i..]);
        keys.extend_from_slice(&other.keys[j..]);
        ElemSet::from_sorted_keys(keys)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        ElemSet::from_sorted_keys(small.keys.iter().copied().filter(|&k| large.contains(k)).collect())
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.keys.iter().all(|&k| other.contains(k))
    }

    pub fn filter(&self, ctx: &GroupCtx, mut pred: impl FnMut(&Elem) -> bool) -> ElemSet {
        ElemSet::from_sorted_keys(
            self.keys.iter().copied().filter(|&k| pred(&ctx.decode_unchecked(k))).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let ctx = GroupCtx::sl(2, 5, 1).unwrap();
        let a = ctx.transvection(0, 1, 1);
        let b = ctx.transvection(1, 0, 1);
        let s = ElemSet::from_elems(&ctx, [a, b, a]);
        assert_eq!(s.len(), 2);
        assert!(!s.is_symmetric_with_identity(&ctx));
        let sym = s.symmetrize(&ctx);
        assert_eq!(sym.len(), 5);
        assert!(sym.is_symmetric_with_identity(&ctx));
        assert!(sym.symmetric_flag());
        assert!(s.is_subset(&sym));
        assert_eq!(s.union(&sym), sym);
        assert_eq!(s.intersection(&sym), s);
        assert!(sym.keys().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sym, ctx.elementary_set());
    }
}
