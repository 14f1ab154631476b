//! Standard subvarieties of `SL_n` as membership predicates, and the counting
//! experiments built on them: intersection exponents, the involved-tori
//! census, conjugation invariance and conjugate-product growth.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::approxgrp::{power_set, product_set};
use crate::error::{Error, Result};
use crate::finfield::Fq;
use crate::matgroup::{
    centralizer_set, enumerate_group, normalizer_set, random_element, rank, torus_key, Ambient, Elem, ElemKey,
    ElemSet, GroupCtx, StdVariety, TorusId,
};
use crate::rng::Rng;
use crate::stats::{linear_fit, LinearFit};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarietyKind {
    MaximalTorus(TorusId),
    /// Geometric class of a regular semisimple element: its characteristic
    /// polynomial fibre.
    ConjugacyClass(ElemKey),
    /// Elements that are not regular semisimple.
    SingularSet,
    Subgroup,
    Centralizer(ElemKey),
}

#[derive(Debug, Clone)]
enum Membership {
    Points(ElemSet),
    CharPoly(Vec<Fq>),
    NotRegularSs,
}

/// A subvariety given by a membership predicate and a dimension tag.
#[derive(Debug, Clone)]
pub struct VarietySpec {
    kind: VarietyKind,
    dim: usize,
    member: Membership,
}

fn require_regular(ctx: &GroupCtx, g: &Elem) -> Result<()> {
    if ctx.is_regular_ss(g)? {
        Ok(())
    } else {
        Err(Error::pre("element is not regular semisimple"))
    }
}

impl VarietySpec {
    /// The maximal torus through a regular semisimple `g`, as its point set.
    pub fn maximal_torus(ctx: &GroupCtx, g: &Elem) -> Result<Self> {
        let id = torus_key(ctx, g)?;
        let points = centralizer_set(ctx, g, Ambient::Whole)?;
        Ok(VarietySpec {
            kind: VarietyKind::MaximalTorus(id),
            dim: ctx.dim_of(StdVariety::MaximalTorus),
            member: Membership::Points(points),
        })
    }

    /// The diagonal torus.
    pub fn split_torus(ctx: &GroupCtx) -> Result<Self> {
        let f = ctx.field();
        let units: Vec<Fq> = f.elements().filter(|&x| x != 0).collect();
        let mut points = Vec::new();
        let n = ctx.n();
        let mut idx = vec![0usize; n - 1];
        loop {
            let mut d: Vec<Fq> = idx.iter().map(|&i| units[i]).collect();
            let prod = d.iter().fold(1, |acc, &x| f.mul(acc, x));
            d.push(f.inv(prod)?);
            points.push(ctx.diag(&d)?);
            let mut i = 0;
            loop {
                if i == n - 1 {
                    let points = ElemSet::from_elems(ctx, points);
                    let id = points
                        .elems(ctx)
                        .find(|g| !ctx.is_central(g))
                        .map(|g| TorusId(ctx.key(&g)))
                        .ok_or_else(|| Error::pre(format!("the diagonal torus of {ctx} is central")))?;
                    return Ok(VarietySpec {
                        kind: VarietyKind::MaximalTorus(id),
                        dim: ctx.dim_of(StdVariety::MaximalTorus),
                        member: Membership::Points(points),
                    });
                }
                idx[i] += 1;
                if idx[i] < units.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    pub fn conjugacy_class(ctx: &GroupCtx, g: &Elem) -> Result<Self> {
        require_regular(ctx, g)?;
        Ok(VarietySpec {
            kind: VarietyKind::ConjugacyClass(ctx.key(g)),
            dim: ctx.dim_of(StdVariety::RegularSsConjugacyClass),
            member: Membership::CharPoly(ctx.char_poly(g)),
        })
    }

    pub fn singular_set(ctx: &GroupCtx) -> Result<Self> {
        // validates q > n
        ctx.is_regular_ss(&ctx.identity())?;
        Ok(VarietySpec {
            kind: VarietyKind::SingularSet,
            dim: ctx.dim_of(StdVariety::SingularSet),
            member: Membership::NotRegularSs,
        })
    }

    /// A finite point set with a caller-supplied dimension.
    pub fn subgroup(ctx: &GroupCtx, points: ElemSet, dim: usize) -> Result<Self> {
        if dim > ctx.dim() {
            return Err(Error::pre(format!("dimension {dim} exceeds dim G = {}", ctx.dim())));
        }
        Ok(VarietySpec { kind: VarietyKind::Subgroup, dim, member: Membership::Points(points) })
    }

    /// `Z(g)`, with dimension read off the commutant algebra of `g`.
    pub fn centralizer(ctx: &GroupCtx, g: &Elem) -> Result<Self> {
        let points = centralizer_set(ctx, g, Ambient::Whole)?;
        Ok(VarietySpec {
            kind: VarietyKind::Centralizer(ctx.key(g)),
            dim: centralizer_dim(ctx, g),
            member: Membership::Points(points),
        })
    }

    pub fn kind(&self) -> &VarietyKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The explicit point set, for kinds stored that way.
    pub fn points(&self) -> Option<&ElemSet> {
        match &self.member {
            Membership::Points(p) => Some(p),
            _ => None,
        }
    }

    pub fn contains(&self, ctx: &GroupCtx, g: &Elem) -> bool {
        match &self.member {
            Membership::Points(p) => p.contains_elem(ctx, g),
            Membership::CharPoly(cp) => ctx.char_poly(g) == *cp,
            Membership::NotRegularSs => !ctx.is_squarefree_char_poly(g),
        }
    }

    /// `A ∩ V`.
    pub fn intersect(&self, ctx: &GroupCtx, a: &ElemSet) -> ElemSet {
        match &self.member {
            Membership::Points(p) => a.intersection(p),
            _ => {
                let keys: Vec<ElemKey> = a
                    .keys()
                    .par_iter()
                    .copied()
                    .filter(|&k| self.contains(ctx, &ctx.decode_unchecked(k)))
                    .collect();
                ElemSet::from_keys(keys)
            }
        }
    }

    /// `|V(F_q)|`, enumerating the group for predicate-only kinds.
    pub fn point_count(&self, ctx: &GroupCtx) -> Result<u128> {
        match &self.member {
            Membership::Points(p) => Ok(p.len() as u128),
            _ => Ok(self.intersect(ctx, &enumerate_group(ctx)?).len() as u128),
        }
    }
}

/// `dim Z(g) = dim{X : Xg = gX} - 1`.
pub fn centralizer_dim(ctx: &GroupCtx, g: &Elem) -> usize {
    let f = ctx.field();
    let n = ctx.n();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // E_ij g - g E_ij
            let mut v = vec![0 as Fq; n * n];
            for c in 0..n {
                v[i * n + c] = f.add(v[i * n + c], g.get(j, c));
            }
            for r in 0..n {
                v[r * n + j] = f.sub(v[r * n + j], g.get(r, i));
            }
            rows.push(v);
        }
    }
    n * n - rank(f, rows) - 1
}

/// `|A^m ∩ V|` against the exponent `dim V / dim G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LPReport {
    pub set_size: usize,
    pub m: usize,
    pub power_size: usize,
    pub intersection_size: usize,
    pub predicted_exponent: f64,
    /// `log|A^m ∩ V| / log|A|`; `None` when degenerate.
    pub observed_exponent: Option<f64>,
    /// `|A| <= 1` or an empty intersection.
    pub degenerate: bool,
}

pub fn lp_exponent(ctx: &GroupCtx, a: &ElemSet, v: &VarietySpec, m: usize) -> Result<LPReport> {
    let am = power_set(ctx, a, m)?;
    let inter = v.intersect(ctx, &am).len();
    let degenerate = a.len() <= 1 || inter == 0;
    Ok(LPReport {
        set_size: a.len(),
        m,
        power_size: am.len(),
        intersection_size: inter,
        predicted_exponent: v.dim() as f64 / ctx.dim() as f64,
        observed_exponent: (!degenerate).then(|| (inter as f64).ln() / (a.len() as f64).ln()),
        degenerate,
    })
}

/// `log|A ∩ V| - (dim V / dim G)·log|A^3|`; `None` for empty intersections.
pub fn lp_upper_residual(ctx: &GroupCtx, a: &ElemSet, v: &VarietySpec) -> Result<Option<f64>> {
    let inter = v.intersect(ctx, a).len();
    if inter == 0 {
        return Ok(None);
    }
    let a3 = power_set(ctx, a, 3)?.len();
    Ok(Some((inter as f64).ln() - v.dim() as f64 / ctx.dim() as f64 * (a3 as f64).ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorusEntry {
    /// Smallest regular semisimple element of `A^2` in the torus.
    pub representative: ElemKey,
    /// Regular semisimple elements of `A^2` in the torus.
    pub regular: usize,
    /// `|A^2 ∩ T|`.
    pub points: usize,
}

/// Maximal tori meeting `A^2` in a regular semisimple element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusCensus {
    pub set_size: usize,
    pub square_size: usize,
    pub tori: BTreeMap<TorusId, TorusEntry>,
    pub central: usize,
    pub singular_noncentral: usize,
    pub involved_count: usize,
    /// `log(involved_count) / log|A|`; `None` when `|A| <= 1` or nothing is involved.
    pub exponent_observed: Option<f64>,
    /// `1 - rank / dim G`.
    pub predicted: f64,
}

impl TorusCensus {
    /// Each element of `A^2` is central, singular non-central, or regular in
    /// exactly one torus.
    pub fn partition_holds(&self) -> bool {
        let regular: usize = self.tori.values().map(|t| t.regular).sum();
        regular + self.singular_noncentral + self.central == self.square_size
    }

    /// Min, median and max of `|A^2 ∩ T|` over the involved tori.
    pub fn point_spread(&self) -> Option<(usize, f64, usize)> {
        let pts: Vec<f64> = self.tori.values().map(|t| t.points as f64).collect();
        let med = crate::stats::median(&pts)?;
        let min = self.tori.values().map(|t| t.points).min()?;
        let max = self.tori.values().map(|t| t.points).max()?;
        Some((min, med, max))
    }
}

pub fn involved_tori(ctx: &GroupCtx, a: &ElemSet) -> Result<TorusCensus> {
    if ctx.order() > crate::matgroup::ENUMERATION_CAP {
        return Err(Error::SizeCap {
            what: format!("{ctx}"),
            size: ctx.order(),
            cap: crate::matgroup::ENUMERATION_CAP,
        });
    }
    // validates q > n before any work
    ctx.is_regular_ss(&ctx.identity())?;
    let a2 = product_set(ctx, a, a)?;
    let classified: Vec<(ElemKey, Option<TorusId>, bool)> = a2
        .keys()
        .par_iter()
        .map(|&k| {
            let g = ctx.decode_unchecked(k);
            if ctx.is_squarefree_char_poly(&g) {
                (k, Some(torus_key(ctx, &g).expect("regular element")), false)
            } else {
                (k, None, ctx.is_central(&g))
            }
        })
        .collect();
    let mut tori: BTreeMap<TorusId, TorusEntry> = BTreeMap::new();
    let (mut central, mut singular) = (0, 0);
    for (k, t, is_central) in classified {
        match t {
            Some(id) => {
                tori.entry(id).or_insert(TorusEntry { representative: k, regular: 0, points: 0 }).regular += 1;
            }
            None if is_central => central += 1,
            None => singular += 1,
        }
    }
    let with_points: Vec<(TorusId, usize)> = tori
        .par_iter()
        .map(|(id, e)| {
            let rep = ctx.decode_unchecked(e.representative);
            let t = centralizer_set(ctx, &rep, Ambient::Whole).expect("whole-group centralizer");
            (*id, t.intersection(&a2).len())
        })
        .collect();
    for (id, pts) in with_points {
        tori.get_mut(&id).unwrap().points = pts;
    }
    let involved = tori.len();
    Ok(TorusCensus {
        set_size: a.len(),
        square_size: a2.len(),
        tori,
        central,
        singular_noncentral: singular,
        involved_count: involved,
        exponent_observed: (a.len() > 1 && involved > 0)
            .then(|| (involved as f64).ln() / (a.len() as f64).ln()),
        predicted: 1.0 - ctx.rank() as f64 / ctx.dim() as f64,
    })
}

/// Fraction of pairs `(T, a)`, `T` involved and `a ∈ A`, for which `a^{-1}Ta`
/// is involved too. Vacuously 1 for an empty census.
pub fn conjugation_invariance(ctx: &GroupCtx, a: &ElemSet, census: &TorusCensus) -> f64 {
    let conj: Vec<Elem> = a.to_elems(ctx);
    let total = census.tori.len() * conj.len();
    if total == 0 {
        return 1.0;
    }
    let hits: usize = census
        .tori
        .par_iter()
        .map(|(_, e)| {
            let rep = ctx.decode_unchecked(e.representative);
            conj.iter()
                .filter(|x| {
                    let id = torus_key(ctx, &ctx.conj(&rep, x)).expect("conjugate of a regular element");
                    census.tori.contains_key(&id)
                })
                .count()
        })
        .sum();
    hits as f64 / total as f64
}

/// Number of maximal tori carrying a regular semisimple rational point, by
/// grouping the regular elements of the whole group.
pub fn torus_count(ctx: &GroupCtx) -> Result<usize> {
    ctx.is_regular_ss(&ctx.identity())?;
    let all = enumerate_group(ctx)?;
    let ids: BTreeSet<TorusId> = all
        .keys()
        .par_iter()
        .filter_map(|&k| {
            let g = ctx.decode_unchecked(k);
            ctx.is_squarefree_char_poly(&g).then(|| torus_key(ctx, &g).expect("regular element"))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(ids.len())
}

/// Tori reachable from the torus through `rep` by conjugating with elements
/// of `gens`, i.e. the orbit under `⟨gens⟩`.
pub fn torus_orbit(ctx: &GroupCtx, rep: &Elem, gens: &ElemSet) -> Result<BTreeSet<TorusId>> {
    require_regular(ctx, rep)?;
    let gens = gens.to_elems(ctx);
    let mut seen = BTreeSet::new();
    let mut queue = vec![*rep];
    seen.insert(torus_key(ctx, rep)?);
    while let Some(g) = queue.pop() {
        for x in &gens {
            let h = ctx.conj(&g, x);
            if seen.insert(torus_key(ctx, &h)?) {
                queue.push(h);
            }
        }
    }
    Ok(seen)
}

/// `|a^{-1} T1 a · T2|`.
pub fn conjugate_product_size(ctx: &GroupCtx, t1: &ElemSet, a: &Elem, t2: &ElemSet) -> Result<usize> {
    let conj = ElemSet::from_elems(ctx, t1.elems(ctx).map(|h| ctx.conj(&h, a)));
    Ok(product_set(ctx, &conj, t2)?.len())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjProductReport {
    pub torus_size: usize,
    pub generic_a: ElemKey,
    pub generic_size: usize,
    pub normalizing_a: ElemKey,
    pub normalizing_size: usize,
}

/// `|T^a · T|` for a random `a` outside `N(T)` and for the smallest element of
/// `N(T) \ T`.
pub fn conjugate_product_growth(ctx: &GroupCtx, t: &VarietySpec, rng: &mut Rng) -> Result<ConjProductReport> {
    let pts = t.points().ok_or_else(|| Error::pre("conjugate products need an explicit point set"))?;
    let norm = normalizer_set(ctx, pts)?;
    let generic = loop {
        let a = random_element(ctx, rng);
        if !norm.contains_elem(ctx, &a) {
            break a;
        }
    };
    let weyl = norm
        .elems(ctx)
        .find(|x| !pts.contains_elem(ctx, x))
        .ok_or_else(|| Error::pre("the torus is self-normalizing"))?;
    Ok(ConjProductReport {
        torus_size: pts.len(),
        generic_a: ctx.key(&generic),
        generic_size: conjugate_product_size(ctx, pts, &generic, pts)?,
        normalizing_a: ctx.key(&weyl),
        normalizing_size: conjugate_product_size(ctx, pts, &weyl, pts)?,
    })
}

/// Slope of `log|V(F_p)|` against `log p`.
pub fn empirical_dimension(primes: &[u64], count: impl Fn(u64) -> Result<u128>) -> Result<LinearFit> {
    let distinct: HashSet<u64> = primes.iter().copied().collect();
    if distinct.len() < 3 {
        return Err(Error::pre("an empirical dimension needs at least three primes"));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &p in primes {
        let c = count(p)?;
        if c == 0 {
            return Err(Error::pre(format!("no points over F_{p}")));
        }
        xs.push((p as f64).ln());
        ys.push((c as f64).ln());
    }
    linear_fit(&xs, &ys)
}
