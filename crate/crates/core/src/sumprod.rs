//! Sum-product experiments over finite fields and their bridge to `SL_2`:
//! sumsets and product sets, rational images, the `SL_2` lift of a scalar
//! set, the double-commutator generation test and grid vanishing.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::approxgrp::{tripling, Tripling};
use crate::error::{Error, Result};
use crate::finfield::{FieldCtx, Fq};
use crate::matgroup::{closure, BallWalker, Elem, ElemKey, ElemSet, GroupCtx};
use crate::rng::{stream, Rng};

/// Maximum number of tuples any scan in this module will evaluate.
pub const TUPLE_BUDGET: u128 = 1_000_000_000;

fn check_tuples(base: usize, m: usize) -> Result<()> {
    let t = (base as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if t > TUPLE_BUDGET {
        return Err(Error::budget(format!("{base}^{m} tuples exceed the budget of {TUPLE_BUDGET}")));
    }
    Ok(())
}

/// Membership marks over field codes: a bitset for small fields, hashed above.
enum CodeMarks {
    Bits(Vec<u64>),
    Hash(HashSet<Fq>),
}

const BITSET_FIELD_LIMIT: u32 = 1 << 26;

impl CodeMarks {
    fn new(q: u32) -> Self {
        if q <= BITSET_FIELD_LIMIT {
            CodeMarks::Bits(vec![0; (q as usize).div_ceil(64)])
        } else {
            CodeMarks::Hash(HashSet::new())
        }
    }

    fn insert(&mut self, x: Fq) {
        match self {
            CodeMarks::Bits(b) => b[x as usize / 64] |= 1 << (x % 64),
            CodeMarks::Hash(h) => {
                h.insert(x);
            }
        }
    }

    fn merge(mut self, other: CodeMarks) -> Self {
        match (&mut self, other) {
            (CodeMarks::Bits(a), CodeMarks::Bits(b)) => a.iter_mut().zip(b).for_each(|(x, y)| *x |= y),
            (CodeMarks::Hash(a), CodeMarks::Hash(b)) => a.extend(b),
            _ => unreachable!("marks of one field share a representation"),
        }
        self
    }

    fn into_sorted(self) -> Vec<Fq> {
        match self {
            CodeMarks::Bits(b) => {
                let mut out = Vec::new();
                for (w, mut bits) in b.into_iter().enumerate() {
                    while bits != 0 {
                        out.push((w * 64) as Fq + bits.trailing_zeros());
                        bits &= bits - 1;
                    }
                }
                out
            }
            CodeMarks::Hash(h) => {
                let mut v: Vec<Fq> = h.into_iter().collect();
                v.sort_unstable();
                v
            }
        }
    }
}

/// A deduplicated set of field elements in ascending code order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarSet {
    field: FieldCtx,
    values: Vec<Fq>,
}

impl ScalarSet {
    pub fn new(field: FieldCtx, values: impl IntoIterator<Item = Fq>) -> Result<Self> {
        let mut values: Vec<Fq> = values.into_iter().collect();
        if let Some(&bad) = values.iter().find(|&&x| x >= field.q()) {
            return Err(Error::pre(format!("{bad} is not an element of {field}")));
        }
        values.sort_unstable();
        values.dedup();
        Ok(ScalarSet { field, values })
    }

    /// `{start + i·step : 0 <= i < len}`.
    pub fn arithmetic_progression(field: FieldCtx, start: Fq, step: Fq, len: usize) -> Result<Self> {
        let mut x = start;
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(x);
            x = field.add(x, step);
        }
        Self::new(field, v)
    }

    /// `{start·ratio^i : 0 <= i < len}`.
    pub fn geometric_progression(field: FieldCtx, start: Fq, ratio: Fq, len: usize) -> Result<Self> {
        let mut x = start;
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(x);
            x = field.mul(x, ratio);
        }
        Self::new(field, v)
    }

    /// `size` distinct uniform elements (or the whole field if `size >= q`).
    pub fn random(field: FieldCtx, size: usize, rng: &mut Rng) -> Self {
        let q = field.q();
        if size >= q as usize {
            return ScalarSet { field, values: field.elements().collect() };
        }
        let mut seen = HashSet::new();
        while seen.len() < size {
            seen.insert(rng.random_range(0..q));
        }
        let mut values: Vec<Fq> = seen.into_iter().collect();
        values.sort_unstable();
        ScalarSet { field, values }
    }

    /// The prime subfield `F_p` inside `F_{p^k}`.
    pub fn prime_subfield(field: FieldCtx) -> Self {
        ScalarSet { field, values: (0..field.p()).collect() }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn values(&self) -> &[Fq] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, x: Fq) -> bool {
        self.values.binary_search(&x).is_ok()
    }

    pub fn union(&self, other: &ScalarSet) -> ScalarSet {
        let mut v = self.values.clone();
        v.extend_from_slice(&other.values);
        v.sort_unstable();
        v.dedup();
        ScalarSet { field: self.field, values: v }
    }

    fn pairwise(&self, op: impl Fn(Fq, Fq) -> Fq + Sync) -> Result<ScalarSet> {
        check_tuples(self.len(), 2)?;
        let q = self.field.q();
        let marks = self
            .values
            .par_chunks(64)
            .map(|chunk| {
                let mut m = CodeMarks::new(q);
                for &x in chunk {
                    for &y in &self.values {
                        m.insert(op(x, y));
                    }
                }
                m
            })
            .reduce(|| CodeMarks::new(q), CodeMarks::merge);
        Ok(ScalarSet { field: self.field, values: marks.into_sorted() })
    }

    /// `A + A`.
    pub fn sumset(&self) -> Result<ScalarSet> {
        let f = self.field;
        self.pairwise(move |x, y| f.add(x, y))
    }

    /// `A · A`.
    pub fn productset(&self) -> Result<ScalarSet> {
        let f = self.field;
        self.pairwise(move |x, y| f.mul(x, y))
    }
}

/// Multiplicative order of a nonzero `x`.
pub fn multiplicative_order(field: &FieldCtx, x: Fq) -> Result<u64> {
    if x == 0 {
        return Err(Error::DivisionByZero);
    }
    let mut y = x;
    let mut k = 1;
    while y != 1 {
        y = field.mul(y, x);
        k += 1;
    }
    Ok(k)
}

/// Smallest generator of the multiplicative group: `g` with
/// `g^{(q-1)/r} ≠ 1` for every prime `r | q - 1`.
pub fn primitive_element(field: &FieldCtx) -> Fq {
    let n = field.q() as u64 - 1;
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            primes.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    field
        .elements()
        .skip(1)
        .find(|&x| primes.iter().all(|&r| field.pow(x, n / r) != 1))
        .expect("the multiplicative group of a finite field is cyclic")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumProd {
    pub size: usize,
    pub sum_size: usize,
    pub prod_size: usize,
    /// `max(|A+A|, |A·A|) / |A|`.
    pub k_obs: f64,
}

pub fn sum_prod_sizes(a: &ScalarSet) -> Result<SumProd> {
    if a.is_empty() {
        return Err(Error::pre("empty scalar set"));
    }
    let s = a.sumset()?.len();
    let p = a.productset()?.len();
    Ok(SumProd { size: a.len(), sum_size: s, prod_size: p, k_obs: s.max(p) as f64 / a.len() as f64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Ap,
    Gp,
    Random,
    ApUnionGp,
    /// The prime subfield; only meaningful inside `F_{p^2}`.
    Subfield,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ap" => Ok(Family::Ap),
            "gp" => Ok(Family::Gp),
            "random" => Ok(Family::Random),
            "ap-gp" | "ap+gp" => Ok(Family::ApUnionGp),
            "subfield" => Ok(Family::Subfield),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ap => "ap",
            Family::Gp => "gp",
            Family::Random => "random",
            Family::ApUnionGp => "ap-gp",
            Family::Subfield => "subfield",
        })
    }
}

/// Builds one member of a family. Arithmetic progressions start at 1 with
/// step 1; geometric ones start at 1 with the smallest primitive element as
/// ratio.
pub fn family_set(field: FieldCtx, family: Family, size: usize, seed: u64) -> Result<ScalarSet> {
    match family {
        Family::Ap => ScalarSet::arithmetic_progression(field, 1, 1, size),
        Family::Gp => ScalarSet::geometric_progression(field, 1, primitive_element(&field), size),
        Family::Random => Ok(ScalarSet::random(field, size, &mut stream(seed, "family-random", size as u64))),
        Family::ApUnionGp => {
            let ap = ScalarSet::arithmetic_progression(field, 1, 1, size / 2)?;
            let gp = ScalarSet::geometric_progression(field, 1, primitive_element(&field), size - size / 2)?;
            Ok(ap.union(&gp))
        }
        Family::Subfield => {
            if field.degree() != 2 {
                return Err(Error::pre("the subfield family needs F_{p^2}"));
            }
            Ok(ScalarSet::prime_subfield(field))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyRow {
    pub family: Family,
    pub size: usize,
    pub sum_size: usize,
    pub prod_size: usize,
    pub k_obs: f64,
    /// `q^{0.1} <= |A| <= q^{0.9}` and `K_obs <= k_thresh`.
    pub flagged: bool,
}

/// `K_obs` for every family and size. In a prime field no flagged row is
/// expected once `k_thresh` is small; the subfield family shows the shape of
/// the exception in `F_{p^2}`.
pub fn dichotomy_scan(
    field: FieldCtx,
    families: &[Family],
    sizes: &[usize],
    k_thresh: f64,
    seed: u64,
) -> Result<Vec<DichotomyRow>> {
    let q = field.q() as f64;
    let mut rows = Vec::new();
    for &family in families {
        let sizes: Vec<usize> = if family == Family::Subfield { vec![field.p() as usize] } else { sizes.to_vec() };
        for size in sizes {
            let a = family_set(field, family, size, seed)?;
            let sp = sum_prod_sizes(&a)?;
            let n = a.len() as f64;
            let mid = n >= q.powf(0.1) && n <= q.powf(0.9);
            rows.push(DichotomyRow {
                family,
                size: a.len(),
                sum_size: sp.sum_size,
                prod_size: sp.prod_size,
                k_obs: sp.k_obs,
                flagged: mid && sp.k_obs <= k_thresh,
            });
        }
    }
    Ok(rows)
}

/// A rational expression in `x1, x2, …` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprTree {
    Const(i64),
    /// Zero-based variable index; printed one-based.
    Var(usize),
    Neg(Box<ExprTree>),
    Add(Box<ExprTree>, Box<ExprTree>),
    Sub(Box<ExprTree>, Box<ExprTree>),
    Mul(Box<ExprTree>, Box<ExprTree>),
    Div(Box<ExprTree>, Box<ExprTree>),
}

impl ExprTree {
    /// One more than the largest variable index used.
    pub fn arity(&self) -> usize {
        match self {
            ExprTree::Const(_) => 0,
            ExprTree::Var(i) => i + 1,
            ExprTree::Neg(a) => a.arity(),
            ExprTree::Add(a, b) | ExprTree::Sub(a, b) | ExprTree::Mul(a, b) | ExprTree::Div(a, b) => {
                a.arity().max(b.arity())
            }
        }
    }

    /// Value at `xs`; `None` stands for ∞ (some denominator vanished).
    pub fn eval(&self, f: &FieldCtx, xs: &[Fq]) -> Option<Fq> {
        Some(match self {
            ExprTree::Const(c) => f.from_int(*c),
            ExprTree::Var(i) => xs[*i],
            ExprTree::Neg(a) => f.neg(a.eval(f, xs)?),
            ExprTree::Add(a, b) => f.add(a.eval(f, xs)?, b.eval(f, xs)?),
            ExprTree::Sub(a, b) => f.sub(a.eval(f, xs)?, b.eval(f, xs)?),
            ExprTree::Mul(a, b) => f.mul(a.eval(f, xs)?, b.eval(f, xs)?),
            ExprTree::Div(a, b) => f.div(a.eval(f, xs)?, b.eval(f, xs)?).ok()?,
        })
    }

    pub fn has_division(&self) -> bool {
        match self {
            ExprTree::Const(_) | ExprTree::Var(_) => false,
            ExprTree::Neg(a) => a.has_division(),
            ExprTree::Div(..) => true,
            ExprTree::Add(a, b) | ExprTree::Sub(a, b) | ExprTree::Mul(a, b) => a.has_division() || b.has_division(),
        }
    }
}

impl fmt::Display for ExprTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprTree::Const(c) => write!(f, "{c}"),
            ExprTree::Var(i) => write!(f, "x{}", i + 1),
            ExprTree::Neg(a) => write!(f, "-({a})"),
            ExprTree::Add(a, b) => write!(f, "({a} + {b})"),
            ExprTree::Sub(a, b) => write!(f, "({a} - {b})"),
            ExprTree::Mul(a, b) => write!(f, "({a} * {b})"),
            ExprTree::Div(a, b) => write!(f, "({a} / {b})"),
        }
    }
}

/// Grammar: `expr = term (('+'|'-') term)*`, `term = unary (('*'|'/') unary)*`,
/// `unary = '-' unary | atom`, `atom = integer | 'x' digits | '(' expr ')'`.
/// Juxtaposition is not multiplication.
impl FromStr for ExprTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { t: &tokens, i: 0 };
        let e = p.expr()?;
        if p.i != tokens.len() {
            return Err(Error::Parse(format!("unexpected {:?} at offset {}", tokens[p.i], p.i)));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    t: &'a [char],
    i: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.t.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<ExprTree> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.i += 1;
            let rhs = self.term()?;
            lhs = if c == '+' { ExprTree::Add(lhs.into(), rhs.into()) } else { ExprTree::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprTree> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.i += 1;
            let rhs = self.unary()?;
            lhs = if c == '*' { ExprTree::Mul(lhs.into(), rhs.into()) } else { ExprTree::Div(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ExprTree> {
        if self.peek() == Some('-') {
            self.i += 1;
            return Ok(ExprTree::Neg(self.unary()?.into()));
        }
        self.atom()
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        (self.i > start).then(|| self.t[start..self.i].iter().collect())
    }

    fn atom(&mut self) -> Result<ExprTree> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse(format!("expected ')' at offset {}", self.i)));
                }
                self.i += 1;
                Ok(e)
            }
            Some('x') => {
                self.i += 1;
                let d = self.digits().ok_or_else(|| Error::Parse("variable needs an index, e.g. x1".into()))?;
                let k: usize = d.parse().map_err(|_| Error::Parse(format!("bad variable index {d}")))?;
                if k == 0 {
                    return Err(Error::Parse("variables are numbered from x1".into()));
                }
                Ok(ExprTree::Var(k - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                d.parse().map(ExprTree::Const).map_err(|_| Error::Parse(format!("integer {d} out of range")))
            }
            Some(c) => Err(Error::Parse(format!("unexpected {c:?} at offset {}", self.i))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ImageCount {
    pub tuples: u128,
    /// `|ψ(A, …, A)|`, the ∞ bucket excluded.
    pub image_size: usize,
    /// Tuples that hit a zero denominator.
    pub infinity_hits: u128,
}

/// Exact `|ψ(A, …, A)|` over all `|A|^m` tuples, `m = arity(ψ) <= 3`.
pub fn rational_image(a: &ScalarSet, psi: &ExprTree) -> Result<ImageCount> {
    let m = psi.arity();
    if m > 3 {
        return Err(Error::pre(format!("arity {m} exceeds 3")));
    }
    check_tuples(a.len(), m)?;
    let f = a.field;
    let v = &a.values;
    if m == 0 {
        let val = psi.eval(&f, &[]);
        return Ok(ImageCount { tuples: 1, image_size: val.is_some() as usize, infinity_hits: val.is_none() as u128 });
    }
    let q = f.q();
    let (marks, inf) = v
        .par_iter()
        .map(|&x| {
            let mut marks = CodeMarks::new(q);
            let mut inf = 0u128;
            let mut xs = [x, 0, 0];
            let mut visit = |xs: &[Fq]| match psi.eval(&f, xs) {
                Some(y) => marks.insert(y),
                None => inf += 1,
            };
            match m {
                1 => visit(&xs[..1]),
                2 => {
                    for &y in v {
                        xs[1] = y;
                        visit(&xs[..2]);
                    }
                }
                _ => {
                    for &y in v {
                        for &z in v {
                            xs[1] = y;
                            xs[2] = z;
                            visit(&xs);
                        }
                    }
                }
            }
            (marks, inf)
        })
        .reduce(|| (CodeMarks::new(q), 0), |(a, i), (b, j)| (a.merge(b), i + j));
    Ok(ImageCount {
        tuples: (v.len() as u128).pow(m as u32),
        image_size: marks.into_sorted().len(),
        infinity_hits: inf,
    })
}

/// Heuristic refinement of `A`: score each `x` by the additive and
/// multiplicative quadruples through it, `#{(b, c) : x + b - c ∈ A}` plus
/// `#{(b, c), c ≠ 0 : x·b/c ∈ A}`, bucket scores dyadically, and keep the
/// bucket carrying the largest total score. Ties go to the higher bucket.
pub fn dyadic_energy_refinement(a: &ScalarSet) -> Result<ScalarSet> {
    check_tuples(a.len(), 3)?;
    let f = a.field;
    let v = &a.values;
    let scores: Vec<(Fq, u64)> = v
        .par_iter()
        .map(|&x| {
            let mut r = 0u64;
            for &b in v {
                for &c in v {
                    if a.contains(f.sub(f.add(x, b), c)) {
                        r += 1;
                    }
                    if c != 0 && a.contains(f.div(f.mul(x, b), c).unwrap()) {
                        r += 1;
                    }
                }
            }
            (x, r)
        })
        .collect();
    let mut buckets: BTreeMap<u32, (u64, Vec<Fq>)> = BTreeMap::new();
    for (x, r) in scores {
        let level = if r == 0 { 0 } else { 64 - r.leading_zeros() };
        let e = buckets.entry(level).or_default();
        e.0 += r;
        e.1.push(x);
    }
    let best = buckets
        .into_iter()
        .max_by(|(l1, (s1, _)), (l2, (s2, _))| s1.cmp(s2).then(l1.cmp(l2)))
        .map(|(_, (_, xs))| xs)
        .unwrap_or_default();
    ScalarSet::new(f, best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalImageReport {
    pub full: ImageCount,
    pub full_size: usize,
    pub refined: ImageCount,
    pub refined_size: usize,
}

/// `|ψ(A)|` on `A` and on its dyadic-energy refinement.
pub fn rational_image_report(a: &ScalarSet, psi: &ExprTree) -> Result<RationalImageReport> {
    let refined_set = dyadic_energy_refinement(a)?;
    Ok(RationalImageReport {
        full: rational_image(a, psi)?,
        full_size: a.len(),
        refined: rational_image(&refined_set, psi)?,
        refined_size: refined_set.len(),
    })
}

fn check_sl2_over(ctx: &GroupCtx, field: &FieldCtx) -> Result<()> {
    if ctx.n() != 2 || ctx.field() != field {
        return Err(Error::pre(format!("expected SL_2 over {field}, got {ctx}")));
    }
    Ok(())
}

/// `[[a1, a2], [a3, (1 + a2·a3) / a1]]`.
pub fn lift_matrix(ctx: &GroupCtx, a1: Fq, a2: Fq, a3: Fq) -> Result<Elem> {
    let f = ctx.field();
    let d = f.div(f.add(1, f.mul(a2, a3)), a1)?;
    ctx.elem(&[a1, a2, a3, d])
}

/// `X = {[[a1, a2], [a3, (1 + a2 a3)/a1]] : a_i ∈ A}`.
pub fn lift_sl2(ctx: &GroupCtx, a: &ScalarSet) -> Result<ElemSet> {
    check_sl2_over(ctx, &a.field)?;
    if a.contains(0) {
        return Err(Error::pre("the lift needs 0 ∉ A"));
    }
    check_tuples(a.len(), 3)?;
    let v = &a.values;
    let keys: Vec<ElemKey> = v
        .par_iter()
        .flat_map_iter(|&x| {
            v.iter().flat_map(move |&y| {
                v.iter().map(move |&z| ctx.key(&lift_matrix(ctx, x, y, z).expect("a1 is nonzero")))
            })
        })
        .collect();
    Ok(ElemSet::from_keys(keys))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftReport {
    pub set_size: usize,
    pub lift_size: usize,
    pub tripling: Tripling,
}

pub fn lift_report(ctx: &GroupCtx, a: &ScalarSet) -> Result<LiftReport> {
    let x = lift_sl2(ctx, a)?;
    Ok(LiftReport { set_size: a.len(), lift_size: x.len(), tripling: tripling(ctx, &x)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenVerdict {
    GeneratesSl2,
    ProperSolvableWitness,
    ProperSmall,
    Undecided,
}

impl fmt::Display for GenVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenVerdict::GeneratesSl2 => "generates-sl2",
            GenVerdict::ProperSolvableWitness => "proper-solvable-witness",
            GenVerdict::ProperSmall => "proper-small",
            GenVerdict::Undecided => "undecided",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenRoute {
    ExactClosure,
    WordSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenTestReport {
    pub verdict: GenVerdict,
    pub route: GenRoute,
    /// `|⟨S⟩|` when the closure was computed.
    pub closure_size: Option<usize>,
    /// Elements in the explored ball.
    pub sample_size: usize,
    pub quadruples_checked: u64,
    /// `h1..h4` with `[[h1, h2], [h3, h4]] ≠ id`.
    pub witness: Option<[ElemKey; 4]>,
}

/// Groups up to this order are decided by exact closure.
pub const EXACT_GEN_ORDER: u128 = 1_000_000;
/// Word length explored by the search route.
pub const WORD_LENGTH: usize = 8;
/// Double commutators evaluated by the search route.
pub const QUADRUPLE_CAP: u64 = 100_000;
/// Proper subgroups of `SL_2(F_p)` that are not 2-step solvable have order
/// at most 120 (the binary icosahedral group).
pub const NON_SOLVABLE_BOUND: usize = 120;
pub const SMALL_ORDER: usize = 60;
const SAMPLE_CAP: usize = 20_000;
const COMMUTATOR_SOURCES: usize = 40;

fn check_gen_ctx(ctx: &GroupCtx) -> Result<()> {
    if ctx.n() != 2 || ctx.field().degree() != 1 || ctx.field().p() < 5 {
        return Err(Error::pre(format!("the generation test needs SL_2(F_p) with p >= 5, got {ctx}")));
    }
    Ok(())
}

/// Decides whether `S` generates `SL_2(F_p)`.
///
/// Up to order [`EXACT_GEN_ORDER`] the closure is computed. Above it, words of
/// length up to [`WORD_LENGTH`] are searched for a nontrivial double
/// commutator: together with more than [`NON_SOLVABLE_BOUND`] distinct
/// elements this rules out every proper subgroup.
pub fn dickson_gen_test(ctx: &GroupCtx, s: &ElemSet) -> Result<GenTestReport> {
    check_gen_ctx(ctx)?;
    if ctx.order() <= EXACT_GEN_ORDER {
        let h = closure(ctx, &s.symmetrize(ctx).to_elems(ctx), ctx.order() as usize)?;
        return Ok(GenTestReport {
            verdict: classify_closure(ctx, s, &h),
            route: GenRoute::ExactClosure,
            closure_size: Some(h.len()),
            sample_size: h.len(),
            quadruples_checked: 0,
            witness: None,
        });
    }
    dickson_word_search(ctx, s)
}

/// The search route of [`dickson_gen_test`], usable at any order.
pub fn dickson_word_search(ctx: &GroupCtx, s: &ElemSet) -> Result<GenTestReport> {
    check_gen_ctx(ctx)?;
    let gens = s.symmetrize(ctx).to_elems(ctx);
    let mut w = BallWalker::from_identity(ctx, &gens, usize::MAX)?;
    while !w.is_closed() && (w.radius() < WORD_LENGTH && w.size() < SAMPLE_CAP || w.size() <= NON_SOLVABLE_BOUND) {
        w.step()?;
    }
    let closed = w.is_closed();
    let ball = w.into_set();
    if closed {
        return Ok(GenTestReport {
            verdict: classify_closure(ctx, s, &ball),
            route: GenRoute::WordSearch,
            closure_size: Some(ball.len()),
            sample_size: ball.len(),
            quadruples_checked: 0,
            witness: None,
        });
    }
    // evenly spaced sources across the ball
    let step = (ball.len() / COMMUTATOR_SOURCES).max(1);
    let sources: Vec<Elem> = ball.elems(ctx).step_by(step).take(COMMUTATOR_SOURCES).collect();
    let mut comms: Vec<(Elem, usize, usize)> = Vec::new();
    let mut seen = HashSet::new();
    for i in 0..sources.len() {
        for j in i + 1..sources.len() {
            let c = ctx.commutator(&sources[i], &sources[j]);
            if !ctx.is_identity(&c) && seen.insert(ctx.key(&c)) {
                comms.push((c, i, j));
            }
        }
    }
    let mut checked = 0u64;
    for a in 0..comms.len() {
        for b in a + 1..comms.len() {
            if checked >= QUADRUPLE_CAP {
                break;
            }
            checked += 1;
            if !ctx.commutes(&comms[a].0, &comms[b].0) {
                let k = |i: usize| ctx.key(&sources[i]);
                return Ok(GenTestReport {
                    verdict: GenVerdict::GeneratesSl2,
                    route: GenRoute::WordSearch,
                    closure_size: None,
                    sample_size: ball.len(),
                    quadruples_checked: checked,
                    witness: Some([k(comms[a].1), k(comms[a].2), k(comms[b].1), k(comms[b].2)]),
                });
            }
        }
    }
    Ok(GenTestReport {
        verdict: GenVerdict::ProperSolvableWitness,
        route: GenRoute::WordSearch,
        closure_size: None,
        sample_size: ball.len(),
        quadruples_checked: checked,
        witness: None,
    })
}

fn classify_closure(ctx: &GroupCtx, s: &ElemSet, h: &ElemSet) -> GenVerdict {
    if h.len() as u128 == ctx.order() {
        GenVerdict::GeneratesSl2
    } else if h.len() <= SMALL_ORDER {
        GenVerdict::ProperSmall
    } else if derived_subgroup_is_abelian(ctx, s, h) {
        GenVerdict::ProperSolvableWitness
    } else {
        GenVerdict::ProperSmall
    }
}

/// `[H, H]` is the normal closure of the commutators of generators; it is
/// abelian iff a generating set of it pairwise commutes.
pub(crate) fn derived_subgroup_is_abelian(ctx: &GroupCtx, s: &ElemSet, h: &ElemSet) -> bool {
    let gens = s.to_elems(ctx);
    let mut comms = Vec::new();
    for x in &gens {
        for y in &gens {
            let c = ctx.commutator(x, y);
            if !ctx.is_identity(&c) {
                comms.push(c);
            }
        }
    }
    let conj: ElemSet = ElemSet::from_elems(
        ctx,
        h.elems(ctx).flat_map(|x| comms.iter().map(move |c| ctx.conj(c, &x))).collect::<Vec<_>>(),
    );
    let mut basis: Vec<Elem> = Vec::new();
    let mut span = ElemSet::singleton(ctx, &ctx.identity());
    for c in conj.elems(ctx) {
        if !span.contains_elem(ctx, &c) {
            basis.push(c);
            span = closure(ctx, &basis, h.len()).expect("inside a known subgroup");
        }
    }
    basis.iter().all(|x| basis.iter().all(|y| ctx.commutes(x, y)))
}

/// `[[a, b], [c, t - a]]` with determinant one, for all `a` and `b ≠ 0`.
fn trace_fibre_sample(ctx: &GroupCtx, t: Fq) -> Vec<Elem> {
    let f = ctx.field();
    let mut out = Vec::new();
    for a in f.elements() {
        let d = f.sub(t, a);
        for b in f.elements().skip(1) {
            // ad - bc = 1
            let c = f.div(f.sub(f.mul(a, d), 1), b).unwrap();
            out.push(ctx.elem(&[a, b, c, d]).expect("determinant one by construction"));
        }
    }
    out
}

/// A subgroup of order exactly `target` generated by an element of trace
/// `t1` and one of trace `t2`, found by scanning pairs in a fixed order.
pub fn find_two_trace_subgroup(ctx: &GroupCtx, t1: Fq, t2: Fq, target: usize) -> Option<ElemSet> {
    let x = *trace_fibre_sample(ctx, t1).first()?;
    trace_fibre_sample(ctx, t2).into_iter().find_map(|y| {
        let h = closure(ctx, &[x, y], target).ok()?;
        (h.len() == target).then(|| ElemSet::from_elems(ctx, [x, y]))
    })
}

/// Generating sets with known answers for `SL_2(F_p)`, `p >= 5`: the
/// elementary set, three random pairs, a Borel pair, `{±I}`, the normaliser of
/// the diagonal torus, a binary tetrahedral subgroup (order 24) and, when
/// `p ≡ ±1 mod 10`, a binary icosahedral subgroup (order 120).
pub fn generation_corpus(ctx: &GroupCtx, seed: u64) -> Result<Vec<(String, ElemSet)>> {
    check_gen_ctx(ctx)?;
    let f = ctx.field();
    let p = f.p();
    let two_inv = f.inv(2)?;
    let mut out = vec![("elementary".to_string(), ctx.elementary_set())];
    for i in 0..3 {
        let mut rng = stream(seed, "corpus-pair", i);
        let a = crate::matgroup::random_element(ctx, &mut rng);
        let b = crate::matgroup::random_element(ctx, &mut rng);
        out.push((format!("random-pair-{i}"), ElemSet::from_elems(ctx, [a, b])));
    }
    let g = primitive_element(f);
    let diag = ctx.diag(&[g, f.inv(g)?])?;
    out.push(("borel".into(), ElemSet::from_elems(ctx, [ctx.transvection(0, 1, 1), ctx.diag(&[2, two_inv])?])));
    out.push(("center".into(), ElemSet::from_elems(ctx, ctx.center())));
    let w = ctx.elem_from_ints(&[0, -1, 1, 0])?;
    out.push(("torus-normalizer".into(), ElemSet::from_elems(ctx, [diag, w])));
    if let Some(h) = find_two_trace_subgroup(ctx, 0, 1, 24) {
        out.push(("binary-tetrahedral".into(), h));
    }
    if p % 10 == 1 || p % 10 == 9 {
        if let Some(h) = find_two_trace_subgroup(ctx, 0, 1, 120) {
            out.push(("binary-icosahedral".into(), h));
        }
    }
    Ok(out)
}

/// `[[h1, h2], [h3, h4]]` for `h_i = lift(t[3i], t[3i+1], t[3i+2])`; `None`
/// where a denominator vanishes.
pub fn lifted_double_commutator(ctx: &GroupCtx, t: &[Fq; 12]) -> Option<Elem> {
    let h: Vec<Elem> = (0..4).map(|i| lift_matrix(ctx, t[3 * i], t[3 * i + 1], t[3 * i + 2]).ok()).collect::<Option<_>>()?;
    Some(ctx.commutator(&ctx.commutator(&h[0], &h[1]), &ctx.commutator(&h[2], &h[3])))
}

/// A point of `F_p^{12}` where the lifted double commutator is not the
/// identity, so the cleared-denominator polynomial is not identically zero.
pub fn commutator_witness(ctx: &GroupCtx, seed: u64, tries: usize) -> Result<Option<[Fq; 12]>> {
    check_gen_ctx(ctx)?;
    let mut rng = stream(seed, "commutator-witness", 0);
    let q = ctx.q();
    for _ in 0..tries {
        let mut t = [0 as Fq; 12];
        for x in t.iter_mut() {
            *x = rng.random_range(0..q);
        }
        if let Some(c) = lifted_double_commutator(ctx, &t) {
            if !ctx.is_identity(&c) {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

/// Sparse multivariate polynomial; exponent vectors map to nonzero
/// coefficients, so the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldCtx,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Fq>,
}

impl Poly {
    pub fn zero(field: FieldCtx, nvars: usize) -> Self {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: FieldCtx, nvars: usize, c: Fq) -> Self {
        let mut p = Self::zero(field, nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// `x_{i+1}`.
    pub fn var(field: FieldCtx, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.terms.insert(e, 1);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Coefficient inspection.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn max_var_degree(&self) -> u32 {
        (0..self.nvars).map(|i| self.degree_in(i)).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Fq) {
        let f = self.field;
        let entry = self.terms.entry(e).or_insert(0);
        *entry = f.add(*entry, c);
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly { terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, f.mul(c1, c2));
            }
        }
        out
    }

    pub fn eval(&self, xs: &[Fq]) -> Fq {
        let f = self.field;
        self.terms.iter().fold(0, |acc, (e, &c)| {
            let m = e.iter().zip(xs).fold(c, |m, (&k, &x)| f.mul(m, f.pow(x, k as u64)));
            f.add(acc, m)
        })
    }

    /// Expands a division-free expression.
    pub fn from_expr(field: FieldCtx, nvars: usize, e: &ExprTree) -> Result<Poly> {
        if e.arity() > nvars {
            return Err(Error::pre(format!("expression uses {} variables, only {nvars} declared", e.arity())));
        }
        Ok(match e {
            ExprTree::Const(c) => Poly::constant(field, nvars, field.from_int(*c)),
            ExprTree::Var(i) => Poly::var(field, nvars, *i),
            ExprTree::Neg(a) => Poly::from_expr(field, nvars, a)?.neg(),
            ExprTree::Add(a, b) => Poly::from_expr(field, nvars, a)?.add(&Poly::from_expr(field, nvars, b)?),
            ExprTree::Sub(a, b) => Poly::from_expr(field, nvars, a)?.sub(&Poly::from_expr(field, nvars, b)?),
            ExprTree::Mul(a, b) => Poly::from_expr(field, nvars, a)?.mul(&Poly::from_expr(field, nvars, b)?),
            ExprTree::Div(..) => return Err(Error::pre("polynomials cannot contain division")),
        })
    }
}

/// True iff `poly` vanishes on `S^m`. With every per-variable degree below
/// `|S|`, vanishing on the grid forces the polynomial to be zero.
pub fn grid_vanishing_check(poly: &Poly, s: &ScalarSet) -> Result<bool> {
    let m = poly.nvars();
    if m > 4 {
        return Err(Error::pre(format!("{m} variables exceed the limit of 4")));
    }
    if poly.field != s.field {
        return Err(Error::pre("polynomial and grid live over different fields"));
    }
    let d = poly.max_var_degree();
    if s.len() as u64 <= d as u64 {
        return Err(Error::pre(format!("inconclusive: |S| = {} does not exceed the degree {d}", s.len())));
    }
    check_tuples(s.len(), m)?;
    let v = &s.values;
    let mut idx = vec![0usize; m];
    let mut xs = vec![0 as Fq; m];
    loop {
        for (x, &i) in xs.iter_mut().zip(&idx) {
            *x = v[i];
        }
        if poly.eval(&xs) != 0 {
            return Ok(false);
        }
        let mut k = 0;
        loop {
            if k == m {
                return Ok(true);
            }
            idx[k] += 1;
            if idx[k] < v.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
