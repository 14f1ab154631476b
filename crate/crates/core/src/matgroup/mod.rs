//! Elements of `SL_n(F_q)` for `n` in {2, 3}.
//!
//! A [`GroupCtx`] owns everything that depends on `(n, q)`: the group law,
//! the canonical [`ElemKey`] packing, a dense perfect index used by the
//! visited bitsets, and the dimension table of the standard subvarieties.

mod closure;
mod finite_index;
mod marks;
mod sample;
mod set;
mod torus;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finfield::{FieldCtx, Fq};

pub use closure::{closure, enumerate_group, BallWalker, ENUMERATION_CAP};
pub use finite_index::finite_index_generation_check;
pub use marks::DENSE_INDEX_LIMIT;
pub(crate) use marks::Marks;
pub use sample::{random_element, random_symmetric_set};
pub use set::ElemSet;
pub use torus::{centralizer_set, normalizer_set, torus_key, Ambient, TorusId};

/// Canonical packed encoding of a matrix: entries in row-major order, each in
/// `ctx.bits()` bits, first entry most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ElemKey(pub u128);

impl fmt::Display for ElemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An `n × n` matrix of determinant one. Entries beyond `n * n` are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Elem {
    n: u8,
    e: [Fq; 9],
}

impl Elem {
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Fq] {
        &self.e[..self.n() * self.n()]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.e[i * self.n() + j]
    }

    pub(crate) fn raw(n: usize, entries: &[Fq]) -> Self {
        let mut e = [0; 9];
        e[..n * n].copy_from_slice(entries);
        Elem { n: n as u8, e }
    }
}

/// Standard subvarieties of `SL_n` with a tabulated dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StdVariety {
    Group,
    MaximalTorus,
    RegularSsConjugacyClass,
    SingularSet,
    CentralizerRegularSs,
}

/// Ambient data for `SL_n(F_q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCtx {
    field: FieldCtx,
    n: usize,
    bits: u32,
    #[serde(serialize_with = "ser_u128")]
    order: u128,
}

fn ser_u128<S: serde::Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl GroupCtx {
    pub fn new(field: FieldCtx, n: usize) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let bits = field.bits();
        if bits as usize * n * n > 128 {
            return Err(Error::pre(format!(
                "keys for SL_{n}({field}) do not fit in 128 bits"
            )));
        }
        let order = sl_order(n, field.q() as u128)?;
        Ok(GroupCtx { field, n, bits, order })
    }

    /// `SL_n(F_{p^k})`.
    pub fn sl(n: usize, p: u64, k: u32) -> Result<Self> {
        Self::new(FieldCtx::new(p, k)?, n)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Bits per entry in an [`ElemKey`].
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `dim SL_n = n^2 - 1`.
    pub fn dim(&self) -> usize {
        self.n * self.n - 1
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// `|SL_n(F_q)|` from the product formula.
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn dim_of(&self, v: StdVariety) -> usize {
        let n = self.n;
        match v {
            StdVariety::Group => n * n - 1,
            StdVariety::MaximalTorus => n - 1,
            StdVariety::RegularSsConjugacyClass => n * n - n,
            StdVariety::SingularSet => n * n - 2,
            StdVariety::CentralizerRegularSs => n - 1,
        }
    }

    /// Smallest degree of a nontrivial complex representation, where it is
    /// known in closed form: `(p - 1) / 2` for `SL_2(F_p)`, `p >= 5`.
    pub fn d_min(&self) -> Option<u64> {
        let p = self.field.p() as u64;
        (self.n == 2 && self.field.degree() == 1 && p >= 5).then(|| (p - 1) / 2)
    }

    // --- construction ---

    pub fn identity(&self) -> Elem {
        let mut e = [0; 9];
        for i in 0..self.n {
            e[i * self.n + i] = 1;
        }
        Elem { n: self.n as u8, e }
    }

    /// Builds an element from row-major entries, checking range and determinant.
    pub fn elem(&self, entries: &[Fq]) -> Result<Elem> {
        if entries.len() != self.n * self.n {
            return Err(Error::pre(format!(
                "expected {} entries, got {}",
                self.n * self.n,
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&x| x >= self.q()) {
            return Err(Error::pre(format!("entry {bad} is not a code of {}", self.field)));
        }
        let g = Elem::raw(self.n, entries);
        if self.det_raw(&g) != 1 {
            return Err(Error::pre("matrix does not have determinant 1"));
        }
        Ok(g)
    }

    /// Like [`GroupCtx::elem`] but from signed integers reduced into `F_p`.
    pub fn elem_from_ints(&self, entries: &[i64]) -> Result<Elem> {
        let codes: Vec<Fq> = entries.iter().map(|&v| self.field.from_int(v)).collect();
        self.elem(&codes)
    }

    /// Diagonal element; entries must multiply to one.
    pub fn diag(&self, d: &[Fq]) -> Result<Elem> {
        let mut e = vec![0; self.n * self.n];
        for (i, &x) in d.iter().enumerate().take(self.n) {
            e[i * self.n + i] = x;
        }
        self.elem(&e)
    }

    /// Elementary transvection `I + t·E_ij`.
    pub fn transvection(&self, i: usize, j: usize, t: Fq) -> Elem {
        assert!(i != j && i < self.n && j < self.n);
        let mut g = self.identity();
        g.e[i * self.n + j] = t;
        g
    }

    /// Transvections `I ± t·E_ij` with `t` running over an `F_p`-basis of
    /// `F_q`. They generate `SL_n(F_q)`.
    pub fn elementary_generators(&self) -> Vec<Elem> {
        let f = &self.field;
        let mut basis = vec![f.one()];
        basis.extend(f.theta());
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                for &t in &basis {
                    out.push(self.transvection(i, j, t));
                    out.push(self.transvection(i, j, f.neg(t)));
                }
            }
        }
        let mut keys: Vec<(ElemKey, Elem)> = out.into_iter().map(|g| (self.key(&g), g)).collect();
        keys.sort_by_key(|(k, _)| *k);
        keys.dedup_by_key(|(k, _)| *k);
        keys.into_iter().map(|(_, g)| g).collect()
    }

    /// The elementary generators together with the identity, as a symmetric set.
    pub fn elementary_set(&self) -> ElemSet {
        let mut gens = self.elementary_generators();
        gens.push(self.identity());
        ElemSet::from_elems(self, gens).with_symmetric_flag(true)
    }

    // --- group law ---

    #[inline]
    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let f = &self.field;
        if self.n == 2 {
            let (a0, a1, a2, a3) = (a.e[0], a.e[1], a.e[2], a.e[3]);
            let (b0, b1, b2, b3) = (b.e[0], b.e[1], b.e[2], b.e[3]);
            if f.degree() == 1 {
                let p = f.p() as u64;
                let m = |x: Fq, y: Fq, z: Fq, w: Fq| -> Fq {
                    ((x as u64 * y as u64 + z as u64 * w as u64) % p) as Fq
                };
                let mut e = [0; 9];
                e[0] = m(a0, b0, a1, b2);
                e[1] = m(a0, b1, a1, b3);
                e[2] = m(a2, b0, a3, b2);
                e[3] = m(a2, b1, a3, b3);
                return Elem { n: 2, e };
            }
            let mut e = [0; 9];
            e[0] = f.add(f.mul(a0, b0), f.mul(a1, b2));
            e[1] = f.add(f.mul(a0, b1), f.mul(a1, b3));
            e[2] = f.add(f.mul(a2, b0), f.mul(a3, b2));
            e[3] = f.add(f.mul(a2, b1), f.mul(a3, b3));
            return Elem { n: 2, e };
        }
        let n = self.n;
        let mut e = [0; 9];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = f.add(acc, f.mul(a.e[i * n + k], b.e[k * n + j]));
                }
                e[i * n + j] = acc;
            }
        }
        Elem { n: n as u8, e }
    }

    /// Inverse via the adjugate (valid since `det = 1`).
    pub fn inverse(&self, a: &Elem) -> Elem {
        let f = &self.field;
        let e = &a.e;
        if self.n == 2 {
            let mut o = [0; 9];
            o[0] = e[3];
            o[1] = f.neg(e[1]);
            o[2] = f.neg(e[2]);
            o[3] = e[0];
            return Elem { n: 2, e: o };
        }
        let m = |i: usize, j: usize| e[i * 3 + j];
        let mut o = [0; 9];
        for i in 0..3 {
            for j in 0..3 {
                // cofactor C_ji goes to position (i, j)
                let (r0, r1) = others(j);
                let (c0, c1) = others(i);
                let minor = f.sub(f.mul(m(r0, c0), m(r1, c1)), f.mul(m(r0, c1), m(r1, c0)));
                o[i * 3 + j] = if (i + j) % 2 == 0 { minor } else { f.neg(minor) };
            }
        }
        Elem { n: 3, e: o }
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = *a;
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `x^{-1} a x`.
    pub fn conj(&self, a: &Elem, x: &Elem) -> Elem {
        self.mul(&self.mul(&self.inverse(x), a), x)
    }

    /// `[a, b] = a^{-1} b^{-1} a b`.
    pub fn commutator(&self, a: &Elem, b: &Elem) -> Elem {
        let ai = self.inverse(a);
        let bi = self.inverse(b);
        self.mul(&self.mul(&ai, &bi), &self.mul(a, b))
    }

    pub fn commutes(&self, a: &Elem, b: &Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_identity(&self, a: &Elem) -> bool {
        *a == self.identity()
    }

    /// Smallest `k >= 1` with `a^k = id`.
    pub fn element_order(&self, a: &Elem) -> u64 {
        let id = self.identity();
        let mut x = *a;
        let mut k = 1;
        while x != id {
            x = self.mul(&x, a);
            k += 1;
        }
        k
    }

    pub fn trace(&self, a: &Elem) -> Fq {
        let f = &self.field;
        (0..self.n).fold(0, |acc, i| f.add(acc, a.get(i, i)))
    }

    fn det_raw(&self, a: &Elem) -> Fq {
        let f = &self.field;
        let e = &a.e;
        if self.n == 2 {
            return f.sub(f.mul(e[0], e[3]), f.mul(e[1], e[2]));
        }
        let m = |i: usize, j: usize| e[i * 3 + j];
        let t0 = f.mul(m(0, 0), f.sub(f.mul(m(1, 1), m(2, 2)), f.mul(m(1, 2), m(2, 1))));
        let t1 = f.mul(m(0, 1), f.sub(f.mul(m(1, 0), m(2, 2)), f.mul(m(1, 2), m(2, 0))));
        let t2 = f.mul(m(0, 2), f.sub(f.mul(m(1, 0), m(2, 1)), f.mul(m(1, 1), m(2, 0))));
        f.add(f.sub(t0, t1), t2)
    }

    /// Determinant of an `n × n` matrix given by row-major codes.
    pub fn det_of(&self, entries: &[Fq]) -> Fq {
        self.det_raw(&Elem::raw(self.n, entries))
    }

    pub fn det(&self, a: &Elem) -> Fq {
        self.det_raw(a)
    }

    /// Monic characteristic polynomial, coefficients low to high.
    pub fn char_poly(&self, a: &Elem) -> Vec<Fq> {
        let f = &self.field;
        let tr = self.trace(a);
        if self.n == 2 {
            // x^2 - tr x + det
            return vec![self.det_raw(a), f.neg(tr), 1];
        }
        // x^3 - tr x^2 + c2 x - det, c2 = sum of principal 2x2 minors
        let e = &a.e;
        let minor = |i: usize, j: usize| {
            f.sub(f.mul(e[i * 3 + i], e[j * 3 + j]), f.mul(e[i * 3 + j], e[j * 3 + i]))
        };
        let c2 = f.add(f.add(minor(0, 1), minor(0, 2)), minor(1, 2));
        vec![f.neg(self.det_raw(a)), c2, f.neg(tr), 1]
    }

    /// Regular semisimple: the characteristic polynomial is squarefree.
    /// Requires `q > n`.
    pub fn is_regular_ss(&self, a: &Elem) -> Result<bool> {
        if self.q() as usize <= self.n {
            return Err(Error::pre(format!(
                "regular semisimplicity test needs q > n (q = {}, n = {})",
                self.q(),
                self.n
            )));
        }
        Ok(self.is_squarefree_char_poly(a))
    }

    pub(crate) fn is_squarefree_char_poly(&self, a: &Elem) -> bool {
        let f = &self.field;
        let cp = self.char_poly(a);
        let g = f.poly_gcd(&cp, &f.poly_derivative(&cp));
        g.len() == 1
    }

    /// Scalar matrices, i.e. the centre of `SL_n`.
    pub fn is_central(&self, a: &Elem) -> bool {
        let d = a.get(0, 0);
        (0..self.n).all(|i| (0..self.n).all(|j| a.get(i, j) == if i == j { d } else { 0 }))
    }

    /// Scalars `λ·I` with `λ^n = 1`.
    pub fn center(&self) -> Vec<Elem> {
        let f = &self.field;
        f.elements()
            .filter(|&l| l != 0 && f.pow(l, self.n as u64) == 1)
            .map(|l| {
                let mut g = self.identity();
                for i in 0..self.n {
                    g.e[i * self.n + i] = l;
                }
                g
            })
            .collect()
    }

    /// True iff the minimal polynomial has degree `n`, i.e. `I, a, …, a^{n-1}`
    /// are linearly independent.
    pub fn is_nonderogatory(&self, a: &Elem) -> bool {
        if self.n == 2 {
            return !self.is_central(a);
        }
        let id = self.identity();
        let a2 = self.mul(a, a);
        let rows: Vec<Vec<Fq>> =
            [id, *a, a2].iter().map(|m| m.entries().to_vec()).collect();
        rank(&self.field, rows) == 3
    }

    // --- keys ---

    pub fn key(&self, a: &Elem) -> ElemKey {
        let mut k: u128 = 0;
        for &x in a.entries() {
            k = (k << self.bits) | x as u128;
        }
        ElemKey(k)
    }

    pub(crate) fn decode_unchecked(&self, key: ElemKey) -> Elem {
        let nn = self.n * self.n;
        let mask = (1u128 << self.bits) - 1;
        let mut e = [0; 9];
        for (i, slot) in e.iter_mut().take(nn).enumerate() {
            *slot = ((key.0 >> (self.bits as usize * (nn - 1 - i))) & mask) as Fq;
        }
        Elem { n: self.n as u8, e }
    }

    /// Inverse of [`GroupCtx::key`]; rejects keys that are not valid elements.
    pub fn decode(&self, key: ElemKey) -> Result<Elem> {
        let total_bits = self.bits as usize * self.n * self.n;
        if total_bits < 128 && key.0 >> total_bits != 0 {
            return Err(Error::pre(format!("key {key} has bits beyond the packing width")));
        }
        let g = self.decode_unchecked(key);
        self.elem(g.entries())
    }

    // --- dense indexing ---

    /// Size of the dense index space, if small enough for a bitset.
    pub fn index_space(&self) -> Option<usize> {
        let space: u128 = if self.n == 2 {
            let q = self.q() as u128;
            (q * q - 1) * q
        } else {
            1u128 << (self.bits as usize * 9)
        };
        (space <= DENSE_INDEX_LIMIT as u128).then_some(space as usize)
    }

    /// Dense index. For `n = 2` this is a perfect index onto `[0, |G|)`:
    /// the nonzero first row picks a block of `q`, and the free parameter of
    /// the second row picks the slot. For `n = 3` it is the raw key.
    #[inline]
    pub fn index_of(&self, a: &Elem) -> usize {
        if self.n == 2 {
            let q = self.q() as usize;
            let (x, y, z, w) = (a.e[0] as usize, a.e[1] as usize, a.e[2] as usize, a.e[3] as usize);
            let row = x * q + y - 1;
            let t = if x != 0 { z } else { w };
            row * q + t
        } else {
            self.key(a).0 as usize
        }
    }

    /// Inverse of [`GroupCtx::index_of`] on valid indices.
    pub fn elem_at(&self, idx: usize) -> Elem {
        if self.n == 2 {
            let f = &self.field;
            let q = self.q() as usize;
            let row = idx / q + 1;
            let t = (idx % q) as Fq;
            let (x, y) = ((row / q) as Fq, (row % q) as Fq);
            let (z, w) = if x != 0 {
                (t, f.div(f.add(1, f.mul(y, t)), x).expect("x != 0"))
            } else {
                (f.neg(f.inv(y).expect("nonzero first row")), t)
            };
            Elem::raw(2, &[x, y, z, w])
        } else {
            self.decode_unchecked(ElemKey(idx as u128))
        }
    }
}

impl fmt::Display for GroupCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SL_{}({})", self.n, self.field)
    }
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// `(q^n - 1)(q^n - q)…(q^n - q^{n-1}) / (q - 1)` in 128-bit arithmetic.
pub fn sl_order(n: usize, q: u128) -> Result<u128> {
    let overflow = || Error::budget(format!("|SL_{n}(F_{q})| does not fit in 128 bits"));
    let qn = q.checked_pow(n as u32).ok_or_else(overflow)?;
    let mut acc: u128 = 1;
    let mut qi: u128 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(qn - qi).ok_or_else(overflow)?;
        qi = qi.checked_mul(q).ok_or_else(overflow)?;
    }
    Ok(acc / (q - 1))
}

/// Rank of a list of vectors over `F_q` by Gaussian elimination.
pub(crate) fn rank(f: &FieldCtx, mut rows: Vec<Vec<Fq>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = f.mul(row[c], inv);
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        r += 1;
    }
    r
}
