//! Exact arithmetic over `F_p` and `F_{p^2}`.
//!
//! Elements are plain `u32` codes. For `F_p` the code is the canonical
//! residue in `[0, p)`. For `F_{p^2}` the element `a + b·θ` (θ a root of the
//! context's modulus) is coded as `a + b·p`, so codes always lie in `[0, q)`
//! and the ordering of codes is fixed by the field alone.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A field element code, always in `[0, q)`.
pub type Fq = u32;

/// Upper bound (exclusive) for the characteristic.
pub const MAX_PRIME: u64 = 1 << 31;

/// Upper bound (exclusive) for the characteristic of a quadratic extension,
/// so that element codes fit in `u32`.
pub const MAX_PRIME_QUADRATIC: u64 = 1 << 16;

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Result of a quadratic-residue test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Square {
    Yes,
    No,
    Zero,
}

/// Arithmetic context for `F_p` (k = 1) or `F_{p^2}` (k = 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    /// `(b, c)` for the modulus `x^2 + b x + c`; present iff `k == 2`.
    modulus: Option<(u32, u32)>,
}

impl FieldCtx {
    /// Builds `F_{p^k}`. For `k = 2` the modulus is the lexicographically
    /// least (in `(b, c)`) irreducible monic quadratic `x^2 + b x + c`.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) || p >= MAX_PRIME {
            return Err(Error::NotPrime(p));
        }
        match k {
            1 => Ok(FieldCtx { p: p as u32, k: 1, q: p as u32, modulus: None }),
            2 => {
                if p >= MAX_PRIME_QUADRATIC {
                    return Err(Error::pre(format!(
                        "quadratic extensions need p < {MAX_PRIME_QUADRATIC}, got {p}"
                    )));
                }
                let modulus = least_irreducible_quadratic(p);
                Ok(FieldCtx { p: p as u32, k: 2, q: (p * p) as u32, modulus: Some(modulus) })
            }
            _ => Err(Error::UnsupportedDegree(k)),
        }
    }

    /// Shorthand for the prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> Option<(u32, u32)> {
        self.modulus
    }

    pub fn zero(&self) -> Fq {
        0
    }

    pub fn one(&self) -> Fq {
        1
    }

    /// Iterates over all elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q
    }

    /// The prime-field element congruent to `v`.
    pub fn from_int(&self, v: i64) -> Fq {
        v.rem_euclid(self.p as i64) as Fq
    }

    /// Splits a code into `(a, b)` with `x = a + b·θ`.
    pub fn parts(&self, x: Fq) -> (u32, u32) {
        if self.k == 1 {
            (x, 0)
        } else {
            (x % self.p, x / self.p)
        }
    }

    pub fn from_parts(&self, a: u32, b: u32) -> Fq {
        debug_assert!(a < self.p && b < self.p);
        if self.k == 1 {
            debug_assert_eq!(b, 0);
            a
        } else {
            a + b * self.p
        }
    }

    /// The generator θ of `F_{p^2}` over `F_p`; `None` for prime fields.
    pub fn theta(&self) -> Option<Fq> {
        (self.k == 2).then(|| self.from_parts(0, 1))
    }

    /// True iff `x` lies in the prime subfield.
    pub fn in_prime_subfield(&self, x: Fq) -> bool {
        x < self.p
    }

    #[inline]
    fn add_p(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    fn sub_p(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    fn mul_p(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        if self.k == 1 {
            return self.add_p(x, y);
        }
        let (a, b) = self.parts(x);
        let (c, d) = self.parts(y);
        self.from_parts(self.add_p(a, c), self.add_p(b, d))
    }

    #[inline]
    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        if self.k == 1 {
            return self.sub_p(x, y);
        }
        let (a, b) = self.parts(x);
        let (c, d) = self.parts(y);
        self.from_parts(self.sub_p(a, c), self.sub_p(b, d))
    }

    #[inline]
    pub fn neg(&self, x: Fq) -> Fq {
        self.sub(0, x)
    }

    #[inline]
    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        if self.k == 1 {
            return self.mul_p(x, y);
        }
        // θ^2 = -bθ - c
        let (mb, mc) = self.modulus.expect("quadratic field has a modulus");
        let (a, b) = self.parts(x);
        let (c, d) = self.parts(y);
        let bd = self.mul_p(b, d);
        let re = self.sub_p(self.mul_p(a, c), self.mul_p(mc, bd));
        let im = self.sub_p(self.add_p(self.mul_p(a, d), self.mul_p(b, c)), self.mul_p(mb, bd));
        self.from_parts(re, im)
    }

    pub fn pow(&self, x: Fq, mut e: u64) -> Fq {
        let mut base = x;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse: extended Euclid on `F_p`, norm trick on `F_{p^2}`.
    pub fn inv(&self, x: Fq) -> Result<Fq> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.k == 1 {
            return Ok(inv_mod(x, self.p));
        }
        // (a + bθ)(a + bθ') = a^2 - abB + b^2 C with θ' = -B - θ the conjugate root.
        let (mb, mc) = self.modulus.expect("quadratic field has a modulus");
        let (a, b) = self.parts(x);
        let norm = self.add_p(
            self.sub_p(self.mul_p(a, a), self.mul_p(self.mul_p(a, b), mb)),
            self.mul_p(self.mul_p(b, b), mc),
        );
        let n_inv = inv_mod(norm, self.p);
        let conj_re = self.sub_p(a, self.mul_p(b, mb));
        let conj_im = self.sub_p(0, b);
        Ok(self.from_parts(self.mul_p(conj_re, n_inv), self.mul_p(conj_im, n_inv)))
    }

    pub fn div(&self, x: Fq, y: Fq) -> Result<Fq> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Frobenius `x -> x^p`.
    pub fn frobenius(&self, x: Fq) -> Fq {
        self.pow(x, self.p as u64)
    }

    /// Euler's criterion. Only defined on prime fields.
    pub fn is_square(&self, d: Fq) -> Result<Square> {
        if self.k != 1 {
            return Err(Error::pre("is_square is only defined on prime fields"));
        }
        if d == 0 {
            return Ok(Square::Zero);
        }
        if self.p == 2 {
            return Ok(Square::Yes);
        }
        Ok(if self.pow(d, (self.p as u64 - 1) / 2) == 1 { Square::Yes } else { Square::No })
    }

    /// Minimum number of bits needed to hold any element code.
    pub fn bits(&self) -> u32 {
        32 - (self.q - 1).leading_zeros().min(31)
    }

    // --- dense polynomials, coefficients low to high ---

    /// Removes leading zero coefficients.
    pub fn poly_trim(&self, f: &mut Vec<Fq>) {
        while f.last() == Some(&0) {
            f.pop();
        }
    }

    pub fn poly_derivative(&self, f: &[Fq]) -> Vec<Fq> {
        let mut out: Vec<Fq> = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, self.from_int(i as i64)))
            .collect();
        self.poly_trim(&mut out);
        out
    }

    /// Remainder of `f` modulo a nonzero `g`.
    pub fn poly_rem(&self, f: &[Fq], g: &[Fq]) -> Result<Vec<Fq>> {
        let mut g = g.to_vec();
        self.poly_trim(&mut g);
        let lead = *g.last().ok_or(Error::DivisionByZero)?;
        let lead_inv = self.inv(lead)?;
        let mut r = f.to_vec();
        self.poly_trim(&mut r);
        while r.len() >= g.len() {
            let shift = r.len() - g.len();
            let factor = self.mul(*r.last().unwrap(), lead_inv);
            for (i, &gc) in g.iter().enumerate() {
                r[i + shift] = self.sub(r[i + shift], self.mul(factor, gc));
            }
            self.poly_trim(&mut r);
        }
        Ok(r)
    }

    /// Monic greatest common divisor; the zero polynomial is `[]`.
    pub fn poly_gcd(&self, f: &[Fq], g: &[Fq]) -> Vec<Fq> {
        let mut a = f.to_vec();
        let mut b = g.to_vec();
        self.poly_trim(&mut a);
        self.poly_trim(&mut b);
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b).expect("b is nonzero");
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let li = self.inv(lead).expect("nonzero leading coefficient");
            for c in a.iter_mut() {
                *c = self.mul(*c, li);
            }
        }
        a
    }

    /// Evaluates `f` at `x` by Horner's rule.
    pub fn poly_eval(&self, f: &[Fq], x: Fq) -> Fq {
        f.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.k)
        }
    }
}

fn inv_mod(x: u32, p: u32) -> u32 {
    let (mut old_r, mut r) = (x as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(p as i64) as u32
}

fn least_irreducible_quadratic(p: u64) -> (u32, u32) {
    for b in 0..p {
        for c in 0..p {
            let has_root = (0..p).any(|r| (r * r + b * r + c) % p == 0);
            if !has_root {
                return (b as u32, c as u32);
            }
        }
    }
    unreachable!("every prime field has an irreducible quadratic")
}
