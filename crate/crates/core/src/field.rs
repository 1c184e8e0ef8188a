//! Finite fields `F_q`, `q = p^m`, in a polynomial basis.
//!
//! Elements are stored as a single integer index: the polynomial
//! `a_0 + a_1 x + ... + a_{m-1} x^{m-1}` is encoded as `sum a_i p^i`. Index 0
//! is zero and index 1 is one. Arithmetic is table-free; the fields we care
//! about are tiny.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest field order accepted by [`FieldSpec::new`].
pub const MAX_ORDER: u64 = 1 << 20;

/// A field element, by canonical index in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic context for `F_{p^m}`.
///
/// Immutable once built. `modulus` holds the monic defining polynomial,
/// constant term first, and is empty for prime fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// Builds `F_{p^m}`. Without an explicit modulus and with `m > 1`, the
    /// lexicographically smallest monic irreducible of degree `m` (ordered by
    /// the tuple `(c_0, ..., c_{m-1})`) is used.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER).ok_or(Error::FieldTooLarge {
            p,
            m,
            cap: MAX_ORDER,
        })?;
        let modulus = match (m, modulus) {
            (1, None) => Vec::new(),
            (1, Some(c)) if c.is_empty() => Vec::new(),
            (_, Some(c)) => {
                if c.len() != m as usize + 1 || c[m as usize] != 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected a monic polynomial of degree {m}, got {c:?}"
                    )));
                }
                if c.iter().any(|&x| x >= p) {
                    return Err(Error::InvalidModulus(format!("coefficient out of range in {c:?}")));
                }
                if m == 1 {
                    // A linear modulus only re-labels F_p; keep the canonical encoding.
                    Vec::new()
                } else {
                    if !is_irreducible(p, c) {
                        return Err(Error::InvalidModulus(format!("{c:?} is reducible over F_{p}")));
                    }
                    c.to_vec()
                }
            }
            (_, None) => smallest_irreducible(p, m as usize),
        };
        Ok(FieldSpec { p, m, q: q as u32, modulus })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, constant term first; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    pub fn element(&self, index: u32) -> Result<Fe> {
        if index < self.q {
            Ok(Fe(index))
        } else {
            Err(Error::ElementOutOfRange { index: index as u64, q: self.q })
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    fn digits(&self, a: Fe) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.m as usize);
        let mut x = a.0;
        for _ in 0..self.m {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    fn undigits(&self, d: &[u32]) -> Fe {
        Fe(d.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.m == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&s)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.m == 1 {
            return Fe(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.undigits(&d)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.m == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let p = self.p as u64;
        let m = self.m as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^m = -(c_0 + ... + c_{m-1} x^{m-1})
        for k in (m..prod.len()).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &c) in self.modulus[..m].iter().enumerate() {
                let idx = k - m + i;
                prod[idx] = (prod[idx] + (p - lead) * c as u64) % p;
            }
        }
        let d: Vec<u32> = prod[..m].iter().map(|&x| x as u32).collect();
        self.undigits(&d)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse: Fermat for prime fields, extended Euclid over
    /// `F_p[x]` otherwise.
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.m == 1 {
            return Ok(self.pow(a, self.p as u64 - 2));
        }
        Ok(self.undigits(&self.ext_euclid_inverse(&self.digits(a))))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        // The Frobenius map has order m.
        let mut x = a;
        for _ in 0..(k % self.m) {
            x = self.pow(x, self.p as u64);
        }
        x
    }

    fn ext_euclid_inverse(&self, a: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut r0 = self.modulus.clone();
        let mut r1 = trim(a.to_vec());
        let mut s0: Vec<u32> = vec![];
        let mut s1: Vec<u32> = vec![1];
        while !r1.is_empty() {
            let (quo, rem) = fp_divmod(p, &r0, &r1);
            let s2 = fp_sub(p, &s0, &fp_mul(p, &quo, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible.
        let c = r0[0];
        let cinv = fp_pow(p, c, p - 2);
        let mut out: Vec<u32> = s0.iter().map(|&x| ((x as u64 * cinv as u64) % p as u64) as u32).collect();
        out.resize(self.m as usize, 0);
        out
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FieldSpec", 3)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("p", &self.p)?;
        st.end()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.m)
        }
    }
}

// Plain F_p[x] helpers on coefficient vectors, used for modulus validation and
// inversion. Kept apart from `series::Poly`, which lives over F_q.

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_pow(p: u32, a: u32, mut e: u32) -> u32 {
    let (mut b, mut acc, p) = (a as u64, 1u64, p as u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc as u32
}

fn fp_sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(v)
}

fn fp_mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|x| x as u32).collect())
}

fn fp_divmod(p: u32, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead_inv = fp_pow(p, *b.last().unwrap(), p - 2) as u64;
    let mut quo = vec![0u32; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as u64 * lead_inv % p as u64) as u32;
        quo[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            let t = (c as u64 * bc as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    (trim(quo), r)
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
pub(crate) fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let f = trim(modulus.to_vec());
    let m = f.len().saturating_sub(1);
    if m == 0 {
        return false;
    }
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                div.push((x % p as u64) as u32);
                x /= p as u64;
            }
            div.push(1);
            if fp_divmod(p, &f, &div).1.is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    let count = (p as u64).pow(m as u32);
    // Tuple order with c_0 most significant.
    for idx in 0..count {
        let mut c = vec![0u32; m + 1];
        let mut x = idx;
        for slot in c[..m].iter_mut().rev() {
            *slot = (x % p as u64) as u32;
            x /= p as u64;
        }
        c[m] = 1;
        if is_irreducible(p, &c) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
