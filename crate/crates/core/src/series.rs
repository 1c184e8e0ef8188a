//! Polynomials and truncated power series over a [`FieldSpec`].
//!
//! Values carry no field handle; every operation takes the field explicitly.
//! Univariate objects are dense, bivariate polynomials are sparse maps from
//! exponent pairs to nonzero coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{Fe, FieldSpec};
use crate::{Error, Result};

/// Dense univariate polynomial, constant term first, without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Fe::ONE] }
    }

    /// `c x^k`.
    pub fn monomial(c: Fe, k: usize) -> Self {
        let mut v = vec![Fe::ZERO; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// Builds a polynomial from integer coefficients mapped into the prime subfield.
    pub fn from_ints(f: &FieldSpec, coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| f.from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<Fe> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, f: &FieldSpec, x: Fe) -> Fe {
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &FieldSpec, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, f: &FieldSpec, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, f: &FieldSpec) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, f: &FieldSpec, c: Fe) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &FieldSpec, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, f: &FieldSpec, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// Returns `(quotient, remainder)` with `self = quotient * divisor + remainder`
    /// and `deg remainder < deg divisor`.
    pub fn divmod(&self, f: &FieldSpec, divisor: &Poly) -> Result<(Poly, Poly)> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.coeffs[db])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![Fe::ZERO; rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = f.mul(rem[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            quo[k - db] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                rem[k - db + i] = f.sub(rem[k - db + i], f.mul(c, b));
            }
        }
        rem.truncate(db);
        Ok((Poly::new(quo), Poly::new(rem)))
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self, f: &FieldSpec) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(f, f.inv(l).expect("leading coefficient is nonzero")),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, f: &FieldSpec, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divmod(f, &b).expect("nonzero divisor").1;
            a = std::mem::replace(&mut b, r);
        }
        a.monic(f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(fm, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(fm, " + ")?;
            }
            first = false;
            match i {
                0 => write!(fm, "{c}")?,
                1 => write!(fm, "{c}*x")?,
                _ => write!(fm, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Coefficients of `x^0 .. x^{N-1}` of a power series. Trailing zeros are
/// kept: the truncation order is the vector length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Fe>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Fe>) -> Self {
        TruncatedSeries { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        TruncatedSeries { coeffs: vec![Fe::ZERO; n] }
    }

    pub fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        if n > 0 {
            s.coeffs[0] = Fe::ONE;
        }
        s
    }

    pub fn from_poly(p: &Poly, n: usize) -> Self {
        TruncatedSeries { coeffs: (0..n).map(|i| p.coeff(i)).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Fe> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient, `None` if all are zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, n: usize) -> Result<Self> {
        self.require(n)?;
        Ok(TruncatedSeries { coeffs: self.coeffs[..n].to_vec() })
    }

    fn require(&self, n: usize) -> Result<()> {
        if self.order() < n {
            return Err(Error::InsufficientTerms { needed: n, available: self.order() });
        }
        Ok(())
    }

    pub fn add(&self, f: &FieldSpec, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        Ok(TruncatedSeries {
            coeffs: (0..n).map(|i| f.add(self.coeffs[i], other.coeffs[i])).collect(),
        })
    }

    pub fn sub(&self, f: &FieldSpec, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        Ok(TruncatedSeries {
            coeffs: (0..n).map(|i| f.sub(self.coeffs[i], other.coeffs[i])).collect(),
        })
    }

    pub fn scale(&self, f: &FieldSpec, c: Fe) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// Multiplies by `x^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![Fe::ZERO; n];
        if k < n {
            coeffs[k..].copy_from_slice(&self.coeffs[..n - k]);
        }
        TruncatedSeries { coeffs }
    }

    /// Product modulo `x^n`; both factors must be known to order `n`.
    pub fn mul(&self, f: &FieldSpec, other: &Self, n: usize) -> Result<Self> {
        self.require(n)?;
        other.require(n)?;
        let mut out = vec![Fe::ZERO; n];
        for (i, &a) in self.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `self^e mod x^n` by square-and-multiply; `e = 0` gives `1`.
    pub fn pow(&self, f: &FieldSpec, mut e: u64, n: usize) -> Result<Self> {
        self.require(n)?;
        let mut base = self.truncate(n)?;
        let mut acc = Self::one(n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base, n)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base, n)?;
            }
        }
        Ok(acc)
    }
}

/// The series `S` with `den * S = num mod x^n`, by forward substitution.
/// Requires `den(0) != 0`.
pub fn rational_expand(f: &FieldSpec, num: &Poly, den: &Poly, n: usize) -> Result<TruncatedSeries> {
    let d0 = den.coeff(0);
    if d0.is_zero() {
        return Err(Error::Precondition("denominator must have a nonzero constant term".into()));
    }
    let d0_inv = f.inv(d0)?;
    let mut s = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = num.coeff(i);
        let dd = den.degree().unwrap_or(0).min(i);
        for j in 1..=dd {
            acc = f.sub(acc, f.mul(den.coeff(j), s[i - j]));
        }
        s.push(f.mul(acc, d0_inv));
    }
    Ok(TruncatedSeries::new(s))
}

/// Sparse polynomial in `F_q[x, y]`, keyed by `(i, j)` for `x^i y^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BivariatePoly {
    terms: BTreeMap<(usize, usize), Fe>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms(f: &FieldSpec, terms: impl IntoIterator<Item = ((usize, usize), Fe)>) -> Self {
        let mut out = Self::zero();
        for ((i, j), c) in terms {
            out.add_term(f, i, j, c);
        }
        out
    }

    pub fn monomial(i: usize, j: usize, c: Fe) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BivariatePoly { terms }
    }

    pub fn add_term(&mut self, f: &FieldSpec, i: usize, j: usize, c: Fe) {
        let cur = self.terms.get(&(i, j)).copied().unwrap_or(Fe::ZERO);
        let v = f.add(cur, c);
        if v.is_zero() {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), v);
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Fe {
        self.terms.get(&(i, j)).copied().unwrap_or(Fe::ZERO)
    }

    /// Nonzero terms in `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Fe)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Degree in `y`; `None` for the zero polynomial.
    pub fn y_degree(&self) -> Option<usize> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn add(&self, f: &FieldSpec, other: &Self) -> Self {
        let mut out = self.clone();
        for ((i, j), c) in other.terms() {
            out.add_term(f, i, j, c);
        }
        out
    }

    pub fn scale(&self, f: &FieldSpec, c: Fe) -> Self {
        Self::from_terms(f, self.terms().map(|(k, v)| (k, f.mul(v, c))))
    }

    pub fn mul(&self, f: &FieldSpec, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((i1, j1), a) in self.terms() {
            for ((i2, j2), b) in other.terms() {
                out.add_term(f, i1 + i2, j1 + j2, f.mul(a, b));
            }
        }
        out
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(fm, "0");
        }
        let mut parts = Vec::new();
        // Highest total degree first reads more naturally.
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|&((i, j), _)| (std::cmp::Reverse(i + j), std::cmp::Reverse(j), i));
        for ((i, j), c) in terms {
            let mut s = String::new();
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let mut m = Vec::new();
                    match i {
                        0 => {}
                        1 => m.push("x".to_string()),
                        _ => m.push(format!("x^{i}")),
                    }
                    match j {
                        0 => {}
                        1 => m.push("y".to_string()),
                        _ => m.push(format!("y^{j}")),
                    }
                    m.join("*")
                }
            };
            if mono.is_empty() {
                s.push_str(&c.to_string());
            } else if c == Fe::ONE {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{c}*{mono}"));
            }
            parts.push(s);
        }
        write!(fm, "{}", parts.join(" + "))
    }
}

/// `h(x, G(x)) mod x^n`.
///
/// Each power `G^j` is formed on its own with [`TruncatedSeries::pow`]; this
/// routine is the independent checker for expansion witnesses and shares no
/// code with the kernel search.
pub fn substitute(f: &FieldSpec, h: &BivariatePoly, g: &TruncatedSeries, n: usize) -> Result<TruncatedSeries> {
    g.require(n)?;
    let mut acc = TruncatedSeries::zero(n);
    let mut powers: BTreeMap<usize, TruncatedSeries> = BTreeMap::new();
    for ((i, j), c) in h.terms() {
        if i >= n {
            continue;
        }
        if !powers.contains_key(&j) {
            powers.insert(j, g.pow(f, j as u64, n)?);
        }
        let term = powers[&j].shift(i).scale(f, c);
        acc = acc.add(f, &term)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fes(v: &[u32]) -> Vec<Fe> {
        v.iter().map(|&x| Fe(x)).collect()
    }

    fn ser(v: &[u32]) -> TruncatedSeries {
        TruncatedSeries::new(fes(v))
    }

    #[test]
    fn poly_degree_marker() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::new(fes(&[0, 0])).degree(), None);
        assert_eq!(Poly::one().degree(), Some(0));
        assert_eq!(Poly::new(fes(&[1, 2, 0, 0])).coeffs().len(), 2);
    }

    #[test]
    fn poly_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = Poly::new(fes(&[1, 0, 1]));
        let b = Poly::new(fes(&[1, 1]));
        assert_eq!(a.gcd(&f2, &b), b);

        let f7 = FieldSpec::prime(7).unwrap();
        let prod = Poly::from_ints(&f7, &[1, -1]).mul(&f7, &Poly::from_ints(&f7, &[1, 1]));
        assert_eq!(prod, Poly::from_ints(&f7, &[1, 0, -1]));

        let f3 = FieldSpec::prime(3).unwrap();
        let (q, r) = Poly::monomial(Fe::ONE, 3).divmod(&f3, &Poly::from_ints(&f3, &[-1, 1])).unwrap();
        assert_eq!(q, Poly::from_ints(&f3, &[1, 1, 1]));
        assert_eq!(r, Poly::one());

        assert!(matches!(a.divmod(&f2, &Poly::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn gcd_is_monic() {
        let f7 = FieldSpec::prime(7).unwrap();
        let a = Poly::from_ints(&f7, &[3, 3]); // 3(1+x)
        let b = Poly::from_ints(&f7, &[2, 4, 2]); // 2(1+x)^2
        assert_eq!(a.gcd(&f7, &b), Poly::from_ints(&f7, &[1, 1]));
        assert_eq!(Poly::zero().gcd(&f7, &Poly::zero()), Poly::zero());
    }

    #[test]
    fn series_mul_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = ser(&[1, 1, 0]);
        assert_eq!(a.mul(&f2, &a, 3).unwrap(), ser(&[1, 0, 1]));

        let f7 = FieldSpec::prime(7).unwrap();
        let geo = ser(&[1, 1, 1, 1, 1]);
        let one_minus_x = TruncatedSeries::from_poly(&Poly::from_ints(&f7, &[1, -1]), 5);
        assert_eq!(geo.mul(&f7, &one_minus_x, 5).unwrap(), TruncatedSeries::one(5));

        let f3 = FieldSpec::prime(3).unwrap();
        let ones = ser(&[1, 1, 1, 1]);
        assert_eq!(ones.mul(&f3, &ones, 4).unwrap(), ser(&[1, 2, 0, 1]));

        assert!(matches!(ser(&[1, 1]).mul(&f3, &ones, 3), Err(Error::InsufficientTerms { .. })));
    }

    #[test]
    fn series_pow_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        let a = ser(&[3, 1, 4, 1]);
        assert_eq!(a.pow(&f5, 0, 4).unwrap(), ser(&[1, 0, 0, 0]));
        assert_eq!(ser(&[1, 1, 1, 1]).pow(&f5, 2, 4).unwrap(), ser(&[1, 2, 3, 4]));
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(ser(&[1, 1, 1, 1]).pow(&f7, 2, 4).unwrap(), ser(&[1, 2, 3, 4]));
        let x_valued = ser(&[0, 2, 1, 3, 4]);
        assert!(x_valued.pow(&f5, 5, 5).unwrap().is_zero());
    }

    #[test]
    fn rational_expand_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let g = Poly::from_ints(&f2, &[1, -1]);
        assert_eq!(rational_expand(&f2, &Poly::one(), &g, 5).unwrap(), ser(&[1, 1, 1, 1, 1]));

        let f7 = FieldSpec::prime(7).unwrap();
        let cube = Poly::from_ints(&f7, &[1, -1]).pow(&f7, 3);
        assert_eq!(rational_expand(&f7, &Poly::one(), &cube, 7).unwrap(), ser(&[1, 3, 6, 3, 1, 0, 0]));

        assert_eq!(rational_expand(&f7, &Poly::zero(), &Poly::one(), 3).unwrap(), ser(&[0, 0, 0]));
        assert!(rational_expand(&f7, &Poly::one(), &Poly::from_ints(&f7, &[0, 1]), 3).is_err());
    }

    #[test]
    fn substitute_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let ones = ser(&[1, 1, 1, 1, 1]);
        // y - 1 - x
        let h = BivariatePoly::from_terms(&f2, [((0, 1), Fe(1)), ((0, 0), Fe(1)), ((1, 0), Fe(1))]);
        assert_eq!(substitute(&f2, &h, &ones, 2).unwrap(), ser(&[0, 0]));
        assert!(!substitute(&f2, &h, &ones, 3).unwrap().is_zero());

        let xn = BivariatePoly::monomial(4, 0, Fe(1));
        assert!(substitute(&f2, &xn, &ones, 4).unwrap().is_zero());

        let f3 = FieldSpec::prime(3).unwrap();
        // (1 - x) y - 1
        let h = BivariatePoly::from_terms(&f3, [((0, 1), Fe(1)), ((1, 1), Fe(2)), ((0, 0), Fe(2))]);
        assert_eq!(substitute(&f3, &h, &ones, 5).unwrap(), ser(&[0, 0, 0, 0, 0]));
    }

    #[test]
    fn bivariate_degree_and_display() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(BivariatePoly::zero().total_degree(), None);
        let h = BivariatePoly::from_terms(&f3, [((2, 1), Fe(1)), ((0, 0), Fe(2)), ((2, 1), Fe(2))]);
        // x^2 y cancels
        assert_eq!(h.total_degree(), Some(0));
        let h = BivariatePoly::from_terms(&f3, [((1, 1), Fe(1)), ((0, 1), Fe(1)), ((0, 0), Fe(2))]);
        assert_eq!(h.to_string(), "x*y + y + 2");
    }

    fn field_strategy() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::prime(2).unwrap()),
            Just(FieldSpec::prime(3).unwrap()),
            Just(FieldSpec::prime(7).unwrap()),
            Just(FieldSpec::new(2, 2, None).unwrap()),
            Just(FieldSpec::new(3, 2, None).unwrap()),
        ]
    }

    fn vec_in(f: &FieldSpec, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Fe>> {
        prop::collection::vec((0..f.order()).prop_map(Fe), len)
    }

    fn biv_in(f: FieldSpec) -> impl Strategy<Value = BivariatePoly> {
        prop::collection::vec(((0usize..4, 0usize..4), (1..f.order()).prop_map(Fe)), 0..6)
            .prop_map(move |t| BivariatePoly::from_terms(&f, t))
    }

    proptest! {
        #[test]
        fn rational_expand_round_trips(
            (f, num, mut den, n) in field_strategy().prop_flat_map(|f| {
                (Just(f.clone()), vec_in(&f, 0..6), vec_in(&f, 1..6), 1usize..20)
            })
        ) {
            if den[0].is_zero() {
                den[0] = Fe::ONE;
            }
            let num = Poly::new(num);
            let den = Poly::new(den);
            let s = rational_expand(&f, &num, &den, n).unwrap();
            let back = s.mul(&f, &TruncatedSeries::from_poly(&den, n), n).unwrap();
            prop_assert_eq!(back, TruncatedSeries::from_poly(&num, n));
        }

        #[test]
        fn substitute_is_a_ring_homomorphism(
            (f, g, h1, h2, n) in field_strategy().prop_flat_map(|f| {
                (Just(f.clone()), vec_in(&f, 12..13), biv_in(f.clone()), biv_in(f), 1usize..12)
            })
        ) {
            let g = TruncatedSeries::new(g);
            let s1 = substitute(&f, &h1, &g, n).unwrap();
            let s2 = substitute(&f, &h2, &g, n).unwrap();
            prop_assert_eq!(substitute(&f, &h1.add(&f, &h2), &g, n).unwrap(), s1.add(&f, &s2).unwrap());
            prop_assert_eq!(substitute(&f, &h1.mul(&f, &h2), &g, n).unwrap(), s1.mul(&f, &s2, n).unwrap());
        }

        #[test]
        fn series_pow_adds_exponents(
            (f, a, e1, e2, n) in field_strategy().prop_flat_map(|f| {
                (Just(f.clone()), vec_in(&f, 10..11), 0u64..9, 0u64..9, 1usize..10)
            })
        ) {
            let a = TruncatedSeries::new(a);
            let lhs = a.pow(&f, e1 + e2, n).unwrap();
            let rhs = a.pow(&f, e1, n).unwrap().mul(&f, &a.pow(&f, e2, n).unwrap(), n).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn divmod_reconstructs(
            (f, a, b) in field_strategy().prop_flat_map(|f| {
                (Just(f.clone()), vec_in(&f, 0..8), vec_in(&f, 1..5))
            })
        ) {
            let a = Poly::new(a);
            let b = Poly::new(b);
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&f, &b).unwrap();
            prop_assert_eq!(q.mul(&f, &b).add(&f, &r), a);
            prop_assert!(r.degree() < b.degree());
        }
    }
}
