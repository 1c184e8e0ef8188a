//! Linear complexity: Berlekamp-Massey, profiles, rational generating
//! functions and extension of a prefix by its recurrence.
//!
//! Recurrences are always reported in the forward orientation
//!
//! ```text
//! s_{i+L} + c_{L-1} s_{i+L-1} + ... + c_0 s_i = 0,   0 <= i <= N - L - 1,
//! ```
//!
//! so `c_l` multiplies `s_{i+l}`. Internally Berlekamp-Massey works with the
//! connection polynomial `C(x) = 1 + C_1 x + ... + C_L x^L`, where
//! `c_l = C_{L-l}`.

use serde::{Deserialize, Serialize};

use crate::field::{Fe, FieldSpec};
use crate::series::{rational_expand, Poly, TruncatedSeries};
use crate::{Error, Result};

/// Declared ultimate periodicity: `s_{i+t+T} = s_{i+t}` for all `i >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Periodicity {
    pub preperiod: usize,
    pub period: usize,
}

/// A known prefix of a sequence over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    field: FieldSpec,
    terms: Vec<Fe>,
    meta: Option<Periodicity>,
}

impl Sequence {
    /// Validates element ranges and, when `meta` is given, the declared
    /// periodicity over every index pair inside the prefix.
    pub fn new(field: FieldSpec, terms: Vec<Fe>, meta: Option<Periodicity>) -> Result<Self> {
        let q = field.order();
        if let Some(bad) = terms.iter().find(|e| e.index() >= q) {
            return Err(Error::ElementOutOfRange { index: bad.index() as u64, q });
        }
        if let Some(Periodicity { preperiod: t, period }) = meta {
            if period == 0 {
                return Err(Error::Precondition("period must be at least 1".into()));
            }
            for i in t..terms.len().saturating_sub(period) {
                if terms[i + period] != terms[i] {
                    return Err(Error::PeriodicityViolated { index: i + period });
                }
            }
        }
        Ok(Sequence { field, terms, meta })
    }

    pub fn from_indices(field: FieldSpec, indices: &[u32]) -> Result<Self> {
        Self::new(field, indices.iter().map(|&i| Fe(i)).collect(), None)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn terms(&self) -> &[Fe] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn meta(&self) -> Option<Periodicity> {
        self.meta
    }

    /// Prefix of length `n`, keeping the field and periodicity metadata.
    pub fn prefix(&self, n: usize) -> Result<Sequence> {
        self.require(n)?;
        Ok(Sequence { field: self.field.clone(), terms: self.terms[..n].to_vec(), meta: self.meta })
    }

    pub(crate) fn require(&self, n: usize) -> Result<()> {
        if n > self.terms.len() {
            return Err(Error::InsufficientTerms { needed: n, available: self.terms.len() });
        }
        Ok(())
    }

    /// `G(x) = sum s_i x^i mod x^n`.
    pub fn generating_function(&self, n: usize) -> Result<TruncatedSeries> {
        self.require(n)?;
        Ok(TruncatedSeries::new(self.terms[..n].to_vec()))
    }

    /// True when `s_0 = ... = s_{n-1} = 0`.
    pub fn is_zero_prefix(&self, n: usize) -> bool {
        self.terms.iter().take(n).all(|e| e.is_zero())
    }
}

/// A shortest linear recurrence for the first `n` terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFit {
    pub n: usize,
    /// `L_N`.
    pub l: usize,
    /// `c_0 .. c_{L-1}`; `c_L = 1` is implicit.
    pub coeffs: Vec<Fe>,
    /// Least `l` with `c_l != 0`, or `L` when every listed coefficient is zero.
    pub t_n: usize,
}

impl LinearFit {
    fn from_connection(n: usize, l: usize, conn: &Poly) -> LinearFit {
        if l == n && l > 0 {
            // No constraint rows: every coefficient vector fits; pick the zero one.
            return LinearFit { n, l, coeffs: vec![Fe::ZERO; l], t_n: l };
        }
        let coeffs: Vec<Fe> = (0..l).map(|ell| conn.coeff(l - ell)).collect();
        let deg = conn.degree().expect("connection polynomial has C(0) = 1");
        LinearFit { n, l, coeffs, t_n: l - deg }
    }

    /// `C(x) = 1 + c_{L-1} x + ... + c_0 x^L`, i.e. `g(x)` of the rational form.
    pub fn connection_poly(&self) -> Poly {
        let mut v = vec![Fe::ZERO; self.l + 1];
        v[0] = Fe::ONE;
        for (ell, &c) in self.coeffs.iter().enumerate() {
            v[self.l - ell] = c;
        }
        Poly::new(v)
    }

    /// True when `L = N >= 1`, i.e. the recurrence has no constraint rows.
    pub fn is_degenerate(&self) -> bool {
        self.l == self.n && self.l > 0
    }

    /// Re-evaluates the recurrence on `terms[..n]`.
    pub fn annihilates(&self, f: &FieldSpec, terms: &[Fe]) -> bool {
        if terms.len() < self.n || self.coeffs.len() != self.l {
            return false;
        }
        (0..self.n - self.l).all(|i| {
            let acc = self
                .coeffs
                .iter()
                .enumerate()
                .fold(terms[i + self.l], |acc, (ell, &c)| f.add(acc, f.mul(c, terms[i + ell])));
            acc.is_zero()
        })
    }
}

struct Massey<'a> {
    f: &'a FieldSpec,
    conn: Vec<Fe>,
    prev: Vec<Fe>,
    l: usize,
    shift: usize,
    prev_disc: Fe,
}

impl<'a> Massey<'a> {
    fn new(f: &'a FieldSpec) -> Self {
        Massey { f, conn: vec![Fe::ONE], prev: vec![Fe::ONE], l: 0, shift: 1, prev_disc: Fe::ONE }
    }

    /// Processes `s[n]` given `s[..n]` already processed.
    fn step(&mut self, s: &[Fe], n: usize) {
        let f = self.f;
        let mut d = s[n];
        for i in 1..=self.l.min(self.conn.len() - 1) {
            d = f.add(d, f.mul(self.conn[i], s[n - i]));
        }
        if d.is_zero() {
            self.shift += 1;
            return;
        }
        let coef = f.mul(d, f.inv(self.prev_disc).expect("stored discrepancy is nonzero"));
        let mut next = self.conn.clone();
        if next.len() < self.prev.len() + self.shift {
            next.resize(self.prev.len() + self.shift, Fe::ZERO);
        }
        for (i, &b) in self.prev.iter().enumerate() {
            next[i + self.shift] = f.sub(next[i + self.shift], f.mul(coef, b));
        }
        if 2 * self.l <= n {
            self.prev = std::mem::replace(&mut self.conn, next);
            self.l = n + 1 - self.l;
            self.prev_disc = d;
            self.shift = 1;
        } else {
            self.conn = next;
            self.shift += 1;
        }
    }

    fn connection(&self) -> Poly {
        Poly::new(self.conn.clone())
    }
}

/// Shortest linear recurrence for the first `n` terms.
pub fn berlekamp_massey(seq: &Sequence, n: usize) -> Result<LinearFit> {
    seq.require(n)?;
    let f = seq.field();
    let mut bm = Massey::new(f);
    for i in 0..n {
        bm.step(seq.terms(), i);
    }
    Ok(LinearFit::from_connection(n, bm.l, &bm.connection()))
}

/// `L_1, ..., L_{n_max}` from a single online pass.
pub fn linear_profile(seq: &Sequence, n_max: usize) -> Result<Vec<usize>> {
    seq.require(n_max)?;
    let mut bm = Massey::new(seq.field());
    Ok((0..n_max)
        .map(|i| {
            bm.step(seq.terms(), i);
            bm.l
        })
        .collect())
}

/// `G(x) = f(x) / g(x)` with `gcd(f, g) = 1`, `g(0) = 1` and preperiod `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalForm {
    pub f: Poly,
    pub g: Poly,
    pub t: usize,
}

impl RationalForm {
    /// `L = deg g + t`.
    pub fn linear_complexity(&self) -> usize {
        self.g.degree().unwrap_or(0) + self.t
    }

    pub fn expand(&self, field: &FieldSpec, n: usize) -> Result<TruncatedSeries> {
        rational_expand(field, &self.f, &self.g, n)
    }
}

/// `max(0, deg f - deg g + 1)`; zero for `f = 0`.
pub fn preperiod_from_rational(rf: &RationalForm) -> usize {
    match (rf.f.degree(), rf.g.degree()) {
        (Some(df), Some(dg)) => (df + 1).saturating_sub(dg),
        _ => 0,
    }
}

/// Rebuilds the generating function of an ultimately periodic sequence from
/// a recurrence fit.
///
/// `g` is the fit's connection polynomial and `f` the first `L` coefficients
/// of `g(x) G(x)`. The pair is checked against every available term, reduced
/// to lowest terms, and normalized to `g(0) = 1`.
pub fn rational_form(fit: &LinearFit, seq: &Sequence) -> Result<RationalForm> {
    let field = seq.field();
    seq.require(fit.n)?;
    if let Some(Periodicity { preperiod, period }) = seq.meta() {
        if fit.n < preperiod + 2 * period {
            return Err(Error::InsufficientTerms { needed: preperiod + 2 * period, available: fit.n });
        }
    }
    if fit.is_degenerate() {
        return Err(Error::DegenerateFit(fit.n));
    }
    let len = seq.len();
    let g = fit.connection_poly();
    let gs = TruncatedSeries::from_poly(&g, len).mul(field, &seq.generating_function(len)?, len)?;
    let f = Poly::new(gs.coeffs()[..fit.l.min(len)].to_vec());
    let back = rational_expand(field, &f, &g, len)?;
    if back.coeffs() != seq.terms() {
        let at = back.coeffs().iter().zip(seq.terms()).position(|(a, b)| a != b).unwrap_or(len);
        return Err(Error::InconsistentRational(format!(
            "recurrence of length {} from {} terms disagrees with the sequence at index {at}",
            fit.l, fit.n
        )));
    }
    let d = f.gcd(field, &g);
    let (mut f, mut g) = if d.is_zero() || d.degree() == Some(0) {
        (f, g)
    } else {
        (f.divmod(field, &d)?.0, g.divmod(field, &d)?.0)
    };
    let g0_inv = field.inv(g.coeff(0))?;
    f = f.scale(field, g0_inv);
    g = g.scale(field, g0_inv);
    let mut rf = RationalForm { f, g, t: 0 };
    rf.t = preperiod_from_rational(&rf);
    Ok(rf)
}

/// Extends the first `fit.n` terms to `target_len` with
/// `u_{i+L} = -sum_{l=t_N}^{L-1} c_l u_{i+l}`.
pub fn extend_by_recurrence(seq: &Sequence, fit: &LinearFit, target_len: usize) -> Result<Sequence> {
    seq.require(fit.n)?;
    if target_len < fit.n {
        return Err(Error::Precondition(format!("target length {target_len} is shorter than N = {}", fit.n)));
    }
    let f = seq.field();
    if seq.is_zero_prefix(fit.n) {
        return Sequence::new(f.clone(), vec![Fe::ZERO; target_len], None);
    }
    if fit.is_degenerate() || fit.l == 0 {
        return Err(Error::DegenerateFit(fit.n));
    }
    let mut u = seq.terms()[..fit.n].to_vec();
    let l = fit.l;
    for idx in fit.n..target_len {
        let i = idx - l;
        let mut acc = Fe::ZERO;
        for ell in fit.t_n..l {
            acc = f.sub(acc, f.mul(fit.coeffs[ell], u[i + ell]));
        }
        u.push(acc);
    }
    Sequence::new(f.clone(), u, None)
}
