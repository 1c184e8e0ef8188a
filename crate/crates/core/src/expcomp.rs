//! The `N`-th expansion complexity `E_N`: the least total degree of a
//! nonzero `h(x, y)` with `h(x, G(x)) = 0 mod x^N`, and `0` for an all-zero
//! prefix.
//!
//! [`expansion_complexity`] searches degrees `d = 1, 2, ...` and looks for a
//! linear dependency among the truncated series `x^i G(x)^j`, `i + j <= d`.
//! Monomials are ordered by `(i + j, j, i)`; the witness is the dependency
//! that first appears in that order, scaled so its first nonzero coefficient
//! is 1.

use serde::{Deserialize, Serialize};

use crate::field::{Fe, FieldSpec};
use crate::linalg::ColumnEchelon;
use crate::lincomp::Sequence;
use crate::series::{substitute, BivariatePoly, TruncatedSeries};
use crate::{Error, Result};

/// Largest enumeration accepted by [`brute_force_expansion`].
pub const BRUTE_FORCE_CAP: u64 = 1 << 16;

/// `E_N` together with a polynomial attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionWitness {
    pub n: usize,
    pub e: usize,
    /// Absent exactly when the prefix is all zero.
    pub h: Option<BivariatePoly>,
    /// Rank of the coefficient matrix at the decisive degree.
    pub matrix_rank: usize,
    /// Number of monomials (columns) at the decisive degree.
    pub monomial_count: usize,
}

impl ExpansionWitness {
    /// Re-checks the witness with [`substitute`]: `h(x, G) = 0 mod x^N` and
    /// `deg h = E`, or no witness and an all-zero prefix when `E = 0`.
    pub fn verify(&self, seq: &Sequence) -> Result<bool> {
        let g = seq.generating_function(self.n)?;
        Ok(match &self.h {
            None => self.e == 0 && g.is_zero(),
            Some(h) => {
                self.e > 0
                    && h.total_degree() == Some(self.e)
                    && substitute(seq.field(), h, &g, self.n)?.is_zero()
            }
        })
    }
}

/// `E_1, ..., E_{N_max}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionProfile {
    pub values: Vec<usize>,
}

impl ExpansionProfile {
    /// `E_N` for `1 <= n <= N_max`.
    pub fn get(&self, n: usize) -> usize {
        self.values[n - 1]
    }

    /// First `N` (1-based) where `E_N <= E_{N+1} <= E_N + 1` fails. A zero
    /// prefix (`E_N = 0`) only constrains the lower half.
    pub fn growth_violation(&self) -> Option<usize> {
        self.values.windows(2).position(|w| w[1] < w[0] || (w[0] > 0 && w[1] > w[0] + 1)).map(|i| i + 1)
    }
}

/// Number of monomials `x^i y^j` with `i + j <= d`.
pub fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Least `d` with `(d+1)(d+2)/2 > n`: once the matrix has more columns than
/// rows a dependency must exist, so `E_N` never exceeds this.
pub fn kernel_bound(n: usize) -> usize {
    (0..).find(|&d| monomial_count(d) > n).unwrap()
}

/// Monomials of total degree exactly `d`, in `(j, i)` order.
fn monomials_of_degree(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=d).map(move |j| (d - j, j))
}

/// `G^0, G^1, ...` modulo `x^N`, built by repeated multiplication.
struct PowerTable<'a> {
    f: &'a FieldSpec,
    g: TruncatedSeries,
    powers: Vec<TruncatedSeries>,
}

impl<'a> PowerTable<'a> {
    fn new(f: &'a FieldSpec, g: TruncatedSeries) -> Self {
        let n = g.order();
        PowerTable { f, g, powers: vec![TruncatedSeries::one(n)] }
    }

    fn get(&mut self, j: usize) -> &TruncatedSeries {
        let n = self.g.order();
        while self.powers.len() <= j {
            let next = self.powers.last().unwrap().mul(self.f, &self.g, n).expect("orders match");
            self.powers.push(next);
        }
        &self.powers[j]
    }

    /// Coefficients of `x^i G^j mod x^N`.
    fn column(&mut self, i: usize, j: usize) -> Vec<Fe> {
        self.get(j).shift(i).into_coeffs()
    }
}

/// `E_N` by ascending-degree kernel search.
pub fn expansion_complexity(seq: &Sequence, n: usize) -> Result<ExpansionWitness> {
    if n == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let g = seq.generating_function(n)?;
    if g.is_zero() {
        return Ok(ExpansionWitness { n, e: 0, h: None, matrix_rank: 0, monomial_count: 0 });
    }
    let f = seq.field();
    let mut table = PowerTable::new(f, g);
    let mut echelon = ColumnEchelon::new(f, n);
    let mut monomials: Vec<(usize, usize)> = Vec::new();

    // The constant column is e_0 and never dependent on its own.
    monomials.push((0, 0));
    let c = table.column(0, 0);
    echelon.push(&c);

    for d in 1.. {
        let mut kernel = None;
        for (i, j) in monomials_of_degree(d) {
            monomials.push((i, j));
            let col = table.column(i, j);
            let dep = echelon.push(&col);
            if kernel.is_none() {
                kernel = dep;
            }
        }
        if let Some(mut k) = kernel {
            let lead = *k.iter().find(|c| !c.is_zero()).expect("kernel vector is nonzero");
            let inv = f.inv(lead)?;
            k.iter_mut().for_each(|c| *c = f.mul(*c, inv));
            let h = BivariatePoly::from_terms(f, monomials.iter().copied().zip(k));
            debug_assert_eq!(h.total_degree(), Some(d));
            return Ok(ExpansionWitness {
                n,
                e: d,
                h: Some(h),
                matrix_rank: echelon.rank(),
                monomial_count: monomials.len(),
            });
        }
        debug_assert!(d < kernel_bound(n));
    }
    unreachable!()
}

/// `E_N` for every `N <= n_max`, each computed from scratch.
pub fn expansion_profile(seq: &Sequence, n_max: usize) -> Result<ExpansionProfile> {
    seq.require(n_max)?;
    let values = (1..=n_max)
        .map(|n| expansion_complexity(seq, n).map(|w| w.e))
        .collect::<Result<Vec<_>>>()?;
    let profile = ExpansionProfile { values };
    if let Some(at) = profile.growth_violation() {
        return Err(Error::Precondition(format!("expansion profile breaks E_N <= E_(N+1) <= E_N + 1 at N = {at}")));
    }
    Ok(profile)
}

/// Enumerates every nonzero `h` of total degree `<= d_max`, degree by degree,
/// and tests each by substitution. `Ok(None)` means no `h` of degree
/// `<= d_max` works.
pub fn brute_force_expansion(seq: &Sequence, n: usize, d_max: usize) -> Result<Option<ExpansionWitness>> {
    let f = seq.field();
    let q = f.order() as u64;
    let m = monomial_count(d_max) as u32;
    if q.checked_pow(m).is_none_or(|c| c > BRUTE_FORCE_CAP) {
        return Err(Error::CapExceeded(format!("{q}^{m} candidate polynomials exceed {BRUTE_FORCE_CAP}")));
    }
    if n == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let g = seq.generating_function(n)?;
    if g.is_zero() {
        return Ok(Some(ExpansionWitness { n, e: 0, h: None, matrix_rank: 0, monomial_count: 0 }));
    }
    for d in 1..=d_max {
        let monos: Vec<(usize, usize)> = (0..=d).flat_map(monomials_of_degree).collect();
        let count = q.pow(monos.len() as u32);
        for code in 1..count {
            let mut x = code;
            let mut terms = Vec::with_capacity(monos.len());
            for &mono in &monos {
                terms.push((mono, Fe((x % q) as u32)));
                x /= q;
            }
            let h = BivariatePoly::from_terms(f, terms);
            if h.total_degree() != Some(d) {
                continue;
            }
            if substitute(f, &h, &g, n)?.is_zero() {
                return Ok(Some(ExpansionWitness { n, e: d, h: Some(h), matrix_rank: 0, monomial_count: monos.len() }));
            }
        }
    }
    Ok(None)
}
