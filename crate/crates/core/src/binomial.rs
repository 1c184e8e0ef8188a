//! Binomial coefficient sequences `a_i = C(i + k, k) mod p`, `1 <= k <= p - 1`.
//!
//! The sequence is purely periodic with period `p`, vanishes on
//! `p - k <= i <= p - 1`, and has generating function `1 / (1 - x)^{k+1}`.
//! This module generates it, states the closed-form predictions for its
//! linear and expansion complexity, and cross-checks them against the
//! generic machinery.

use serde::Serialize;

use crate::expcomp::expansion_complexity;
use crate::field::{is_prime, Fe, FieldSpec};
use crate::lincomp::{berlekamp_massey, linear_profile, Periodicity, RationalForm, Sequence};
use crate::series::{rational_expand, substitute, BivariatePoly, Poly, TruncatedSeries};
use crate::theorems::{inputs, BoundReport, Relation};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialSpec {
    pub p: u32,
    pub k: u32,
}

impl BinomialSpec {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidBinomial(format!("p = {p} is not prime")));
        }
        if k == 0 || k >= p {
            return Err(Error::InvalidBinomial(format!("k = {k} is outside 1..={}", p - 1)));
        }
        FieldSpec::prime(p)?;
        Ok(BinomialSpec { p, k })
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec::prime(self.p).expect("validated at construction")
    }
}

/// One period, by `a_0 = 1`, `a_{i+1} = a_i (i + k + 1) / (i + 1)` while
/// `i + 1 < p - k`, and zeros on the last `k` positions.
fn one_period(spec: &BinomialSpec) -> Vec<Fe> {
    let f = spec.field();
    let (p, k) = (spec.p as usize, spec.k as usize);
    let mut v = vec![Fe::ZERO; p];
    v[0] = Fe::ONE;
    for i in 0..p - k - 1 {
        let num = f.from_int((i + k + 1) as i64);
        let den = f.from_int((i + 1) as i64);
        v[i + 1] = f.mul(v[i], f.div(num, den).expect("i + 1 < p"));
    }
    v
}

/// The first `len` terms, tagged as purely periodic with period `p`.
pub fn generate(spec: &BinomialSpec, len: usize) -> Sequence {
    let period = one_period(spec);
    let terms = (0..len).map(|i| period[i % period.len()]).collect();
    Sequence::new(spec.field(), terms, Some(Periodicity { preperiod: 0, period: spec.p as usize }))
        .expect("periodic by construction")
}

/// `1 / (1 - x)^{k+1}`, checked against one period of [`generate`].
pub fn gf(spec: &BinomialSpec) -> Result<RationalForm> {
    let f = spec.field();
    let g = Poly::from_ints(&f, &[1, -1]).pow(&f, spec.k as u64 + 1);
    let rf = RationalForm { f: Poly::one(), g, t: 0 };
    let p = spec.p as usize;
    let expanded = rational_expand(&f, &rf.f, &rf.g, p)?;
    if expanded.coeffs() != generate(spec, p).terms() {
        return Err(Error::InconsistentRational(format!("1/(1-x)^{} does not expand to the sequence", spec.k + 1)));
    }
    Ok(rf)
}

/// `L = k + 1`, and the profile lower bound `min{k + 1, ceil(N/2), p - k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinearPrediction {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(skip)]
    spec: BinomialSpec,
}

impl LinearPrediction {
    pub fn profile_lower_bound(&self, n: usize) -> usize {
        let (p, k) = (self.spec.p as usize, self.spec.k as usize);
        (k + 1).min(n.div_ceil(2)).min(p - k)
    }
}

pub fn predicted_linear_complexity(spec: &BinomialSpec) -> LinearPrediction {
    LinearPrediction { l: spec.k as usize + 1, spec: *spec }
}

/// Prediction for `E_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExpansionPrediction {
    Exact { value: usize },
    Interval { lo: usize, hi: usize },
}

impl ExpansionPrediction {
    pub fn bounds(&self) -> (usize, usize) {
        match *self {
            ExpansionPrediction::Exact { value } => (value, value),
            ExpansionPrediction::Interval { lo, hi } => (lo, hi),
        }
    }

    pub fn contains(&self, e: usize) -> bool {
        let (lo, hi) = self.bounds();
        lo <= e && e <= hi
    }
}

/// `k + 2` when `(k+1)(k+2) < p`; otherwise the interval
/// `[ceil(p/(k+2)), max{ceil(p/(k+2)), p mod (k+1)}]`. The term
/// `(k+1) * frac(p/(k+1))` is exactly `p mod (k+1)`.
pub fn predicted_expansion(spec: &BinomialSpec) -> ExpansionPrediction {
    let (p, k) = (spec.p as usize, spec.k as usize);
    if (k + 1) * (k + 2) < p {
        ExpansionPrediction::Exact { value: k + 2 }
    } else {
        let lo = p.div_ceil(k + 2);
        ExpansionPrediction::Interval { lo, hi: lo.max(p % (k + 1)) }
    }
}

/// `h = y^d - (1 - x)^{p - d(k+1)}` with `d = min{floor(p/(k+1)), ceil(p/(k+2))}`,
/// which annihilates `G` modulo `x^p`.
pub fn upper_witness(spec: &BinomialSpec) -> BivariatePoly {
    let f = spec.field();
    let (p, k) = (spec.p as usize, spec.k as usize);
    let d = (p / (k + 1)).min(p.div_ceil(k + 2));
    let e = p - d * (k + 1);
    let pow = Poly::from_ints(&f, &[1, -1]).pow(&f, e as u64);
    let mut terms = vec![((0, d), Fe::ONE)];
    terms.extend(pow.coeffs().iter().enumerate().map(|(i, &c)| ((i, 0), f.neg(c))));
    BivariatePoly::from_terms(&f, terms)
}

/// Result of [`analyze`].
#[derive(Clone, Debug, Serialize)]
pub struct BinomialReport {
    pub p: u32,
    pub k: u32,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "L_profile")]
    pub l_profile: Vec<usize>,
    #[serde(rename = "E_p")]
    pub e_p: usize,
    pub prediction: ExpansionPrediction,
    pub witness: Vec<(usize, usize, u32)>,
    pub claims: Vec<BoundReport>,
}

impl BinomialReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| !c.failed())
    }
}

/// Computes `L` (over `2p` terms), the profile `L_N` for `N <= 2p` and `E_p`,
/// and compares them with the predictions. Also checks the generating
/// function identity and the explicit upper witness.
pub fn analyze(spec: &BinomialSpec) -> Result<BinomialReport> {
    let f = spec.field();
    let p = spec.p as usize;
    let seq = generate(spec, 2 * p);
    let mut claims = Vec::new();

    let lp = predicted_linear_complexity(spec);
    let fit = berlekamp_massey(&seq, 2 * p)?;
    claims.push(BoundReport::new("P1.L", inputs! { "p" => p, "k" => spec.k }, Relation::Equal { value: lp.l as i64 }, fit.l as i64));
    let profile = linear_profile(&seq, 2 * p)?;
    for (idx, &l_n) in profile.iter().enumerate() {
        let n = idx + 1;
        claims.push(BoundReport::new(
            "P1.profile",
            inputs! { "p" => p, "k" => spec.k, "N" => n },
            Relation::AtLeast { bound: lp.profile_lower_bound(n) as i64 },
            l_n as i64,
        ));
    }

    let rf = gf(spec)?;
    let g_series = seq.generating_function(p)?;
    let prod = TruncatedSeries::from_poly(&rf.g, p).mul(&f, &g_series, p)?;
    let defect = prod.sub(&f, &TruncatedSeries::one(p))?.coeffs().iter().filter(|c| !c.is_zero()).count();
    claims.push(
        BoundReport::new("L2", inputs! { "p" => p, "k" => spec.k }, Relation::Equal { value: 0 }, defect as i64)
            .with_note("nonzero coefficients of (1 - x)^(k+1) G - 1 mod x^p"),
    );

    let w = expansion_complexity(&seq, p)?;
    claims.push(BoundReport::new(
        "E.witness",
        inputs! { "N" => p, "E_N" => w.e },
        Relation::Equal { value: 1 },
        w.verify(&seq)? as i64,
    ));
    let prediction = predicted_expansion(spec);
    let ins = || inputs! { "p" => p, "k" => spec.k, "E_p" => w.e };
    claims.push(match prediction {
        ExpansionPrediction::Exact { value } => BoundReport::new("T3.exact", ins(), Relation::Equal { value: value as i64 }, w.e as i64),
        ExpansionPrediction::Interval { lo, hi } => {
            BoundReport::new("T3.interval", ins(), Relation::Between { lo: lo as i64, hi: hi as i64 }, w.e as i64)
        }
    });

    let h = upper_witness(spec);
    let residue = substitute(&f, &h, &g_series, p)?;
    let nonzero = residue.coeffs().iter().filter(|c| !c.is_zero()).count();
    let deg_h = h.total_degree().unwrap_or(0);
    claims.push(
        BoundReport::new("T3.witness", inputs! { "p" => p, "k" => spec.k, "deg_h" => deg_h }, Relation::Equal { value: 0 }, nonzero as i64)
            .with_note("nonzero coefficients of h(x, G) mod x^p for h = y^d - (1 - x)^(p - d(k+1))"),
    );
    claims.push(BoundReport::new(
        "T3.witness",
        inputs! { "p" => p, "k" => spec.k },
        Relation::AtMost { bound: prediction.bounds().1 as i64 },
        deg_h as i64,
    ));

    let witness = w
        .h
        .as_ref()
        .map(|h| h.terms().map(|((i, j), c)| (i, j, c.index())).collect())
        .unwrap_or_default();
    Ok(BinomialReport {
        p: spec.p,
        k: spec.k,
        l: fit.l,
        l_profile: profile,
        e_p: w.e,
        prediction,
        witness,
        claims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// C(n, r) mod p from exact integer arithmetic.
    fn binom_mod(n: u64, r: u64, p: u64) -> u32 {
        let mut c: u128 = 1;
        for i in 0..r {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        (c % p as u128) as u32
    }

    #[test]
    fn spec_validation() {
        assert!(BinomialSpec::new(7, 2).is_ok());
        assert!(matches!(BinomialSpec::new(4, 1), Err(Error::InvalidBinomial(_))));
        assert!(BinomialSpec::new(7, 0).is_err());
        assert!(BinomialSpec::new(7, 7).is_err());
    }

    #[test]
    fn generate_examples() {
        let s = generate(&BinomialSpec::new(7, 2).unwrap(), 7);
        assert_eq!(s.terms(), &[1, 3, 6, 3, 1, 0, 0].map(Fe));
        let s = generate(&BinomialSpec::new(5, 4).unwrap(), 5);
        assert_eq!(s.terms(), &[1, 0, 0, 0, 0].map(Fe));
    }

    #[test]
    fn generate_matches_direct_binomials() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            for k in 1..p {
                let spec = BinomialSpec::new(p, k).unwrap();
                let s = generate(&spec, 2 * p as usize);
                for (i, &a) in s.terms().iter().enumerate() {
                    assert_eq!(a.index(), binom_mod(i as u64 + k as u64, k as u64, p as u64), "p={p} k={k} i={i}");
                }
                for i in (p - k)..p {
                    assert!(s.terms()[i as usize].is_zero());
                }
            }
        }
    }

    #[test]
    fn gf_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        let rf = gf(&BinomialSpec::new(5, 1).unwrap()).unwrap();
        assert_eq!(rf.expand(&f5, 5).unwrap().coeffs(), &[1, 2, 3, 4, 0].map(Fe));
        let rf = gf(&BinomialSpec::new(7, 6).unwrap()).unwrap();
        let f7 = FieldSpec::prime(7).unwrap();
        // (1 - x)^7 = 1 - x^7
        assert_eq!(rf.g, Poly::from_ints(&f7, &[1, 0, 0, 0, 0, 0, 0, -1]));
        assert_eq!(rf.expand(&f7, 14).unwrap().coeffs(), generate(&BinomialSpec::new(7, 6).unwrap(), 14).terms());
    }

    #[test]
    fn predictions() {
        assert_eq!(predicted_linear_complexity(&BinomialSpec::new(7, 2).unwrap()).l, 3);
        assert_eq!(predicted_linear_complexity(&BinomialSpec::new(13, 6).unwrap()).profile_lower_bound(8), 4);
        assert_eq!(predicted_linear_complexity(&BinomialSpec::new(5, 4).unwrap()).profile_lower_bound(10), 1);
        assert_eq!(predicted_expansion(&BinomialSpec::new(13, 2).unwrap()), ExpansionPrediction::Exact { value: 4 });
        assert_eq!(predicted_expansion(&BinomialSpec::new(7, 2).unwrap()), ExpansionPrediction::Interval { lo: 2, hi: 2 });
        assert_eq!(predicted_expansion(&BinomialSpec::new(11, 2).unwrap()), ExpansionPrediction::Interval { lo: 3, hi: 3 });
    }

    #[test]
    fn interval_upper_endpoint_is_fractional_part_times_k_plus_1() {
        // (k+1) * {p / (k+1)} through floating point, rounded
        for p in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for k in 1..p {
                let spec = BinomialSpec::new(p, k).unwrap();
                if let ExpansionPrediction::Interval { lo, hi } = predicted_expansion(&spec) {
                    let ratio = p as f64 / (k + 1) as f64;
                    let frac_times = ((k + 1) as f64 * ratio.fract()).round() as usize;
                    assert_eq!(hi, lo.max(frac_times));
                }
            }
        }
    }

    #[test]
    fn analyze_examples() {
        let r = analyze(&BinomialSpec::new(7, 2).unwrap()).unwrap();
        assert!(r.all_pass(), "{:#?}", r.claims);
        assert_eq!((r.l, r.e_p), (3, 2));
        let r = analyze(&BinomialSpec::new(13, 2).unwrap()).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.e_p, 4);
        let r = analyze(&BinomialSpec::new(5, 4).unwrap()).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.l, 5);
        assert!(r.prediction.contains(r.e_p));
    }

    #[test]
    fn upper_witness_annihilates() {
        for p in [2u32, 3, 5, 7, 11, 13, 17] {
            for k in 1..p {
                let spec = BinomialSpec::new(p, k).unwrap();
                let s = generate(&spec, p as usize);
                let h = upper_witness(&spec);
                let r = substitute(&spec.field(), &h, &s.generating_function(p as usize).unwrap(), p as usize).unwrap();
                assert!(r.is_zero(), "p={p} k={k}");
            }
        }
    }
}
