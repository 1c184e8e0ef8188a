//! Pass/fail checkers for the bounds relating `L_N`, `t_N` and `E_N`.
//!
//! Checkers never compute a complexity themselves. They take values produced
//! by [`crate::lincomp`] and [`crate::expcomp`] and return [`BoundReport`]s
//! that carry every input they used, so each verdict can be re-derived from
//! the report alone via [`BoundReport::recheck`].

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::expcomp::{expansion_complexity, expansion_profile, kernel_bound, ExpansionProfile};
use crate::field::Fe;
use crate::lincomp::{berlekamp_massey, linear_profile, rational_form, LinearFit, Sequence};
use crate::series::{substitute, BivariatePoly};
use crate::{Error, Result};

/// The relation an observed value is held to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum Relation {
    AtLeast { bound: i64 },
    AtMost { bound: i64 },
    Equal { value: i64 },
    Between { lo: i64, hi: i64 },
    OneOf { values: Vec<i64> },
}

impl Relation {
    pub fn holds(&self, x: i64) -> bool {
        match self {
            Relation::AtLeast { bound } => x >= *bound,
            Relation::AtMost { bound } => x <= *bound,
            Relation::Equal { value } => x == *value,
            Relation::Between { lo, hi } => *lo <= x && x <= *hi,
            Relation::OneOf { values } => values.contains(&x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

/// Named integer inputs; serialized as a JSON object.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Inputs(pub Vec<(&'static str, i64)>);

impl Inputs {
    pub fn get(&self, key: &str) -> Option<i64> {
        self.0.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
    }
}

impl Serialize for Inputs {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut sorted = self.0.clone();
        sorted.sort_by_key(|&(k, _)| k);
        let mut map = s.serialize_map(Some(sorted.len()))?;
        for (k, v) in sorted {
            map.serialize_entry(k, &v)?;
        }
        map.end()
    }
}

macro_rules! inputs {
    ($($k:literal => $v:expr),* $(,)?) => {
        $crate::theorems::Inputs(vec![$(($k, $v as i64)),*])
    };
}
pub(crate) use inputs;

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    #[serde(rename = "claimId")]
    pub claim_id: &'static str,
    pub inputs: Inputs,
    pub expected: Option<Relation>,
    pub observed: Option<i64>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    pub fn new(claim_id: &'static str, inputs: Inputs, expected: Relation, observed: i64) -> Self {
        let outcome = if expected.holds(observed) { Outcome::Pass } else { Outcome::Fail };
        BoundReport { claim_id, inputs, expected: Some(expected), observed: Some(observed), outcome, note: None }
    }

    pub fn not_applicable(claim_id: &'static str, inputs: Inputs, why: impl Into<String>) -> Self {
        BoundReport {
            claim_id,
            inputs,
            expected: None,
            observed: None,
            outcome: Outcome::NotApplicable,
            note: Some(why.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }

    /// Re-derives the outcome from `expected` and `observed`.
    pub fn recheck(&self) -> bool {
        match (&self.expected, self.observed) {
            (Some(rel), Some(x)) => (rel.holds(x)) == (self.outcome == Outcome::Pass) && self.outcome != Outcome::NotApplicable,
            (None, None) => self.outcome == Outcome::NotApplicable,
            _ => false,
        }
    }
}

/// `min{1, t - 1}`: -1, 0, 1 for `t = 0, 1, >= 2`.
fn min_one_t_minus_one(t: usize) -> i64 {
    (t as i64 - 1).min(1)
}

/// Lower bound on `E_N` for a sequence (or prefix model) with linear
/// complexity `l` and preperiod `t`.
pub fn periodic_lower_bound(l: usize, t: usize, n: usize) -> i64 {
    let (l, t, n) = (l as i64, t as i64, n as i64);
    let denom = l - min_one_t_minus_one(t as usize);
    if n > (l - t) * denom {
        l - t + 1
    } else {
        (n + denom - 1) / denom
    }
}

/// `L + max{-1, 1 - t}`.
pub fn periodic_upper_bound(l: usize, t: usize) -> i64 {
    l as i64 + (-1i64).max(1 - t as i64)
}

/// Both bounds for an ultimately periodic sequence with linear complexity
/// `l`, preperiod `t` and `E_N = e_n`.
pub fn check_theorem1(l: usize, t: usize, n: usize, e_n: usize) -> Result<[BoundReport; 2]> {
    if l == 0 {
        return Err(Error::ZeroGeneratingFunction);
    }
    if t > l {
        return Err(Error::Precondition(format!("preperiod {t} exceeds linear complexity {l}")));
    }
    let ins = || inputs! { "L" => l, "t" => t, "N" => n, "E_N" => e_n };
    Ok([
        BoundReport::new("T1.lower", ins(), Relation::AtLeast { bound: periodic_lower_bound(l, t, n) }, e_n as i64),
        BoundReport::new("T1.upper", ins(), Relation::AtMost { bound: periodic_upper_bound(l, t) }, e_n as i64),
    ])
}

/// Equality `E_N = L - t + 1` for `t <= 2` and `N > (L - t)(L - t + 1)`.
pub fn check_theorem1_remark(l: usize, t: usize, n: usize, e_n: usize) -> BoundReport {
    let ins = inputs! { "L" => l, "t" => t, "N" => n, "E_N" => e_n };
    if l == 0 {
        return BoundReport::not_applicable("T1.remark", ins, "zero generating function");
    }
    if t > 2 {
        return BoundReport::not_applicable("T1.remark", ins, "requires t <= 2");
    }
    let (li, ti) = (l as i64, t as i64);
    if (n as i64) <= (li - ti) * (li - ti + 1) {
        return BoundReport::not_applicable("T1.remark", ins, "requires N > (L - t)(L - t + 1)");
    }
    BoundReport::new("T1.remark", ins, Relation::Equal { value: li - ti + 1 }, e_n as i64)
}

/// Bounds on `E_N` from a shortest recurrence `(L_N, t_N)` of the prefix.
pub fn check_theorem4(fit: &LinearFit, e_n: usize) -> Result<[BoundReport; 2]> {
    let (n, l, t) = (fit.n, fit.l, fit.t_n);
    if n < 2 {
        return Err(Error::Precondition("requires N >= 2".into()));
    }
    if l == 0 {
        return Err(Error::ZeroGeneratingFunction);
    }
    let ins = || inputs! { "N" => n, "L_N" => l, "t_N" => t, "E_N" => e_n };
    let upper = periodic_upper_bound(l, t).min(n as i64 - l as i64 + 2);
    Ok([
        BoundReport::new("T4.lower", ins(), Relation::AtLeast { bound: periodic_lower_bound(l, t, n) }, e_n as i64),
        BoundReport::new("T4.upper", ins(), Relation::AtMost { bound: upper }, e_n as i64),
    ])
}

/// Growth laws over two profiles of the same prefix: `E_N <= E_{N+1} <=
/// E_N + 1` and the linear complexity profile jump rule.
pub fn check_growth(profile_l: &[usize], profile_e: &[usize]) -> Result<Vec<BoundReport>> {
    if profile_l.len() != profile_e.len() {
        return Err(Error::Precondition("profiles must cover the same prefix".into()));
    }
    let mut out = Vec::with_capacity(2 * profile_l.len());
    for n in 1..profile_l.len() {
        let (e0, e1) = (profile_e[n - 1], profile_e[n]);
        let ins = inputs! { "N" => n, "E_N" => e0, "E_N+1" => e1 };
        // The step x*h needs some h to exist; after a zero prefix only monotonicity is left.
        out.push(if e0 == 0 {
            BoundReport::new("P2", ins, Relation::AtLeast { bound: 0 }, e1 as i64)
                .with_note("zero prefix: upper half vacuous")
        } else {
            BoundReport::new("P2", ins, Relation::Between { lo: e0 as i64, hi: e0 as i64 + 1 }, e1 as i64)
        });
        let (l0, l1) = (profile_l[n - 1], profile_l[n]);
        let ins = inputs! { "N" => n, "L_N" => l0, "L_N+1" => l1 };
        let rel = if 2 * l0 > n {
            Relation::Equal { value: l0 as i64 }
        } else {
            Relation::OneOf { values: vec![l0 as i64, (n + 1 - l0) as i64] }
        };
        out.push(BoundReport::new("L3", ins, rel, l1 as i64));
    }
    Ok(out)
}

/// `(p^k, k)` with `p^k <= n - 1 < p^{k+1}`.
fn frobenius_step(p: u64, n: usize) -> (u64, u32) {
    let (mut pk, mut k) = (1u64, 0u32);
    while pk * p <= n as u64 - 1 {
        pk *= p;
        k += 1;
    }
    (pk, k)
}

/// `y^{p^k} - sum_{i <= (N-1)/p^k} s_i^{p^k} x^{i p^k}` with `p^k <= N - 1 < p^{k+1}`.
pub fn frobenius_witness(seq: &Sequence, n: usize) -> Result<BivariatePoly> {
    if n < 2 {
        return Err(Error::Precondition("requires N >= 2".into()));
    }
    seq.require(n)?;
    let f = seq.field();
    let (pk, k) = frobenius_step(f.characteristic() as u64, n);
    let pk = pk as usize;
    let mut terms = vec![((0, pk), Fe::ONE)];
    for i in 0..=(n - 1) / pk {
        terms.push(((i * pk, 0), f.neg(f.frobenius(seq.terms()[i], k))));
    }
    Ok(BivariatePoly::from_terms(f, terms))
}

/// The simple bound, subadditivity over every split, the Frobenius-power
/// bound with its explicit polynomial, and the kernel counting bound, all at
/// `N = n` given the expansion profile up to `n`.
pub fn check_misc_upper(seq: &Sequence, profile_e: &ExpansionProfile, n: usize) -> Result<Vec<BoundReport>> {
    if n < 2 {
        return Err(Error::Precondition("requires N >= 2".into()));
    }
    if profile_e.values.len() < n {
        return Err(Error::InsufficientTerms { needed: n, available: profile_e.values.len() });
    }
    seq.require(n)?;
    let e_n = profile_e.get(n);
    let mut out = Vec::new();

    let simple = ((n + 3) / 2).min(n - 1);
    out.push(BoundReport::new(
        "R.simple",
        inputs! { "N" => n, "E_N" => e_n },
        Relation::AtMost { bound: simple as i64 },
        e_n as i64,
    ));

    for n1 in 1..=n / 2 {
        let n2 = n - n1;
        let ins = inputs! { "N" => n, "N1" => n1, "N2" => n2, "E_N" => e_n, "E_N1" => profile_e.get(n1), "E_N2" => profile_e.get(n2) };
        if seq.is_zero_prefix(n1.min(n2)) {
            out.push(BoundReport::not_applicable("R.subadd", ins, "G = 0 mod x^min(N1, N2)"));
        } else {
            let bound = (profile_e.get(n1) + profile_e.get(n2)) as i64;
            out.push(BoundReport::new("R.subadd", ins, Relation::AtMost { bound }, e_n as i64));
        }
    }

    let p = seq.field().characteristic() as u64;
    let (pk, _) = frobenius_step(p, n);
    let frob_bound = ((n as u64 - 1) / pk * pk) as i64;
    out.push(BoundReport::new(
        "R.frobenius",
        inputs! { "N" => n, "p" => p, "p^k" => pk, "E_N" => e_n },
        Relation::AtMost { bound: frob_bound },
        e_n as i64,
    ));
    let h = frobenius_witness(seq, n)?;
    let residue = substitute(seq.field(), &h, &seq.generating_function(n)?, n)?;
    let nonzero = residue.coeffs().iter().filter(|c| !c.is_zero()).count();
    out.push(
        BoundReport::new(
            "R.frobenius",
            inputs! { "N" => n, "p^k" => pk, "deg_h" => h.total_degree().unwrap_or(0) },
            Relation::Equal { value: 0 },
            nonzero as i64,
        )
        .with_note("nonzero coefficients of h(x, G) mod x^N for the explicit polynomial"),
    );

    out.push(BoundReport::new(
        "R.kernel",
        inputs! { "N" => n, "E_N" => e_n },
        Relation::AtMost { bound: kernel_bound(n) as i64 },
        e_n as i64,
    ));
    Ok(out)
}

/// Everything `verify` reports for one prefix.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L_N")]
    pub l_n: usize,
    #[serde(rename = "t_N")]
    pub t_n: usize,
    #[serde(rename = "E_N")]
    pub e_n: usize,
    pub bounds: Vec<BoundReport>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.bounds.iter().filter(|b| b.failed()).count()
    }
}

/// Runs every applicable checker on the first `n` terms. The bounds for
/// ultimately periodic sequences and their equality case are added when the
/// sequence declares its periodicity and at least `2(t + T)` terms are
/// available.
pub fn verify_sequence(seq: &Sequence, n: usize) -> Result<VerifyReport> {
    if n == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    seq.require(n)?;
    let fit = berlekamp_massey(seq, n)?;
    let prof_l = linear_profile(seq, n)?;
    let prof_e = expansion_profile(seq, n)?;
    let witness = expansion_complexity(seq, n)?;
    let e_n = witness.e;
    let mut bounds = Vec::new();

    bounds.push(BoundReport::new(
        "E.witness",
        inputs! { "N" => n, "E_N" => e_n },
        Relation::Equal { value: 1 },
        witness.verify(seq)? as i64,
    ));
    if n >= 2 && !seq.is_zero_prefix(n) {
        bounds.extend(check_theorem4(&fit, e_n)?);
    }
    bounds.extend(check_growth(&prof_l, &prof_e.values)?);
    if n >= 2 {
        bounds.extend(check_misc_upper(seq, &prof_e, n)?);
    }

    if let Some(meta) = seq.meta() {
        let need = 2 * (meta.preperiod + meta.period);
        let ins = || inputs! { "N" => n, "t_declared" => meta.preperiod, "T" => meta.period, "available" => seq.len() };
        if seq.len() < need {
            bounds.push(BoundReport::not_applicable("T1.lower", ins(), format!("need {need} terms to fix L")));
        } else if seq.is_zero_prefix(seq.len()) {
            bounds.push(BoundReport::not_applicable("T1.lower", ins(), "zero generating function"));
        } else {
            let full = berlekamp_massey(seq, seq.len())?;
            let rf = rational_form(&full, seq)?;
            let l = rf.linear_complexity();
            bounds.extend(check_theorem1(l, rf.t, n, e_n)?);
            bounds.push(check_theorem1_remark(l, rf.t, n, e_n));
        }
    }
    Ok(VerifyReport { n, l_n: fit.l, t_n: fit.t_n, e_n, bounds })
}
