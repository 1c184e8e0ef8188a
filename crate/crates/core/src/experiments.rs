//! Exhaustive and Monte Carlo drivers.
//!
//! Exhaustive runs walk every prefix of length `N` in lexicographic order
//! (`s_0` most significant) and run the full set of checkers on each.
//! Monte Carlo runs draw sequence `j` from a ChaCha20 stream selected by
//! `(seed, j)`, so results do not depend on how work is split across threads.
//! All merges are associative and commutative and every map is ordered by
//! value, which makes the output independent of the worker count.

use std::collections::{BTreeMap, BTreeSet};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::expcomp::{expansion_complexity, kernel_bound, ExpansionProfile};
use crate::field::{Fe, FieldSpec};
use crate::lincomp::{berlekamp_massey, linear_profile, LinearFit, Sequence};
use crate::theorems::{check_growth, check_misc_upper, check_theorem4, inputs, BoundReport, Relation};
use crate::{Error, Result};

/// Largest `q^N` accepted in exhaustive mode.
pub const EXHAUSTIVE_CAP: u64 = 1 << 20;
/// Largest `q^N` accepted by [`tn_ambiguity_scan`].
pub const TN_SCAN_CAP: u64 = 1 << 10;
/// Largest `q^L` accepted by [`attainable_tn`].
pub const RECURRENCE_CAP: u64 = 1 << 16;
/// Perfect squares, so `sqrt(N)` is exact.
pub const DEFAULT_SCHEDULE: [usize; 5] = [16, 25, 36, 49, 64];
/// How many violating prefixes are kept verbatim in a report.
const KEEP_VIOLATIONS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    MonteCarlo,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub field: FieldSpec,
    pub mode: Mode,
    /// Prefix length for exhaustive runs.
    pub n: usize,
    /// Prefix lengths for Monte Carlo runs.
    pub schedule: Vec<usize>,
    pub samples: u64,
    pub seed: u64,
    pub tn_scan: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn exhaustive(field: FieldSpec, n: usize) -> Self {
        ExperimentConfig {
            field,
            mode: Mode::Exhaustive,
            n,
            schedule: Vec::new(),
            samples: 0,
            seed: 0,
            tn_scan: false,
            threads: None,
        }
    }

    pub fn monte_carlo(field: FieldSpec, samples: u64, seed: u64) -> Self {
        ExperimentConfig {
            field,
            mode: Mode::MonteCarlo,
            n: *DEFAULT_SCHEDULE.iter().max().unwrap(),
            schedule: DEFAULT_SCHEDULE.to_vec(),
            samples,
            seed,
            tn_scan: false,
            threads: None,
        }
    }

    pub fn with_schedule(mut self, schedule: Vec<usize>) -> Self {
        self.n = schedule.iter().copied().max().unwrap_or(0);
        self.schedule = schedule;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn with_tn_scan(mut self, on: bool) -> Self {
        self.tn_scan = on;
        self
    }

    /// `q^N`, if it fits in a `u64`.
    pub fn prefix_count(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.n.try_into().ok()?)
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            Mode::Exhaustive => {
                if self.n == 0 {
                    return Err(Error::Precondition("N must be at least 1".into()));
                }
                if self.prefix_count().is_none_or(|c| c > EXHAUSTIVE_CAP) {
                    return Err(Error::CapExceeded(format!(
                        "{}^{} prefixes exceed {EXHAUSTIVE_CAP}",
                        self.field.order(),
                        self.n
                    )));
                }
            }
            Mode::MonteCarlo => {
                if self.samples == 0 {
                    return Err(Error::Precondition("Monte Carlo needs at least one sample".into()));
                }
                if self.schedule.is_empty() || self.schedule.contains(&0) {
                    return Err(Error::Precondition("schedule must be a nonempty list of positive N".into()));
                }
            }
        }
        Ok(())
    }

    fn expect_mode(&self, mode: Mode) -> Result<()> {
        if self.mode != mode {
            return Err(Error::Precondition(format!("operation needs {mode:?} mode")));
        }
        self.validate()
    }

    fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(job()),
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map(|pool| pool.install(job))
                .map_err(|e| Error::Precondition(format!("thread pool: {e}"))),
        }
    }
}

/// Value counts of `E_N`, `L_N` and `t_N` at one `N`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistributionRecord {
    pub n: usize,
    pub total: u64,
    pub e: BTreeMap<usize, u64>,
    pub l: BTreeMap<usize, u64>,
    pub t_n: BTreeMap<usize, u64>,
}

/// Summary statistics of `E_N / sqrt(N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stats {
    #[serde(rename = "meanEOverSqrtN")]
    pub mean: f64,
    /// Lower median.
    #[serde(rename = "medianEOverSqrtN")]
    pub median: f64,
    #[serde(rename = "minEOverSqrtN")]
    pub min: f64,
}

impl DistributionRecord {
    pub fn new(n: usize) -> Self {
        DistributionRecord { n, ..Default::default() }
    }

    pub fn record(&mut self, e: usize, l: usize, t_n: usize) {
        self.total += 1;
        *self.e.entry(e).or_default() += 1;
        *self.l.entry(l).or_default() += 1;
        *self.t_n.entry(t_n).or_default() += 1;
    }

    pub fn merge(&mut self, other: &DistributionRecord) {
        assert_eq!(self.n, other.n, "merging distributions at different N");
        self.total += other.total;
        for (dst, src) in [(&mut self.e, &other.e), (&mut self.l, &other.l), (&mut self.t_n, &other.t_n)] {
            for (&v, &c) in src {
                *dst.entry(v).or_default() += c;
            }
        }
    }

    /// Number of records whose `E_N` satisfies `pred`.
    pub fn count_e(&self, pred: impl Fn(usize) -> bool) -> u64 {
        self.e.iter().filter(|(&v, _)| pred(v)).map(|(_, &c)| c).sum()
    }

    pub fn stats(&self) -> Option<Stats> {
        if self.total == 0 {
            return None;
        }
        let root = (self.n as f64).sqrt();
        let sum: u64 = self.e.iter().map(|(&v, &c)| v as u64 * c).sum();
        let mid = (self.total - 1) / 2;
        let mut seen = 0;
        let median = self
            .e
            .iter()
            .find(|(_, &c)| {
                seen += c;
                seen > mid
            })
            .map(|(&v, _)| v)
            .unwrap();
        let min = *self.e.keys().next().unwrap();
        Some(Stats {
            mean: sum as f64 / self.total as f64 / root,
            median: median as f64 / root,
            min: min as f64 / root,
        })
    }
}

fn pairs(m: &BTreeMap<usize, u64>) -> Vec<[u64; 2]> {
    m.iter().map(|(&v, &c)| [v as u64, c]).collect()
}

impl Serialize for DistributionRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DistributionRecord", 6)?;
        st.serialize_field("E_N", &pairs(&self.e))?;
        st.serialize_field("L_N", &pairs(&self.l))?;
        st.serialize_field("N", &self.n)?;
        st.serialize_field("stats", &self.stats())?;
        st.serialize_field("t_N", &pairs(&self.t_n))?;
        st.serialize_field("total", &self.total)?;
        st.end()
    }
}

/// Prefix number `index` of length `n`, `s_0` most significant.
pub fn prefix_from_index(field: &FieldSpec, n: usize, mut index: u64) -> Vec<Fe> {
    let q = field.order() as u64;
    let mut v = vec![Fe::ZERO; n];
    for slot in v.iter_mut().rev() {
        *slot = Fe((index % q) as u32);
        index /= q;
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub prefix: Vec<Fe>,
    pub report: BoundReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExhaustiveReport {
    pub field: FieldSpec,
    #[serde(rename = "N")]
    pub n: usize,
    pub distribution: DistributionRecord,
    pub checks: u64,
    pub violations: u64,
    #[serde(rename = "witnessesChecked")]
    pub witnesses_checked: u64,
    #[serde(rename = "firstViolations")]
    pub first_violations: Vec<(u64, Violation)>,
}

#[derive(Default)]
struct Partial {
    dist: DistributionRecord,
    checks: u64,
    violations: u64,
    witnesses: u64,
    kept: Vec<(u64, Violation)>,
}

impl Partial {
    fn absorb(mut self, other: Partial) -> Partial {
        self.dist.merge(&other.dist);
        self.checks += other.checks;
        self.violations += other.violations;
        self.witnesses += other.witnesses;
        self.kept.extend(other.kept);
        self.kept.sort_by_key(|(i, _)| *i);
        self.kept.truncate(KEEP_VIOLATIONS);
        self
    }

    fn tally(&mut self, index: u64, prefix: &[Fe], reports: impl IntoIterator<Item = BoundReport>) {
        for r in reports {
            self.checks += 1;
            if r.failed() {
                self.violations += 1;
                if self.kept.len() < KEEP_VIOLATIONS {
                    self.kept.push((index, Violation { prefix: prefix.to_vec(), report: r }));
                }
            }
        }
    }
}

/// Witness validity at every `N' <= N`, the two growth laws along the
/// profiles, and at every `2 <= N' <= N`: both bounds from the canonical
/// shortest recurrence and the four general upper bounds.
fn check_prefix(seq: &Sequence, index: u64, acc: &mut Partial) -> Result<()> {
    let n = seq.len();
    let mut e_values = Vec::with_capacity(n);
    for k in 1..=n {
        let w = expansion_complexity(seq, k)?;
        let ok = w.verify(seq)?;
        acc.witnesses += 1;
        acc.tally(
            index,
            seq.terms(),
            [BoundReport::new("E.witness", inputs! { "N" => k, "E_N" => w.e }, Relation::Equal { value: 1 }, ok as i64)],
        );
        e_values.push(w.e);
    }
    let prof_e = ExpansionProfile { values: e_values };
    let prof_l = linear_profile(seq, n)?;
    acc.tally(index, seq.terms(), check_growth(&prof_l, &prof_e.values)?);
    for k in 2..=n {
        if !seq.is_zero_prefix(k) {
            let fit = berlekamp_massey(seq, k)?;
            acc.tally(index, seq.terms(), check_theorem4(&fit, prof_e.get(k))?);
        }
        acc.tally(index, seq.terms(), check_misc_upper(seq, &prof_e, k)?);
    }
    let fit = berlekamp_massey(seq, n)?;
    acc.dist.record(prof_e.get(n), fit.l, fit.t_n);
    Ok(())
}

/// Every prefix of length `N`, with all checkers; `violations` must be 0.
pub fn enumerate_all(cfg: &ExperimentConfig) -> Result<ExhaustiveReport> {
    cfg.expect_mode(Mode::Exhaustive)?;
    let total = cfg.prefix_count().unwrap();
    let (f, n) = (&cfg.field, cfg.n);
    let part = cfg.install(|| {
        (0..total)
            .into_par_iter()
            .try_fold(
                || Partial { dist: DistributionRecord::new(n), ..Default::default() },
                |mut acc, idx| {
                    let seq = Sequence::new(f.clone(), prefix_from_index(f, n, idx), None)?;
                    check_prefix(&seq, idx, &mut acc)?;
                    Ok::<_, Error>(acc)
                },
            )
            .try_reduce(|| Partial { dist: DistributionRecord::new(n), ..Default::default() }, |a, b| Ok(a.absorb(b)))
    })??;
    Ok(ExhaustiveReport {
        field: cfg.field.clone(),
        n,
        distribution: part.dist,
        checks: part.checks,
        violations: part.violations,
        witnesses_checked: part.witnesses,
        first_violations: part.kept,
    })
}

/// `E_N` of every prefix, without running checkers.
pub fn exact_distribution(cfg: &ExperimentConfig) -> Result<DistributionRecord> {
    cfg.expect_mode(Mode::Exhaustive)?;
    let total = cfg.prefix_count().unwrap();
    let (f, n) = (&cfg.field, cfg.n);
    cfg.install(|| {
        (0..total)
            .into_par_iter()
            .try_fold(
                || DistributionRecord::new(n),
                |mut acc, idx| {
                    let seq = Sequence::new(f.clone(), prefix_from_index(f, n, idx), None)?;
                    let fit = berlekamp_massey(&seq, n)?;
                    acc.record(expansion_complexity(&seq, n)?.e, fit.l, fit.t_n);
                    Ok::<_, Error>(acc)
                },
            )
            .try_reduce(
                || DistributionRecord::new(n),
                |mut a, b| {
                    a.merge(&b);
                    Ok(a)
                },
            )
    })?
}

/// Low-expansion count against `q^{b^2}`. Exploratory: `holds` records the
/// comparison and is not asserted anywhere.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowExpansionCount {
    #[serde(rename = "N")]
    pub n: usize,
    pub b: usize,
    pub count: u64,
    pub total: u64,
    /// `q^{b^2}`, absent if it overflows.
    #[serde(rename = "qPowB2")]
    pub q_pow_b2: Option<u64>,
    /// `count / q^{b^2}` (floating point).
    pub ratio: Option<f64>,
    pub holds: bool,
    pub exploratory: bool,
}

pub fn count_low_expansion(cfg: &ExperimentConfig, b: usize) -> Result<LowExpansionCount> {
    let dist = exact_distribution(cfg)?;
    Ok(low_expansion_from(&dist, cfg.field.order(), b))
}

/// The same comparison read off an exact distribution.
pub fn low_expansion_from(dist: &DistributionRecord, q: u32, b: usize) -> LowExpansionCount {
    let count = dist.count_e(|e| e <= b);
    let q_pow_b2 = u32::try_from(b * b).ok().and_then(|e| (q as u64).checked_pow(e));
    LowExpansionCount {
        n: dist.n,
        b,
        count,
        total: dist.total,
        q_pow_b2,
        ratio: q_pow_b2.map(|d| count as f64 / d as f64),
        holds: q_pow_b2.is_none_or(|d| count <= d),
        exploratory: true,
    }
}

/// Uniform index in `[0, q)` by rejection sampling.
fn uniform_below(rng: &mut ChaCha20Rng, q: u64) -> u64 {
    let zone = u64::MAX - (u64::MAX % q + 1) % q;
    loop {
        let x = rng.next_u64();
        if x <= zone {
            return x % q;
        }
    }
}

/// Sequence `j` of a Monte Carlo run: ChaCha20 keyed by `seed`, stream `j`.
pub fn sample_sequence(field: &FieldSpec, seed: u64, j: u64, len: usize) -> Sequence {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(j);
    let q = field.order() as u64;
    let terms = (0..len).map(|_| Fe(uniform_below(&mut rng, q) as u32)).collect();
    Sequence::new(field.clone(), terms, None).expect("sampled indices are in range")
}

/// How many samples have `E_N < sqrt((1 - eps) N)`, i.e. `E^2 < (1 - eps) N`
/// evaluated in integers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowFraction {
    pub epsilon: &'static str,
    pub count: u64,
    /// `count / samples` (floating point).
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEntry {
    #[serde(rename = "N")]
    pub n: usize,
    pub distribution: DistributionRecord,
    #[serde(rename = "kernelBound")]
    pub kernel_bound: usize,
    #[serde(rename = "maxE")]
    pub max_e: usize,
    pub low: Vec<LowFraction>,
    /// Failed witness, kernel-bound or shortest-recurrence checks.
    pub violations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub field: FieldSpec,
    pub samples: u64,
    pub seed: u64,
    pub entries: Vec<McEntry>,
}

/// Thresholds `(label, num, den)` encoding `E^2 < (num / den) N`.
const EPSILONS: [(&str, u64, u64); 2] = [("0.25", 3, 4), ("0.5", 1, 2)];

pub fn monte_carlo(cfg: &ExperimentConfig) -> Result<MonteCarloReport> {
    cfg.expect_mode(Mode::MonteCarlo)?;
    let schedule = &cfg.schedule;
    let len = *schedule.iter().max().unwrap();
    let fresh = || (schedule.iter().map(|&n| DistributionRecord::new(n)).collect::<Vec<_>>(), vec![0u64; schedule.len()]);
    let (dists, viol) = cfg.install(|| {
        (0..cfg.samples)
            .into_par_iter()
            .try_fold(fresh, |(mut dists, mut viol), j| {
                let seq = sample_sequence(&cfg.field, cfg.seed, j, len);
                for (slot, &n) in schedule.iter().enumerate() {
                    let w = expansion_complexity(&seq, n)?;
                    let fit = berlekamp_massey(&seq, n)?;
                    let mut bad = !w.verify(&seq)? || w.e > kernel_bound(n);
                    if n >= 2 && fit.l > 0 {
                        bad |= check_theorem4(&fit, w.e)?.iter().any(BoundReport::failed);
                    }
                    viol[slot] += bad as u64;
                    dists[slot].record(w.e, fit.l, fit.t_n);
                }
                Ok::<_, Error>((dists, viol))
            })
            .try_reduce(fresh, |(mut da, mut va), (db, vb)| {
                for (a, b) in da.iter_mut().zip(&db) {
                    a.merge(b);
                }
                for (a, b) in va.iter_mut().zip(vb) {
                    *a += b;
                }
                Ok((da, va))
            })
    })??;
    let entries = dists
        .into_iter()
        .zip(viol)
        .map(|(d, violations)| {
            let n = d.n as u64;
            let low = EPSILONS
                .iter()
                .map(|&(epsilon, num, den)| {
                    let count = d.count_e(|e| den * (e as u64).pow(2) < num * n);
                    LowFraction { epsilon, count, fraction: count as f64 / d.total as f64 }
                })
                .collect();
            McEntry {
                n: d.n,
                kernel_bound: kernel_bound(d.n),
                max_e: *d.e.keys().next_back().unwrap(),
                low,
                violations,
                distribution: d,
            }
        })
        .collect();
    Ok(MonteCarloReport { field: cfg.field.clone(), samples: cfg.samples, seed: cfg.seed, entries })
}

/// `t_N` of every shortest recurrence of the first `n` terms, found by
/// trying all `q^{L_N}` coefficient vectors.
pub fn attainable_tn(seq: &Sequence, n: usize) -> Result<BTreeSet<usize>> {
    Ok(shortest_recurrences(seq, n)?.into_iter().map(|fit| fit.t_n).collect())
}

fn shortest_recurrences(seq: &Sequence, n: usize) -> Result<Vec<LinearFit>> {
    let l = berlekamp_massey(seq, n)?.l;
    if l == 0 {
        return Err(Error::ZeroGeneratingFunction);
    }
    let f = seq.field();
    let q = f.order() as u64;
    let count = q.checked_pow(l as u32).filter(|&c| c <= RECURRENCE_CAP).ok_or_else(|| {
        Error::CapExceeded(format!("{q}^{l} candidate recurrences exceed {RECURRENCE_CAP}"))
    })?;
    let mut out = Vec::new();
    for idx in 0..count {
        let coeffs = prefix_from_index(f, l, idx);
        let t_n = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(l);
        let fit = LinearFit { n, l, coeffs, t_n };
        if fit.annihilates(f, seq.terms()) {
            out.push(fit);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TnExample {
    pub prefix: Vec<Fe>,
    #[serde(rename = "L_N")]
    pub l: usize,
    #[serde(rename = "canonicalT")]
    pub canonical: usize,
    pub attainable: Vec<usize>,
    /// The attainable `t_N` under which both bounds hold.
    pub holding: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TnScanReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub prefixes: u64,
    pub not_applicable: u64,
    pub unique: u64,
    pub ambiguous: u64,
    /// Both bounds hold for every shortest recurrence.
    pub hold_all: u64,
    /// For some shortest recurrence but not all.
    pub hold_some: u64,
    pub hold_none: u64,
    pub hold_canonical: u64,
    /// Prefixes with `N >= 2 L_N`, and how many of those had a unique recurrence.
    pub long_prefixes: u64,
    pub long_unique: u64,
    pub examples: Vec<TnExample>,
}

/// Probes how much `t_N` depends on the choice of shortest recurrence, and
/// whether the shortest-recurrence bounds hold under every choice.
pub fn tn_ambiguity_scan(cfg: &ExperimentConfig) -> Result<TnScanReport> {
    cfg.expect_mode(Mode::Exhaustive)?;
    let total = cfg.prefix_count().unwrap();
    if total > TN_SCAN_CAP {
        return Err(Error::CapExceeded(format!("{total} prefixes exceed {TN_SCAN_CAP} for the recurrence scan")));
    }
    let (f, n) = (&cfg.field, cfg.n);
    if n < 2 {
        return Err(Error::Precondition("requires N >= 2".into()));
    }
    let mut rep = TnScanReport { n, prefixes: total, ..Default::default() };
    for idx in 0..total {
        let seq = Sequence::new(f.clone(), prefix_from_index(f, n, idx), None)?;
        if seq.is_zero_prefix(n) {
            rep.not_applicable += 1;
            continue;
        }
        let canonical = berlekamp_massey(&seq, n)?;
        let e_n = expansion_complexity(&seq, n)?.e;
        let fits = shortest_recurrences(&seq, n)?;
        let holds = |fit: &LinearFit| -> Result<bool> { Ok(check_theorem4(fit, e_n)?.iter().all(|b| !b.failed())) };
        let attainable: BTreeSet<usize> = fits.iter().map(|fit| fit.t_n).collect();
        let mut holding = BTreeSet::new();
        let mut good = 0;
        for fit in &fits {
            if holds(fit)? {
                good += 1;
                holding.insert(fit.t_n);
            }
        }
        match good {
            0 => rep.hold_none += 1,
            g if g == fits.len() => rep.hold_all += 1,
            _ => rep.hold_some += 1,
        }
        rep.hold_canonical += holds(&canonical)? as u64;
        if attainable.len() == 1 {
            rep.unique += 1;
        } else {
            rep.ambiguous += 1;
            if rep.examples.len() < 8 {
                rep.examples.push(TnExample {
                    prefix: seq.terms().to_vec(),
                    l: canonical.l,
                    canonical: canonical.t_n,
                    attainable: attainable.iter().copied().collect(),
                    holding: holding.into_iter().collect(),
                });
            }
        }
        if n >= 2 * canonical.l {
            rep.long_prefixes += 1;
            rep.long_unique += (fits.len() == 1) as u64;
        }
    }
    Ok(rep)
}
