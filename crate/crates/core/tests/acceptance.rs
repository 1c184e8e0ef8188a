//! Acceptance suite. Runs as a plain binary so that every criterion prints
//! its verdict line whether or not output capture is on.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use seqcx::binomial::{generate, BinomialSpec};
use seqcx::expcomp::brute_force_expansion;
use seqcx::experiments::{
    count_low_expansion, enumerate_all, exact_distribution, monte_carlo, prefix_from_index, ExperimentConfig,
};
use seqcx::format::{counts_csv, to_sorted_json};
use seqcx::series::{substitute, Poly, TruncatedSeries};
use seqcx::theorems::{check_theorem1, check_theorem1_remark};
use seqcx::{berlekamp_massey, expansion_complexity, linear_profile, ExpansionWitness, Fe, FieldSpec, Sequence};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const PRIMES: [u32; 11] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

/// Exact `E_16` distribution over all `2^16` binary prefixes.
const E16_FIXTURE: [(usize, u64); 6] = [(0, 1), (1, 3), (2, 1036), (3, 3504), (4, 32512), (5, 28480)];

#[derive(Default)]
struct Witnesses {
    checked: u64,
    bad: Vec<String>,
}

impl Witnesses {
    /// Substitutes the witness back independently of `ExpansionWitness::verify`.
    fn check(&mut self, seq: &Sequence, n: usize, w: &ExpansionWitness) {
        self.checked += 1;
        let f = seq.field();
        let g = seq.generating_function(n).unwrap();
        let ok = match &w.h {
            None => w.e == 0 && g.coeffs().iter().all(|c| c.is_zero()),
            Some(h) => h.total_degree() == Some(w.e) && substitute(f, h, &g, n).unwrap().coeffs().iter().all(|c| c.is_zero()),
        };
        if !ok && self.bad.len() < 8 {
            self.bad.push(format!("q={} N={n} {:?}", f.order(), seq.terms()));
        }
    }
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(fails: &[String], ok_detail: String) -> Verdict {
    if fails.is_empty() {
        Verdict { pass: true, detail: ok_detail }
    } else {
        Verdict { pass: false, detail: format!("{} failure(s), first: {}", fails.len(), fails[0]) }
    }
}

fn binomial_e(spec: &BinomialSpec, wit: &mut Witnesses) -> usize {
    let p = spec.p as usize;
    let seq = generate(spec, p);
    let w = expansion_complexity(&seq, p).unwrap();
    wit.check(&seq, p, &w);
    w.e
}

fn ac1(wit: &mut Witnesses) -> Verdict {
    let mut fails = Vec::new();
    let mut cases = 0;
    for p in PRIMES {
        for k in (1..p).filter(|&k| (k + 1) * (k + 2) < p) {
            cases += 1;
            let e = binomial_e(&BinomialSpec::new(p, k).unwrap(), wit);
            if e != (k + 2) as usize {
                fails.push(format!("p={p} k={k} E_p={e}"));
            }
        }
    }
    verdict(&fails, format!("{cases} (p, k) pairs with E_p = k + 2"))
}

fn ac2(wit: &mut Witnesses) -> Verdict {
    let mut fails = Vec::new();
    let mut cases = 0;
    for p in PRIMES {
        for k in (1..p).filter(|&k| (k + 1) * (k + 2) >= p) {
            cases += 1;
            let lo = p.div_ceil(k + 2);
            let hi = lo.max(p % (k + 1));
            let e = binomial_e(&BinomialSpec::new(p, k).unwrap(), wit) as u32;
            if !(lo..=hi).contains(&e) {
                fails.push(format!("p={p} k={k} E_p={e} not in [{lo}, {hi}]"));
            }
        }
    }
    for (p, want) in [(7, 2), (11, 3)] {
        let e = binomial_e(&BinomialSpec::new(p, 2).unwrap(), wit);
        if e != want {
            fails.push(format!("p={p} k=2 E_p={e}, want {want}"));
        }
    }
    verdict(&fails, format!("{cases} (p, k) pairs inside the interval; E_7 = 2, E_11 = 3 at k = 2"))
}

fn ac3() -> Verdict {
    let mut fails = Vec::new();
    let mut cases = 0;
    for p in PRIMES {
        for k in 1..p {
            cases += 1;
            let seq = generate(&BinomialSpec::new(p, k).unwrap(), 2 * p as usize);
            let l = berlekamp_massey(&seq, 2 * p as usize).unwrap().l;
            if l != (k + 1) as usize {
                fails.push(format!("p={p} k={k} L={l}"));
            }
            for (i, &l_n) in linear_profile(&seq, 2 * p as usize).unwrap().iter().enumerate() {
                let n = i as u32 + 1;
                let bound = (k + 1).min(n.div_ceil(2)).min(p - k) as usize;
                if l_n < bound {
                    fails.push(format!("p={p} k={k} N={n} L_N={l_n} < {bound}"));
                }
            }
        }
    }
    verdict(&fails, format!("{cases} (p, k) pairs, L = k + 1 and profile bound for N <= 2p"))
}

fn ac4() -> Verdict {
    let mut fails = Vec::new();
    let mut cases = 0;
    for p in PRIMES {
        let f = FieldSpec::prime(p).unwrap();
        let n = p as usize;
        let one_minus_x = Poly::from_ints(&f, &[1, -1]);
        for k in 1..p {
            cases += 1;
            let seq = generate(&BinomialSpec::new(p, k).unwrap(), n);
            let lhs = TruncatedSeries::from_poly(&one_minus_x.pow(&f, k as u64 + 1), n)
                .mul(&f, &seq.generating_function(n).unwrap(), n)
                .unwrap();
            if lhs != TruncatedSeries::one(n) {
                fails.push(format!("p={p} k={k}"));
            }
        }
    }
    verdict(&fails, format!("{cases} (p, k) pairs with (1 - x)^(k+1) G = 1 mod x^p"))
}

fn ac5(wit: &mut Witnesses) -> Verdict {
    let mut fails = Vec::new();
    for p in [2, 3, 5] {
        let f = FieldSpec::prime(p).unwrap();
        let seq = Sequence::new(f, vec![Fe::ONE; 50], None).unwrap();
        for n in 1..=50 {
            let w = expansion_complexity(&seq, n).unwrap();
            wit.check(&seq, n, &w);
            let want = if n <= 2 { 1 } else { 2 };
            if w.e != want {
                fails.push(format!("q={p} N={n} E_N={}", w.e));
            }
            let [lo, hi] = check_theorem1(1, 0, n, w.e).unwrap();
            let eq = check_theorem1_remark(1, 0, n, w.e);
            for r in [lo, hi, eq] {
                if r.failed() {
                    fails.push(format!("q={p} N={n} {}", r.claim_id));
                }
            }
        }
    }
    verdict(&fails, "all-ones over F_2, F_3, F_5: E_1 = E_2 = 1, E_N = 2 for 3 <= N <= 50".into())
}

fn ac6() -> Verdict {
    let mut fails = Vec::new();
    let mut summary = Vec::new();
    for (p, n) in [(2, 8), (3, 5)] {
        let r = enumerate_all(&ExperimentConfig::exhaustive(FieldSpec::prime(p).unwrap(), n)).unwrap();
        summary.push(format!("q={p} N={n}: {} prefixes, {} checks", r.distribution.total, r.checks));
        if r.violations > 0 {
            let first = &r.first_violations[0].1;
            fails.push(format!("q={p} N={n}: {} violations, first {} on {:?}", r.violations, first.report.claim_id, first.prefix));
        }
    }
    verdict(&fails, format!("zero violations ({})", summary.join("; ")))
}

/// Least `L` such that some `c_0..c_{L-1}` over `F_2` satisfies
/// `s_{i+L} = sum_l c_l s_{i+l}` for every `i + L < n`.
fn minimal_recurrence_f2(s: &[u8]) -> usize {
    let n = s.len();
    if s.iter().all(|&x| x == 0) {
        return 0;
    }
    (1..=n)
        .find(|&l| {
            (0u32..1 << l).any(|c| (0..n - l).all(|i| (0..l).fold(s[i + l], |acc, ell| acc ^ ((c >> ell) as u8 & 1 & s[i + ell])) == 0))
        })
        .unwrap()
}

fn ac7(wit: &mut Witnesses) -> Verdict {
    let f2 = FieldSpec::prime(2).unwrap();
    let mut fails = Vec::new();
    let mut compared = (0, 0);
    for n in 1..=6 {
        for idx in 0..1u64 << n {
            let seq = Sequence::new(f2.clone(), prefix_from_index(&f2, n, idx), None).unwrap();
            let w = expansion_complexity(&seq, n).unwrap();
            wit.check(&seq, n, &w);
            match brute_force_expansion(&seq, n, 3).unwrap() {
                Some(b) => {
                    wit.check(&seq, n, &b);
                    if b.e != w.e {
                        fails.push(format!("N={n} {:?}: kernel {} brute {}", seq.terms(), w.e, b.e));
                    }
                }
                None => fails.push(format!("N={n} {:?}: brute force found nothing up to degree 3", seq.terms())),
            }
            compared.0 += 1;
        }
    }
    for n in 1..=12 {
        for idx in 0..1u64 << n {
            let terms = prefix_from_index(&f2, n, idx);
            let bits: Vec<u8> = terms.iter().map(|e| e.0 as u8).collect();
            let seq = Sequence::new(f2.clone(), terms, None).unwrap();
            let l = berlekamp_massey(&seq, n).unwrap().l;
            let want = minimal_recurrence_f2(&bits);
            if l != want {
                fails.push(format!("N={n} {bits:?}: BM {l} search {want}"));
            }
            compared.1 += 1;
        }
    }
    verdict(&fails, format!("{} E_N pairs (N <= 6) and {} L_N pairs (N <= 12) agree", compared.0, compared.1))
}

fn ac9(wit: &mut Witnesses) -> Verdict {
    let f2 = FieldSpec::prime(2).unwrap();
    let mut fails = Vec::new();
    let fixture: BTreeMap<usize, u64> = E16_FIXTURE.into_iter().collect();

    // (a) exact distribution, once through the driver and once by a direct loop
    let exact = exact_distribution(&ExperimentConfig::exhaustive(f2.clone(), 16)).unwrap();
    if exact.e != fixture {
        fails.push(format!("E_16 distribution {:?} differs from fixture", exact.e));
    }
    let mut direct: BTreeMap<usize, u64> = BTreeMap::new();
    for idx in 0..1u64 << 16 {
        let seq = Sequence::new(f2.clone(), prefix_from_index(&f2, 16, idx), None).unwrap();
        let w = expansion_complexity(&seq, 16).unwrap();
        wit.check(&seq, 16, &w);
        *direct.entry(w.e).or_default() += 1;
    }
    if direct != fixture {
        fails.push(format!("direct E_16 loop {direct:?} differs from fixture"));
    }

    // (b) Monte Carlo against the fixture
    let mc = monte_carlo(&ExperimentConfig::monte_carlo(f2.clone(), 4096, 20240601)).unwrap();
    let at16 = mc.entries.iter().find(|e| e.n == 16).unwrap();
    let total: u64 = fixture.values().sum();
    // pool E <= 2 so every expected count is at least 5
    let bins: Vec<(u64, f64)> = {
        let obs = |pred: &dyn Fn(usize) -> bool| at16.distribution.count_e(pred);
        let exp = |pred: &dyn Fn(usize) -> bool| {
            fixture.iter().filter(|(&v, _)| pred(v)).map(|(_, &c)| c).sum::<u64>() as f64 * 4096.0 / total as f64
        };
        let preds: [&dyn Fn(usize) -> bool; 4] = [&|e| e <= 2, &|e| e == 3, &|e| e == 4, &|e| e >= 5];
        preds.iter().map(|p| (obs(p), exp(p))).collect()
    };
    let stat: f64 = bins.iter().map(|&(o, e)| (o as f64 - e).powi(2) / e).sum();
    let df = (bins.len() - 1) as f64;
    let p_value = 1.0 - ChiSquared::new(df).unwrap().cdf(stat);
    if p_value < 0.01 {
        fails.push(format!("chi-square {stat:.3} on {df} df, p = {p_value:.4} < 0.01"));
    }

    // (c) kernel bound at N = 64 and the low-E fractions along the schedule
    let at64 = mc.entries.iter().find(|e| e.n == 64).unwrap();
    if at64.max_e > 10 {
        fails.push(format!("max E_64 = {}", at64.max_e));
    }
    let mut lows = Vec::new();
    for e in &mc.entries {
        if e.violations > 0 {
            fails.push(format!("N={}: {} sampled sequences failed a check", e.n, e.violations));
        }
        let fr: Vec<String> = e.low.iter().map(|l| format!("eps={}:{:.4}", l.epsilon, l.fraction)).collect();
        lows.push(format!("N={} [{}]", e.n, fr.join(" ")));
    }
    verdict(
        &fails,
        format!(
            "E_16 fixture matched; chi-square {stat:.2} on {df} df, p = {p_value:.3}; max E_64 = {}; low-E fractions {}",
            at64.max_e,
            lows.join(", ")
        ),
    )
}

fn ac10() -> Verdict {
    let c = count_low_expansion(&ExperimentConfig::exhaustive(FieldSpec::prime(2).unwrap(), 4), 1).unwrap();
    let mut fails = Vec::new();
    if (c.count, c.q_pow_b2, c.exploratory) != (4, Some(2), true) {
        fails.push(format!("{c:?}"));
    }
    verdict(&fails, format!("count {} vs q^(b^2) = 2, labelled exploratory", c.count))
}

fn ac11() -> Verdict {
    let mut fails = Vec::new();
    let f2 = FieldSpec::prime(2).unwrap();
    let f3 = FieldSpec::prime(3).unwrap();

    let mc = |threads| {
        let cfg = ExperimentConfig::monte_carlo(f3.clone(), 300, 99).with_schedule(vec![9, 16, 25]).with_threads(threads);
        let r = monte_carlo(&cfg).unwrap();
        let csv: String = r.entries.iter().map(|e| counts_csv(&e.distribution.e)).collect();
        (to_sorted_json(&r), csv)
    };
    let base = mc(1);
    for threads in [1, 2, 4, 7] {
        if mc(threads) != base {
            fails.push(format!("Monte Carlo output changed with {threads} threads"));
        }
    }
    let ex = |threads| {
        let r = enumerate_all(&ExperimentConfig::exhaustive(f2.clone(), 10).with_threads(threads)).unwrap();
        (to_sorted_json(&r), counts_csv(&r.distribution.e))
    };
    let base = ex(1);
    for threads in [1, 3, 8] {
        if ex(threads) != base {
            fails.push(format!("exhaustive output changed with {threads} threads"));
        }
    }
    verdict(&fails, "byte-identical JSON and CSV across repeats and 1/2/3/4/7/8 workers".into())
}

fn main() -> ExitCode {
    let mut wit = Witnesses::default();
    let mut results: Vec<(&str, &str, Verdict, f64)> = Vec::new();
    macro_rules! run {
        ($id:literal, $name:literal, $e:expr) => {{
            let t = Instant::now();
            let v = $e;
            results.push(($id, $name, v, t.elapsed().as_secs_f64()));
            let (id, name, v, secs) = results.last().unwrap();
            println!("[{}] {id} {name}: {} ({secs:.2}s)", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        }};
    }
    run!("AC1", "binomial exact case", ac1(&mut wit));
    run!("AC2", "binomial interval case", ac2(&mut wit));
    run!("AC3", "binomial linear complexity", ac3());
    run!("AC4", "binomial generating function", ac4());
    run!("AC5", "all-ones expansion profile", ac5(&mut wit));
    run!("AC6", "exhaustive zero-violation sweep", ac6());
    run!("AC7", "oracle equivalence", ac7(&mut wit));
    run!("AC9", "random-sequence probe", ac9(&mut wit));
    run!("AC10", "low-expansion count", ac10());
    run!("AC11", "determinism", ac11());
    let w = Verdict {
        pass: wit.bad.is_empty() && wit.checked > 0,
        detail: if wit.bad.is_empty() {
            format!("{} witnesses re-substituted, all vanish with exact degree", wit.checked)
        } else {
            format!("{} of {} witnesses invalid, first {}", wit.bad.len(), wit.checked, wit.bad[0])
        },
    };
    run!("AC8", "witness validity", w);

    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
