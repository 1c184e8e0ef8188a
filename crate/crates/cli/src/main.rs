use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use seqcx::binomial::{self, BinomialSpec};
use seqcx::experiments::{self, DistributionRecord, ExperimentConfig, DEFAULT_SCHEDULE};
use seqcx::format::{self, ProfileRow, ResultRecord, Timing};
use seqcx::theorems::{verify_sequence, BoundReport};
use seqcx::{berlekamp_massey, expansion_complexity, Error, FieldSpec, Sequence};

/// Linear and expansion complexity of sequences over finite fields.
#[derive(Parser)]
#[command(name = "seqcx", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shortest linear recurrence of a prefix.
    Lincomp(LincompArgs),
    /// N-th expansion complexity of a prefix.
    Expcomp(ExpcompArgs),
    /// Emit or analyze a binomial coefficient sequence.
    Binomial(BinomialArgs),
    /// Run every applicable bound checker on a prefix.
    Verify(VerifyArgs),
    /// Exhaustive or Monte Carlo experiments.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Sequence file, or `-` for stdin.
    #[arg(long)]
    input: PathBuf,
    /// Prefix length; defaults to the whole file.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct LincompArgs {
    #[command(flatten)]
    input: InputArgs,
    /// One row per N' <= N.
    #[arg(long)]
    profile: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ExpcompArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    profile: bool,
    /// Include the polynomial attaining E_N.
    #[arg(long)]
    witness: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct BinomialArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    k: u32,
    /// Number of terms; defaults to p.
    #[arg(long)]
    len: Option<usize>,
    #[arg(long)]
    analyze: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Mc,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Field order, `p` or `p^m`.
    #[arg(long, default_value = "2")]
    q: String,
    /// Prefix length (exhaustive) or a single-entry schedule (mc).
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated prefix lengths for mc.
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<usize>>,
    #[arg(long, default_value_t = 4096)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Directory for CSV tables and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also count prefixes with E_N <= B (exhaustive only).
    #[arg(long)]
    count_low: Option<usize>,
    /// Also enumerate every shortest recurrence (exhaustive only).
    #[arg(long)]
    tn_scan: bool,
}

enum Failure {
    Core(Error),
    Usage(String),
    Violations(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CmdResult = Result<(), Failure>;

fn read_input(path: &Path) -> Result<Sequence, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    Ok(format::parse_sequence(&text)?)
}

fn load(args: &InputArgs) -> Result<(Sequence, usize), Failure> {
    let seq = read_input(&args.input)?;
    let n = args.n.unwrap_or(seq.len());
    if n == 0 || n > seq.len() {
        return Err(Error::Precondition(format!("--n {n} needs 1 <= N <= {} (terms in file)", seq.len())).into());
    }
    Ok((seq, n))
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", format::to_sorted_json(v));
}

fn fmt_opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".into(), |v| v.to_string())
}

fn print_rows(rows: &[ProfileRow], csv: bool, cols: (bool, bool)) {
    let (lin, exp) = cols;
    let mut head = vec!["N"];
    if lin {
        head.extend(["L_N", "t_N"]);
    }
    if exp {
        head.push("E_N");
    }
    let sep = if csv { "," } else { " " };
    println!("{}", head.join(sep));
    for r in rows {
        let mut v = vec![r.n.to_string()];
        if lin {
            v.extend([fmt_opt(r.l_n), fmt_opt(r.t_n)]);
        }
        if exp {
            v.push(fmt_opt(r.e_n));
        }
        println!("{}", v.join(sep));
    }
}

fn lincomp(args: LincompArgs) -> CmdResult {
    let start = Instant::now();
    let (seq, n) = load(&args.input)?;
    let fit = berlekamp_massey(&seq, n)?;
    let rows = if args.profile {
        (1..=n)
            .map(|k| berlekamp_massey(&seq, k).map(|f| ProfileRow { n: k, l_n: Some(f.l), t_n: Some(f.t_n), e_n: None }))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        vec![ProfileRow { n, l_n: Some(fit.l), t_n: Some(fit.t_n), e_n: None }]
    };
    if args.out.json {
        let mut rec = ResultRecord::new("lincomp", &seq, n);
        rec.l_n = Some(fit.l);
        rec.t_n = Some(fit.t_n);
        rec.recurrence = Some(fit.coeffs.clone());
        rec.profile = args.profile.then_some(rows);
        rec.timing = Timing { seconds: start.elapsed().as_secs_f64() };
        print_json(&rec);
    } else if args.out.csv || args.profile {
        print_rows(&rows, args.out.csv, (true, false));
    } else {
        println!("N={n} L_N={} t_N={}", fit.l, fit.t_n);
        let c: Vec<String> = fit.coeffs.iter().map(|c| c.to_string()).collect();
        println!("recurrence c_0..c_(L-1): {}", c.join(" "));
    }
    Ok(())
}

fn expcomp(args: ExpcompArgs) -> CmdResult {
    let start = Instant::now();
    let (seq, n) = load(&args.input)?;
    let w = expansion_complexity(&seq, n)?;
    if !w.verify(&seq)? {
        return Err(Error::Precondition("witness failed re-validation".into()).into());
    }
    let rows = if args.profile {
        (1..=n)
            .map(|k| expansion_complexity(&seq, k).map(|w| ProfileRow { n: k, e_n: Some(w.e), ..Default::default() }))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        vec![ProfileRow { n, e_n: Some(w.e), ..Default::default() }]
    };
    if args.out.json {
        let mut rec = ResultRecord::new("expcomp", &seq, n);
        rec.e_n = Some(w.e);
        rec.witness = w.h.as_ref().filter(|_| args.witness).map(format::witness_terms);
        rec.profile = args.profile.then_some(rows);
        rec.timing = Timing { seconds: start.elapsed().as_secs_f64() };
        print_json(&rec);
    } else if args.out.csv || args.profile {
        print_rows(&rows, args.out.csv, (false, true));
    } else {
        println!("N={n} E_N={}", w.e);
        if args.witness {
            match &w.h {
                Some(h) => println!("h = {h}"),
                None => println!("h: none (all-zero prefix)"),
            }
        }
    }
    Ok(())
}

fn binomial_cmd(args: BinomialArgs) -> CmdResult {
    let spec = BinomialSpec::new(args.p, args.k)?;
    if !args.analyze {
        let seq = binomial::generate(&spec, args.len.unwrap_or(args.p as usize));
        print!("{}", format::emit_sequence(&seq));
        return Ok(());
    }
    let report = binomial::analyze(&spec)?;
    if args.json {
        print_json(&report);
    } else {
        println!("p={} k={} L={} E_p={} prediction={:?}", report.p, report.k, report.l, report.e_p, report.prediction);
        print_claims(&report.claims);
    }
    match report.claims.iter().filter(|c| c.failed()).count() {
        0 => Ok(()),
        bad => Err(Failure::Violations(bad)),
    }
}

fn print_claims(claims: &[BoundReport]) {
    for c in claims {
        let verdict = match c.outcome {
            seqcx::theorems::Outcome::Pass => "PASS",
            seqcx::theorems::Outcome::Fail => "FAIL",
            seqcx::theorems::Outcome::NotApplicable => "N/A ",
        };
        let inputs: Vec<String> = c.inputs.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let expected = c.expected.as_ref().map_or_else(String::new, |e| format!(" expected {e:?}"));
        let observed = c.observed.map_or_else(String::new, |o| format!(" observed {o}"));
        println!("{verdict} {} [{}]{expected}{observed}", c.claim_id, inputs.join(" "));
    }
}

fn verify(args: VerifyArgs) -> CmdResult {
    let start = Instant::now();
    let (seq, n) = load(&args.input)?;
    let report = verify_sequence(&seq, n)?;
    if args.json {
        let mut rec = ResultRecord::new("verify", &seq, n);
        rec.l_n = Some(report.l_n);
        rec.t_n = Some(report.t_n);
        rec.e_n = Some(report.e_n);
        rec.witness = expansion_complexity(&seq, n)?.h.as_ref().map(format::witness_terms);
        rec.bounds = report.bounds.clone();
        rec.timing = Timing { seconds: start.elapsed().as_secs_f64() };
        print_json(&rec);
    } else {
        println!("N={n} L_N={} t_N={} E_N={}", report.l_n, report.t_n, report.e_n);
        print_claims(&report.bounds);
    }
    match report.failures() {
        0 => Ok(()),
        bad => Err(Failure::Violations(bad)),
    }
}

fn parse_q(q: &str) -> Result<FieldSpec, Failure> {
    let bad = || Failure::Usage(format!("--q expects p or p^m, got {q:?}"));
    let (p, m) = match q.split_once('^') {
        Some((p, m)) => (p.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?),
        None => (q.parse().map_err(|_| bad())?, 1),
    };
    Ok(FieldSpec::new(p, m, None)?)
}

fn write_tables(dir: &Path, d: &DistributionRecord) -> Result<(), Failure> {
    let io_err = |e: io::Error| Failure::Usage(format!("{}: {e}", dir.display()));
    for (name, counts) in [("E", &d.e), ("L", &d.l), ("t", &d.t_n)] {
        fs::write(dir.join(format!("{name}_{}.csv", d.n)), format::counts_csv(counts)).map_err(io_err)?;
    }
    Ok(())
}

fn experiment(args: ExperimentArgs) -> CmdResult {
    let field = parse_q(&args.q)?;
    let mut summary = serde_json::Map::new();
    summary.insert("command".into(), "experiment".into());
    let mut tables = Vec::new();
    let mut violations = 0u64;

    match args.mode {
        ModeArg::Exhaustive => {
            let n = args.n.ok_or_else(|| Failure::Usage("--n is required in exhaustive mode".into()))?;
            let mut cfg = ExperimentConfig::exhaustive(field, n);
            cfg.threads = args.threads;
            cfg.validate()?;
            let report = experiments::enumerate_all(&cfg)?;
            violations += report.violations;
            if let Some(b) = args.count_low {
                let c = experiments::low_expansion_from(&report.distribution, cfg.field.order(), b);
                summary.insert("countLow".into(), to_value(&c));
            }
            if args.tn_scan {
                summary.insert("tnScan".into(), to_value(&experiments::tn_ambiguity_scan(&cfg)?));
            }
            tables.push(report.distribution.clone());
            summary.insert("mode".into(), "exhaustive".into());
            summary.insert("exhaustive".into(), to_value(&report));
        }
        ModeArg::Mc => {
            if args.count_low.is_some() || args.tn_scan {
                return Err(Failure::Usage("--count-low and --tn-scan need exhaustive mode".into()));
            }
            let schedule = match (&args.schedule, args.n) {
                (Some(s), _) => s.clone(),
                (None, Some(n)) => vec![n],
                (None, None) => DEFAULT_SCHEDULE.to_vec(),
            };
            let mut cfg = ExperimentConfig::monte_carlo(field, args.samples, args.seed).with_schedule(schedule);
            cfg.threads = args.threads;
            let report = experiments::monte_carlo(&cfg)?;
            violations += report.entries.iter().map(|e| e.violations).sum::<u64>();
            tables.extend(report.entries.iter().map(|e| e.distribution.clone()));
            summary.insert("mode".into(), "montecarlo".into());
            summary.insert("montecarlo".into(), to_value(&report));
        }
    }
    summary.insert("violations".into(), violations.into());
    let text = format::to_sorted_json(&summary);
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        for d in &tables {
            write_tables(dir, d)?;
        }
        fs::write(dir.join("summary.json"), format!("{text}\n"))
            .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    }
    println!("{text}");
    match violations {
        0 => Ok(()),
        v => Err(Failure::Violations(v as usize)),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::NotPrime(_)
        | Error::InvalidField(_)
        | Error::InvalidModulus(_)
        | Error::InvalidBinomial(_)
        | Error::FieldTooLarge { .. } => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Lincomp(a) => lincomp(a),
        Command::Expcomp(a) => expcomp(a),
        Command::Binomial(a) => binomial_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violations(n)) => {
            eprintln!("{n} bound violation(s)");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
