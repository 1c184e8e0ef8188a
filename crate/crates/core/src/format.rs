//! Sequence files and machine-readable records.
//!
//! A sequence file is plain text:
//!
//! ```text
//! q=2^2            # field; `q=<p>` for a prime field
//! mod=1,1,1        # optional modulus, constant term first
//! meta=t:0,T:3     # optional declared preperiod and period
//! 2 3 1 2 3 1      # element indices, any whitespace
//! ```
//!
//! JSON written by this module always has sorted keys.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::field::{Fe, FieldSpec};
use crate::lincomp::{Periodicity, Sequence};
use crate::series::BivariatePoly;
use crate::theorems::BoundReport;
use crate::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| parse_err(line, format!("bad {what} {s:?}")))
}

/// Parses a sequence file. Every failure, including an invalid field or a
/// body that contradicts `meta`, is reported as [`Error::Parse`] with the
/// offending line.
pub fn parse_sequence(text: &str) -> Result<Sequence> {
    let mut field: Option<(usize, u32, u32)> = None;
    let mut modulus: Option<(usize, Vec<u32>)> = None;
    let mut meta: Option<(usize, Periodicity)> = None;
    let mut body: Vec<(usize, u64)> = Vec::new();

    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            let value = value.trim();
            match key.trim() {
                "q" if field.is_none() => {
                    let (p, m) = match value.split_once('^') {
                        Some((p, m)) => (parse_num(no, p, "characteristic")?, parse_num(no, m, "degree")?),
                        None => (parse_num(no, value, "field order")?, 1),
                    };
                    field = Some((no, p, m));
                }
                "mod" if modulus.is_none() => {
                    let c = value.split(',').map(|c| parse_num(no, c, "modulus coefficient")).collect::<Result<_>>()?;
                    modulus = Some((no, c));
                }
                "meta" if meta.is_none() => {
                    let mut t = None;
                    let mut period = None;
                    for part in value.split(',') {
                        match part.trim().split_once(':') {
                            Some(("t", v)) => t = Some(parse_num(no, v, "preperiod")?),
                            Some(("T", v)) => period = Some(parse_num(no, v, "period")?),
                            _ => return Err(parse_err(no, format!("bad meta entry {part:?}"))),
                        }
                    }
                    match (t, period) {
                        (Some(preperiod), Some(period)) => meta = Some((no, Periodicity { preperiod, period })),
                        _ => return Err(parse_err(no, "meta needs both t and T")),
                    }
                }
                k @ ("q" | "mod" | "meta") => return Err(parse_err(no, format!("duplicate header {k:?}"))),
                k => return Err(parse_err(no, format!("unknown header {k:?}"))),
            }
            continue;
        }
        for tok in line.split_whitespace() {
            body.push((no, parse_num(no, tok, "element index")?));
        }
    }

    let (qline, p, m) = field.ok_or_else(|| parse_err(1, "missing q= header"))?;
    let spec = FieldSpec::new(p, m, modulus.as_ref().map(|(_, c)| c.as_slice()))
        .map_err(|e| parse_err(modulus.as_ref().map_or(qline, |(l, _)| *l), e.to_string()))?;
    let q = spec.order() as u64;
    let mut terms = Vec::with_capacity(body.len());
    for (no, idx) in body {
        if idx >= q {
            return Err(parse_err(no, format!("element index {idx} is not below q = {q}")));
        }
        terms.push(Fe(idx as u32));
    }
    Sequence::new(spec, terms, meta.map(|(_, m)| m)).map_err(|e| parse_err(meta.map_or(qline, |(l, _)| l), e.to_string()))
}

/// The file text for `seq`; [`parse_sequence`] reads it back unchanged.
pub fn emit_sequence(seq: &Sequence) -> String {
    let f = seq.field();
    let mut out = String::new();
    if f.is_prime_field() {
        writeln!(out, "q={}", f.characteristic()).unwrap();
    } else {
        writeln!(out, "q={}^{}", f.characteristic(), f.degree()).unwrap();
        let c: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
        writeln!(out, "mod={}", c.join(",")).unwrap();
    }
    if let Some(m) = seq.meta() {
        writeln!(out, "meta=t:{},T:{}", m.preperiod, m.period).unwrap();
    }
    out.push_str(&canonical_body(seq));
    out.push('\n');
    out
}

/// Element indices joined by single spaces.
pub fn canonical_body(seq: &Sequence) -> String {
    seq.terms().iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(" ")
}

/// SHA-256 of [`canonical_body`], hex encoded.
pub fn input_digest(seq: &Sequence) -> String {
    hex::encode(Sha256::digest(canonical_body(seq).as_bytes()))
}

/// Witness terms as `[i, j, coefficient index]`, ordered by `(i, j)`.
pub fn witness_terms(h: &BivariatePoly) -> Vec<[u64; 3]> {
    h.terms().map(|((i, j), c)| [i as u64, j as u64, c.0 as u64]).collect()
}

/// Serializes through a `serde_json::Value`, whose maps are ordered, so keys
/// come out sorted.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("records serialize to JSON");
    serde_json::to_string_pretty(&v).unwrap()
}

/// `value,count` rows, ascending by value.
pub fn counts_csv(counts: &BTreeMap<usize, u64>) -> String {
    let mut out = String::from("value,count\n");
    for (v, c) in counts {
        writeln!(out, "{v},{c}").unwrap();
    }
    out
}

/// One row of a `--profile` listing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L_N")]
    pub l_n: Option<usize>,
    #[serde(rename = "t_N")]
    pub t_n: Option<usize>,
    #[serde(rename = "E_N")]
    pub e_n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Timing {
    /// Wall-clock seconds (floating point).
    pub seconds: f64,
}

/// The JSON record printed by the per-sequence commands.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    pub command: String,
    pub field: FieldSpec,
    #[serde(rename = "inputDigest")]
    pub input_digest: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L_N")]
    pub l_n: Option<usize>,
    #[serde(rename = "t_N")]
    pub t_n: Option<usize>,
    #[serde(rename = "E_N")]
    pub e_n: Option<usize>,
    /// Recurrence coefficients `c_0 .. c_{L-1}`.
    pub recurrence: Option<Vec<Fe>>,
    pub witness: Option<Vec<[u64; 3]>>,
    pub profile: Option<Vec<ProfileRow>>,
    pub bounds: Vec<BoundReport>,
    pub timing: Timing,
}

impl ResultRecord {
    pub fn new(command: &str, seq: &Sequence, n: usize) -> Self {
        ResultRecord {
            command: command.to_string(),
            field: seq.field().clone(),
            input_digest: input_digest(seq),
            n,
            l_n: None,
            t_n: None,
            e_n: None,
            recurrence: None,
            witness: None,
            profile: None,
            bounds: Vec::new(),
            timing: Timing { seconds: 0.0 },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_headers_comments_and_body() {
        let s = parse_sequence("# all ones\nq=3\n1 1 1\n1 1   # tail\n").unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.field().order(), 3);

        let s = parse_sequence("q=2^2\nmod=1,1,1\nmeta=t:0,T:3\n2 3 1 2 3 1\n").unwrap();
        assert_eq!(s.field().order(), 4);
        assert_eq!(s.meta(), Some(Periodicity { preperiod: 0, period: 3 }));

        let s = parse_sequence("q=3^2\n0 8\n").unwrap();
        assert_eq!(s.field().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line = |t: &str| match parse_sequence(t) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("q=2\n0 1\n1 2\n"), 3);
        assert_eq!(line("q=2\n0 x\n"), 2);
        assert_eq!(line("0 1\n"), 1);
        assert_eq!(line("# c\nq=4\n0\n"), 2);
        assert_eq!(line("q=2\nfoo=1\n"), 2);
        assert_eq!(line("q=2\nq=3\n"), 2);
        assert_eq!(line("q=2^2\nmod=1,0,1\n0\n"), 2);
        assert_eq!(line("q=2\nmeta=t:0,T:2\n0 1 0 0\n"), 2);
        assert_eq!(line("q=2\nmeta=t:0\n"), 2);
    }

    #[test]
    fn emit_round_trips() {
        for text in ["q=7\n1 3 6 3 1 0 0\n", "q=2^2\nmod=1,1,1\nmeta=t:1,T:2\n0 2 3 2 3\n", "q=5\n\n"] {
            let s = parse_sequence(text).unwrap();
            if !s.is_empty() {
                assert_eq!(emit_sequence(&s), text);
            }
            assert_eq!(parse_sequence(&emit_sequence(&s)).unwrap(), s);
        }
    }

    #[test]
    fn digest_is_sha256_of_body() {
        let s = parse_sequence("q=2\n1\n1 1\n").unwrap();
        assert_eq!(canonical_body(&s), "1 1 1");
        assert_eq!(input_digest(&s), "c413f845fbe90b262337e1c7f973d9afd3b4816dd7cdb77c3e6c4abce0891a62");
        let t = parse_sequence("q=3\n1 1 1\n").unwrap();
        assert_eq!(input_digest(&s), input_digest(&t));
    }

    #[test]
    fn json_keys_are_sorted() {
        #[derive(Serialize)]
        struct R {
            zeta: u8,
            alpha: u8,
        }
        assert_eq!(to_sorted_json(&R { zeta: 1, alpha: 2 }), "{\n  \"alpha\": 2,\n  \"zeta\": 1\n}");
    }

    #[test]
    fn csv_rows() {
        let m = BTreeMap::from([(2, 5), (1, 3)]);
        assert_eq!(counts_csv(&m), "value,count\n1,3\n2,5\n");
    }
}
