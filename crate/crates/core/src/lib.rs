//! Linear complexity and expansion complexity of sequences over finite fields.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`] - arithmetic in `F_q`, `q = p^m`, with elements as integer indices.
//! * [`series`] - univariate polynomials, truncated power series and sparse
//!   bivariate polynomials, including the substitution `h(x, G(x)) mod x^N`.
//! * [`lincomp`] - Berlekamp-Massey, linear complexity profiles, rational
//!   generating functions and recurrence extension.
//! * [`expcomp`] - the `N`-th expansion complexity by kernel search, with a
//!   brute-force oracle.
//! * [`binomial`] - binomial coefficient sequences `C(i+k, k) mod p`.
//! * [`theorems`] - pass/fail checkers for the known bounds relating the two
//!   complexity measures.
//! * [`experiments`] - exhaustive and Monte Carlo drivers.
//! * [`format`] - sequence files and machine-readable records.

pub mod binomial;
pub mod expcomp;
pub mod experiments;
pub mod field;
pub mod format;
pub mod lincomp;
mod linalg;
pub mod series;
pub mod theorems;

pub use expcomp::{expansion_complexity, expansion_profile, ExpansionProfile, ExpansionWitness};
pub use field::{Fe, FieldSpec};
pub use lincomp::{berlekamp_massey, linear_profile, LinearFit, RationalForm, Sequence};
pub use series::{BivariatePoly, Poly, TruncatedSeries};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field F_{p}^{m} exceeds the order cap {cap}")]
    FieldTooLarge { p: u32, m: u32, cap: u64 },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element index {index} is not below q = {q}")]
    ElementOutOfRange { index: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("need {needed} terms, only {available} available")]
    InsufficientTerms { needed: usize, available: usize },
    #[error("sequence violates declared periodicity at index {index}")]
    PeriodicityViolated { index: usize },
    #[error("degenerate fit: L = N = {0} leaves the recurrence unconstrained")]
    DegenerateFit(usize),
    #[error("inconsistent rational form: {0}")]
    InconsistentRational(String),
    #[error("generating function is zero")]
    ZeroGeneratingFunction,
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid binomial parameters: {0}")]
    InvalidBinomial(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
