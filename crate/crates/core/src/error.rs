//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by construction and verification routines.
///
/// Verification *checks* (coassociativity, domination, ...) return
/// structured outcomes rather than errors; `Error` is reserved for
/// invalid inputs and for computations whose preconditions fail.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("p must be prime, got {0}")]
    NotPrime(u64),

    #[error("p = 2 unsupported here: {0}")]
    UnsupportedCharTwo(&'static str),

    #[error("binomial index k = {k} out of range 1..={max}")]
    BinomialRange { k: u64, max: u64 },

    #[error("mixed primes: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("mixed ambient rings: [{0}] vs [{1}]")]
    RingMismatch(String, String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("non-triangular rewrite system: rule for `{rule_var}` mentions `{offender}`")]
    NonTriangular { rule_var: String, offender: String },

    #[error("rewrite rule for `{0}` has degree >= p in its own variable")]
    RuleDegree(String),

    #[error("denominators not cleared: entry `{0}` is not integral")]
    DenominatorsNotCleared(String),

    #[error("element `{0}` is not invertible in R[1/pi] (only c*pi^e units are)")]
    NotAUnit(String),

    #[error("element `{0}` is not integral")]
    NotIntegral(String),

    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },

    #[error("the kernel Hopf presentation is defined only for p > 2")]
    KernelCharTwo,

    #[error("presentation is not an integral model: {0}")]
    NotIntegralModel(String),

    #[error("unsupported conductor regime (m1, m2) = ({m1}, {m2}); supported: (0, -p) and (-p^2*n1, 0) with n1 >= 1")]
    UnsupportedRegime { m1: i64, m2: i64 },

    #[error("coefficient subalgebra is not a sub-Hopf-algebra: {residual}")]
    NotSubHopf { residual: String },

    #[error("lattice saturation did not stabilize within {0} rounds")]
    SaturationDiverged(usize),

    #[error("verification failed in stage `{stage}`: {msg}")]
    Verification { stage: &'static str, msg: String },

    #[error("stabilizer equations are not linear in the group variables: {0}")]
    StabilizerNonLinear(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
