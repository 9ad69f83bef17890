use std::io;

use thiserror::Error;

/// Errors produced by the evaluation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pole at z = {0}")]
    Pole(String),

    #[error("too close to a pole at z = {z}: {detail}")]
    NearPole { z: String, detail: String },

    #[error("singular point z = {0}")]
    Singular(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("capacity exceeded: requested {requested}, cap {cap}")]
    Capacity { requested: u64, cap: u64 },

    #[error("prime table too short: need {needed} primes, have {available}")]
    InsufficientTable { needed: usize, available: usize },

    #[error("vanishing factor at p = {p}")]
    VanishingFactor { p: u64 },

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("non-finite result in {0}")]
    NonFinite(&'static str),

    #[error("polynomial is not divisible: {0}")]
    NonDivisible(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
