use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Why a single input line could not be parsed.
///
/// Kept separate from [`Error`] so the ingest hot path can reject lines
/// without allocating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MalformedLine {
    FieldCount(usize),
    InvalidUtf8,
    EmptyToken,
    BadYear,
    BadMatchCount,
    BadVolumeCount,
    BadTotalsEntry,
}

impl fmt::Display for MalformedLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MalformedLine::FieldCount(n) => write!(f, "expected 3 or 4 tab-separated fields, found {n}"),
            MalformedLine::InvalidUtf8 => f.write_str("line is not valid UTF-8"),
            MalformedLine::EmptyToken => f.write_str("empty token field"),
            MalformedLine::BadYear => f.write_str("year field is not an integer"),
            MalformedLine::BadMatchCount => f.write_str("match_count is not a non-negative integer"),
            MalformedLine::BadVolumeCount => f.write_str("volume_count is not a non-negative integer"),
            MalformedLine::BadTotalsEntry => f.write_str("totals entry is not four comma-separated integers"),
        }
    }
}

impl std::error::Error for MalformedLine {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed line: {0}")]
    MalformedLine(#[from] MalformedLine),

    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("year {0} is absent from the store")]
    YearAbsent(i32),

    #[error("empty selection: {0}")]
    EmptySelection(String),

    #[error("degenerate distribution: a word with relative frequency 1 has no complement")]
    DegenerateDistribution,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("provenance mismatch: {expected:?} vs {found:?}")]
    ProvenanceMismatch { expected: String, found: String },

    #[error("cache format version {found} is not supported (expected {expected})")]
    CacheVersionMismatch { found: u32, expected: u32 },

    #[error("corrupt cache: {0}")]
    CorruptCache(String),

    #[error("word list {} has no entries", .0.display())]
    EmptyList(PathBuf),

    #[error("invalid period breakpoints: {0}")]
    InvalidBreakpoints(String),

    #[error("tables do not share settings: {0}")]
    SettingsMismatch(String),

    #[error("invalid normalization ruleset: {0}")]
    InvalidRuleset(String),

    #[error("invalid token filter: {0}")]
    InvalidFilter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
