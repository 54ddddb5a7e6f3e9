//! Error type shared across the crate.

use alloc::string::String;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A catalog or scenario referenced a variety the avatar rings cannot
    /// evaluate.
    UnsupportedVariety(String),
    /// A parameter was outside its admissible range (q not a prime power,
    /// k = 0 for an Adams operation, window past truncation, ...).
    InvalidParameter(String),
    /// An enumeration would exceed its hard size bound.
    BoundExceeded(String),
    /// Truncations of two series disagree where an operation needs them to
    /// match.
    TruncationMismatch(String),
    /// A partial sum did not stabilise at the available truncation.
    Unstable(String),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::UnsupportedVariety(s) => write!(f, "unsupported variety: {s}"),
            Error::InvalidParameter(s) => write!(f, "invalid parameter: {s}"),
            Error::BoundExceeded(s) => write!(f, "bound exceeded: {s}"),
            Error::TruncationMismatch(s) => write!(f, "truncation mismatch: {s}"),
            Error::Unstable(s) => write!(f, "unstable partial sums: {s}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
