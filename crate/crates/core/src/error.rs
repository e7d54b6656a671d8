use alloc::string::String;
use core::fmt;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    LengthMismatch { left: usize, right: usize },
    WeightMismatch { expected: u64, found: u64 },
    InvalidMultiplicity(String),
    IndexOutOfRange { index: u128, len: u128 },
    Parse { input: String, position: usize, reason: String },
    /// NY pairing was asked for with `weight(x) <= weight(y)`.
    NotStrictlyLarger { larger: u64, smaller: u64 },
    NotInA,
    NotInB,
    DominanceViolated { row: usize },
    KernelDimension(usize),
    NonIntegralWeight,
    SectorTooLarge { size: u128, limit: u128 },
    DivergentTrace,
    CutoffUnstable { cutoff: usize, low: u128, high: u128 },
    Overflow,
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::WeightMismatch { expected, found } => {
                write!(f, "weight mismatch: expected {expected}, found {found}")
            }
            Error::InvalidMultiplicity(s) => write!(f, "invalid multiplicity array: {s}"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for {len} elements")
            }
            Error::Parse { input, position, reason } => {
                write!(f, "cannot parse {input:?} at position {position}: {reason}")
            }
            Error::NotStrictlyLarger { larger, smaller } => write!(
                f,
                "pairing rule needs the first weight to exceed the second ({larger} <= {smaller})"
            ),
            Error::NotInA => f.write_str("pointer is not in the set A_x"),
            Error::NotInB => f.write_str("pointer is not in the set B_x"),
            Error::DominanceViolated { row } => {
                write!(f, "rows {row} and {} violate the dominance order", row + 1)
            }
            Error::KernelDimension(d) => write!(f, "generator kernel has dimension {d}, expected 1"),
            Error::NonIntegralWeight => f.write_str("steady-state weight is not a positive integer"),
            Error::SectorTooLarge { size, limit } => {
                write!(f, "state space of size {size} exceeds the limit {limit}")
            }
            Error::DivergentTrace => f.write_str("trace of an element with nonzero identity part diverges"),
            Error::CutoffUnstable { cutoff, low, high } => write!(
                f,
                "trace changed from {low} to {high} when the cutoff was raised past {cutoff}"
            ),
            Error::Overflow => f.write_str("integer overflow"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
