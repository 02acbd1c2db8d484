//! One error type for the whole crate, with a coarse category used by the
//! command line tool to map failures onto distinct exit codes.

use thiserror::Error;

/// Coarse classification of errors, used by the CLI to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Bad arguments or parameters outside a construction's admissible range.
    Parameter,
    /// A stored certificate disagrees with what recomputation produces.
    Verification,
    /// The requested object provably does not exist, or a search cap was hit.
    Infeasible,
    /// A tag or report file could not be parsed.
    MalformedFile,
    /// Underlying I/O failure.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {order} exceeds the supported limit {limit}")]
    FieldTooLarge { order: u128, limit: u64 },
    #[error("residue exponent {e} does not divide p - 1 = {pm1}")]
    BadResidueExponent { e: u64, pm1: u64 },
    #[error("p = {p} is not admissible for the {family} family: {reason}")]
    InadmissiblePrime {
        p: u64,
        family: &'static str,
        reason: String,
    },
    #[error("{0} and {1} are not both prime")]
    NotTwinPrimes(u64, u64),
    #[error("support is not a cyclic difference set modulo {0}")]
    NotADifferenceSet(usize),
    #[error("support element {elem} is out of range for Z_{v}")]
    SupportOutOfRange { elem: usize, v: usize },
    #[error("support contains {0} more than once")]
    DuplicateSupportElement(usize),
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("codewords {0} and {1} are identical")]
    DuplicateCodeword(usize, usize),
    #[error("codewords must share one weight: found {0} and {1}")]
    MixedWeights(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tag is not self-synchronizing: comma-free index {0} is not positive")]
    NotSelfSynchronizing(i64),
    #[error("search space of {candidates} candidates exceeds the cap {cap}; shrink the parameters or raise the limit")]
    CapExceeded { candidates: u128, cap: u64 },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("payload of length {got} is shorter than the tag length {v}")]
    GapTooShort { got: usize, v: usize },
    #[error("digit {digit} is out of range for a set of {count} tags")]
    DigitOutOfRange { digit: usize, count: usize },
    #[error("stored {field} = {stored} does not match recomputed value {actual}")]
    VerificationMismatch {
        field: &'static str,
        stored: i64,
        actual: i64,
    },
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ErrorCategory {
    pub fn name(&self) -> &'static str {
        match self {
            ErrorCategory::Parameter => "parameter",
            ErrorCategory::Verification => "verification",
            ErrorCategory::Infeasible => "infeasible",
            ErrorCategory::MalformedFile => "malformed_file",
            ErrorCategory::Io => "io",
        }
    }

    /// Exit code the CLI maps this category onto (2 is taken by usage errors).
    pub fn exit_code(&self) -> i32 {
        match self {
            ErrorCategory::Parameter => 3,
            ErrorCategory::Verification => 4,
            ErrorCategory::Infeasible => 5,
            ErrorCategory::MalformedFile => 6,
            ErrorCategory::Io => 7,
        }
    }
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            VerificationMismatch { .. } | NotADifferenceSet(_) => ErrorCategory::Verification,
            CapExceeded { .. } | Infeasible(_) => ErrorCategory::Infeasible,
            MalformedRecord(_) => ErrorCategory::MalformedFile,
            Io(_) => ErrorCategory::Io,
            _ => ErrorCategory::Parameter,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
