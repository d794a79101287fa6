use std::fmt;

/// Errors from spec validation, preset construction and trace generation.
///
/// Sequence death is *not* an error: it is recorded in
/// [`TraceStatus`](crate::TraceStatus) because a dying sequence is a finding,
/// not a failure. Only operations that require a live trace to mean anything
/// (the structure verifier, the jump prober) turn death into [`Error::TraceDied`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A recurrence spec with no terms.
    EmptyTerms,
    /// A term with `inner_offset == 0`; the recurrence must look strictly back.
    ZeroInnerOffset,
    /// Initial condition shorter than the largest inner offset.
    InitTooShort { required: usize, actual: usize },
    /// Initial condition entry that is not a positive integer.
    NonPositiveInit { index: usize },
    /// Preset name not recognized.
    UnknownPreset(String),
    /// Parameters that violate a precondition (preset params, verify limits, ...).
    InvalidParams(String),
    /// A term sum (or an index) left the representable range of the scalar.
    Overflow { index: usize },
    /// An operation that needs a live trace hit a death.
    TraceDied { at_index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyTerms => write!(f, "recurrence spec has no terms"),
            Error::ZeroInnerOffset => write!(f, "inner offset must be at least 1"),
            Error::InitTooShort { required, actual } => write!(
                f,
                "initial condition has {actual} terms but the largest inner offset needs {required}"
            ),
            Error::NonPositiveInit { index } => {
                write!(
                    f,
                    "initial condition entry at index {index} is not positive"
                )
            }
            Error::UnknownPreset(name) => write!(f, "unknown preset '{name}'"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::Overflow { index } => {
                write!(f, "arithmetic overflow while computing term {index}")
            }
            Error::TraceDied { at_index } => {
                write!(f, "sequence died at index {at_index}")
            }
        }
    }
}

impl std::error::Error for Error {}
