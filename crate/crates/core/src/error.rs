use core::fmt;

/// Errors shared by all modules of the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// An argument fell outside an operation's documented domain.
    Domain(&'static str),
    /// Factorization gave up before certifying the result. Carries the
    /// unfactored residue's decimal length so callers can report it.
    UnfactoredResidue { digits: usize },
    /// Arithmetic on values from different quadratic fields.
    MismatchedField,
    /// An identity the construction guarantees failed to hold. Seeing
    /// this means a bug, not bad input.
    InternalInvariant(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::UnfactoredResidue { digits } => {
                write!(
                    f,
                    "factorization budget exhausted ({digits}-digit residue left)"
                )
            }
            Error::MismatchedField => write!(f, "operands live in different quadratic fields"),
            Error::InternalInvariant(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
