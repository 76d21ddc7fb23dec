use thiserror::Error;

/// Every failure the library can report.
///
/// Variants split into three classes: mathematical refusals (the input is
/// well formed but the requested object does not exist or cannot be certified),
/// usage errors (malformed scenarios and expressions), and internal
/// consistency failures, which indicate a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial is reducible over Q")]
    ReduciblePolynomial,
    #[error("field is not Galois over Q: only {found} of {degree} roots of the defining polynomial lie in the field")]
    NotGalois { found: usize, degree: usize },
    #[error("embedding roots could not be certified at {bits} bits of precision")]
    PrecisionExhausted { bits: u32 },
    #[error("the zero element has no height, orbit or place vector")]
    ZeroElement,
    #[error("prime {p} divides the index of the equation order and its splitting could not be certified")]
    IndexDivisor { p: String },
    #[error("membership witness failed verification: {0}")]
    WitnessFailure(String),
    #[error("automorphism does not conjugate the first subfield onto the second")]
    NotConjugate,
    #[error("projection fields violate the pairwise Galois condition")]
    ConditionViolated,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("parse error at offset {offset}: {message}")]
    ParseError { offset: usize, message: String },
    #[error("evaluation error: {0}")]
    EvalError(String),
}

impl Error {
    /// Process exit code for the command line contract: 1 for mathematical
    /// refusals, 2 for usage or parse errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ReduciblePolynomial
            | Error::NotGalois { .. }
            | Error::PrecisionExhausted { .. }
            | Error::ZeroElement
            | Error::IndexDivisor { .. }
            | Error::WitnessFailure(_)
            | Error::NotConjugate
            | Error::ConditionViolated => 1,
            Error::InvalidInput(_)
            | Error::SchemaError(_)
            | Error::ParseError { .. }
            | Error::EvalError(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
