use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// What went wrong while reading a system description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Malformed input.
    Syntax(String),
    /// An identifier that is neither a declared field nor a derivative of one.
    UnknownField(String),
    /// A derivative applied to something other than a declared field, or a
    /// time derivative on the right-hand side.
    UnsupportedDerivative(String),
    /// A field with more than one equation.
    DuplicateEquation(String),
}

/// Errors from series arithmetic, parsing, solving and approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A truncated product was requested beyond the order of an operand.
    TruncationTooDeep { requested: usize, available: usize },
    /// Parse failure; `line` and `column` are 1-based.
    Parse {
        kind: ParseErrorKind,
        line: usize,
        column: usize,
    },
    /// Vector lengths disagree (e.g. initial data vs. number of fields).
    DimensionMismatch { expected: usize, found: usize },
    /// A wave with zero temporal rate has no finite-radius singularity.
    DegenerateWave,
    /// The operation only supports waves with unit spatial wavenumber.
    UnsupportedWavenumber(f64),
    /// Too few usable coefficients for a ratio estimate.
    InsufficientData { needed: usize, available: usize },
    /// Too few coefficients for the requested Padé entry.
    InsufficientCoefficients { needed: usize, available: usize },
    /// The Padé linear system is singular or too ill-conditioned.
    DegenerateSystem { condition: f64 },
    /// A rational approximant was evaluated at (or next to) a pole.
    PoleAtEvaluation { t: f64 },
    /// An iterative kernel (eigenvalue QR) failed to converge.
    NoConvergence,
    /// Invalid argument outside the cases above.
    InvalidArgument(&'static str),
}

impl Error {
    pub(crate) fn parse(kind: ParseErrorKind, line: usize, column: usize) -> Self {
        Error::Parse { kind, line, column }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownField(name) => write!(f, "unknown field `{name}`"),
            ParseErrorKind::UnsupportedDerivative(msg) => {
                write!(f, "unsupported derivative: {msg}")
            }
            ParseErrorKind::DuplicateEquation(name) => {
                write!(f, "field `{name}` has more than one equation")
            }
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TruncationTooDeep {
                requested,
                available,
            } => write!(
                f,
                "truncation order {requested} exceeds available series order {available}"
            ),
            Error::Parse { kind, line, column } => write!(f, "{line}:{column}: {kind}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            Error::DegenerateWave => f.write_str("wave has zero temporal rate"),
            Error::UnsupportedWavenumber(k) => {
                write!(f, "only unit wavenumber is supported here, got {k}")
            }
            Error::InsufficientData { needed, available } => write!(
                f,
                "need at least {needed} nonzero coefficients, have {available}"
            ),
            Error::InsufficientCoefficients { needed, available } => {
                write!(f, "need {needed} coefficients, have {available}")
            }
            Error::DegenerateSystem { condition } => write!(
                f,
                "Padé system is degenerate (condition estimate {condition:e})"
            ),
            Error::PoleAtEvaluation { t } => write!(f, "denominator vanishes at t = {t}"),
            Error::NoConvergence => f.write_str("eigenvalue iteration did not converge"),
            Error::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}
