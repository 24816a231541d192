//! Error and diagnostic types shared across the crate.

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A run violates one of its construction invariants.
    #[error("invalid run: {0}")]
    InvalidRun(String),

    /// A quantity that must be strictly positive was not.
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    /// The two scaling laws have exponents equal within tolerance, so no
    /// meaningful intersection exists.
    #[error("scaling laws are parallel within tolerance (exponents {alpha} and {beta})")]
    NoIntersection { alpha: f64, beta: f64 },

    /// Not enough points to perform the requested fit.
    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Wall-law prefactor at or below 5/2 would give ln Re <= 0.
    #[error("nonphysical wall-law prefactor {prefactor}: must exceed 5/2")]
    NonphysicalPrefactor { prefactor: f64 },

    /// Wall-law exponent at or below zero would give ln Re <= 0.
    #[error("nonphysical wall-law exponent {exponent}: must be positive")]
    NonphysicalExponent { exponent: f64 },

    /// Scale computation requires an interface point the fit did not produce.
    #[error("fit has no interface point (eta_star)")]
    NoInterface,

    /// Scale computation requires dimensional metadata the run did not carry.
    #[error("run carries no dimensional metadata (u_star, U_inf, nu)")]
    MissingMetadata,

    /// A synthesis spec violates its invariants.
    #[error("invalid synthesis spec: {0}")]
    InvalidSpec(String),

    /// A parse diagnostic from a run file, config file, or spec file.
    #[error(transparent)]
    Parse(#[from] ParseDiagnostic),

    /// An error that occurred while analyzing a named run.
    #[error("run '{name}': {source}")]
    InRun {
        name: String,
        #[source]
        source: Box<Error>,
    },

    /// A batch directory contained no parseable run files.
    #[error("no parseable run files in {}", .0.display())]
    NoRuns(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attach a run name to an error propagating out of per-run analysis.
    pub fn in_run(self, name: &str) -> Error {
        Error::InRun {
            name: name.to_string(),
            source: Box::new(self),
        }
    }
}

/// Machine-readable code identifying a class of parse failure.
///
/// Every diagnostic the parsers can emit carries exactly one of these codes;
/// the rendered form is the snake_case name (e.g. `missing_key`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticCode {
    /// Input is not valid UTF-8.
    Encoding,
    /// A header line before the blank separator is not `key = value`.
    MalformedHeader,
    /// A mandatory header key is absent.
    MissingKey,
    /// The same header key appears twice.
    DuplicateKey,
    /// A header key is not part of the documented format.
    UnknownKey,
    /// A header value is not acceptable for its key.
    InvalidValue,
    /// A numeric field failed to parse as a number.
    MalformedNumber,
    /// A numeric field parsed to NaN or infinity.
    NonFiniteNumber,
    /// A body row does not have exactly two columns.
    ColumnCount,
    /// The wall-distance column is not strictly increasing.
    NonMonotone,
    /// The file has a header but no data rows.
    EmptyBody,
    /// The parsed values violate a run invariant.
    InvariantViolation,
}

impl DiagnosticCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagnosticCode::Encoding => "encoding",
            DiagnosticCode::MalformedHeader => "malformed_header",
            DiagnosticCode::MissingKey => "missing_key",
            DiagnosticCode::DuplicateKey => "duplicate_key",
            DiagnosticCode::UnknownKey => "unknown_key",
            DiagnosticCode::InvalidValue => "invalid_value",
            DiagnosticCode::MalformedNumber => "malformed_number",
            DiagnosticCode::NonFiniteNumber => "nonfinite_number",
            DiagnosticCode::ColumnCount => "column_count",
            DiagnosticCode::NonMonotone => "non_monotone",
            DiagnosticCode::EmptyBody => "empty_body",
            DiagnosticCode::InvariantViolation => "invariant_violation",
        }
    }

    /// All documented codes, in rendering order.
    pub const ALL: [DiagnosticCode; 12] = [
        DiagnosticCode::Encoding,
        DiagnosticCode::MalformedHeader,
        DiagnosticCode::MissingKey,
        DiagnosticCode::DuplicateKey,
        DiagnosticCode::UnknownKey,
        DiagnosticCode::InvalidValue,
        DiagnosticCode::MalformedNumber,
        DiagnosticCode::NonFiniteNumber,
        DiagnosticCode::ColumnCount,
        DiagnosticCode::NonMonotone,
        DiagnosticCode::EmptyBody,
        DiagnosticCode::InvariantViolation,
    ];
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single parse failure with its location.
///
/// `line` is 1-based; 0 means the diagnostic applies to the file as a whole
/// (e.g. an encoding failure or a missing mandatory key).
#[derive(Debug, Clone, Error)]
#[error("line {line}: {code}: {message}")]
pub struct ParseDiagnostic {
    pub code: DiagnosticCode,
    pub line: usize,
    pub message: String,
}

impl ParseDiagnostic {
    pub fn new(code: DiagnosticCode, line: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            code,
            line,
            message: message.into(),
        }
    }
}
