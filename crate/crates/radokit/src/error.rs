//! Error types shared across the crate.

use std::fmt;

/// Errors produced while parsing the JSON input files.
///
/// Every variant names the offending JSON path so that CLI diagnostics point
/// at the exact field that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// The input is not valid UTF-8 JSON.
    Json(String),
    /// A required field is absent.
    MissingField { path: String },
    /// A value has the wrong JSON type.
    WrongType { path: String, expected: &'static str },
    /// A JSON number that is not an exactly-representable integer.
    NotAnInteger { path: String },
    /// A JSON number with |x| >= 2^53; such integers must be decimal strings.
    NumberTooLarge { path: String },
    /// A string that is not a valid decimal integer.
    BadIntegerString { path: String },
    /// A coefficient vector whose length differs from `d`.
    VectorLength {
        path: String,
        expected: usize,
        got: usize,
    },
    /// `blocks` length differs from `k`.
    BlockCount { expected: usize, got: usize },
    /// A block with no coefficient vectors.
    EmptyBlock { path: String },
    /// `d` or `k` is zero or out of range.
    BadDimension { path: String },
    /// Coloring window is malformed (lo > hi or out of range).
    BadWindow { reason: String },
    /// Coloring table misses an integer inside its window.
    WindowNotTotal { missing: i64 },
    /// A color id that is not a nonnegative integer.
    BadColor { path: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Json(msg) => write!(f, "invalid JSON: {msg}"),
            ParseError::MissingField { path } => write!(f, "{path}: missing field"),
            ParseError::WrongType { path, expected } => {
                write!(f, "{path}: expected {expected}")
            }
            ParseError::NotAnInteger { path } => write!(f, "{path}: not an integer"),
            ParseError::NumberTooLarge { path } => write!(
                f,
                "{path}: integer too large for a JSON number; use a decimal string"
            ),
            ParseError::BadIntegerString { path } => {
                write!(f, "{path}: not a decimal integer string")
            }
            ParseError::VectorLength {
                path,
                expected,
                got,
            } => write!(f, "{path}: vector length {got} != d = {expected}"),
            ParseError::BlockCount { expected, got } => {
                write!(f, "blocks: found {got} blocks, expected k = {expected}")
            }
            ParseError::EmptyBlock { path } => write!(f, "{path}: block is empty"),
            ParseError::BadDimension { path } => write!(f, "{path}: must be a positive integer"),
            ParseError::BadWindow { reason } => write!(f, "window: {reason}"),
            ParseError::WindowNotTotal { missing } => {
                write!(f, "colors: no color for {missing} inside the window")
            }
            ParseError::BadColor { path } => {
                write!(f, "{path}: color id must be a nonnegative integer")
            }
        }
    }
}

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Parse(ParseError),
    /// A modulus that is required to be prime is not.
    NotPrime(String),
    /// Mismatched dimensions between a system and an assignment, certificate
    /// or vector argument.
    ShapeMismatch(String),
    /// All coefficient vectors of the system are zero; regularity questions
    /// are vacuous and every solver refuses the input.
    DegenerateSystem,
    /// The weight vector passed to `scaled_system` is all zero.
    ZeroWeights,
    /// A coloring was queried outside its window.
    OutsideWindow { value: i64, lo: i64, hi: i64 },
    /// The coloring does not cover the requested search window.
    ColoringNotTotal { needed: i64, lo: i64, hi: i64 },
    /// `maximal_minors` requires rows <= cols.
    RowsExceedCols { rows: usize, cols: usize },
    /// A variable group of a solution is not monochromatic under smod p.
    GroupNotMonochromatic { group: usize },
    /// The assignment is not a nontrivial exact solution of the system.
    NotASolution,
    /// The chosen pivot group has color 0, which is not invertible mod p.
    PivotColorZero { group: usize },
    /// `common_rational_root` was called on an empty polynomial system.
    EmptyPolynomialSystem,
    /// The coloring-enumeration count exceeds the configured cap.
    InfeasibleScale { colorings: String, cap: u64 },
    /// A prime used as a coloring must fit in 32 bits.
    PrimeTooLargeForColoring(String),
    /// Coefficients or windows too large for the search engine's fixed-width
    /// accumulators.
    MagnitudeTooLarge(String),
    /// Catch-all for malformed CLI input.
    Input(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(e) => write!(f, "parse error: {e}"),
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::DegenerateSystem => {
                write!(f, "degenerate system: all coefficient vectors are zero")
            }
            Error::ZeroWeights => write!(f, "weight vector is all zero"),
            Error::OutsideWindow { value, lo, hi } => {
                write!(f, "value {value} outside coloring window [{lo}, {hi}]")
            }
            Error::ColoringNotTotal { needed, lo, hi } => write!(
                f,
                "coloring window [{lo}, {hi}] does not cover the search window [-{needed}, {needed}]"
            ),
            Error::RowsExceedCols { rows, cols } => {
                write!(f, "matrix has {rows} rows > {cols} cols; transpose first")
            }
            Error::GroupNotMonochromatic { group } => {
                write!(f, "group {group} is not monochromatic under smod p")
            }
            Error::NotASolution => write!(f, "assignment is not a nontrivial exact solution"),
            Error::PivotColorZero { group } => {
                write!(f, "group {group} has smod color 0; cannot invert")
            }
            Error::EmptyPolynomialSystem => write!(f, "polynomial system is empty"),
            Error::InfeasibleScale { colorings, cap } => write!(
                f,
                "coloring enumeration of size {colorings} exceeds the cap {cap}"
            ),
            Error::PrimeTooLargeForColoring(p) => {
                write!(f, "prime {p} too large to use as a coloring (must fit u32)")
            }
            Error::MagnitudeTooLarge(msg) => write!(f, "input too large for search: {msg}"),
            Error::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}
