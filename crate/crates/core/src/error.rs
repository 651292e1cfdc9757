use thiserror::Error;

use crate::semifield::Scalar;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the algebra, the solvers and the text formats.
///
/// Row and column numbers in messages are 1-based; the fields themselves are
/// 0-based like every index in the library API.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {}x{} vs {}x{}", .left.0, .left.1, .right.0, .right.1)]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },

    #[error("row {} has {actual} entries, expected {expected}", .row + 1)]
    RaggedRow {
        row: usize,
        expected: usize,
        actual: usize,
    },

    #[error("operands belong to different semifields")]
    SemifieldMismatch,

    #[error("the zero element has no inverse")]
    ZeroInverse,

    #[error("zero raised to non-positive power {0}")]
    ZeroPower(i64),

    #[error("conjugate of an all-zero matrix")]
    ZeroConjugate,

    #[error("Kleene star diverges: Tr = {trace}")]
    Divergent { trace: Scalar },

    #[error("invalid scalar {token:?}: {reason}")]
    InvalidScalar { token: String, reason: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("row-regularity violated at row {} of matrix {matrix}", .row + 1)]
    NotRowRegular { matrix: char, row: usize },

    #[error("row count mismatch: A has {a} rows, B has {b}")]
    RowCountMismatch { a: usize, b: usize },

    #[error("selection over {matrix} has {actual} picks, expected {expected}")]
    SelectionLength {
        matrix: char,
        expected: usize,
        actual: usize,
    },

    #[error("selection over {matrix} picks column {} in row {}, {reason}", .column + 1, .row + 1)]
    InvalidSelection {
        matrix: char,
        row: usize,
        column: usize,
        reason: &'static str,
    },

    #[error("selection pair is infeasible: Tr = {trace}")]
    InfeasiblePair { trace: Scalar },

    #[error("both parameter vectors are zero")]
    ZeroParameters,

    #[error("oracle unavailable: {0}")]
    OracleUnsupported(String),

    #[error("witness failed verification at row {}", .row + 1)]
    WitnessMismatch { row: usize },
}
