//! Error type shared by the whole crate.

/// Everything that can go wrong when building or combining the exact
/// structures, or when setting up dynamics.
///
/// Validation reports the *first* offending position in a fixed scan order
/// (shape, then symbol range, then row duplicates, then column duplicates;
/// always row-major within a phase), so error messages are deterministic.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A row of the input table has the wrong length.
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    /// A cell holds a value outside the symbol range.
    #[error("cell ({row}, {col}) holds {value}, outside the symbol range {min}..={max}")]
    SymbolOutOfRange {
        row: usize,
        col: usize,
        value: i64,
        min: i64,
        max: i64,
    },

    /// A row repeats a symbol.
    #[error("row {row} repeats a symbol")]
    RowDuplicate { row: usize },

    /// A column repeats a symbol.
    #[error("column {col} repeats a symbol")]
    ColumnDuplicate { col: usize },

    /// An image table is not a bijection on `0..n`.
    #[error("image table is not a permutation of 0..{n}")]
    NotAPermutation { n: usize },

    /// Two objects that must share an order do not.
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    /// The requested order is outside the supported range of the operation.
    #[error("order {order} is not supported here (this operation handles orders 1..={max})")]
    OrderTooLarge { order: usize, max: usize },

    /// A cycle-type string did not parse as a dash-separated partition.
    #[error(
        "invalid cycle type {text:?}: expected dash-separated positive parts like \"3-2-1-1\""
    )]
    CycleTypeParse { text: String },

    /// A weight value is negative or not finite.
    #[error("invalid weight {value}: weights must be finite and nonnegative")]
    InvalidWeight { value: f64 },

    /// A transition rate is negative or not finite.
    #[error("invalid rate {value}: rates must be finite and nonnegative")]
    InvalidRate { value: f64 },

    /// A probability lies outside `[0, 1]`.
    #[error("invalid probability {value}: must lie in [0, 1]")]
    InvalidProbability { value: f64 },

    /// A time value is negative or not finite.
    #[error("invalid time {value}: times must be finite and nonnegative")]
    NegativeTime { value: f64 },

    /// A time grid decreases at the given index.
    #[error("time grid decreases at index {index}")]
    TimesNotNondecreasing { index: usize },

    /// A sampler was asked for zero samples.
    #[error("sample count must be at least 1")]
    ZeroSamples,
}

impl Error {
    /// Stable machine-readable token naming the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::SymbolOutOfRange { .. } => "SymbolOutOfRange",
            Error::RowDuplicate { .. } => "RowDuplicate",
            Error::ColumnDuplicate { .. } => "ColumnDuplicate",
            Error::NotAPermutation { .. } => "NotAPermutation",
            Error::OrderMismatch { .. } => "OrderMismatch",
            Error::OrderTooLarge { .. } => "OrderTooLarge",
            Error::CycleTypeParse { .. } => "CycleTypeParse",
            Error::InvalidWeight { .. } => "InvalidWeight",
            Error::InvalidRate { .. } => "InvalidRate",
            Error::InvalidProbability { .. } => "InvalidProbability",
            Error::NegativeTime { .. } => "NegativeTime",
            Error::TimesNotNondecreasing { .. } => "TimesNotNondecreasing",
            Error::ZeroSamples => "ZeroSamples",
        }
    }

    /// True for errors that mean "the input table is not a Latin square",
    /// as opposed to misuse of an operation.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NotSquare { .. }
                | Error::SymbolOutOfRange { .. }
                | Error::RowDuplicate { .. }
                | Error::ColumnDuplicate { .. }
        )
    }
}
