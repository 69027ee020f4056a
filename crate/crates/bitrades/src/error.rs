use crate::verify::VerificationReport;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed structure: out-of-range index, duplicate cell, inconsistent dimensions.
    #[error("structural error: {0}")]
    Structural(String),

    /// Text input that could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An operation was called outside its stated domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Two base-row parts claim the same cell index.
    #[error("base-row cell collision at cell {cell}")]
    CellCollision { cell: usize },

    /// A constructed object failed verification. Carries the full report so the
    /// failing condition can be located.
    #[error("construction integrity failure in {context}: {}", .report.summary())]
    Integrity {
        context: String,
        report: VerificationReport,
    },

    /// No catalog entry for the requested parameters.
    #[error("no catalog entry for k={k}, m={m}")]
    CatalogMiss { k: usize, m: usize },

    /// A bounded search ran out of nodes before reaching a verdict.
    /// Never a statement about existence.
    #[error("node budget exhausted after {nodes} nodes")]
    Budget { nodes: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
