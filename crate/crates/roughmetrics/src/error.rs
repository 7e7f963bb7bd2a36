//! Error taxonomy shared by all modules.
//!
//! The variants mirror the distinct failure classes surfaced by the command
//! line tool: malformed input, parameter out of its mathematical domain,
//! an operation precondition that does not hold for the given data, and an
//! exhausted search budget. A *valid negative outcome* (for example a
//! non-embeddable space) is never an `Error`; those are ordinary results.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Structurally malformed input: non-square matrix, negative entry,
    /// duplicate point, bad permutation.
    #[error("structural error: {0}")]
    Structure(String),

    /// Parameter outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operation precondition violated by the given data.
    #[error("precondition not met: {0}")]
    Precondition(String),

    /// Search budget exhausted before the result was proved.
    #[error("budget exhausted: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
