use thiserror::Error;

use crate::tree::Diagnostic;

#[derive(Debug, Error, Clone)]
pub enum AnalysisError {
    #[error("tree violates the axioms ({} diagnostics)", .0.len())]
    Invalid(Vec<Diagnostic>),
    #[error("tree is not minimally complete ({} diagnostics)", .0.len())]
    NotMinimallyComplete(Vec<Diagnostic>),
    /// Two routes to the same value disagree; this signals a bug or corrupted input.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("{0}")]
    Precondition(String),
}

impl AnalysisError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            AnalysisError::Invalid(d) | AnalysisError::NotMinimallyComplete(d) => d,
            _ => &[],
        }
    }
}
