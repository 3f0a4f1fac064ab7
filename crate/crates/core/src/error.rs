use thiserror::Error;

/// Errors raised across the crate.
///
/// `Capability` marks a refusal: the input is valid but exceeds what an exact
/// routine is configured to handle. Callers (the CLI in particular) treat it
/// differently from malformed input.
#[derive(Debug, Error)]
pub enum HgameError {
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HgameError {
    /// True for refusals that are not the caller's fault (size caps, failed
    /// theorem preconditions).
    pub fn is_refusal(&self) -> bool {
        matches!(self, HgameError::Capability(_) | HgameError::Precondition(_))
    }
}

pub type Result<T> = std::result::Result<T, HgameError>;
