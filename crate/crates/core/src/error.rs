use thiserror::Error;

use crate::semifield::SemifieldError;
use crate::terms::TermError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WtaError {
    #[error(transparent)]
    Semifield(#[from] SemifieldError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("automaton is not bottom-up deterministic")]
    NotDeterministic,
    #[error("automaton is not slim")]
    NotSlim,
    #[error("cannot remove the only state of an automaton")]
    SingleState,
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("ranked alphabets differ")]
    AlphabetMismatch,
    #[error("semifields differ: {0} vs {1}")]
    KindMismatch(
        crate::semifield::SemifieldKind,
        crate::semifield::SemifieldKind,
    ),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl WtaError {
    /// Whether the error reports a violated precondition on otherwise
    /// well-formed input, as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            WtaError::NotDeterministic
                | WtaError::NotSlim
                | WtaError::SingleState
                | WtaError::AlphabetMismatch
                | WtaError::KindMismatch(..)
        )
    }
}

pub type Result<T, E = WtaError> = std::result::Result<T, E>;
