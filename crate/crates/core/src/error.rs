use thiserror::Error;

use crate::synthesis::CheckReport;

/// Errors produced by automaton constructions and checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two automata that must share an event alphabet do not.
    #[error("event alphabets differ (events or uncontrollable partition)")]
    AlphabetMismatch,

    /// An event is uncontrollable on one side of a composition and controllable on the other.
    #[error("event `{event}` is uncontrollable in one automaton but controllable in the other")]
    AlphabetConflict { event: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    /// A subautomaton was requested that does not contain the initial state.
    #[error("the initial state is not part of the kept state set")]
    InitialStateRemoved,

    #[error("state limit of {limit} states exceeded")]
    StateLimitExceeded { limit: usize },

    /// A deterministic automaton was required but a state has two successors on one event.
    #[error("nondeterministic choice at state `{state}` on event `{event}`")]
    Nondeterministic { state: String, event: String },

    /// Supervisor synthesis was requested for a specification that fails the existence test.
    #[error("specification is not synchronously simulation-based controllable")]
    NotControllable(Box<CheckReport>),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("operation cancelled")]
    Cancelled,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
