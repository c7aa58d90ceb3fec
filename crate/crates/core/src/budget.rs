use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default bound on the number of states a single construction may create.
pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

/// Cooperative cancellation flag shared between a caller and a running check.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Resource bounds for constructions that can blow up (subset constructions,
/// the synchronous state merger, fixpoint iterations).
#[derive(Clone, Debug)]
pub struct Budget {
    pub state_limit: usize,
    pub cancel: Option<CancelToken>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            state_limit: DEFAULT_STATE_LIMIT,
            cancel: None,
        }
    }
}

impl Budget {
    pub fn with_state_limit(state_limit: usize) -> Self {
        Budget {
            state_limit,
            cancel: None,
        }
    }

    pub fn with_cancel(mut self, token: CancelToken) -> Self {
        self.cancel = Some(token);
        self
    }

    /// Errors once `states` exceeds the limit.
    pub fn check_states(&self, states: usize) -> Result<()> {
        if states > self.state_limit {
            Err(Error::StateLimitExceeded {
                limit: self.state_limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_cancel(&self) -> Result<()> {
        match &self.cancel {
            Some(t) if t.is_cancelled() => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }

    /// Combined check used inside exploration loops.
    pub fn tick(&self, states: usize) -> Result<()> {
        self.check_states(states)?;
        // cancellation is polled once per 1024 new states
        if states.is_multiple_of(1024) {
            self.check_cancel()?;
        }
        Ok(())
    }
}
