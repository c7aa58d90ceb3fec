//! Event alphabets with a controllable/uncontrollable partition.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of an event inside an [`EventAlphabet`], in declaration order.
pub type EventId = usize;

/// Reserved marker for the empty string; never a valid event name.
pub const EPSILON: &str = "ε";

/// A finite, ordered set of event symbols partitioned into controllable and
/// uncontrollable events.
///
/// Declaration order matters: breadth-first traversals and witness
/// tie-breaking follow it.
#[derive(Clone, PartialEq, Eq)]
pub struct EventAlphabet {
    events: Vec<String>,
    uncontrollable: Vec<bool>,
    index: HashMap<String, EventId>,
}

impl EventAlphabet {
    /// Builds an alphabet from event names in order and the uncontrollable subset.
    pub fn new<S, I, U, T>(events: I, uncontrollable: U) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = S>,
        T: AsRef<str>,
        U: IntoIterator<Item = T>,
    {
        let events: Vec<String> = events.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(events.len());
        for (i, e) in events.iter().enumerate() {
            if e.is_empty() || e == EPSILON {
                return Err(Error::InvalidAlphabet(format!(
                    "`{e}` is not a valid event symbol"
                )));
            }
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate event `{e}`")));
            }
        }
        let mut unc = vec![false; events.len()];
        for u in uncontrollable {
            let u = u.as_ref();
            match index.get(u) {
                Some(&i) => unc[i] = true,
                None => {
                    return Err(Error::InvalidAlphabet(format!(
                        "uncontrollable event `{u}` is not in the alphabet"
                    )))
                }
            }
        }
        Ok(EventAlphabet {
            events,
            uncontrollable: unc,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn name(&self, e: EventId) -> &str {
        &self.events[e]
    }

    pub fn id(&self, name: &str) -> Option<EventId> {
        self.index.get(name).copied()
    }

    pub fn is_uncontrollable(&self, e: EventId) -> bool {
        self.uncontrollable[e]
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> + '_ {
        0..self.events.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.events.iter().map(String::as_str)
    }

    pub fn uncontrollable(&self) -> impl Iterator<Item = EventId> + '_ {
        self.events().filter(|&e| self.uncontrollable[e])
    }

    pub fn controllable(&self) -> impl Iterator<Item = EventId> + '_ {
        self.events().filter(|&e| !self.uncontrollable[e])
    }

    /// Same events and same uncontrollable subset, ignoring declaration order.
    pub fn same_as(&self, other: &EventAlphabet) -> bool {
        self.len() == other.len()
            && self.events.iter().enumerate().all(|(i, e)| {
                other
                    .id(e)
                    .is_some_and(|j| other.uncontrollable[j] == self.uncontrollable[i])
            })
    }

    /// Union of two alphabets: events of `self` first, then the new events of `other`.
    pub fn union(&self, other: &EventAlphabet) -> Result<EventAlphabet> {
        let mut events = self.events.clone();
        let mut unc: Vec<&str> = self.uncontrollable().map(|e| self.name(e)).collect();
        for (j, e) in other.events.iter().enumerate() {
            match self.id(e) {
                Some(i) => {
                    if self.uncontrollable[i] != other.uncontrollable[j] {
                        return Err(Error::AlphabetConflict { event: e.clone() });
                    }
                }
                None => {
                    events.push(e.clone());
                    if other.uncontrollable[j] {
                        unc.push(e);
                    }
                }
            }
        }
        EventAlphabet::new(events, unc)
    }

    /// Renders a sequence of event ids as event names.
    pub fn render(&self, trace: &[EventId]) -> Vec<String> {
        trace.iter().map(|&e| self.events[e].clone()).collect()
    }
}

impl fmt::Debug for EventAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unc: Vec<&str> = self.uncontrollable().map(|e| self.name(e)).collect();
        f.debug_struct("EventAlphabet")
            .field("events", &self.events)
            .field("uncontrollable", &unc)
            .finish()
    }
}
