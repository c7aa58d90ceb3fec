//! Finite nondeterministic automata with marked states.

use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::ops::Deref;

use crate::alphabet::{EventAlphabet, EventId};
use crate::error::{Error, Result};

/// Index of a state inside an [`Automaton`].
pub type StateId = usize;

/// A nondeterministic automaton `(X, Σ, x0, α, X_m)`.
///
/// States are dense indices with display names. Outgoing transitions of each
/// state are kept sorted by `(event, target)` without duplicates, so an event
/// is active at a state exactly when it has at least one outgoing transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    alphabet: EventAlphabet,
    names: Vec<String>,
    initial: StateId,
    marked: Vec<bool>,
    out: Vec<Vec<(EventId, StateId)>>,
}

impl Automaton {
    /// Assembles an automaton from raw parts, normalising the transition lists.
    ///
    /// Panics if the parts are inconsistent; use [`AutomatonBuilder`] for
    /// untrusted input.
    pub fn from_parts(
        alphabet: EventAlphabet,
        names: Vec<String>,
        initial: StateId,
        marked: Vec<bool>,
        mut out: Vec<Vec<(EventId, StateId)>>,
    ) -> Self {
        let n = names.len();
        assert!(initial < n, "initial state out of range");
        assert_eq!(marked.len(), n);
        assert_eq!(out.len(), n);
        for list in &mut out {
            list.sort_unstable();
            list.dedup();
            debug_assert!(list.iter().all(|&(e, t)| e < alphabet.len() && t < n));
        }
        Automaton {
            alphabet,
            names,
            initial,
            marked,
            out,
        }
    }

    pub fn alphabet(&self) -> &EventAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_marked(&self, x: StateId) -> bool {
        self.marked[x]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(|&x| self.marked[x])
    }

    pub fn name(&self, x: StateId) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    /// All outgoing transitions of `x`, sorted by event then target.
    pub fn transitions(&self, x: StateId) -> &[(EventId, StateId)] {
        &self.out[x]
    }

    /// Every transition as a `(source, event, target)` triple.
    pub fn triples(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(x, l)| l.iter().map(move |&(e, y)| (x, e, y)))
    }

    /// Targets of `x` under `e`, in ascending order.
    pub fn successors(&self, x: StateId, e: EventId) -> impl Iterator<Item = StateId> + '_ {
        let list = &self.out[x];
        let lo = list.partition_point(|&(ev, _)| ev < e);
        let hi = list.partition_point(|&(ev, _)| ev <= e);
        list[lo..hi].iter().map(|&(_, t)| t)
    }

    pub fn enables(&self, x: StateId, e: EventId) -> bool {
        let list = &self.out[x];
        let lo = list.partition_point(|&(ev, _)| ev < e);
        lo < list.len() && list[lo].0 == e
    }

    /// The active event set `E(x)` in alphabet order.
    pub fn active_events(&self, x: StateId) -> Vec<EventId> {
        let mut evs: Vec<EventId> = self.out[x].iter().map(|&(e, _)| e).collect();
        evs.dedup();
        evs
    }

    pub fn is_deterministic(&self) -> bool {
        self.first_nondeterminism().is_none()
    }

    fn first_nondeterminism(&self) -> Option<(StateId, EventId)> {
        self.out.iter().enumerate().find_map(|(x, l)| {
            l.windows(2)
                .find(|w| w[0].0 == w[1].0)
                .map(|w| (x, w[0].0))
        })
    }

    /// Re-expresses the automaton over `target`, which must contain all of its events.
    pub fn with_alphabet(&self, target: &EventAlphabet) -> Result<Automaton> {
        let map: Vec<EventId> = self
            .alphabet
            .names()
            .map(|n| target.id(n).ok_or(Error::AlphabetMismatch))
            .collect::<Result<_>>()?;
        let out = self
            .out
            .iter()
            .map(|l| l.iter().map(|&(e, t)| (map[e], t)).collect())
            .collect();
        Ok(Automaton::from_parts(
            target.clone(),
            self.names.clone(),
            self.initial,
            self.marked.clone(),
            out,
        ))
    }

    /// Returns `self` over exactly the alphabet `target` (same events, same
    /// uncontrollable subset, possibly reordered).
    pub fn aligned_to(&self, target: &EventAlphabet) -> Result<Cow<'_, Automaton>> {
        if !self.alphabet.same_as(target) {
            return Err(Error::AlphabetMismatch);
        }
        if self.alphabet == *target {
            Ok(Cow::Borrowed(self))
        } else {
            self.with_alphabet(target).map(Cow::Owned)
        }
    }

    /// Replaces all state names.
    pub fn with_names(mut self, names: Vec<String>) -> Automaton {
        assert_eq!(names.len(), self.names.len());
        self.names = names;
        self
    }

    pub(crate) fn into_parts(self) -> Parts {
        (self.alphabet, self.names, self.initial, self.marked, self.out)
    }

    /// States reachable from the initial state, in breadth-first order
    /// (events in alphabet order, targets ascending).
    pub fn bfs_order(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &(_, y) in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
        order
    }

    /// Backward reachability: states from which a state satisfying `target`
    /// is reachable using only events accepted by `via`.
    pub(crate) fn coreachable(
        &self,
        target: impl Fn(StateId) -> bool,
        via: impl Fn(EventId) -> bool,
    ) -> Vec<bool> {
        let n = self.num_states();
        let mut pred: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (x, e, y) in self.triples() {
            if via(e) {
                pred[y].push(x);
            }
        }
        let mut good: Vec<bool> = (0..n).map(&target).collect();
        let mut queue: VecDeque<StateId> = (0..n).filter(|&x| good[x]).collect();
        while let Some(y) = queue.pop_front() {
            for &x in &pred[y] {
                if !good[x] {
                    good[x] = true;
                    queue.push_back(x);
                }
            }
        }
        good
    }

    /// Restriction to the states selected by `keep`, renumbered in the given order.
    pub(crate) fn restrict_ordered(&self, order: &[StateId]) -> (Automaton, Vec<Option<StateId>>) {
        let mut map = vec![None; self.num_states()];
        for (i, &x) in order.iter().enumerate() {
            map[x] = Some(i);
        }
        let names = order.iter().map(|&x| self.names[x].clone()).collect();
        let marked = order.iter().map(|&x| self.marked[x]).collect();
        let out = order
            .iter()
            .map(|&x| {
                self.out[x]
                    .iter()
                    .filter_map(|&(e, y)| map[y].map(|y| (e, y)))
                    .collect()
            })
            .collect();
        let initial = map[self.initial].expect("initial state kept");
        (
            Automaton::from_parts(self.alphabet.clone(), names, initial, marked, out),
            map,
        )
    }
}

/// Restriction of `a` to the states reachable from its initial state, renumbered
/// in breadth-first order.
pub fn accessible(a: &Automaton) -> Automaton {
    let order = a.bfs_order();
    a.restrict_ordered(&order).0
}

/// The subautomaton `F_G(keep)`: states in `keep`, transitions among them,
/// marking intersected with `keep`.
pub fn subautomaton(a: &Automaton, keep: &BTreeSet<StateId>) -> Result<Automaton> {
    if !keep.contains(&a.initial) {
        return Err(Error::InitialStateRemoved);
    }
    let order: Vec<StateId> = keep.iter().copied().filter(|&x| x < a.num_states()).collect();
    Ok(a.restrict_ordered(&order).0)
}

/// Fields of an [`Automaton`]: alphabet, names, initial state, marking, sorted out-edges.
pub(crate) type Parts = (
    EventAlphabet,
    Vec<String>,
    StateId,
    Vec<bool>,
    Vec<Vec<(EventId, StateId)>>,
);

/// An automaton whose transition function is a partial map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetAutomaton(Automaton);

impl DetAutomaton {
    /// Fails with [`Error::Nondeterministic`] naming the first offending state and event.
    pub fn new(a: Automaton) -> Result<Self> {
        match a.first_nondeterminism() {
            None => Ok(DetAutomaton(a)),
            Some((x, e)) => Err(Error::Nondeterministic {
                state: a.name(x).to_string(),
                event: a.alphabet.name(e).to_string(),
            }),
        }
    }

    pub(crate) fn new_unchecked(a: Automaton) -> Self {
        debug_assert!(a.is_deterministic());
        DetAutomaton(a)
    }

    pub fn next(&self, x: StateId, e: EventId) -> Option<StateId> {
        self.0.successors(x, e).next()
    }

    /// Runs a string from the initial state.
    pub fn run(&self, s: &[EventId]) -> Option<StateId> {
        s.iter().try_fold(self.0.initial, |x, &e| self.next(x, e))
    }

    pub fn as_automaton(&self) -> &Automaton {
        &self.0
    }

    pub fn into_automaton(self) -> Automaton {
        self.0
    }

    pub fn aligned_to(&self, target: &EventAlphabet) -> Result<Cow<'_, DetAutomaton>> {
        Ok(match self.0.aligned_to(target)? {
            Cow::Borrowed(_) => Cow::Borrowed(self),
            Cow::Owned(a) => Cow::Owned(DetAutomaton(a)),
        })
    }
}

impl Deref for DetAutomaton {
    type Target = Automaton;

    fn deref(&self) -> &Automaton {
        &self.0
    }
}

impl TryFrom<Automaton> for DetAutomaton {
    type Error = Error;

    fn try_from(a: Automaton) -> Result<Self> {
        DetAutomaton::new(a)
    }
}

impl From<DetAutomaton> for Automaton {
    fn from(d: DetAutomaton) -> Automaton {
        d.0
    }
}

/// Incremental construction of an [`Automaton`] from named states and events.
///
/// States are created on first mention; the first state mentioned is the
/// initial state unless [`AutomatonBuilder::initial`] says otherwise.
#[derive(Debug)]
pub struct AutomatonBuilder {
    alphabet: EventAlphabet,
    names: Vec<String>,
    index: HashMap<String, StateId>,
    initial: Option<StateId>,
    marked: Vec<bool>,
    out: Vec<Vec<(EventId, StateId)>>,
}

impl AutomatonBuilder {
    pub fn new(alphabet: EventAlphabet) -> Self {
        AutomatonBuilder {
            alphabet,
            names: Vec::new(),
            index: HashMap::new(),
            initial: None,
            marked: Vec::new(),
            out: Vec::new(),
        }
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&x) = self.index.get(name) {
            return x;
        }
        let x = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), x);
        self.marked.push(false);
        self.out.push(Vec::new());
        x
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        let x = self.state(name);
        self.initial = Some(x);
        self
    }

    pub fn mark(&mut self, name: &str) -> &mut Self {
        let x = self.state(name);
        self.marked[x] = true;
        self
    }

    /// Adds `src --event--> dst`. Returns `false` if the triple already existed.
    pub fn transition(&mut self, src: &str, event: &str, dst: &str) -> Result<bool> {
        let e = self
            .alphabet
            .id(event)
            .ok_or_else(|| Error::InvalidAlphabet(format!("unknown event `{event}`")))?;
        let x = self.state(src);
        let y = self.state(dst);
        if self.out[x].contains(&(e, y)) {
            return Ok(false);
        }
        self.out[x].push((e, y));
        Ok(true)
    }

    /// Convenience for tests and examples: panics on unknown events.
    pub fn edge(&mut self, src: &str, event: &str, dst: &str) -> &mut Self {
        self.transition(src, event, dst).expect("known event");
        self
    }

    pub fn build(&mut self) -> Automaton {
        if self.names.is_empty() {
            self.state("x0");
        }
        let initial = self.initial.unwrap_or(0);
        Automaton::from_parts(
            self.alphabet.clone(),
            self.names.clone(),
            initial,
            self.marked.clone(),
            self.out.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> EventAlphabet {
        EventAlphabet::new(["a", "b", "u"], ["u"]).unwrap()
    }

    #[test]
    fn accessible_drops_unreachable_marked_state() {
        let a = AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .mark("x1")
            .mark("x2")
            .edge("x2", "b", "x0")
            .build();
        let acc = accessible(&a);
        assert_eq!(acc.names(), &["x0".to_string(), "x1".to_string()]);
        assert!(acc.is_marked(1));
    }

    #[test]
    fn accessible_is_identity_on_accessible_automata() {
        let a = AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "b", "x0")
            .build();
        assert_eq!(accessible(&a), a);
    }

    #[test]
    fn accessible_chain_with_isolated_state() {
        let mut b = AutomatonBuilder::new(alpha());
        b.initial("x0").edge("x0", "a", "x1").edge("x1", "b", "x2");
        b.state("x3");
        let acc = accessible(&b.build());
        assert_eq!(acc.num_states(), 3);
        assert_eq!(acc.num_transitions(), 2);
    }

    #[test]
    fn subautomaton_identity_and_singleton() {
        let a = AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "b", "x2")
            .mark("x2")
            .build();
        let all: BTreeSet<_> = a.states().collect();
        assert_eq!(subautomaton(&a, &all).unwrap(), a);
        let one = subautomaton(&a, &BTreeSet::from([0])).unwrap();
        assert_eq!(one.num_states(), 1);
        assert_eq!(one.num_transitions(), 0);
        assert_eq!(
            subautomaton(&a, &BTreeSet::from([1, 2])),
            Err(Error::InitialStateRemoved)
        );
    }

    #[test]
    fn subautomaton_keeps_unreachable_downstream_states() {
        let a = AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "a", "x2")
            .edge("x2", "a", "x3")
            .mark("x3")
            .build();
        let sub = subautomaton(&a, &BTreeSet::from([0, 2, 3])).unwrap();
        assert_eq!(sub.num_states(), 3);
        assert_eq!(sub.num_transitions(), 1);
        assert!(sub.is_marked(2));
        assert_eq!(accessible(&sub).num_states(), 1);
    }

    #[test]
    fn determinism_check_names_offender() {
        let a = AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x0", "a", "x2")
            .build();
        assert_eq!(
            DetAutomaton::new(a),
            Err(Error::Nondeterministic {
                state: "x0".into(),
                event: "a".into()
            })
        );
    }

    #[test]
    fn successors_and_active_events() {
        let a = AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "u", "x1")
            .edge("x0", "a", "x2")
            .edge("x0", "a", "x1")
            .build();
        assert_eq!(a.successors(0, 0).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(a.active_events(0), vec![0, 2]);
        assert!(!a.enables(0, 1));
        assert!(a.enables(0, 2));
    }
}
