//! Existence test, supervisor construction and closed-loop verification for
//! bisimilarity enforcing supervisors.
//!
//! A deterministic specification `R` admits a supervisor `S` with
//! `G || S` bisimilar to `R` (and `S` never disabling an uncontrollable event)
//! exactly when `R` is synchronously simulation-based controllable with
//! respect to the plant `G`. The test explores the synchronously
//! simulation-based controllable product of `R` and `G`; two diagnostic sinks
//! record a specification move the plant cannot follow (`__qd`) and an
//! uncontrollable plant move the specification does not allow
//! (`__qd_prime`).

use std::collections::HashMap;
use std::fmt;

use crate::alphabet::EventId;
use crate::automaton::{Automaton, DetAutomaton, StateId};
use crate::budget::Budget;
use crate::compose::{parallel, uncontrollable_augment};
use crate::error::{Error, Result};
use crate::language::inclusion_witness;
use crate::relations::{bisimilar, Relation};

/// Reserved name of the sink reached when the specification enables an event
/// that a synchronized plant state does not.
pub const DEAD_STATE: &str = "__qd";
/// Reserved name of the sink reached when a synchronized plant state enables
/// an uncontrollable event the specification does not.
pub const UNCTRL_STATE: &str = "__qd_prime";

/// A string of events, rendered space-separated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Trace(pub Vec<String>);

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

/// The synchronously simulation-based controllable product `R ||sync G`,
/// accessible part only.
#[derive(Clone, Debug)]
pub struct SyncProduct {
    /// States `(q,x)` plus the diagnostic sinks when reachable. Marked states
    /// are pairs with both components marked.
    pub carrier: Automaton,
    /// Component pair of every non-diagnostic carrier state.
    pub pairs: Vec<Option<(StateId, StateId)>>,
    pub dead: Option<StateId>,
    pub unctrl_violation: Option<StateId>,
    /// Reachable pairs with a marked specification state and an unmarked
    /// plant state, in discovery order.
    pub marking_violations: Vec<StateId>,
    parent: Vec<Option<(StateId, EventId)>>,
}

impl SyncProduct {
    pub fn dead_reachable(&self) -> bool {
        self.dead.is_some()
    }

    pub fn unctrl_violation_reachable(&self) -> bool {
        self.unctrl_violation.is_some()
    }

    /// Shortest string reaching carrier state `x` (shortlex, alphabet order).
    pub fn witness(&self, x: StateId) -> Vec<EventId> {
        let mut trace = Vec::new();
        let mut cur = x;
        while let Some((p, e)) = self.parent[cur] {
            trace.push(e);
            cur = p;
        }
        trace.reverse();
        trace
    }
}

/// Builds `r ||sync g` breadth-first.
pub fn sync_product(r: &DetAutomaton, g: &Automaton) -> Result<SyncProduct> {
    sync_product_with(r, g, &Budget::default())
}

pub fn sync_product_with(r: &DetAutomaton, g: &Automaton, budget: &Budget) -> Result<SyncProduct> {
    let g = g.aligned_to(r.alphabet())?;
    let alphabet = r.alphabet();
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs: Vec<Option<(StateId, StateId)>> = vec![Some((r.initial(), g.initial()))];
    index.insert((r.initial(), g.initial()), 0);
    let mut parent = vec![None];
    let mut out: Vec<Vec<(EventId, StateId)>> = Vec::new();
    let mut dead = None;
    let mut unctrl = None;
    let mut marking_violations = Vec::new();

    let mut i = 0;
    while i < pairs.len() {
        let Some((q, x)) = pairs[i] else {
            out.push(Vec::new());
            i += 1;
            continue;
        };
        if r.is_marked(q) && !g.is_marked(x) {
            marking_violations.push(i);
        }
        let mut edges = Vec::new();
        for e in alphabet.events() {
            let rq = r.next(q, e);
            let mut gx = g.successors(x, e).peekable();
            let plant_enables = gx.peek().is_some();
            match (rq, plant_enables) {
                (Some(q2), true) => {
                    for x2 in gx {
                        let next = pairs.len();
                        let y = *index.entry((q2, x2)).or_insert_with(|| {
                            pairs.push(Some((q2, x2)));
                            parent.push(Some((i, e)));
                            next
                        });
                        edges.push((e, y));
                    }
                }
                (Some(_), false) => {
                    let y = *dead.get_or_insert_with(|| {
                        pairs.push(None);
                        parent.push(Some((i, e)));
                        pairs.len() - 1
                    });
                    edges.push((e, y));
                }
                (None, true) if alphabet.is_uncontrollable(e) => {
                    let y = *unctrl.get_or_insert_with(|| {
                        pairs.push(None);
                        parent.push(Some((i, e)));
                        pairs.len() - 1
                    });
                    edges.push((e, y));
                }
                _ => {}
            }
        }
        budget.tick(pairs.len())?;
        out.push(edges);
        i += 1;
    }

    let names = (0..pairs.len())
        .map(|s| match pairs[s] {
            Some((q, x)) => format!("({},{})", r.name(q), g.name(x)),
            None if Some(s) == dead => DEAD_STATE.to_string(),
            None => UNCTRL_STATE.to_string(),
        })
        .collect();
    let marked = pairs
        .iter()
        .map(|p| p.is_some_and(|(q, x)| r.is_marked(q) && g.is_marked(x)))
        .collect();
    Ok(SyncProduct {
        carrier: Automaton::from_parts(alphabet.clone(), names, 0, marked, out),
        pairs,
        dead,
        unctrl_violation: unctrl,
        marking_violations,
        parent,
    })
}

/// A synchronized pair with a marked specification state and an unmarked
/// plant state, with the shortest string reaching it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkingWitness {
    pub trace: Trace,
    pub spec_state: String,
    pub plant_state: String,
}

/// Outcome of the existence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub controllable: bool,
    /// Shortest string reaching `__qd`: the specification allows its last
    /// event but some plant state synchronized with it does not.
    pub dead_witness: Option<Trace>,
    /// Shortest string reaching `__qd_prime`: the plant can perform its last,
    /// uncontrollable event where the specification forbids it.
    pub unctrl_witness: Option<Trace>,
    pub marking_witness: Option<MarkingWitness>,
    pub product_states: usize,
}

/// Tests whether `r` is synchronously simulation-based controllable with
/// respect to `g`, i.e. whether a bisimilarity enforcing supervisor exists.
pub fn check_existence(r: &DetAutomaton, g: &Automaton) -> Result<CheckReport> {
    check_existence_with(r, g, &Budget::default())
}

pub fn check_existence_with(r: &DetAutomaton, g: &Automaton, budget: &Budget) -> Result<CheckReport> {
    let p = sync_product_with(r, g, budget)?;
    let alphabet = r.alphabet();
    let trace = |x: StateId| Trace(alphabet.render(&p.witness(x)));
    let dead_witness = p.dead.map(trace);
    let unctrl_witness = p.unctrl_violation.map(trace);
    let g = g.aligned_to(alphabet)?;
    let marking_witness = p.marking_violations.first().map(|&x| {
        let (q, gx) = p.pairs[x].expect("violation is a pair");
        MarkingWitness {
            trace: trace(x),
            spec_state: r.name(q).to_string(),
            plant_state: g.name(gx).to_string(),
        }
    });
    Ok(CheckReport {
        controllable: dead_witness.is_none()
            && unctrl_witness.is_none()
            && marking_witness.is_none(),
        dead_witness,
        unctrl_witness,
        marking_witness,
        product_states: p.carrier.num_states(),
    })
}

/// Builds the supervisor `R_uc` (the uncontrollable augment of `r`).
///
/// Fails with [`Error::NotControllable`] when the existence test fails.
pub fn synthesize_supervisor(r: &DetAutomaton, g: &Automaton) -> Result<Automaton> {
    synthesize_supervisor_with(r, g, &Budget::default())
}

pub fn synthesize_supervisor_with(r: &DetAutomaton, g: &Automaton, budget: &Budget) -> Result<Automaton> {
    let report = check_existence_with(r, g, budget)?;
    if !report.controllable {
        return Err(Error::NotControllable(Box::new(report)));
    }
    Ok(uncontrollable_augment(r))
}

/// Outcome of checking a supervisor against a plant and a specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedLoopVerdict {
    /// `G || S` is bisimilar to `R` and `S` enables every uncontrollable
    /// event everywhere. The relation pairs closed-loop states with
    /// specification states.
    Enforced { closed_loop: Automaton, relation: Relation },
    /// `G || S` is not bisimilar to `R`. `trace` is a shortest string on which
    /// the generated or marked languages differ, when they differ at all.
    NotBisimilar {
        closed_loop_state: String,
        spec_state: String,
        trace: Option<Trace>,
    },
    /// The supervisor disables an uncontrollable event at a state.
    UncontrollableDisabled { state: String, event: String },
}

impl ClosedLoopVerdict {
    pub fn is_enforced(&self) -> bool {
        matches!(self, ClosedLoopVerdict::Enforced { .. })
    }
}

/// Checks both conditions for a bisimilarity enforcing supervisor: bisimilarity
/// of `g || s` with `r`, then that every state of `s` enables every
/// uncontrollable event.
pub fn verify_closed_loop(g: &Automaton, s: &Automaton, r: &DetAutomaton) -> Result<ClosedLoopVerdict> {
    verify_closed_loop_with(g, s, r, &Budget::default())
}

pub fn verify_closed_loop_with(
    g: &Automaton,
    s: &Automaton,
    r: &DetAutomaton,
    budget: &Budget,
) -> Result<ClosedLoopVerdict> {
    let alphabet = r.alphabet();
    let g = g.aligned_to(alphabet)?;
    let s = s.aligned_to(alphabet)?;
    let closed = parallel(&g, &s)?;
    let bis = bisimilar(&closed, r)?;
    if !bis.bisimilar {
        let dc = crate::compose::determinize(&closed, budget)?;
        let trace = match inclusion_witness(&dc, r)? {
            Some(t) => Some(t),
            None => inclusion_witness(r, &dc)?,
        };
        return Ok(ClosedLoopVerdict::NotBisimilar {
            closed_loop_state: closed.name(closed.initial()).to_string(),
            spec_state: r.name(r.initial()).to_string(),
            trace: trace.map(|t| Trace(alphabet.render(&t))),
        });
    }
    for y in s.states() {
        for u in alphabet.uncontrollable() {
            if !s.enables(y, u) {
                return Ok(ClosedLoopVerdict::UncontrollableDisabled {
                    state: s.name(y).to_string(),
                    event: alphabet.name(u).to_string(),
                });
            }
        }
    }
    Ok(ClosedLoopVerdict::Enforced {
        closed_loop: closed,
        relation: bis.relation,
    })
}
