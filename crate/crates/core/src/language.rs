//! Regular-language operations carried on deterministic automata.
//!
//! An automaton `A` denotes two languages: the generated language `L(A)`
//! (strings with a run) and the marked language `L_m(A)` (strings whose run
//! ends in a marked state). Operations that produce a single language put it
//! in the marked language of a trim result, so the generated language of the
//! result is the prefix closure of its marked language. The empty language
//! is a single unmarked initial state without transitions.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{EventAlphabet, EventId};
use crate::automaton::{Automaton, DetAutomaton, StateId};
use crate::budget::Budget;
use crate::compose::parallel;
use crate::error::Result;

/// Which language of an automaton an operation reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum View {
    Generated,
    Marked,
}

fn accepts(d: &DetAutomaton, x: Option<StateId>, view: View) -> bool {
    match (x, view) {
        (None, _) => false,
        (Some(_), View::Generated) => true,
        (Some(x), View::Marked) => d.is_marked(x),
    }
}

/// The canonical automaton for the empty language over `alphabet`.
pub fn empty_language(alphabet: &EventAlphabet) -> DetAutomaton {
    DetAutomaton::new_unchecked(Automaton::from_parts(
        alphabet.clone(),
        vec!["s0".to_string()],
        0,
        vec![false],
        vec![Vec::new()],
    ))
}

/// Restriction to accessible states that can reach a marked state.
pub fn trim(d: &DetAutomaton) -> DetAutomaton {
    let co = d.coreachable(|x| d.is_marked(x), |_| true);
    if !co[d.initial()] {
        return empty_language(d.alphabet());
    }
    let mut seen = vec![false; d.num_states()];
    let mut order = vec![d.initial()];
    seen[d.initial()] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &(_, y) in d.transitions(x) {
            if co[y] && !seen[y] {
                seen[y] = true;
                order.push(y);
            }
        }
    }
    DetAutomaton::new_unchecked(d.restrict_ordered(&order).0)
}

/// Boolean combination of one language of `a` with one language of `b`:
/// the result marks exactly the strings `s` with `op(s ∈ view_a(a), s ∈ view_b(b))`.
///
/// `op(false, false)` must be `false`.
pub fn combine(
    a: &DetAutomaton,
    view_a: View,
    b: &DetAutomaton,
    view_b: View,
    op: impl Fn(bool, bool) -> bool,
) -> Result<DetAutomaton> {
    debug_assert!(!op(false, false));
    let b = b.aligned_to(a.alphabet())?;
    let k = a.alphabet().len();
    type Cell = (Option<StateId>, Option<StateId>);
    let start: Cell = (Some(a.initial()), Some(b.initial()));
    let mut index: HashMap<Cell, StateId> = HashMap::from([(start, 0)]);
    let mut cells = vec![start];
    let mut out = Vec::new();
    let mut i = 0;
    while i < cells.len() {
        let (x, y) = cells[i];
        i += 1;
        let mut edges = Vec::new();
        for e in 0..k {
            let t: Cell = (x.and_then(|x| a.next(x, e)), y.and_then(|y| b.next(y, e)));
            if t == (None, None) {
                // the joint sink accepts nothing
                continue;
            }
            let next = cells.len();
            let id = *index.entry(t).or_insert_with(|| {
                cells.push(t);
                next
            });
            edges.push((e, id));
        }
        out.push(edges);
    }
    let marked = cells
        .iter()
        .map(|&(x, y)| op(accepts(a, x, view_a), accepts(&b, y, view_b)))
        .collect();
    let names = cells.iter().map(|&(x, y)| cell_name(a, x, &b, y)).collect();
    let d = DetAutomaton::new_unchecked(Automaton::from_parts(
        a.alphabet().clone(),
        names,
        0,
        marked,
        out,
    ));
    Ok(trim(&d))
}

fn cell_name(a: &Automaton, x: Option<StateId>, b: &Automaton, y: Option<StateId>) -> String {
    let n = |m: &Automaton, z: Option<StateId>| z.map_or("⊥".to_string(), |z| m.name(z).to_string());
    format!("({},{})", n(a, x), n(b, y))
}

/// Product: `L = L(a) ∩ L(b)` and `L_m = L_m(a) ∩ L_m(b)`.
pub fn lang_intersect(a: &DetAutomaton, b: &DetAutomaton) -> Result<DetAutomaton> {
    let b = b.aligned_to(a.alphabet())?;
    Ok(DetAutomaton::new_unchecked(parallel(a, &b)?))
}

/// Marked language `L(a) \ L(b)` (difference of generated languages).
pub fn lang_difference_marked(a: &DetAutomaton, b: &DetAutomaton) -> Result<DetAutomaton> {
    combine(a, View::Generated, b, View::Generated, |x, y| x && !y)
}

/// Marked language `L_m(a) / Σ_uc*`: strings that reach a marked state after
/// some (possibly empty) string of uncontrollable events.
pub fn quotient_unctrl(a: &DetAutomaton) -> DetAutomaton {
    let alphabet = a.alphabet();
    let good = a.coreachable(|x| a.is_marked(x), |e| alphabet.is_uncontrollable(e));
    let (alphabet, names, initial, _, out) = a.as_automaton().clone().into_parts();
    trim(&DetAutomaton::new_unchecked(Automaton::from_parts(
        alphabet, names, initial, good, out,
    )))
}

/// Marked language `L_m(a) Σ*`: once a marked state is reached every
/// extension is accepted.
pub fn concat_sigma_star(a: &DetAutomaton) -> DetAutomaton {
    let k = a.alphabet().len();
    const ALL: &str = "Σ*";
    let mut index: HashMap<StateId, StateId> = HashMap::new();
    // `None` is the universal accepting state
    let mut cells: Vec<Option<StateId>> = Vec::new();
    let mut all: Option<StateId> = None;
    let mut intern = |x: StateId, cells: &mut Vec<Option<StateId>>| -> StateId {
        if a.is_marked(x) {
            *all.get_or_insert_with(|| {
                cells.push(None);
                cells.len() - 1
            })
        } else {
            *index.entry(x).or_insert_with(|| {
                cells.push(Some(x));
                cells.len() - 1
            })
        }
    };
    intern(a.initial(), &mut cells);
    let mut out = Vec::new();
    let mut i = 0;
    while i < cells.len() {
        let cell = cells[i];
        let edges = match cell {
            None => (0..k).map(|e| (e, i)).collect(),
            Some(x) => (0..k)
                .filter_map(|e| a.next(x, e).map(|y| (e, intern(y, &mut cells))))
                .collect(),
        };
        out.push(edges);
        i += 1;
    }
    let marked = cells.iter().map(Option::is_none).collect();
    let names = cells
        .iter()
        .map(|c| c.map_or(ALL.to_string(), |x| a.name(x).to_string()))
        .collect();
    trim(&DetAutomaton::new_unchecked(Automaton::from_parts(
        a.alphabet().clone(),
        names,
        0,
        marked,
        out,
    )))
}

/// Marked language `prefix closure of L_m(a)`.
pub fn prefix_close(a: &DetAutomaton) -> DetAutomaton {
    let t = trim(a);
    if t.num_states() == 1 && !t.is_marked(0) && t.transitions(0).is_empty() {
        return t;
    }
    let (alphabet, names, initial, marked, out) = t.into_automaton().into_parts();
    let all = vec![true; marked.len()];
    DetAutomaton::new_unchecked(Automaton::from_parts(alphabet, names, initial, all, out))
}

/// Automaton whose generated language is the marked language of `a`, when
/// that marked language is prefix-closed. Every state of the result is marked.
pub fn generated_from_marked(a: &DetAutomaton) -> DetAutomaton {
    if !a.is_marked(a.initial()) {
        return empty_language(a.alphabet());
    }
    let mut seen = vec![false; a.num_states()];
    let mut order = vec![a.initial()];
    seen[a.initial()] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &(_, y) in a.transitions(x) {
            if a.is_marked(y) && !seen[y] {
                seen[y] = true;
                order.push(y);
            }
        }
    }
    DetAutomaton::new_unchecked(a.restrict_ordered(&order).0)
}

/// Shortest string (shortlex, alphabet order) in `L(a) \ L(b)` or
/// `L_m(a) \ L_m(b)`, if any.
pub fn inclusion_witness(a: &DetAutomaton, b: &DetAutomaton) -> Result<Option<Vec<EventId>>> {
    let b = b.aligned_to(a.alphabet())?;
    let start = (a.initial(), Some(b.initial()));
    // `None` on the right: `b` has no run on the string
    type Cell = (StateId, Option<StateId>);
    let mut parent: HashMap<Cell, Option<(Cell, EventId)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(cell @ (x, y)) = queue.pop_front() {
        let bad = match y {
            None => true,
            Some(y) => a.is_marked(x) && !b.is_marked(y),
        };
        if bad {
            let mut trace = Vec::new();
            let mut cur = cell;
            while let Some((p, e)) = parent[&cur] {
                trace.push(e);
                cur = p;
            }
            trace.reverse();
            return Ok(Some(trace));
        }
        for &(e, x2) in a.transitions(x) {
            let t = (x2, y.and_then(|y| b.next(y, e)));
            if let std::collections::hash_map::Entry::Vacant(v) = parent.entry(t) {
                v.insert(Some((cell, e)));
                queue.push_back(t);
            }
        }
    }
    Ok(None)
}

/// `L(a) ⊆ L(b)` and `L_m(a) ⊆ L_m(b)`.
pub fn lang_subset(a: &DetAutomaton, b: &DetAutomaton) -> Result<bool> {
    Ok(inclusion_witness(a, b)?.is_none())
}

/// `L(a) = L(b)` and `L_m(a) = L_m(b)`.
pub fn lang_equal(a: &DetAutomaton, b: &DetAutomaton) -> Result<bool> {
    Ok(lang_subset(a, b)? && lang_subset(b, a)?)
}

/// `L_m(a)` is empty.
pub fn marked_is_empty(a: &DetAutomaton) -> bool {
    !a.coreachable(|x| a.is_marked(x), |_| true)[a.initial()]
}

/// Result of a language controllability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Controllability {
    pub controllable: bool,
    /// Shortest `sσ` with `s` in the language, `σ` uncontrollable and `sσ`
    /// generated by the plant but outside the language.
    pub witness: Option<Vec<EventId>>,
}

/// Language controllability of `L(k)` with respect to `L(g)` and the
/// uncontrollable events: `L(k)Σ_uc ∩ L(g) ⊆ L(k)`.
///
/// Explores the product of `k` with the subset automaton of `g` lazily.
pub fn lang_controllable(k: &DetAutomaton, g: &Automaton, budget: &Budget) -> Result<Controllability> {
    let g = g.aligned_to(k.alphabet())?;
    let unc: Vec<EventId> = k.alphabet().uncontrollable().collect();
    let start = (k.initial(), vec![g.initial()]);
    let mut index: HashMap<(StateId, Vec<StateId>), usize> = HashMap::from([(start.clone(), 0)]);
    let mut cells = vec![start];
    let mut parent: Vec<Option<(usize, EventId)>> = vec![None];
    let mut i = 0;
    while i < cells.len() {
        let (q, set) = cells[i].clone();
        for &u in &unc {
            if k.next(q, u).is_none() && set.iter().any(|&x| g.enables(x, u)) {
                let mut trace = vec![u];
                let mut cur = i;
                while let Some((p, e)) = parent[cur] {
                    trace.push(e);
                    cur = p;
                }
                trace.reverse();
                return Ok(Controllability {
                    controllable: false,
                    witness: Some(trace),
                });
            }
        }
        for e in k.alphabet().events() {
            let Some(q2) = k.next(q, e) else { continue };
            let mut s2: Vec<StateId> = set.iter().flat_map(|&x| g.successors(x, e)).collect();
            if s2.is_empty() {
                continue;
            }
            s2.sort_unstable();
            s2.dedup();
            let cell = (q2, s2);
            if !index.contains_key(&cell) {
                budget.tick(cells.len() + 1)?;
                index.insert(cell.clone(), cells.len());
                cells.push(cell);
                parent.push(Some((i, e)));
            }
        }
        i += 1;
    }
    Ok(Controllability {
        controllable: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::AutomatonBuilder;

    fn alpha() -> EventAlphabet {
        EventAlphabet::new(["a", "b", "u"], ["u"]).unwrap()
    }

    fn det(b: &mut AutomatonBuilder) -> DetAutomaton {
        DetAutomaton::new(b.build()).unwrap()
    }

    fn marks(d: &DetAutomaton, s: &[EventId]) -> bool {
        d.run(s).is_some_and(|x| d.is_marked(x))
    }

    #[test]
    fn intersect_with_itself_is_identity() {
        let a = det(AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "b", "x0")
            .mark("x1"));
        let i = lang_intersect(&a, &a).unwrap();
        assert!(lang_equal(&i, &a).unwrap());
    }

    #[test]
    fn intersect_disjoint_languages() {
        let a = det(AutomatonBuilder::new(alpha()).initial("x0").edge("x0", "a", "x1"));
        let b = det(AutomatonBuilder::new(alpha()).initial("y0").edge("y0", "b", "y1"));
        let i = lang_intersect(&a, &b).unwrap();
        assert_eq!(i.num_states(), 1);
        assert_eq!(i.num_transitions(), 0);
    }

    #[test]
    fn difference_with_itself_is_empty() {
        let a = det(AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "a", "x1"));
        let d = lang_difference_marked(&a, &a).unwrap();
        assert!(marked_is_empty(&d));
        assert_eq!(d, empty_language(&alpha()));
    }

    #[test]
    fn difference_with_epsilon_only() {
        let a = det(AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "b", "x2"));
        let eps = det(AutomatonBuilder::new(alpha()).initial("y0"));
        let d = lang_difference_marked(&a, &eps).unwrap();
        assert!(!marks(&d, &[]));
        assert!(marks(&d, &[0]));
        assert!(marks(&d, &[0, 1]));
        assert!(!marks(&d, &[0, 0]));
    }

    #[test]
    fn quotient_one_step_backward() {
        let a = det(AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "u", "x2")
            .mark("x2"));
        let q = quotient_unctrl(&a);
        assert!(marks(&q, &[0]));
        assert!(marks(&q, &[0, 2]));
        assert!(!marks(&q, &[]));
    }

    #[test]
    fn quotient_without_uncontrollables_is_identity() {
        let al = EventAlphabet::new(["a", "b"], Vec::<&str>::new()).unwrap();
        let a = det(AutomatonBuilder::new(al)
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "b", "x2")
            .mark("x2"));
        let q = quotient_unctrl(&a);
        assert!(lang_equal(&q, &trim(&a)).unwrap());
    }

    #[test]
    fn concat_of_epsilon_and_empty() {
        let eps = det(AutomatonBuilder::new(alpha()).initial("x0").mark("x0"));
        let c = concat_sigma_star(&eps);
        assert_eq!(c.num_states(), 1);
        assert!(marks(&c, &[0, 1, 2, 2]));
        let none = det(AutomatonBuilder::new(alpha()).initial("x0").edge("x0", "a", "x0"));
        assert!(marked_is_empty(&concat_sigma_star(&none)));
    }

    #[test]
    fn prefix_close_of_single_word() {
        let a = det(AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "b", "x2")
            .edge("x0", "b", "x3")
            .mark("x2"));
        let p = prefix_close(&a);
        assert!(marks(&p, &[]) && marks(&p, &[0]) && marks(&p, &[0, 1]));
        assert!(!marks(&p, &[1]));
        assert!(lang_equal(&prefix_close(&p), &p).unwrap());
    }

    #[test]
    fn subset_basics() {
        let a = det(AutomatonBuilder::new(alpha()).initial("x0").edge("x0", "a", "x1").mark("x1"));
        assert!(lang_subset(&a, &a).unwrap());
        let e = empty_language(&alpha());
        assert!(lang_subset(&e, &a).unwrap());
        // e generates {ε} which a also generates; a generates more
        assert!(!lang_subset(&a, &e).unwrap());
        assert_eq!(inclusion_witness(&a, &e).unwrap(), Some(vec![0]));
    }

    #[test]
    fn controllability_witness() {
        let g = AutomatonBuilder::new(alpha())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "u", "x2")
            .build();
        let k = det(AutomatonBuilder::new(alpha()).initial("q0").edge("q0", "a", "q1"));
        let c = lang_controllable(&k, &g, &Budget::default()).unwrap();
        assert!(!c.controllable);
        assert_eq!(c.witness, Some(vec![0, 2]));
        let full = DetAutomaton::new(g.clone()).unwrap();
        assert!(lang_controllable(&full, &g, &Budget::default()).unwrap().controllable);
    }

    #[test]
    fn controllability_vacuous_without_uncontrollables() {
        let al = EventAlphabet::new(["a", "b"], Vec::<&str>::new()).unwrap();
        let g = AutomatonBuilder::new(al.clone())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "b", "x2")
            .build();
        let k = det(AutomatonBuilder::new(al).initial("q0"));
        assert!(lang_controllable(&k, &g, &Budget::default()).unwrap().controllable);
    }
}
