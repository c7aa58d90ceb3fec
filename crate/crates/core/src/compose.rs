//! Parallel composition, determinization and the uncontrollable augment automaton.

use std::collections::HashMap;

use crate::alphabet::EventId;
use crate::automaton::{Automaton, DetAutomaton, StateId};
use crate::budget::Budget;
use crate::error::Result;

/// Name of the dump state added by [`uncontrollable_augment`].
pub const DUMP_STATE: &str = "__Dd";

/// Parallel composition `a || b` restricted to its accessible part.
///
/// Shared events synchronise; an event private to one operand moves that
/// operand alone. The private-event cases use the operand alphabets, so an
/// event of `a` that `b` does not know never blocks `a`.
pub fn parallel(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    parallel_with_pairs(a, b).map(|(p, _)| p)
}

/// [`parallel`], also returning the component pair behind every product state.
pub fn parallel_with_pairs(
    a: &Automaton,
    b: &Automaton,
) -> Result<(Automaton, Vec<(StateId, StateId)>)> {
    let alphabet = a.alphabet().union(b.alphabet())?;
    let ua = a.with_alphabet(&alphabet)?;
    let ub = b.with_alphabet(&alphabet)?;
    let in_a: Vec<bool> = alphabet.names().map(|n| a.alphabet().id(n).is_some()).collect();
    let in_b: Vec<bool> = alphabet.names().map(|n| b.alphabet().id(n).is_some()).collect();

    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = vec![(ua.initial(), ub.initial())];
    index.insert(pairs[0], 0);
    let mut out: Vec<Vec<(EventId, StateId)>> = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (x1, x2) = pairs[i];
        i += 1;
        let mut edges = Vec::new();
        for e in alphabet.events() {
            let targets: Vec<(StateId, StateId)> = match (in_a[e], in_b[e]) {
                (true, true) => {
                    let s2: Vec<StateId> = ub.successors(x2, e).collect();
                    ua.successors(x1, e)
                        .flat_map(|y1| s2.iter().map(move |&y2| (y1, y2)))
                        .collect()
                }
                (true, false) => ua.successors(x1, e).map(|y1| (y1, x2)).collect(),
                (false, true) => ub.successors(x2, e).map(|y2| (x1, y2)).collect(),
                (false, false) => unreachable!("event outside both alphabets"),
            };
            for t in targets {
                let next = pairs.len();
                let y = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    next
                });
                edges.push((e, y));
            }
        }
        out.push(edges);
    }
    let names = pairs
        .iter()
        .map(|&(x1, x2)| format!("({},{})", ua.name(x1), ub.name(x2)))
        .collect();
    let marked = pairs
        .iter()
        .map(|&(x1, x2)| ua.is_marked(x1) && ub.is_marked(x2))
        .collect();
    Ok((
        Automaton::from_parts(alphabet, names, 0, marked, out),
        pairs,
    ))
}

/// The uncontrollable augment automaton: every state that does not enable an
/// uncontrollable event gets a transition on it to a fresh unmarked dump state,
/// which loops on all uncontrollable events.
pub fn uncontrollable_augment(a: &Automaton) -> Automaton {
    augment_with_dump(a).0
}

/// [`uncontrollable_augment`], also returning the id of the dump state (always the last state).
pub fn augment_with_dump(a: &Automaton) -> (Automaton, StateId) {
    let (alphabet, mut names, initial, mut marked, mut out) = a.clone().into_parts();
    let dump = names.len();
    names.push(DUMP_STATE.to_string());
    marked.push(false);
    let unc: Vec<EventId> = alphabet.uncontrollable().collect();
    for list in out.iter_mut() {
        for &u in &unc {
            if !list.iter().any(|&(e, _)| e == u) {
                list.push((u, dump));
            }
        }
    }
    out.push(unc.iter().map(|&u| (u, dump)).collect());
    (
        Automaton::from_parts(alphabet, names, initial, marked, out),
        dump,
    )
}

/// Subset construction over nonempty subsets, without minimization.
///
/// A macro-state is marked iff it contains a marked state. Macro-states are
/// named `{x,y,...}` after their members.
pub fn subset_construction(a: &Automaton, budget: &Budget) -> Result<DetAutomaton> {
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut sets = vec![vec![a.initial()]];
    index.insert(sets[0].clone(), 0);
    let mut out = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut edges = Vec::new();
        for e in a.alphabet().events() {
            let mut t: Vec<StateId> = sets[i].iter().flat_map(|&x| a.successors(x, e)).collect();
            if t.is_empty() {
                continue;
            }
            t.sort_unstable();
            t.dedup();
            let y = match index.get(&t) {
                Some(&y) => y,
                None => {
                    let y = sets.len();
                    budget.tick(y + 1)?;
                    index.insert(t.clone(), y);
                    sets.push(t);
                    y
                }
            };
            edges.push((e, y));
        }
        out.push(edges);
        i += 1;
    }
    let marked = sets.iter().map(|s| s.iter().any(|&x| a.is_marked(x))).collect();
    let names = sets.iter().map(|s| set_name(a, s)).collect();
    Ok(DetAutomaton::new_unchecked(Automaton::from_parts(
        a.alphabet().clone(),
        names,
        0,
        marked,
        out,
    )))
}

pub(crate) fn set_name(a: &Automaton, set: &[StateId]) -> String {
    let inner: Vec<&str> = set.iter().map(|&x| a.name(x)).collect();
    format!("{{{}}}", inner.join(","))
}

/// `det(G)`: a minimal deterministic automaton with the same generated and
/// marked languages, canonically numbered.
pub fn determinize(a: &Automaton, budget: &Budget) -> Result<DetAutomaton> {
    let d = subset_construction(a, budget)?;
    Ok(canonicalize(&d))
}

/// Minimizes a deterministic automaton by partition refinement over its partial
/// transition function (initial split marked/unmarked) and renumbers it in
/// breadth-first order with names `s0, s1, ...`.
///
/// Two automata with equal generated and marked languages canonicalize to
/// identical values.
pub fn canonicalize(d: &DetAutomaton) -> DetAutomaton {
    let acc = crate::automaton::accessible(d.as_automaton());
    let d = DetAutomaton::new_unchecked(acc);
    let n = d.num_states();
    let k = d.alphabet().len();
    let mut block: Vec<usize> = (0..n).map(|x| usize::from(d.is_marked(x))).collect();
    let mut count = renumber(&mut block);
    loop {
        let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next_block = vec![0; n];
        for x in 0..n {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(block[x]);
            for e in 0..k {
                sig.push(d.next(x, e).map_or(usize::MAX, |y| block[y]));
            }
            let len = sigs.len();
            next_block[x] = *sigs.entry(sig).or_insert(len);
        }
        let new_count = sigs.len();
        block = next_block;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // quotient, then breadth-first renumbering from the initial block
    let mut rep = vec![usize::MAX; count];
    for x in 0..n {
        if rep[block[x]] == usize::MAX {
            rep[block[x]] = x;
        }
    }
    let mut order_of_block = vec![usize::MAX; count];
    let mut order = vec![block[d.initial()]];
    order_of_block[block[d.initial()]] = 0;
    let mut i = 0;
    while i < order.len() {
        let x = rep[order[i]];
        i += 1;
        for e in 0..k {
            if let Some(y) = d.next(x, e) {
                let b = block[y];
                if order_of_block[b] == usize::MAX {
                    order_of_block[b] = order.len();
                    order.push(b);
                }
            }
        }
    }
    let out = order
        .iter()
        .map(|&b| {
            let x = rep[b];
            (0..k)
                .filter_map(|e| d.next(x, e).map(|y| (e, order_of_block[block[y]])))
                .collect()
        })
        .collect();
    let marked = order.iter().map(|&b| d.is_marked(rep[b])).collect();
    let names = (0..order.len()).map(|i| format!("s{i}")).collect();
    DetAutomaton::new_unchecked(Automaton::from_parts(
        d.alphabet().clone(),
        names,
        0,
        marked,
        out,
    ))
}

fn renumber(block: &mut [usize]) -> usize {
    let mut map = HashMap::new();
    for b in block.iter_mut() {
        let len = map.len();
        *b = *map.entry(*b).or_insert(len);
    }
    map.len()
}
