//! Simulation preorder, bisimulation equivalence, synchronized state maps and
//! synchronous simulation.

use std::collections::{BTreeSet, HashMap};

use crate::alphabet::EventId;
use crate::automaton::{Automaton, DetAutomaton, StateId};
use crate::error::Result;

/// A set of state pairs `(x, y)` with `x` a state of a left automaton and `y`
/// a state of a right automaton.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relation {
    pairs: BTreeSet<(StateId, StateId)>,
}

impl Relation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: StateId, y: StateId) -> bool {
        self.pairs.insert((x, y))
    }

    pub fn contains(&self, x: StateId, y: StateId) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.pairs.iter().copied()
    }

    /// The converse relation.
    pub fn inverse(&self) -> Relation {
        self.iter().map(|(x, y)| (y, x)).collect()
    }

    /// Checks the two simulation conditions for every pair: each move of the
    /// left state is matched by a move of the right state into the relation,
    /// and a marked left state is only related to marked right states.
    pub fn is_simulation(&self, left: &Automaton, right: &Automaton) -> bool {
        self.iter().all(|(x1, x2)| {
            (left.is_marked(x1) <= right.is_marked(x2))
                && left.transitions(x1).iter().all(|&(e, y1)| {
                    right.successors(x2, e).any(|y2| self.contains(y1, y2))
                })
        })
    }
}

impl FromIterator<(StateId, StateId)> for Relation {
    fn from_iter<I: IntoIterator<Item = (StateId, StateId)>>(iter: I) -> Self {
        Relation {
            pairs: iter.into_iter().collect(),
        }
    }
}

/// The greatest simulation relation from `a` to `b`.
///
/// `a` is simulated by `b` iff the result contains
/// `(a.initial(), b.initial())`. Computed as a greatest fixpoint from the
/// marking-compatible pairs, removing pairs with a counter per
/// `(left target, right source, event)` of surviving right successors.
pub fn greatest_simulation(a: &Automaton, b: &Automaton) -> Result<Relation> {
    let b = b.aligned_to(a.alphabet())?;
    let (n1, n2, k) = (a.num_states(), b.num_states(), a.alphabet().len());
    let at = |x1: usize, x2: usize| x1 * n2 + x2;
    let cix = |y1: usize, x2: usize, e: usize| (y1 * n2 + x2) * k + e;

    let mut pred_a: Vec<Vec<(EventId, StateId)>> = vec![Vec::new(); n1];
    for (x, e, y) in a.triples() {
        pred_a[y].push((e, x));
    }
    let mut pred_b: Vec<Vec<(EventId, StateId)>> = vec![Vec::new(); n2];
    for (x, e, y) in b.triples() {
        pred_b[y].push((e, x));
    }

    let mut rel: Vec<bool> = (0..n1 * n2)
        .map(|i| !a.is_marked(i / n2) || b.is_marked(i % n2))
        .collect();
    // count[y1, x2, e] = |{ y2 in b(x2, e) : (y1, y2) in rel }|
    let mut count = vec![0u32; n1 * n2 * k];
    for (x2, e, y2) in b.triples() {
        for y1 in 0..n1 {
            if rel[at(y1, y2)] {
                count[cix(y1, x2, e)] += 1;
            }
        }
    }

    let mut work = Vec::new();
    for x1 in 0..n1 {
        for x2 in 0..n2 {
            if rel[at(x1, x2)]
                && a
                    .transitions(x1)
                    .iter()
                    .any(|&(e, y1)| count[cix(y1, x2, e)] == 0)
            {
                rel[at(x1, x2)] = false;
                work.push((x1, x2));
            }
        }
    }
    while let Some((y1, y2)) = work.pop() {
        for &(e, x2) in &pred_b[y2] {
            let c = &mut count[cix(y1, x2, e)];
            *c -= 1;
            if *c == 0 {
                for &(e1, x1) in &pred_a[y1] {
                    if e1 == e && rel[at(x1, x2)] {
                        rel[at(x1, x2)] = false;
                        work.push((x1, x2));
                    }
                }
            }
        }
    }
    Ok((0..n1 * n2)
        .filter(|&i| rel[i])
        .map(|i| (i / n2, i % n2))
        .collect())
}

/// `a` is simulated by `b`.
pub fn is_simulated_by(a: &Automaton, b: &Automaton) -> Result<bool> {
    Ok(greatest_simulation(a, b)?.contains(a.initial(), b.initial()))
}

/// Outcome of a bisimilarity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisimulation {
    pub bisimilar: bool,
    /// Cross pairs `(x, y)` of equivalent states, `x` in the left automaton and
    /// `y` in the right one. Together with its inverse this is the largest
    /// bisimulation between the two automata.
    pub relation: Relation,
}

/// Strong bisimilarity with marking, by partition refinement on the disjoint union.
pub fn bisimilar(a: &Automaton, b: &Automaton) -> Result<Bisimulation> {
    let b = b.aligned_to(a.alphabet())?;
    let n1 = a.num_states();
    let n = n1 + b.num_states();
    let moves = |x: usize| -> &[(EventId, StateId)] {
        if x < n1 {
            a.transitions(x)
        } else {
            b.transitions(x - n1)
        }
    };
    let offset = |x: usize| if x < n1 { 0 } else { n1 };
    let mut block: Vec<usize> = (0..n)
        .map(|x| {
            usize::from(if x < n1 {
                a.is_marked(x)
            } else {
                b.is_marked(x - n1)
            })
        })
        .collect();
    let mut count = {
        let mut seen = [false; 2];
        block.iter().for_each(|&b| seen[b] = true);
        seen.iter().filter(|&&s| s).count()
    };
    loop {
        let mut sigs: HashMap<(usize, Vec<(EventId, usize)>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for x in 0..n {
            let mut sig: Vec<(EventId, usize)> = moves(x)
                .iter()
                .map(|&(e, y)| (e, block[y + offset(x)]))
                .collect();
            sig.sort_unstable();
            sig.dedup();
            let len = sigs.len();
            next[x] = *sigs.entry((block[x], sig)).or_insert(len);
        }
        block = next;
        if sigs.len() == count {
            break;
        }
        count = sigs.len();
    }
    let relation: Relation = (0..n1)
        .flat_map(|x| (0..b.num_states()).map(move |y| (x, y)))
        .filter(|&(x, y)| block[x] == block[n1 + y])
        .collect();
    Ok(Bisimulation {
        bisimilar: block[a.initial()] == block[n1 + b.initial()],
        relation,
    })
}

/// The synchronized state map from `a` to `b`: for each state `x` of `a`, the
/// states of `b` reachable by some string that also reaches `x` in `a`.
pub fn synchronized_state_map(a: &Automaton, b: &Automaton) -> Result<Vec<BTreeSet<StateId>>> {
    let pairs = synchronized_pairs(a, b)?;
    let mut map = vec![BTreeSet::new(); a.num_states()];
    for (x, y) in pairs {
        map[x].insert(y);
    }
    Ok(map)
}

/// Reachable pairs of the synchronous product of `a` and `b`, in breadth-first order.
pub fn synchronized_pairs(a: &Automaton, b: &Automaton) -> Result<Vec<(StateId, StateId)>> {
    let b = b.aligned_to(a.alphabet())?;
    let start = (a.initial(), b.initial());
    let mut seen = BTreeSet::from([start]);
    let mut order = vec![start];
    let mut i = 0;
    while i < order.len() {
        let (x, y) = order[i];
        i += 1;
        for &(e, x2) in a.transitions(x) {
            for y2 in b.successors(y, e) {
                if seen.insert((x2, y2)) {
                    order.push((x2, y2));
                }
            }
        }
    }
    Ok(order)
}

/// Whether a synchronous simulation from `a` to `b` exists: every
/// synchronized pair lies in the greatest simulation (the initial pair is
/// always synchronized).
pub fn synchronously_simulated(a: &DetAutomaton, b: &Automaton) -> Result<bool> {
    let sim = greatest_simulation(a, b)?;
    let b = b.aligned_to(a.alphabet())?;
    Ok(synchronized_pairs(a, &b)?
        .into_iter()
        .all(|(x, y)| sim.contains(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::EventAlphabet;
    use crate::automaton::AutomatonBuilder;
    use crate::error::Error;

    fn alpha(evs: &[&str]) -> EventAlphabet {
        EventAlphabet::new(evs.iter().copied(), Vec::<&str>::new()).unwrap()
    }

    #[test]
    fn reflexive_on_deterministic() {
        let a = AutomatonBuilder::new(alpha(&["a", "b"]))
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "b", "x0")
            .mark("x1")
            .build();
        let sim = greatest_simulation(&a, &a).unwrap();
        assert!(sim.contains(0, 0) && sim.contains(1, 1));
        assert!(sim.is_simulation(&a, &a));
        assert!(bisimilar(&a, &a).unwrap().bisimilar);
    }

    #[test]
    fn marking_propagates_backwards() {
        let a = AutomatonBuilder::new(alpha(&["s"]))
            .initial("x0")
            .edge("x0", "s", "x1")
            .mark("x1")
            .build();
        let b = AutomatonBuilder::new(alpha(&["s"]))
            .initial("y0")
            .edge("y0", "s", "y1")
            .build();
        let sim = greatest_simulation(&a, &b).unwrap();
        assert!(!sim.contains(1, 1));
        assert!(!sim.contains(0, 0));
        assert!(is_simulated_by(&b, &a).unwrap());
    }

    fn classic_split() -> (Automaton, Automaton) {
        let al = alpha(&["s", "t", "r"]);
        let a = AutomatonBuilder::new(al.clone())
            .initial("x0")
            .edge("x0", "s", "x1")
            .edge("x1", "t", "x2")
            .edge("x1", "r", "x3")
            .build();
        let b = AutomatonBuilder::new(al)
            .initial("y0")
            .edge("y0", "s", "y1")
            .edge("y1", "t", "y3")
            .edge("y0", "s", "y2")
            .edge("y2", "r", "y4")
            .build();
        (a, b)
    }

    #[test]
    fn language_equivalent_but_not_bisimilar() {
        let (a, b) = classic_split();
        assert!(!bisimilar(&a, &b).unwrap().bisimilar);
        // b is simulated by a, not conversely
        assert!(is_simulated_by(&b, &a).unwrap());
        assert!(!is_simulated_by(&a, &b).unwrap());
    }

    #[test]
    fn bisimulation_relation_is_symmetric_simulation() {
        let al = alpha(&["a"]);
        let a = AutomatonBuilder::new(al.clone())
            .initial("x0")
            .edge("x0", "a", "x0")
            .build();
        let b = AutomatonBuilder::new(al)
            .initial("y0")
            .edge("y0", "a", "y1")
            .edge("y1", "a", "y0")
            .edge("y1", "a", "y1")
            .build();
        let bis = bisimilar(&a, &b).unwrap();
        assert!(bis.bisimilar);
        assert!(bis.relation.is_simulation(&a, &b));
        assert!(bis.relation.inverse().is_simulation(&b, &a));
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let a = AutomatonBuilder::new(alpha(&["a"])).initial("x").build();
        let b = AutomatonBuilder::new(alpha(&["b"])).initial("y").build();
        assert_eq!(greatest_simulation(&a, &b), Err(Error::AlphabetMismatch));
        assert_eq!(bisimilar(&a, &b), Err(Error::AlphabetMismatch));
        assert_eq!(synchronized_state_map(&a, &b), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn synchronized_map_diagonal_and_fork() {
        let al = alpha(&["a", "b"]);
        let a = AutomatonBuilder::new(al.clone())
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "b", "x2")
            .build();
        let map = synchronized_state_map(&a, &a).unwrap();
        for (x, set) in map.iter().enumerate() {
            assert_eq!(set, &BTreeSet::from([x]));
        }
        let g = AutomatonBuilder::new(al)
            .initial("y0")
            .edge("y0", "a", "y1")
            .edge("y0", "a", "y2")
            .build();
        let map = synchronized_state_map(&a, &g).unwrap();
        assert_eq!(map[1], BTreeSet::from([1, 2]));
        assert!(map[2].is_empty());
    }

    #[test]
    fn synchronous_simulation_fails_on_dead_branch() {
        let al = EventAlphabet::new(["a", "u"], ["u"]).unwrap();
        let r = AutomatonBuilder::new(al.clone())
            .initial("q0")
            .edge("q0", "a", "q1")
            .edge("q1", "u", "q1")
            .build();
        let g = AutomatonBuilder::new(al)
            .initial("x0")
            .edge("x0", "a", "x1")
            .edge("x1", "u", "x1")
            .edge("x0", "a", "x2")
            .build();
        let r = DetAutomaton::new(r).unwrap();
        // plain simulation holds through x1, synchronous simulation does not
        assert!(is_simulated_by(&r, &g).unwrap());
        assert!(!synchronously_simulated(&r, &g).unwrap());
        assert!(synchronously_simulated(&r, &r).unwrap());
    }
}
