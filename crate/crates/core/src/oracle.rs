//! Deliberately naive reference implementations used to cross-check the fast
//! algorithms, plus the seeded random instance generators shared by all tests.
//!
//! Everything here works on strings and state sets directly: runs are
//! computed by stepping a set of states one event at a time, languages by
//! walking the tree of strings, relations by recomputing definitions until
//! nothing changes. None of it calls into the product, fixpoint or
//! language-algebra code it is meant to check. Performance is not a goal.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{EventAlphabet, EventId};
use crate::automaton::{accessible, Automaton, DetAutomaton, StateId};
use crate::error::{Error, Result};

/// A string of events.
pub type Word = Vec<EventId>;

/// Limits for enumeration-based oracles and seeded test campaigns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_depth: usize,
    pub max_cases: usize,
    pub seed: u64,
}

impl EnumerationBudget {
    pub fn new(max_depth: usize, max_cases: usize, seed: u64) -> Result<Self> {
        if max_depth == 0 {
            return Err(Error::BudgetExceeded("max_depth must be at least 1".into()));
        }
        Ok(EnumerationBudget {
            max_depth,
            max_cases,
            seed,
        })
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// States reached from the initial state by `s`.
pub fn run(a: &Automaton, s: &[EventId]) -> BTreeSet<StateId> {
    let mut cur = BTreeSet::from([a.initial()]);
    for &e in s {
        cur = step(a, &cur, e);
        if cur.is_empty() {
            break;
        }
    }
    cur
}

fn step(a: &Automaton, from: &BTreeSet<StateId>, e: EventId) -> BTreeSet<StateId> {
    let mut next = BTreeSet::new();
    for &x in from {
        for &(ev, y) in a.transitions(x) {
            if ev == e {
                next.insert(y);
            }
        }
    }
    next
}

pub fn generates(a: &Automaton, s: &[EventId]) -> bool {
    !run(a, s).is_empty()
}

pub fn marks(a: &Automaton, s: &[EventId]) -> bool {
    run(a, s).iter().any(|&x| a.is_marked(x))
}

/// All strings over `k` events of length at most `depth`, in shortlex order.
pub fn all_words(k: usize, depth: usize) -> Vec<Word> {
    let mut words = vec![Vec::new()];
    let mut start = 0;
    for _ in 0..depth {
        let end = words.len();
        for i in start..end {
            for e in 0..k {
                let mut w = words[i].clone();
                w.push(e);
                words.push(w);
            }
        }
        start = end;
    }
    words
}

/// Generated and marked strings of `a` up to `budget.max_depth`, by a
/// depth-first walk of the string tree.
pub fn oracle_language(a: &Automaton, budget: &EnumerationBudget) -> (BTreeSet<Word>, BTreeSet<Word>) {
    let mut gen = BTreeSet::new();
    let mut marked = BTreeSet::new();
    let mut stack = vec![(Vec::new(), BTreeSet::from([a.initial()]))];
    while let Some((w, cur)) = stack.pop() {
        if cur.iter().any(|&x| a.is_marked(x)) {
            marked.insert(w.clone());
        }
        if w.len() < budget.max_depth {
            for e in a.alphabet().events() {
                let next = step(a, &cur, e);
                if !next.is_empty() {
                    let mut w2 = w.clone();
                    w2.push(e);
                    stack.push((w2, next));
                }
            }
        }
        gen.insert(w);
    }
    (gen, marked)
}

/// Greatest simulation from `a` to `b` by repeatedly recomputing the whole
/// relation from the definition until it stops shrinking.
pub fn oracle_greatest_simulation(a: &Automaton, b: &Automaton) -> BTreeSet<(StateId, StateId)> {
    let b = b.aligned_to(a.alphabet()).expect("equal alphabets");
    let mut rel: BTreeSet<(StateId, StateId)> = a
        .states()
        .flat_map(|x| b.states().map(move |y| (x, y)))
        .collect();
    loop {
        let next: BTreeSet<(StateId, StateId)> = rel
            .iter()
            .copied()
            .filter(|&(x1, x2)| {
                let marking_ok = !a.is_marked(x1) || b.is_marked(x2);
                let moves_ok = a.alphabet().events().all(|e| {
                    step(a, &BTreeSet::from([x1]), e).iter().all(|&y1| {
                        step(&b, &BTreeSet::from([x2]), e)
                            .iter()
                            .any(|&y2| rel.contains(&(y1, y2)))
                    })
                });
                marking_ok && moves_ok
            })
            .collect();
        if next == rel {
            return rel;
        }
        rel = next;
    }
}

/// One reachable configuration of a deterministic specification and a plant:
/// the specification state and the set of plant states after the same string.
type Config = (StateId, BTreeSet<StateId>);

/// Shortlex enumeration of strings accepted by `keep`, where each newly seen
/// configuration is expanded once. Returns configurations with the shortest
/// string reaching each.
fn explore_configs(
    r: &DetAutomaton,
    g: &Automaton,
    max_depth: usize,
    keep: impl Fn(&Config, EventId, &Config) -> bool,
) -> Result<Vec<(Word, Config)>> {
    let start: Config = (r.initial(), BTreeSet::from([g.initial()]));
    let mut seen = BTreeSet::from([start.clone()]);
    let mut found = vec![(Vec::new(), start.clone())];
    let mut queue = VecDeque::from([(Vec::new(), start)]);
    while let Some((w, cfg)) = queue.pop_front() {
        for e in r.alphabet().events() {
            let Some(q2) = r.next(cfg.0, e) else { continue };
            let s2 = step(g, &cfg.1, e);
            if s2.is_empty() {
                continue;
            }
            let next = (q2, s2);
            if !keep(&cfg, e, &next) || seen.contains(&next) {
                continue;
            }
            if w.len() + 1 > max_depth {
                return Err(Error::BudgetExceeded(format!(
                    "configuration beyond depth {max_depth}"
                )));
            }
            let mut w2 = w.clone();
            w2.push(e);
            seen.insert(next.clone());
            found.push((w2.clone(), next.clone()));
            queue.push_back((w2, next));
        }
    }
    Ok(found)
}

/// The synchronized state map of a deterministic `r` into `g`, by string enumeration.
pub fn oracle_synchronized_map(
    r: &DetAutomaton,
    g: &Automaton,
    budget: &EnumerationBudget,
) -> Result<BTreeMap<StateId, BTreeSet<StateId>>> {
    let g = g.aligned_to(r.alphabet())?;
    let mut map: BTreeMap<StateId, BTreeSet<StateId>> = BTreeMap::new();
    for (_, (q, set)) in explore_configs(r, &g, budget.max_depth, |_, _, _| true)? {
        map.entry(q).or_default().extend(set);
    }
    Ok(map)
}

/// Language controllability of `L(k)` with respect to `L(g)`, checked on
/// every string of `L(k)` shorter than `depth`. Returns the shortlex-first
/// violation `sσ` found.
pub fn oracle_controllability_violation(k: &DetAutomaton, g: &Automaton, depth: usize) -> Option<Word> {
    let g = g.aligned_to(k.alphabet()).expect("equal alphabets");
    for w in all_words(k.alphabet().len(), depth.saturating_sub(1)) {
        if k.run(&w).is_none() {
            continue;
        }
        for u in k.alphabet().uncontrollable() {
            let mut wu = w.clone();
            wu.push(u);
            if generates(&g, &wu) && k.run(&wu).is_none() {
                return Some(wu);
            }
        }
    }
    None
}

/// Synchronous simulation-based controllability checked literally: the
/// synchronized pairs (by enumeration) all lie in the naive greatest
/// simulation, and no string of `L(r)` extends by an uncontrollable event
/// into `L(g) \ L(r)`.
pub fn oracle_sync_controllable(r: &DetAutomaton, g: &Automaton, budget: &EnumerationBudget) -> Result<bool> {
    let g = g.aligned_to(r.alphabet())?;
    let configs = explore_configs(r, &g, budget.max_depth, |_, _, _| true)?;
    let sim = oracle_greatest_simulation(r, &g);
    let synchronous = configs
        .iter()
        .all(|(_, (q, set))| set.iter().all(|&x| sim.contains(&(*q, x))));
    // every string of L(r) ∩ L(g) reaches one of the explored configurations
    let controllable = configs.iter().all(|(_, (q, set))| {
        r.alphabet().uncontrollable().all(|u| {
            r.next(*q, u).is_some() || step(&g, set, u).is_empty()
        })
    });
    Ok(synchronous && controllable)
}

/// Maximum number of configurations [`oracle_supremal`] will enumerate subsets of.
pub const SUPREMAL_ORACLE_MAX_CONFIGS: usize = 16;

/// The supremal controllable prefix-closed sublanguage of
/// `L(r) ∩ L(F_syn(g))`, truncated at `budget.max_depth`, with its marked part
/// `∩ L_m(r) ∩ L_m(F_syn(g))`. `None` when it is empty.
///
/// Computed by brute force: every subset of reachable configurations is
/// tested for closure under plant-enabled uncontrollable events, and the
/// union of the closed subsets is taken.
pub fn oracle_supremal(
    r: &DetAutomaton,
    g: &Automaton,
    budget: &EnumerationBudget,
) -> Result<Option<(BTreeSet<Word>, BTreeSet<Word>)>> {
    let g = g.aligned_to(r.alphabet())?;
    let g = g.as_ref();
    // s σ stays in F_syn(g) iff every plant state after s enables σ
    let in_k = |cfg: &Config, e: EventId, _: &Config| cfg.1.iter().all(|&x| g.enables(x, e));
    let configs: Vec<Config> = explore_configs(r, g, usize::MAX, in_k)?
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    let n = configs.len();
    if n > SUPREMAL_ORACLE_MAX_CONFIGS {
        return Err(Error::BudgetExceeded(format!("{n} configurations")));
    }
    let id = |c: &Config| configs.iter().position(|d| d == c);
    let succ = |c: &Config, e: EventId| -> Option<Config> {
        let q2 = r.next(c.0, e)?;
        if !c.1.iter().all(|&x| g.enables(x, e)) {
            return None;
        }
        Some((q2, step(g, &c.1, e)))
    };
    // requirement per configuration: uncontrollable events the plant may
    // perform there, with the configuration they must lead to (None = leaves K)
    let demands: Vec<Vec<Option<usize>>> = configs
        .iter()
        .map(|c| {
            r.alphabet()
                .uncontrollable()
                .filter(|&u| !step(g, &c.1, u).is_empty())
                .map(|u| succ(c, u).and_then(|c2| id(&c2)))
                .collect()
        })
        .collect();
    let mut union: u64 = 0;
    for mask in 1u64..(1u64 << n) {
        let closed = (0..n).filter(|&i| mask >> i & 1 == 1).all(|i| {
            demands[i]
                .iter()
                .all(|d| d.is_some_and(|j| mask >> j & 1 == 1))
        });
        if closed {
            union |= mask;
        }
    }
    if union & 1 == 0 {
        return Ok(None);
    }
    let mut gen = BTreeSet::new();
    let mut marked = BTreeSet::new();
    let mut stack = vec![(Vec::new(), configs[0].clone())];
    while let Some((w, c)) = stack.pop() {
        if r.is_marked(c.0) && c.1.iter().all(|&x| g.is_marked(x)) {
            marked.insert(w.clone());
        }
        if w.len() < budget.max_depth {
            for e in r.alphabet().events() {
                if let Some(c2) = succ(&c, e) {
                    let j = id(&c2).expect("explored");
                    if union >> j & 1 == 1 {
                        let mut w2 = w.clone();
                        w2.push(e);
                        stack.push((w2, c2));
                    }
                }
            }
        }
        gen.insert(w);
    }
    Ok(Some((gen, marked)))
}

/// Parameters of the random automaton generator.
#[derive(Clone, Copy, Debug)]
pub struct AutomatonParams {
    pub states: usize,
    /// Expected number of successors per (state, event).
    pub density: f64,
    pub marking: f64,
}

/// Event names used by generated alphabets.
const EVENT_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// An alphabet of `size` events with `round(size * uc_fraction)` of them
/// chosen uncontrollable.
pub fn random_alphabet<R: Rng>(rng: &mut R, size: usize, uc_fraction: f64) -> EventAlphabet {
    assert!(size <= EVENT_NAMES.len());
    let names = &EVENT_NAMES[..size];
    let n_unc = ((size as f64) * uc_fraction).round() as usize;
    let unc: Vec<&str> = names.choose_multiple(rng, n_unc).copied().collect();
    EventAlphabet::new(names.iter().copied(), unc).expect("valid generated alphabet")
}

/// A random, possibly nondeterministic automaton restricted to its accessible part.
pub fn random_automaton<R: Rng>(rng: &mut R, alphabet: &EventAlphabet, p: &AutomatonParams) -> Automaton {
    let n = p.states.max(1);
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let marked = (0..n).map(|_| rng.gen_bool(p.marking)).collect();
    let prob = (p.density / n as f64).min(1.0);
    let out = (0..n)
        .map(|_| {
            let mut edges = Vec::new();
            for e in alphabet.events() {
                for y in 0..n {
                    if rng.gen_bool(prob) {
                        edges.push((e, y));
                    }
                }
            }
            edges
        })
        .collect();
    accessible(&Automaton::from_parts(alphabet.clone(), names, 0, marked, out))
}

/// A random deterministic automaton restricted to its accessible part.
/// `density` is the probability that an event is defined at a state.
pub fn random_det<R: Rng>(rng: &mut R, alphabet: &EventAlphabet, p: &AutomatonParams) -> DetAutomaton {
    let n = p.states.max(1);
    let names = (0..n).map(|i| format!("q{i}")).collect();
    let marked = (0..n).map(|_| rng.gen_bool(p.marking)).collect();
    let out = (0..n)
        .map(|_| {
            let mut edges = Vec::new();
            for e in alphabet.events() {
                if rng.gen_bool(p.density.min(1.0)) {
                    edges.push((e, rng.gen_range(0..n)));
                }
            }
            edges
        })
        .collect();
    DetAutomaton::new(accessible(&Automaton::from_parts(
        alphabet.clone(),
        names,
        0,
        marked,
        out,
    )))
    .expect("one successor per event")
}

/// Randomly removes transitions and markings of a deterministic automaton.
/// The result is simulated by the input (identity on kept states).
pub fn random_pruning<R: Rng>(rng: &mut R, r: &DetAutomaton) -> DetAutomaton {
    let drop = rng.gen_range(0.0..0.6);
    let unmark = rng.gen_range(0.0..0.5);
    let (alphabet, names, initial, marked, out) = r.as_automaton().clone().into_parts();
    let marked = marked.into_iter().map(|m| m && !rng.gen_bool(unmark)).collect();
    let out = out
        .into_iter()
        .map(|l| l.into_iter().filter(|_| !rng.gen_bool(drop)).collect())
        .collect();
    DetAutomaton::new(accessible(&Automaton::from_parts(
        alphabet, names, initial, marked, out,
    )))
    .expect("pruning keeps determinism")
}

/// Bounds for [`random_instance`].
#[derive(Clone, Copy, Debug)]
pub struct InstanceParams {
    pub max_plant_states: usize,
    pub max_spec_states: usize,
    pub max_alphabet: usize,
}

/// Uncontrollable fractions sampled by [`random_instance`].
pub const UC_FRACTIONS: [f64; 3] = [0.0, 0.3, 0.6];

/// A random (specification, plant) pair. A third of the specifications are
/// independent random automata; the rest are random prunings of `F_syn(G)`
/// or of `det(G)`, so that a useful share of instances pass the existence test.
pub fn random_instance<R: Rng>(rng: &mut R, p: &InstanceParams) -> (DetAutomaton, Automaton) {
    let size = rng.gen_range(1..=p.max_alphabet);
    let frac = *UC_FRACTIONS.choose(rng).expect("nonempty");
    let alphabet = random_alphabet(rng, size, frac);
    let plant_params = AutomatonParams {
        states: rng.gen_range(1..=p.max_plant_states),
        density: rng.gen_range(0.5..1.8),
        marking: 0.6,
    };
    let plant = random_automaton(rng, &alphabet, &plant_params);
    let spec = match rng.gen_range(0..3) {
        0 => {
            let spec_params = AutomatonParams {
                states: rng.gen_range(1..=p.max_spec_states),
                density: rng.gen_range(0.3..1.0),
                marking: 0.5,
            };
            random_det(rng, &alphabet, &spec_params)
        }
        mode => {
            let budget = crate::budget::Budget::default();
            let base = if mode == 1 {
                crate::supremal::f_syn(&plant, &budget)
            } else {
                crate::compose::subset_construction(&plant, &budget)
            }
            .expect("small plant");
            let pruned = random_pruning(rng, &base);
            // generated states carry plant-derived names; rename to q*
            let names = (0..pruned.num_states()).map(|i| format!("q{i}")).collect();
            DetAutomaton::new(pruned.into_automaton().with_names(names)).expect("deterministic")
        }
    };
    (spec, plant)
}
