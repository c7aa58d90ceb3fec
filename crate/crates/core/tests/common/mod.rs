//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use descs::oracle::{random_alphabet, random_automaton, random_det, AutomatonParams, InstanceParams};
use descs::{Automaton, AutomatonBuilder, DetAutomaton, EventAlphabet};
use rand::Rng;

pub const SMALL: InstanceParams = InstanceParams {
    max_plant_states: 6,
    max_spec_states: 6,
    max_alphabet: 4,
};

/// A random candidate supervisor with at most `max_states` states that
/// enables every uncontrollable event at every state.
pub fn random_candidate<R: Rng>(rng: &mut R, alphabet: &EventAlphabet, max_states: usize) -> Automaton {
    let params = AutomatonParams {
        states: rng.gen_range(1..=max_states),
        density: rng.gen_range(0.5..2.0),
        marking: 0.6,
    };
    let a = random_automaton(rng, alphabet, &params);
    let n = a.num_states();
    let mut b = AutomatonBuilder::new(alphabet.clone());
    b.initial(a.name(a.initial()));
    for x in a.states() {
        b.state(a.name(x));
        if a.is_marked(x) {
            b.mark(a.name(x));
        }
    }
    for (x, e, y) in a.triples() {
        b.edge(a.name(x), alphabet.name(e), a.name(y));
    }
    for x in a.states() {
        for u in alphabet.uncontrollable() {
            if !a.enables(x, u) {
                let y = rng.gen_range(0..n);
                b.edge(a.name(x), alphabet.name(u), a.name(y));
            }
        }
    }
    b.build()
}

/// Two random deterministic automata over one random alphabet.
pub fn random_det_pair<R: Rng>(rng: &mut R, max_states: usize, max_alphabet: usize) -> (DetAutomaton, DetAutomaton) {
    let size = rng.gen_range(1..=max_alphabet);
    let frac = [0.0, 0.3, 0.6][rng.gen_range(0..3)];
    let alphabet = random_alphabet(rng, size, frac);
    let one = |rng: &mut R| {
        let p = AutomatonParams {
            states: rng.gen_range(1..=max_states),
            density: rng.gen_range(0.4..1.0),
            marking: 0.5,
        };
        random_det(rng, &alphabet, &p)
    };
    let a = one(rng);
    let b = one(rng);
    (a, b)
}

/// Whether some state reachable from `x` along events accepted by `via` is marked.
pub fn reaches_marked(a: &Automaton, x: usize, via: impl Fn(usize) -> bool) -> bool {
    let mut seen = vec![false; a.num_states()];
    let mut stack = vec![x];
    seen[x] = true;
    while let Some(y) = stack.pop() {
        if a.is_marked(y) {
            return true;
        }
        for &(e, z) in a.transitions(y) {
            if via(e) && !seen[z] {
                seen[z] = true;
                stack.push(z);
            }
        }
    }
    false
}
