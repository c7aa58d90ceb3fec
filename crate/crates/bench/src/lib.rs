//! Seeded workloads for the criterion benchmarks under `benches/`.

use descs::oracle::{random_alphabet, random_automaton, random_det, AutomatonParams};
use descs::{Automaton, DetAutomaton};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A random specification and plant over four events, one of them uncontrollable.
///
/// The specification defines every event at every state, so the synchronous
/// product explores as many pairs as the plant allows.
pub fn workload(plant_states: usize, spec_states: usize, seed: u64) -> (DetAutomaton, Automaton) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = random_alphabet(&mut rng, 4, 0.3);
    let spec = random_det(
        &mut rng,
        &alphabet,
        &AutomatonParams {
            states: spec_states,
            density: 1.0,
            marking: 0.5,
        },
    );
    let plant = random_automaton(
        &mut rng,
        &alphabet,
        &AutomatonParams {
            states: plant_states,
            density: 1.5,
            marking: 0.5,
        },
    );
    (spec, plant)
}

/// A small plant whose subset constructions stay well below the default state limit.
pub fn small_plant(states: usize, seed: u64) -> Automaton {
    workload(states, 1, seed).1
}
