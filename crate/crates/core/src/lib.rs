//! Supervisor synthesis for nondeterministic discrete-event plants under
//! bisimulation equivalence with a deterministic specification.
//!
//! The crate covers the automaton model and its compositions, simulation and
//! bisimulation relations, an algebra of regular languages on deterministic
//! automata, the existence test with supervisor construction, and two
//! independent computations of the supremal controllable sub-specification.
//!
//! ```
//! use descs::{check_existence, AutomatonBuilder, DetAutomaton, EventAlphabet};
//!
//! let al = EventAlphabet::new(["a", "u"], ["u"]).unwrap();
//! let plant = AutomatonBuilder::new(al.clone())
//!     .initial("x0")
//!     .edge("x0", "a", "x1")
//!     .edge("x1", "u", "x0")
//!     .mark("x0")
//!     .build();
//! let spec = DetAutomaton::new(plant.clone()).unwrap();
//! assert!(check_existence(&spec, &plant).unwrap().controllable);
//! ```

pub mod alphabet;
pub mod automaton;
pub mod budget;
pub mod compose;
pub mod error;
pub mod format;
pub mod language;
pub mod oracle;
pub mod relations;
pub mod supremal;
pub mod synthesis;

pub use alphabet::{EventAlphabet, EventId, EPSILON};
pub use automaton::{accessible, subautomaton, Automaton, AutomatonBuilder, DetAutomaton, StateId};
pub use budget::{Budget, CancelToken, DEFAULT_STATE_LIMIT};
pub use compose::{
    canonicalize, determinize, parallel, subset_construction, uncontrollable_augment, DUMP_STATE,
};
pub use error::{Error, Result};
pub use format::{parse_automaton, parse_det_automaton, write_automaton, ParseOptions};
pub use language::{
    concat_sigma_star, inclusion_witness, lang_controllable, lang_difference_marked, lang_equal,
    lang_intersect, lang_subset, prefix_close, quotient_unctrl, Controllability,
};
pub use relations::{
    bisimilar, greatest_simulation, is_simulated_by, synchronized_state_map, synchronously_simulated,
    Bisimulation, Relation,
};
pub use supremal::{
    f_syn, supremal_fixpoint, supremal_formula, Method, SupremalOutcome, SupremalResult,
};
pub use synthesis::{
    check_existence, check_existence_with, sync_product, synthesize_supervisor,
    synthesize_supervisor_with, verify_closed_loop, verify_closed_loop_with, CheckReport,
    ClosedLoopVerdict, Trace,
};
