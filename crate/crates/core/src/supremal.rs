//! Supremal synchronously simulation-based controllable sub-specifications.
//!
//! Two independent routes compute the same object:
//!
//! * [`supremal_fixpoint`] builds `G'' = (F_syn(G) || R)_uc || det(G)` and
//!   removes every state from which the dump state is reachable through
//!   uncontrollable events.
//! * [`supremal_formula`] evaluates
//!   `M = K - [(L(G) - K) / Σ_uc*] Σ*` with `K = L(R) ∩ L(F_syn(G))`, and marks
//!   `M' = M ∩ L_m(R) ∩ L_m(F_syn(G))`.
//!
//! Both return canonical (minimal, breadth-first numbered) automata, so equal
//! results are structurally identical.

use std::collections::{BTreeSet, HashMap};

use crate::automaton::{accessible, subautomaton, Automaton, DetAutomaton, StateId};
use crate::budget::Budget;
use crate::compose::{augment_with_dump, canonicalize, determinize, parallel, parallel_with_pairs, set_name};
use crate::error::Result;
use crate::language::{
    combine, concat_sigma_star, generated_from_marked, lang_difference_marked, lang_intersect,
    quotient_unctrl, View,
};

/// The synchronous state merger `F_syn(G)`: subset construction that only
/// follows events enabled at every member of a macro-state. A macro-state is
/// marked iff all its members are marked. Accessible part only.
pub fn f_syn(g: &Automaton, budget: &Budget) -> Result<DetAutomaton> {
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut sets = vec![vec![g.initial()]];
    index.insert(sets[0].clone(), 0);
    let mut out = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut edges = Vec::new();
        for e in g.alphabet().events() {
            if !sets[i].iter().all(|&x| g.enables(x, e)) {
                continue;
            }
            let mut t: Vec<StateId> = sets[i].iter().flat_map(|&x| g.successors(x, e)).collect();
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
    let marked = sets.iter().map(|s| s.iter().all(|&x| g.is_marked(x))).collect();
    let names = sets.iter().map(|s| set_name(g, s)).collect();
    Ok(DetAutomaton::new_unchecked(Automaton::from_parts(
        g.alphabet().clone(),
        names,
        0,
        marked,
        out,
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Fixpoint,
    Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupremalOutcome {
    /// The supremal sub-specification, canonicalized.
    NonEmpty(DetAutomaton),
    /// No nonempty sub-specification is synchronously simulation-based controllable.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupremalResult {
    pub outcome: SupremalOutcome,
    pub method: Method,
    /// Fixpoint only: the index `k` with `Z_{k+1} = Z_k`.
    pub iterations: Option<usize>,
    /// Fixpoint only: `|Z_0|, |Z_1|, ..., |Z_k|`.
    pub z_sizes: Vec<usize>,
}

impl SupremalResult {
    pub fn sub_spec(&self) -> Option<&DetAutomaton> {
        match &self.outcome {
            SupremalOutcome::NonEmpty(d) => Some(d),
            SupremalOutcome::Empty => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.outcome == SupremalOutcome::Empty
    }
}

/// Supremal sub-specification by backward uncontrollable closure from the dump state.
pub fn supremal_fixpoint(r: &DetAutomaton, g: &Automaton, budget: &Budget) -> Result<SupremalResult> {
    let g = g.aligned_to(r.alphabet())?;
    let fs = f_syn(&g, budget)?;
    let (g1, dump) = augment_with_dump(&parallel(&fs, r)?);
    let dg = determinize(&g, budget)?;
    let (g2, pairs) = parallel_with_pairs(&g1, &dg)?;
    budget.check_states(g2.num_states())?;
    let alphabet = g2.alphabet();

    // predecessors over uncontrollable events
    let mut pred: Vec<Vec<StateId>> = vec![Vec::new(); g2.num_states()];
    for (x, e, y) in g2.triples() {
        if alphabet.is_uncontrollable(e) {
            pred[y].push(x);
        }
    }
    let mut in_z: Vec<bool> = pairs.iter().map(|&(x1, _)| x1 == dump).collect();
    let mut layer: Vec<StateId> = (0..g2.num_states()).filter(|&z| in_z[z]).collect();
    let mut z_sizes = vec![layer.len()];
    let mut k = 0;
    // a state outside Z_k with an uncontrollable edge into Z_k has an edge
    // into the newest layer, otherwise it would already be in Z_k
    loop {
        budget.check_cancel()?;
        let mut next = Vec::new();
        for &y in &layer {
            for &x in &pred[y] {
                if !in_z[x] {
                    in_z[x] = true;
                    next.push(x);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        k += 1;
        z_sizes.push(z_sizes[k - 1] + next.len());
        layer = next;
    }

    if in_z[g2.initial()] {
        return Ok(SupremalResult {
            outcome: SupremalOutcome::Empty,
            method: Method::Fixpoint,
            iterations: Some(k),
            z_sizes,
        });
    }
    let keep: BTreeSet<StateId> = (0..g2.num_states()).filter(|&z| !in_z[z]).collect();
    let sub = accessible(&subautomaton(&g2, &keep)?);
    let sub = DetAutomaton::new(sub)?;
    Ok(SupremalResult {
        outcome: SupremalOutcome::NonEmpty(canonicalize(&sub)),
        method: Method::Fixpoint,
        iterations: Some(k),
        z_sizes,
    })
}

/// The language `M` together with `K = L(R) ∩ L(F_syn(G))`, both as automata.
/// `M` is the marked language of the first automaton.
pub fn supremal_language(
    r: &DetAutomaton,
    g: &Automaton,
    budget: &Budget,
) -> Result<(DetAutomaton, DetAutomaton)> {
    let g = g.aligned_to(r.alphabet())?;
    let fs = f_syn(&g, budget)?;
    let k = lang_intersect(r, &fs)?;
    let dg = determinize(&g, budget)?;
    let outside = lang_difference_marked(&dg, &k)?;
    let doomed = concat_sigma_star(&quotient_unctrl(&outside));
    let m = combine(&k, View::Generated, &doomed, View::Marked, |x, y| x && !y)?;
    Ok((m, k))
}

/// Supremal sub-specification by the closed-form language formula.
pub fn supremal_formula(r: &DetAutomaton, g: &Automaton, budget: &Budget) -> Result<SupremalResult> {
    let (m, k) = supremal_language(r, g, budget)?;
    let outcome = if !m.is_marked(m.initial()) {
        // M is prefix-closed, so it is empty iff it lacks ε
        SupremalOutcome::Empty
    } else {
        // generated language M; marking M ∩ L_m(R) ∩ L_m(F_syn(G)) comes from K
        let carrier = lang_intersect(&generated_from_marked(&m), &k)?;
        SupremalOutcome::NonEmpty(canonicalize(&carrier))
    };
    Ok(SupremalResult {
        outcome,
        method: Method::Formula,
        iterations: None,
        z_sizes: Vec::new(),
    })
}
