//! Acceptance suite: eight seeded campaigns, one PASS/FAIL line each.
//!
//! Run with `cargo test -p descs-core --test acceptance`. The process exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use descs::format::write_automaton;
use descs::language::lang_difference_marked;
use descs::oracle::{
    all_words, generates, marks, oracle_controllability_violation, oracle_sync_controllable,
    random_alphabet, random_automaton, random_det, random_instance, random_pruning, AutomatonParams,
    EnumerationBudget, InstanceParams,
};
use descs::{
    check_existence, concat_sigma_star, f_syn, is_simulated_by, lang_controllable, lang_equal,
    lang_intersect, lang_subset, prefix_close, quotient_unctrl, supremal_fixpoint, supremal_formula,
    synchronously_simulated, synthesize_supervisor, uncontrollable_augment, verify_closed_loop,
    Automaton, Budget, DetAutomaton,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_candidate, random_det_pair, reaches_marked, SMALL};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// Indices of the first few failing cases, for the report line.
fn first_few<T: std::fmt::Debug>(v: &[T]) -> String {
    if v.is_empty() {
        String::new()
    } else {
        format!(", first {:?}", &v[..v.len().min(5)])
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn instances(seed: u64, n: usize, p: &InstanceParams) -> Vec<(DetAutomaton, Automaton)> {
    let mut rng = rng(seed);
    (0..n).map(|_| random_instance(&mut rng, p)).collect()
}

/// Existence test against the definition-level oracle, then sufficiency of
/// the constructed supervisor on every passing instance.
fn existence_and_sufficiency() -> (Outcome, Outcome) {
    let budget = EnumerationBudget::new(10_000, 500, 1).unwrap();
    let pairs = instances(budget.seed, budget.max_cases, &SMALL);
    let mut mismatches = Vec::new();
    let mut passing = Vec::new();
    for (i, (r, g)) in pairs.iter().enumerate() {
        let fast = check_existence(r, g).unwrap().controllable;
        let naive = oracle_sync_controllable(r, g, &budget).unwrap();
        if fast != naive {
            mismatches.push(i);
        }
        if fast {
            passing.push(i);
        }
    }
    let c1 = outcome(
        mismatches.is_empty(),
        format!(
            "{} pairs, {} controllable, {} mismatches{}",
            pairs.len(),
            passing.len(),
            mismatches.len(),
            first_few(&mismatches)
        ),
    );

    let mut failures = Vec::new();
    for &i in &passing {
        let (r, g) = &pairs[i];
        let s = synthesize_supervisor(r, g).unwrap();
        let all_uc = s
            .states()
            .all(|y| s.alphabet().uncontrollable().all(|u| s.enables(y, u)));
        if !all_uc || !verify_closed_loop(g, &s, r).unwrap().is_enforced() {
            failures.push(i);
        }
    }
    let c2 = outcome(
        failures.is_empty() && !passing.is_empty(),
        format!("{} passing instances verified, {} failures", passing.len(), failures.len()),
    );
    (c1, c2)
}

/// No small random supervisor enforces bisimilarity on a failing instance.
fn necessity() -> Outcome {
    let mut rng = rng(3);
    let p = InstanceParams {
        max_plant_states: 3,
        max_spec_states: 4,
        max_alphabet: 4,
    };
    let mut failing = 0;
    let mut candidates = 0;
    let mut false_supervisors = 0;
    while failing < 100 {
        let (r, g) = random_instance(&mut rng, &p);
        if check_existence(&r, &g).unwrap().controllable {
            continue;
        }
        failing += 1;
        let mut pool = Vec::with_capacity(200);
        let r_uc = uncontrollable_augment(&r);
        if r_uc.num_states() <= 4 {
            pool.push(r_uc);
        }
        while pool.len() < 200 {
            pool.push(random_candidate(&mut rng, r.alphabet(), 4));
        }
        for s in &pool {
            candidates += 1;
            if verify_closed_loop(&g, s, &r).unwrap().is_enforced() {
                false_supervisors += 1;
            }
        }
    }
    outcome(
        false_supervisors == 0,
        format!("{failing} failing instances, {candidates} candidates, {false_supervisors} false supervisors"),
    )
}

/// Both supremal procedures agree; their results are sound and dominate
/// sampled controllable prunings of the specification.
fn supremal_agreement_and_soundness() -> (Outcome, Outcome) {
    let budget = Budget::default();
    let pairs = instances(4, 500, &SMALL);
    let dir = std::env::temp_dir().join(format!("descs-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut mismatches = Vec::new();
    let mut nonempty = Vec::new();
    for (i, (r, g)) in pairs.iter().enumerate() {
        let a = supremal_fixpoint(r, g, &budget).unwrap();
        let b = supremal_formula(r, g, &budget).unwrap();
        let agree = match (a.sub_spec(), b.sub_spec()) {
            (None, None) => true,
            (Some(x), Some(y)) => {
                let fa = dir.join(format!("{i}.fixpoint.aut"));
                let fb = dir.join(format!("{i}.formula.aut"));
                std::fs::write(&fa, write_automaton(x)).unwrap();
                std::fs::write(&fb, write_automaton(y)).unwrap();
                let same_bytes = std::fs::read(&fa).unwrap() == std::fs::read(&fb).unwrap();
                if lang_equal(x, y).unwrap() && same_bytes {
                    nonempty.push((i, x.clone()));
                    true
                } else {
                    false
                }
            }
            _ => false,
        };
        if !agree {
            mismatches.push(i);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    let c4 = outcome(
        mismatches.is_empty(),
        format!(
            "{} pairs, {} nonempty, {} mismatches{}",
            pairs.len(),
            nonempty.len(),
            mismatches.len(),
            first_few(&mismatches)
        ),
    );

    let mut violations = Vec::new();
    for (i, m) in &nonempty {
        let (r, g) = &pairs[*i];
        if !check_existence(m, g).unwrap().controllable || !is_simulated_by(m, r).unwrap() {
            violations.push(*i);
        }
    }
    let mut rng = rng(5);
    let mut sampled = 0;
    let mut prunings = 0;
    for (i, m) in &nonempty {
        if sampled == 20 {
            break;
        }
        let (r, g) = &pairs[*i];
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        for _ in 0..5000 {
            let p = random_pruning(&mut rng, r);
            if check_existence(&p, g).unwrap().controllable && seen.insert(write_automaton(&p)) {
                kept.push(p);
                if kept.len() == 50 {
                    break;
                }
            }
        }
        if kept.len() < 50 {
            continue;
        }
        sampled += 1;
        for p in &kept {
            prunings += 1;
            if !is_simulated_by(p, m).unwrap() {
                violations.push(*i);
            }
        }
    }
    let c5 = outcome(
        violations.is_empty() && sampled == 20,
        format!(
            "{} nonempty results checked, {sampled} instances x 50 prunings ({prunings} total), {} violations",
            nonempty.len(),
            violations.len()
        ),
    );
    (c4, c5)
}

/// Synchronous simulation coincides with language inclusion in `F_syn(G)`.
fn sync_simulation_vs_inclusion() -> Outcome {
    let budget = Budget::default();
    let pairs = instances(6, 300, &SMALL);
    let mut positives = 0;
    let mut mismatches = 0;
    for (r, g) in &pairs {
        let lhs = synchronously_simulated(r, g).unwrap();
        let rhs = lang_subset(r, &f_syn(g, &budget).unwrap()).unwrap();
        positives += lhs as usize;
        mismatches += (lhs != rhs) as usize;
    }
    outcome(
        mismatches == 0,
        format!("{} pairs, {positives} synchronously simulated, {mismatches} mismatches", pairs.len()),
    )
}

/// Each language operation against membership by enumeration up to depth 6.
fn language_algebra() -> Outcome {
    const DEPTH: usize = 6;
    let mut rng = rng(7);
    let budget = Budget::default();
    let mut failures: Vec<(usize, &str)> = Vec::new();
    for i in 0..500 {
        let (a, b) = random_det_pair(&mut rng, 6, 4);
        let al = a.alphabet().clone();
        let words = all_words(al.len(), DEPTH);
        let is_uc = |e: usize| al.is_uncontrollable(e);
        let member = |d: &DetAutomaton, w: &[usize]| (generates(d, w), marks(d, w));

        let inter = lang_intersect(&a, &b).unwrap();
        let diff = lang_difference_marked(&a, &b).unwrap();
        let quot = quotient_unctrl(&a);
        let conc = concat_sigma_star(&a);
        let pref = prefix_close(&a);
        let mut ok = [true; 5];
        for w in &words {
            let (ga, ma) = member(&a, w);
            let (gb, mb) = member(&b, w);
            ok[0] &= member(&inter, w) == (ga && gb, ma && mb);
            ok[1] &= marks(&diff, w) == (ga && !gb);
            let end = a.run(w);
            ok[2] &= marks(&quot, w) == end.is_some_and(|x| reaches_marked(&a, x, is_uc));
            ok[3] &= marks(&conc, w) == (0..=w.len()).any(|k| marks(&a, &w[..k]));
            ok[4] &= marks(&pref, w) == end.is_some_and(|x| reaches_marked(&a, x, |_| true));
        }
        for (k, name) in ["intersect", "difference", "quotient", "concat", "prefix-close"].iter().enumerate() {
            if !ok[k] {
                failures.push((i, name));
            }
        }
        let fast = lang_controllable(&a, &b, &budget).unwrap();
        let naive = oracle_controllability_violation(&a, &b, DEPTH);
        let agree = match &fast.witness {
            None => fast.controllable && naive.is_none(),
            Some(w) if w.len() <= DEPTH => !fast.controllable && naive.as_ref() == Some(w),
            Some(_) => !fast.controllable && naive.is_none(),
        };
        if !agree {
            failures.push((i, "controllable"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "500 automaton pairs x 6 operations, {} failures{}",
            failures.len(),
            first_few(&failures)
        ),
    )
}

/// Runtime of the existence test grows polynomially with plant size.
fn scaling() -> Outcome {
    let mut rng = rng(8);
    let alphabet = random_alphabet(&mut rng, 4, 0.3);
    let spec = random_det(
        &mut rng,
        &alphabet,
        &AutomatonParams {
            states: 20,
            density: 1.0,
            marking: 0.5,
        },
    );
    let sizes = [50usize, 100, 200];
    let mut points = Vec::new();
    let mut worst = Duration::ZERO;
    for &n in &sizes {
        let plant = random_automaton(
            &mut rng,
            &alphabet,
            &AutomatonParams {
                states: n,
                density: 1.5,
                marking: 0.5,
            },
        );
        let mut times: Vec<Duration> = (0..7)
            .map(|_| {
                let t = Instant::now();
                let report = check_existence(&spec, &plant).unwrap();
                std::hint::black_box(report);
                t.elapsed()
            })
            .collect();
        times.sort();
        worst = worst.max(*times.last().unwrap());
        points.push(((plant.num_states() as f64).ln(), times[3].as_secs_f64().ln()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = points.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    outcome(
        slope <= 4.5 && worst < Duration::from_secs(1),
        format!("log-log slope {slope:.2}, slowest run {:.1} ms", worst.as_secs_f64() * 1e3),
    )
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let mut run = |f: &mut dyn FnMut() -> Vec<Outcome>, names: &[&str]| {
        let t = Instant::now();
        let results = f();
        let secs = t.elapsed().as_secs_f64();
        for (o, name) in results.into_iter().zip(names) {
            let status = if o.passed { "PASS" } else { "FAIL" };
            let line = format!("{status} {name}: {} ({secs:.1} s)", o.detail);
            println!("{line}");
            lines.push(o.passed);
        }
    };
    run(
        &mut || {
            let (a, b) = existence_and_sufficiency();
            vec![a, b]
        },
        &[
            "1 existence test equals definition-level oracle",
            "2 constructed supervisor enforces bisimilarity",
        ],
    );
    run(
        &mut || vec![necessity()], &["3 no small supervisor for failing instances"]);
    run(
        &mut || {
            let (a, b) = supremal_agreement_and_soundness();
            vec![a, b]
        },
        &[
            "4 fixpoint and formula supremal agree",
            "5 supremal is sound and dominates controllable prunings",
        ],
    );
    run(
        &mut || vec![sync_simulation_vs_inclusion()],
        &["6 synchronous simulation iff inclusion in F_syn(G)"],
    );
    run(
        &mut || vec![language_algebra()], &["7 language operations equal enumeration"]);
    run(
        &mut || vec![scaling()], &["8 existence test scales polynomially"]);
    let failed = lines.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
