//! Cross-checks the search engine against brute-force enumeration.
//!
//! The oracle tries every word up to a length bound in length-then-lex
//! order and decides each instance independently of the engine. An engine
//! yes must match the oracle's shortest witness length; an engine no is
//! consistent only if the oracle found nothing within the bound. Witnesses
//! the bound cannot reach are counted as inconclusive, never as agreement.

use traversync::corpus;
use traversync::engine::{Mode, Problem};
use traversync::oracle::{cross_check, CrossOutcome};
use traversync::traversal::{ConstraintSpec, RelationKind, Variant};

fn main() {
    let mut rng = corpus::rng(42);
    let rounds = 40;
    let max_len = 8;

    let mut agree = 0usize;
    let mut inconclusive = 0usize;
    let mut checked = 0usize;

    for _ in 0..rounds {
        let dfa = corpus::random_dfa(&mut rng, 4, 2);
        let pairs = corpus::random_pairs(&mut rng, dfa.n_states(), 2);
        let formula = corpus::random_formula(&mut rng, dfa.states(), 6);

        let mut problems = Vec::new();
        for kind in RelationKind::ALL {
            let spec =
                ConstraintSpec::new(kind, pairs.clone(), Variant::Literal, dfa.states()).unwrap();
            for sync in [false, true] {
                problems.push(Problem::Constrained {
                    spec: spec.clone(),
                    sync,
                });
            }
        }
        problems.push(Problem::ModelCheck {
            formula: formula.clone(),
            mode: Mode::Paths,
            sync: false,
        });
        problems.push(Problem::ModelCheck {
            formula,
            mode: Mode::Sets,
            sync: true,
        });

        for problem in &problems {
            let report = cross_check(problem, &dfa, None, max_len).unwrap();
            checked += 1;
            match report.outcome {
                CrossOutcome::Agree => agree += 1,
                CrossOutcome::Inconclusive => inconclusive += 1,
                CrossOutcome::Failure(msg) => panic!("disagreement: {msg}"),
            }
        }
    }

    println!("checked {checked} instances up to length {max_len}");
    println!("  {agree} agree, {inconclusive} inconclusive, 0 failures");
}
