//! Finds a word accepted by several automata at once, via synchronization.
//!
//! The acceptors are glued into one automaton with accept, reject, and
//! final indicator states; a constrained synchronizing word of the glued
//! automaton encodes a shared accepted word, recovered by stripping the
//! added control letters. Every emitted variant of the construction agrees.

use traversync::reductions::{
    fai_to_constrained, pullback_witness, FaiVariant, GeneratedInstance, GeneratedWitness,
    SourceWitness,
};
use traversync::{Acceptor, Dfa, StateSet};

/// Accepts words over {a, b} with an odd number of a's.
fn odd_a() -> Acceptor {
    let dfa = Dfa::from_edges(
        &["even", "odd"],
        &["a", "b"],
        &[
            ("even", "a", "odd"),
            ("even", "b", "even"),
            ("odd", "a", "even"),
            ("odd", "b", "odd"),
        ],
    )
    .unwrap();
    let finals = StateSet::singleton(dfa.n_states(), dfa.state_index("odd").unwrap());
    Acceptor::new(dfa, 0, finals)
}

/// Accepts words over {a, b} containing the factor bb.
fn has_bb() -> Acceptor {
    let dfa = Dfa::from_edges(
        &["none", "one", "done"],
        &["a", "b"],
        &[
            ("none", "a", "none"),
            ("none", "b", "one"),
            ("one", "a", "none"),
            ("one", "b", "done"),
            ("done", "a", "done"),
            ("done", "b", "done"),
        ],
    )
    .unwrap();
    let finals = StateSet::singleton(dfa.n_states(), dfa.state_index("done").unwrap());
    Acceptor::new(dfa, 0, finals)
}

fn main() {
    let sources = vec![odd_a(), has_bb()];
    println!("looking for a word with an odd number of a's and a bb factor");
    println!();

    for variant in FaiVariant::ALL {
        let out = fai_to_constrained(&sources, variant).unwrap();
        let GeneratedInstance::Automaton { dfa, problem } = &out.instance else {
            unreachable!("the intersection route generates an automaton instance");
        };
        let verdict = problem.solve(dfa).unwrap();
        let Some(w) = verdict.witness() else {
            println!("{:<13} no shared word", variant.id());
            continue;
        };
        let pulled = pullback_witness(&out, &GeneratedWitness::Word(w.clone())).unwrap();
        let SourceWitness::Word(shared) = pulled else {
            unreachable!("intersection witnesses pull back to words");
        };
        let alphabet = sources[0].dfa.alphabet();
        println!(
            "{:<13} generated witness {:<24} shared word {}",
            variant.id(),
            w.render(dfa.alphabet()),
            shared.render(alphabet)
        );
        assert!(sources.iter().all(|acc| acc.accepts(&shared)));
    }
}
