//! Decides careful synchronization of a partial automaton two ways.
//!
//! The direct route runs the power-set search that refuses undefined
//! transitions. The indirect route completes the automaton with an error
//! state, asks for a constrained synchronizing word there, and maps the
//! answer back; both must agree. A second automaton with two sink
//! components shows the reduction refusing instances that cannot be
//! carefully synchronized.

use traversync::reductions::{
    careful_to_constrained, pullback_witness, CarefulVariant, GeneratedInstance, GeneratedWitness,
    ReductionError, SourceWitness,
};
use traversync::PartialDfa;

fn main() {
    let source = PartialDfa::from_edges(
        &["s0", "s1", "s2"],
        &["a", "b"],
        &[
            ("s0", "a", "s1"),
            ("s1", "a", "s2"),
            ("s2", "a", "s2"),
            ("s1", "b", "s0"),
            ("s2", "b", "s2"),
        ],
    )
    .unwrap();

    let direct = source.carefully_synchronizing_word();
    match direct.witness() {
        Some(w) => println!("direct search: yes, {}", w.render(source.alphabet())),
        None => println!("direct search: no"),
    }

    let out = careful_to_constrained(&source, CarefulVariant::Orz).unwrap();
    let GeneratedInstance::Automaton { dfa, problem } = &out.instance else {
        unreachable!("the careful route generates an automaton instance");
    };
    println!(
        "completed automaton: {} states over {} letters",
        dfa.n_states(),
        dfa.n_letters()
    );
    let verdict = problem.solve(dfa).unwrap();
    match verdict.witness() {
        Some(w) => {
            println!("constrained search: yes, {}", w.render(dfa.alphabet()));
            let pulled = pullback_witness(&out, &GeneratedWitness::Word(w.clone())).unwrap();
            let SourceWitness::Word(v) = pulled else {
                unreachable!("careful witnesses pull back to words");
            };
            println!(
                "pulled back and re-verified: {}",
                v.render(source.alphabet())
            );
        }
        None => println!("constrained search: no"),
    }

    let split = PartialDfa::from_edges(
        &["u", "v"],
        &["a"],
        &[("u", "a", "u"), ("v", "a", "v")],
    )
    .unwrap();
    println!();
    println!(
        "two separate sink components: direct answer is {}",
        if split.carefully_synchronizing_word().is_yes() {
            "yes"
        } else {
            "no"
        }
    );
    let out = careful_to_constrained(&split, CarefulVariant::Orz).unwrap();
    let GeneratedInstance::Automaton { dfa, problem } = &out.instance else {
        unreachable!("the careful route generates an automaton instance");
    };
    println!(
        "constrained search on the completion: {}",
        if problem.solve(dfa).unwrap().is_yes() {
            "yes"
        } else {
            "no"
        }
    );
    match careful_to_constrained(&split, CarefulVariant::CwOre) {
        Err(err @ ReductionError::MultipleSinkComponents) => {
            println!("the gate variant refuses outright: {err}");
        }
        other => println!("unexpected reduction outcome: {other:?}"),
    }
}
