//! Searches for synchronizing words whose traversal obeys an order
//! constraint.
//!
//! The constraint fixes a relation kind and a set of state pairs; a word
//! qualifies when every pair belongs to the relation the word induces.
//! Shortest witnesses are reported per kind, so the strict and weak
//! readings can be compared directly.

use traversync::engine::constrained_sync;
use traversync::traversal::{ConstraintSpec, RelationKind, Variant};
use traversync::Dfa;

fn funnel() -> Dfa {
    Dfa::from_edges(
        &["p", "q", "r"],
        &["a", "b", "c", "d"],
        &[
            ("p", "a", "q"),
            ("p", "b", "p"),
            ("p", "c", "p"),
            ("p", "d", "r"),
            ("q", "a", "p"),
            ("q", "b", "q"),
            ("q", "c", "r"),
            ("q", "d", "q"),
            ("r", "a", "r"),
            ("r", "b", "r"),
            ("r", "c", "r"),
            ("r", "d", "r"),
        ],
    )
    .expect("funnel transitions are complete")
}

fn main() {
    let dfa = funnel();
    let p = dfa.state_index("p").unwrap();
    let q = dfa.state_index("q").unwrap();

    println!("pair (p, q), synchronization required:");
    for kind in RelationKind::ALL {
        let spec = ConstraintSpec::new(kind, vec![(p, q)], Variant::Literal, dfa.states()).unwrap();
        let verdict = constrained_sync(&dfa, &spec, true).unwrap();
        match verdict.witness() {
            Some(w) => println!(
                "  {:<11} shortest witness: {} (length {})",
                kind.id(),
                w.render(dfa.alphabet()),
                w.len()
            ),
            None => println!("  {:<11} no witness", kind.id()),
        }
    }

    let spec = ConstraintSpec::new(
        RelationKind::LeLlPaths,
        vec![(p, q)],
        Variant::Vacuous,
        dfa.states(),
    )
    .unwrap();
    let verdict = constrained_sync(&dfa, &spec, true).unwrap();
    println!();
    match verdict.witness() {
        Some(w) => println!(
            "le-ll-paths relaxed to the vacuous reading: {} (length {})",
            w.render(dfa.alphabet()),
            w.len()
        ),
        None => println!("le-ll-paths relaxed to the vacuous reading: no witness"),
    }
}
