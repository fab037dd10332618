//! Tabulates the five traversal relations on the funnel automaton.
//!
//! The funnel has two transient states `p`, `q` and an absorbing state `r`.
//! For the pair `(p, q)` the table shows how the readings diverge on short
//! words: set aggregation is weaker than per-path order, weak order admits
//! words a strict one rejects, and the vacuous per-path reading accepts
//! whenever the right component is never visited.

use traversync::traversal::{relation_membership, RelationKind, Variant};
use traversync::{Dfa, Word};

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

    let words = ["a", "b", "c d", "d c"];
    let kinds = RelationKind::ALL;

    println!("pair (p, q), literal reading:");
    print!("{:>6}", "word");
    for kind in kinds {
        print!("  {:>11}", kind.id());
    }
    println!();
    for text in words {
        let w = Word::parse(text, dfa.alphabet()).unwrap();
        print!("{text:>6}");
        for kind in kinds {
            let holds = relation_membership(kind, &dfa, &w, p, q, Variant::Literal).unwrap();
            print!("  {:>11}", if holds { "+" } else { "-" });
        }
        println!();
    }

    println!();
    println!("le-ll-paths under both readings:");
    println!("{:>6}  {:>8}  {:>8}", "word", "literal", "vacuous");
    for text in words {
        let w = Word::parse(text, dfa.alphabet()).unwrap();
        let literal =
            relation_membership(RelationKind::LeLlPaths, &dfa, &w, p, q, Variant::Literal).unwrap();
        let vacuous =
            relation_membership(RelationKind::LeLlPaths, &dfa, &w, p, q, Variant::Vacuous).unwrap();
        let mark = |b: bool| if b { "+" } else { "-" };
        println!("{text:>6}  {:>8}  {:>8}", mark(literal), mark(vacuous));
    }
    println!();
    println!("On the path started at p, the word b never visits q, so the");
    println!("literal reading compares a real last visit of p against minus");
    println!("infinity and fails. The vacuous reading skips exactly the paths");
    println!("that never see the right component.");
}
