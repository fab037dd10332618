//! Model checks temporal formulas over the runs of an automaton.
//!
//! A word is a model in path mode when the formula holds on the state
//! sequence from every start state, and in set mode when it holds on the
//! sequence of reachable-state sets. The search returns a shortest word,
//! optionally required to synchronize the automaton.

use traversync::engine::{Mode, Problem};
use traversync::ltlf::parse_formula;
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
    let queries = [
        ("F r", Mode::Paths, false),
        ("F r", Mode::Paths, true),
        ("G !r", Mode::Paths, true),
        ("!r U (r & X r)", Mode::Paths, false),
        ("F r", Mode::Sets, false),
    ];

    for (text, mode, sync) in queries {
        let formula = parse_formula(text).unwrap();
        let problem = Problem::ModelCheck {
            formula,
            mode,
            sync,
        };
        let verdict = problem.solve(&dfa).unwrap();
        let label = match (mode, sync) {
            (Mode::Paths, false) => "paths",
            (Mode::Paths, true) => "paths + sync",
            (Mode::Sets, false) => "sets",
            (Mode::Sets, true) => "sets + sync",
        };
        match verdict.witness() {
            Some(w) if w.is_empty() => println!("{text:<16} {label:<13} yes: the empty word"),
            Some(w) => println!("{text:<16} {label:<13} yes: {}", w.render(dfa.alphabet())),
            None => println!("{text:<16} {label:<13} no"),
        }
    }

    println!();
    println!("Requiring synchronization turns G !r unsatisfiable: the only");
    println!("state the funnel can collapse into is the absorbing r. In set");
    println!("mode F r holds on the empty word already, because the start");
    println!("set contains r and F includes the current position.");
}
