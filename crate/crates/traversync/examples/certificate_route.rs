//! Compares the composed certificate route against the direct search.
//!
//! For strict last-last constraints on paths with synchronization, a
//! positive answer can be certified in polynomial time: restrict the
//! automaton to its unique sink component, solve a last-visits traversal
//! there, and glue the pieces into one word. The witness re-verifies but is
//! generally longer than the shortest one the breadth-first search finds.

use traversync::corpus;
use traversync::engine::{constrained_sync, solve_cs_orep_np};
use traversync::traversal::{agrees, ConstraintSpec, RelationKind, Variant};
use traversync::StateSet;

fn main() {
    let mut rng = corpus::rng(9);
    let mut shown = 0;
    while shown < 4 {
        let dfa = corpus::random_dfa(&mut rng, 5, 2);
        let pairs = corpus::random_pairs(&mut rng, dfa.n_states(), 2);
        let spec = ConstraintSpec::new(
            RelationKind::LtLlPaths,
            pairs.clone(),
            Variant::Literal,
            dfa.states(),
        )
        .unwrap();

        let direct = constrained_sync(&dfa, &spec, true).unwrap();
        let composed = solve_cs_orep_np(&dfa, &pairs).unwrap();
        assert_eq!(direct.is_yes(), composed.is_yes());
        let Some(shortest) = direct.witness() else {
            continue;
        };
        let glued = composed.witness().expect("routes agree on yes");

        let full = StateSet::full(dfa.n_states());
        assert!(agrees(&spec, &dfa, glued).unwrap());
        assert!(dfa.step_set(&full, glued).is_singleton());

        let rendered: Vec<String> = pairs
            .iter()
            .map(|&(u, v)| format!("({}, {})", dfa.state_name(u), dfa.state_name(v)))
            .collect();
        println!("pairs {}", rendered.join(" "));
        println!(
            "  direct search:    length {:>2}  {}",
            shortest.len(),
            shortest.render(dfa.alphabet())
        );
        println!(
            "  certificate glue: length {:>2}  {}",
            glued.len(),
            glued.render(dfa.alphabet())
        );
        shown += 1;
    }
}
