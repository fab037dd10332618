//! Seeded random inputs for tests, examples, and the command line. Every
//! generator takes the RNG explicitly; the same seed yields the same corpus
//! on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{Acceptor, Dfa, PartialDfa, StateId, StateSet, Word};
use crate::ltlf::{Formula, Trace};
use crate::reductions::CnfFormula;
use crate::travgraph::Digraph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

pub fn letter_names(k: usize) -> Vec<String> {
    assert!((1..=26).contains(&k), "letters are drawn from a..z");
    (0..k)
        .map(|i| char::from(b'a' + i as u8).to_string())
        .collect()
}

pub fn random_dfa(rng: &mut impl Rng, n_states: usize, n_letters: usize) -> Dfa {
    let delta = (0..n_states)
        .map(|_| (0..n_letters).map(|_| rng.random_range(0..n_states)).collect())
        .collect();
    Dfa::new(state_names(n_states), letter_names(n_letters), delta)
        .expect("generated names are valid")
}

/// Each transition is kept with probability `keep` and otherwise undefined.
pub fn random_partial_dfa(
    rng: &mut impl Rng,
    n_states: usize,
    n_letters: usize,
    keep: f64,
) -> PartialDfa {
    let delta = (0..n_states)
        .map(|_| {
            (0..n_letters)
                .map(|_| rng.random_bool(keep).then(|| rng.random_range(0..n_states)))
                .collect()
        })
        .collect();
    PartialDfa::new(state_names(n_states), letter_names(n_letters), delta)
        .expect("generated names are valid")
}

/// Random complete DFA with a random initial state; every state is final
/// independently with probability one half.
pub fn random_acceptor(rng: &mut impl Rng, n_states: usize, n_letters: usize) -> Acceptor {
    let dfa = random_dfa(rng, n_states, n_letters);
    let initial = rng.random_range(0..n_states);
    let finals = StateSet::from_states(
        n_states,
        (0..n_states).filter(|_| rng.random_bool(0.5)),
    );
    Acceptor::new(dfa, initial, finals)
}

pub fn random_word(rng: &mut impl Rng, n_letters: usize, len: usize) -> Word {
    Word((0..len).map(|_| rng.random_range(0..n_letters)).collect())
}

/// Up to `count` distinct irreflexive ordered pairs over `0..n_states`.
pub fn random_pairs(
    rng: &mut impl Rng,
    n_states: usize,
    count: usize,
) -> Vec<(StateId, StateId)> {
    let mut pool: Vec<(StateId, StateId)> = (0..n_states)
        .flat_map(|p| (0..n_states).filter(move |&q| q != p).map(move |q| (p, q)))
        .collect();
    let take = count.min(pool.len());
    let (chosen, _) = pool.partial_shuffle(rng, take);
    chosen.to_vec()
}

/// A formula over `atoms` with at most `budget` nodes; the budget is at
/// least one.
pub fn random_formula(rng: &mut impl Rng, atoms: &[String], budget: usize) -> Formula {
    assert!(!atoms.is_empty(), "formulas need an atom pool");
    let leaf = |rng: &mut dyn rand::RngCore| {
        Formula::Atom(atoms[rng.random_range(0..atoms.len())].clone())
    };
    if budget <= 1 {
        return match rng.random_range(0..6) {
            0 => Formula::True,
            1 => Formula::False,
            _ => leaf(rng),
        };
    }
    let op = if budget < 3 {
        rng.random_range(0..5)
    } else {
        rng.random_range(0..9)
    };
    match op {
        0 => leaf(rng),
        1 => Formula::not(random_formula(rng, atoms, budget - 1)),
        2 => Formula::next(random_formula(rng, atoms, budget - 1)),
        3 => Formula::finally(random_formula(rng, atoms, budget - 1)),
        4 => Formula::globally(random_formula(rng, atoms, budget - 1)),
        op => {
            let left_budget = rng.random_range(1..=budget - 2);
            let left = random_formula(rng, atoms, left_budget);
            let right = random_formula(rng, atoms, budget - 1 - left_budget);
            match op {
                5 => Formula::and(left, right),
                6 => Formula::or(left, right),
                7 => Formula::implies(left, right),
                _ => Formula::until(left, right),
            }
        }
    }
}

/// A non-empty trace whose positions are random subsets of `atoms`.
pub fn random_trace(rng: &mut impl Rng, atoms: &[String], len: usize) -> Trace {
    assert!(len >= 1, "traces are non-empty");
    let positions: Vec<Vec<&str>> = (0..len)
        .map(|_| {
            atoms
                .iter()
                .filter(|_| rng.random_bool(0.5))
                .map(String::as_str)
                .collect()
        })
        .collect();
    let slices: Vec<&[&str]> = positions.iter().map(Vec::as_slice).collect();
    Trace::from_names(&slices)
}

/// Clauses draw 1..=`max_clause_len` distinct variables with random signs,
/// so the construction invariants hold for every draw.
pub fn random_cnf(
    rng: &mut impl Rng,
    n_vars: usize,
    n_clauses: usize,
    max_clause_len: usize,
) -> CnfFormula {
    assert!(n_vars >= 1 && n_clauses >= 1);
    let clauses = (0..n_clauses)
        .map(|_| {
            let len = rng.random_range(1..=max_clause_len.min(n_vars));
            let mut vars: Vec<usize> = (1..=n_vars).collect();
            let (chosen, _) = vars.partial_shuffle(rng, len);
            chosen
                .iter()
                .map(|&v| {
                    let lit = v as i32;
                    if rng.random_bool(0.5) {
                        lit
                    } else {
                        -lit
                    }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(n_vars, clauses).expect("distinct variables per clause")
}

/// A strongly connected digraph: a full cycle through all vertices plus up
/// to `extra_edges` random non-loop edges.
pub fn random_strongly_connected_digraph(
    rng: &mut impl Rng,
    n_vertices: usize,
    extra_edges: usize,
) -> Digraph {
    assert!(n_vertices >= 1);
    let names = (0..n_vertices).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<(usize, usize)> = (0..n_vertices)
        .map(|i| (i, (i + 1) % n_vertices))
        .collect();
    for _ in 0..extra_edges {
        let u = rng.random_range(0..n_vertices);
        let v = rng.random_range(0..n_vertices);
        if u != v {
            edges.push((u, v));
        }
    }
    Digraph::new(names, &edges).expect("generated names are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_corpus() {
        let a = random_dfa(&mut rng(7), 5, 2);
        let b = random_dfa(&mut rng(7), 5, 2);
        assert_eq!(a, b);
        let c = random_dfa(&mut rng(8), 5, 2);
        assert_ne!(a, c);
    }

    #[test]
    fn full_keep_probability_yields_a_complete_automaton() {
        let pdfa = random_partial_dfa(&mut rng(3), 4, 2, 1.0);
        assert!(pdfa.require_complete().is_ok());
    }

    #[test]
    fn pairs_are_distinct_and_irreflexive() {
        let mut r = rng(11);
        for _ in 0..50 {
            let pairs = random_pairs(&mut r, 4, 5);
            assert_eq!(pairs.len(), 5);
            let mut seen = pairs.clone();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), pairs.len());
            assert!(pairs.iter().all(|&(p, q)| p != q));
        }
        assert_eq!(random_pairs(&mut r, 2, 10).len(), 2);
    }

    #[test]
    fn formulas_respect_the_node_budget() {
        let atoms = vec!["p".to_string(), "q".to_string()];
        let mut r = rng(5);
        for _ in 0..200 {
            let f = random_formula(&mut r, &atoms, 9);
            assert!(f.node_count() <= 9);
        }
    }

    #[test]
    fn generated_digraphs_are_strongly_connected() {
        let mut r = rng(2);
        for _ in 0..20 {
            let n = r.random_range(1..8);
            let g = random_strongly_connected_digraph(&mut r, n, 2 * n);
            assert!(g.is_strongly_connected());
        }
    }

    #[test]
    fn generated_cnfs_satisfy_the_type_invariants() {
        let mut r = rng(9);
        for _ in 0..50 {
            let cnf = random_cnf(&mut r, 5, 4, 3);
            assert_eq!(cnf.num_vars(), 5);
            assert_eq!(cnf.clauses().len(), 4);
        }
    }
}
