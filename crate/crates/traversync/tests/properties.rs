//! Invariants that tie the independent routes of the crate together on
//! randomized corpora: direct membership checks, formula translations, the
//! search engine, the digraph solvers, and the instance generators.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use traversync::automata::{Dfa, StateSet, SyncStrategy, Verdict, Word};
use traversync::corpus;
use traversync::engine::{constrained_sync, Mode, Problem};
use traversync::ltlf::{eval_trace, Formula, Trace};
use traversync::reductions::{
    careful_to_constrained, cnf_to_fvt, fai_to_constrained, BundleFile, CarefulVariant,
    FaiVariant, GeneratedInstance,
};
use traversync::traversal::{
    agrees, constraint_to_formula, relation_membership, ConstraintSpec, RelationKind, Variant,
};
use traversync::travgraph::{
    lvt_to_cs_orep, solve_fvt, solve_lvt, verify_traversal_path, PathVerdict, TraversalInstance,
    TraversalKind,
};

fn dfa_and_word() -> impl Strategy<Value = (Dfa, Word)> {
    (2usize..=5, 1usize..=3).prop_flat_map(|(n, k)| {
        (
            proptest::collection::vec(0..n, n * k),
            proptest::collection::vec(0..k, 0..=6),
        )
            .prop_map(move |(flat, letters)| {
                let delta = flat.chunks(k).map(<[usize]>::to_vec).collect();
                let dfa = Dfa::new(corpus::state_names(n), corpus::letter_names(k), delta)
                    .expect("generated names and targets are in range");
                (dfa, Word(letters))
            })
    })
}

fn membership(
    kind: RelationKind,
    dfa: &Dfa,
    w: &Word,
    p: usize,
    q: usize,
    variant: Variant,
) -> bool {
    relation_membership(kind, dfa, w, p, q, variant).expect("pairs are irreflexive")
}

proptest! {
    /// The strict forms refine the weak ones, and the first-forbidding form
    /// refines the weak per-path form under the vacuous reading.
    #[test]
    fn strict_memberships_imply_their_weak_forms((dfa, w) in dfa_and_word()) {
        let n = dfa.n_states();
        for p in 0..n {
            for q in 0..n {
                if p == q {
                    continue;
                }
                if membership(RelationKind::LtLlSets, &dfa, &w, p, q, Variant::Literal) {
                    prop_assert!(membership(RelationKind::LeLlSets, &dfa, &w, p, q, Variant::Literal));
                }
                if membership(RelationKind::LtLlPaths, &dfa, &w, p, q, Variant::Literal) {
                    prop_assert!(membership(RelationKind::LeLlPaths, &dfa, &w, p, q, Variant::Literal));
                    prop_assert!(membership(RelationKind::LeLlPaths, &dfa, &w, p, q, Variant::Vacuous));
                }
                if membership(RelationKind::LtLfPaths, &dfa, &w, p, q, Variant::Literal) {
                    prop_assert!(membership(RelationKind::LeLlPaths, &dfa, &w, p, q, Variant::Vacuous));
                }
            }
        }
    }

    /// Direct profile comparison and the formula translation answer the same
    /// membership question, pair by pair, under both variants.
    #[test]
    fn membership_agrees_with_the_formula_translation((dfa, w) in dfa_and_word()) {
        for kind in RelationKind::ALL {
            for variant in [Variant::Literal, Variant::Vacuous] {
                // The vacuous per-path reading has no future-formula
                // equivalent; the engine decides it by direct search.
                if kind == RelationKind::LeLlPaths && variant == Variant::Vacuous {
                    continue;
                }
                let spec = ConstraintSpec::new(kind, vec![(0, 1)], variant, dfa.states())
                    .expect("the pair is irreflexive");
                let direct = agrees(&spec, &dfa, &w).unwrap();
                let formula = constraint_to_formula(&spec, dfa.states()).unwrap();
                let translated = if kind.on_paths() {
                    (0..dfa.n_states()).all(|r| eval_trace(&formula, &path_trace(&dfa, r, &w)))
                } else {
                    eval_trace(&formula, &set_trace(&dfa, &w))
                };
                prop_assert_eq!(direct, translated, "kind {:?} variant {:?}", kind, variant);
            }
        }
    }
}

fn path_trace(dfa: &Dfa, start: usize, w: &Word) -> Trace {
    let mut q = start;
    let mut labels = vec![BTreeSet::from([dfa.state_name(q).to_string()])];
    for &a in w.letters() {
        q = dfa.step(q, a);
        labels.push(BTreeSet::from([dfa.state_name(q).to_string()]));
    }
    Trace::new(labels).unwrap()
}

fn set_trace(dfa: &Dfa, w: &Word) -> Trace {
    let names = |set: &StateSet| set.iter().map(|q| dfa.state_name(q).to_string()).collect();
    let mut current = StateSet::full(dfa.n_states());
    let mut labels: Vec<BTreeSet<String>> = vec![names(&current)];
    for &a in w.letters() {
        current = dfa.step_set_letter(&current, a);
        labels.push(names(&current));
    }
    Trace::new(labels).unwrap()
}

fn synchronizes(dfa: &Dfa, w: &Word) -> bool {
    dfa.step_set(&StateSet::full(dfa.n_states()), w).is_singleton()
}

#[test]
fn sync_strategies_agree_on_random_automata() {
    let mut rng = corpus::rng(11);
    for _ in 0..500 {
        let n = rng.random_range(2..=8);
        let k = rng.random_range(1..=3);
        let dfa = corpus::random_dfa(&mut rng, n, k);
        let greedy = dfa.synchronizing_word(SyncStrategy::Greedy);
        let shortest = dfa.synchronizing_word(SyncStrategy::Shortest);
        assert_eq!(greedy.is_yes(), shortest.is_yes());
        if let (Some(g), Some(s)) = (greedy.witness(), shortest.witness()) {
            assert!(synchronizes(&dfa, g));
            assert!(synchronizes(&dfa, s));
            assert!(s.len() <= g.len());
        }
    }
}

#[test]
fn shortest_sync_words_are_length_minimal() {
    let mut rng = corpus::rng(12);
    for _ in 0..100 {
        let dfa = corpus::random_dfa(&mut rng, 4, 2);
        let Verdict::Yes(w) = dfa.synchronizing_word(SyncStrategy::Shortest) else {
            continue;
        };
        // No strictly shorter word synchronizes.
        let mut shorter_exists = false;
        for len in 0..w.len() {
            let mut digits = vec![0usize; len];
            loop {
                if synchronizes(&dfa, &Word(digits.clone())) {
                    shorter_exists = true;
                }
                if !increment(&mut digits, dfa.n_letters()) {
                    break;
                }
            }
        }
        assert!(!shorter_exists, "a shorter word beats {:?}", w);
    }
}

fn increment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[test]
fn careful_search_matches_bounded_enumeration() {
    let mut rng = corpus::rng(13);
    for _ in 0..100 {
        let pdfa = corpus::random_partial_dfa(&mut rng, 4, 2, 0.7);
        let verdict = pdfa.carefully_synchronizing_word();
        let full = StateSet::full(pdfa.n_states());
        let careful = |w: &Word| pdfa.step_set(&full, w).is_some_and(|s| s.is_singleton());
        let mut found: Option<usize> = None;
        'scan: for len in 0..=6 {
            let mut digits = vec![0usize; len];
            loop {
                if careful(&Word(digits.clone())) {
                    found = Some(len);
                    break 'scan;
                }
                if !increment(&mut digits, pdfa.n_letters()) {
                    break;
                }
            }
        }
        match (&verdict, found) {
            (Verdict::Yes(w), Some(len)) => assert_eq!(w.len(), len),
            (Verdict::Yes(w), None) => assert!(w.len() > 6),
            (Verdict::No, None) => {}
            (bad, found) => panic!("search said {bad:?}, enumeration said {found:?}"),
        }
        if let Some(w) = verdict.witness() {
            assert!(careful(w));
        }
    }
}

#[test]
fn engine_under_a_trivial_formula_reduces_to_plain_synchronization() {
    let mut rng = corpus::rng(14);
    let problem = Problem::ModelCheck {
        formula: Formula::True,
        mode: Mode::Paths,
        sync: true,
    };
    for _ in 0..200 {
        let n = rng.random_range(2..=5);
        let k = rng.random_range(1..=3);
        let dfa = corpus::random_dfa(&mut rng, n, k);
        let plain = dfa.synchronizing_word(SyncStrategy::Shortest);
        let engine = problem.solve(&dfa).unwrap();
        assert_eq!(plain.is_yes(), engine.is_yes());
        if let (Some(a), Some(b)) = (plain.witness(), engine.witness()) {
            assert_eq!(a.len(), b.len());
        }
    }
}

#[test]
fn last_visit_instances_translate_into_constrained_synchronization() {
    let mut rng = corpus::rng(15);
    for _ in 0..100 {
        let n = rng.random_range(2..=6);
        let g = corpus::random_strongly_connected_digraph(&mut rng, n, 2);
        let pairs = corpus::random_pairs(&mut rng, n, 2);
        let inst = TraversalInstance::new(g.clone(), pairs.clone(), Vec::new()).unwrap();
        let direct = solve_lvt(&inst);
        if let PathVerdict::Yes(path) = &direct {
            assert!(verify_traversal_path(&inst, path, TraversalKind::Lvt));
        }

        let (dfa, lifted) = lvt_to_cs_orep(&g, &pairs).unwrap();
        let spec = ConstraintSpec::new(
            RelationKind::LtLlPaths,
            lifted,
            Variant::Literal,
            dfa.states(),
        )
        .unwrap();
        let engine = constrained_sync(&dfa, &spec, true).unwrap();
        assert_eq!(direct.is_yes(), engine.is_yes());
        if let Some(w) = engine.witness() {
            assert!(agrees(&spec, &dfa, w).unwrap());
            assert!(synchronizes(&dfa, w));
        }
    }
}

#[test]
fn first_visit_solver_matches_path_enumeration() {
    let mut rng = corpus::rng(16);
    for _ in 0..30 {
        let n = rng.random_range(2..=4);
        let g = corpus::random_strongly_connected_digraph(&mut rng, n, 2);
        let pairs = corpus::random_pairs(&mut rng, n, 2);
        let inst = TraversalInstance::new(g, pairs, Vec::new()).unwrap();
        let verdict = solve_fvt(&inst);

        // Breadth-first over walks finds the minimal valid one up to nine
        // edges; the solver's witness is minimal, so the lengths must match
        // whenever both sides are in range.
        let mut brute: Option<usize> = None;
        let mut frontier: Vec<Vec<usize>> =
            (0..inst.g.n_vertices()).map(|v| vec![v]).collect();
        'scan: for _ in 0..=9 {
            for path in &frontier {
                if verify_traversal_path(&inst, path, TraversalKind::Fvt) {
                    brute = Some(path.len() - 1);
                    break 'scan;
                }
            }
            frontier = frontier
                .iter()
                .flat_map(|path| {
                    let &v = path.last().unwrap();
                    inst.g.out_neighbors(v).iter().map(move |&w| {
                        let mut longer = path.clone();
                        longer.push(w);
                        longer
                    })
                })
                .collect();
        }

        match (&verdict, brute) {
            (PathVerdict::Yes(path), Some(edges)) => {
                assert!(verify_traversal_path(&inst, path, TraversalKind::Fvt));
                assert_eq!(path.len() - 1, edges);
            }
            (PathVerdict::Yes(path), None) => {
                assert!(verify_traversal_path(&inst, path, TraversalKind::Fvt));
                assert!(path.len() - 1 > 9);
            }
            (PathVerdict::No, None) => {}
            (bad, brute) => panic!("solver said {bad:?}, enumeration said {brute:?}"),
        }
    }
}

/// Every generator is exercised on random sources; names must stay distinct
/// because files and witness pullback address states by name, and each bundle
/// must survive serialization with its instance intact.
#[test]
fn generated_instances_round_trip_and_keep_names_distinct() {
    let mut rng = corpus::rng(17);
    let mut outputs = Vec::new();
    for _ in 0..10 {
        let n = rng.random_range(2..=4);
        let pdfa = corpus::random_partial_dfa(&mut rng, n, 2, 0.8);
        for variant in [CarefulVariant::Orz, CarefulVariant::Ore, CarefulVariant::CwOre] {
            if let Ok(output) = careful_to_constrained(&pdfa, variant) {
                outputs.push(output);
            }
        }
        let sizes = (rng.random_range(1..=3), rng.random_range(1..=3));
        let acceptors = [
            corpus::random_acceptor(&mut rng, sizes.0, 2),
            corpus::random_acceptor(&mut rng, sizes.1, 2),
        ];
        for variant in [
            FaiVariant::Orzp,
            FaiVariant::Ordp,
            FaiVariant::CwOrzp,
            FaiVariant::McF,
            FaiVariant::McG,
        ] {
            outputs.push(fai_to_constrained(&acceptors, variant).unwrap());
        }
        outputs.push(cnf_to_fvt(&corpus::random_cnf(&mut rng, 3, 3, 3)).unwrap());
    }
    for output in &outputs {
        let names: Vec<String> = match &output.instance {
            GeneratedInstance::Automaton { dfa, .. } => dfa.states().to_vec(),
            GeneratedInstance::Traversal(inst) => inst.g.vertex_names().to_vec(),
        };
        let distinct: BTreeSet<&String> = names.iter().collect();
        assert_eq!(distinct.len(), names.len());

        let bundle = BundleFile::from_output(output);
        let reread = BundleFile::from_json(&bundle.to_json()).unwrap();
        let restored = reread.output().unwrap().expect("bundles carry pullback data");
        assert_eq!(restored.instance, output.instance);
        assert_eq!(restored.pullback, output.pullback);
    }
}
