//! Breadth-first search over implicit product acceptors.
//!
//! A search node pairs the automaton configuration with formula-automaton
//! state, where the configuration is either the vector of current states of
//! all paths from the start set (paths mode) or the image of the start set
//! (sets mode). Nodes are expanded letters in alphabet order from a FIFO
//! queue, so the first witness found is minimal in length and, among words
//! of that length, lexicographically. The product is never materialized;
//! every node is built on demand and deduplicated.
//!
//! Formula states are consumed one position behind the configuration: a node
//! holds the state reached before reading the current position's labels, and
//! a single memoized step yields both the acceptance flag for ending here and
//! the continuation state.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use thiserror::Error;

use crate::automata::{Dfa, LetterId, StateId, StateSet, Verdict, Word};
use crate::ltlf::{eval_trace, nfa_of_formula, Formula, FormulaNfa, LtlfError, Trace};
use crate::traversal::{agrees, ConstraintSpec, RelationKind, TraversalError, Variant};
use crate::travgraph::{cs_orep_to_lvt, solve_lvt, PathVerdict};

/// Default bound on deduplicated product nodes per query.
pub const NODE_CAP: usize = 2_000_000;

/// The obligation-bit search packs two bits per pair into one word.
pub const VACUOUS_PAIR_CAP: usize = 32;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("start set must be non-empty")]
    EmptyStartSet,
    #[error("the vacuous search supports at most {VACUOUS_PAIR_CAP} pairs, got {0}")]
    TooManyPairs(usize),
    #[error(transparent)]
    Ltlf(#[from] LtlfError),
    #[error(transparent)]
    Traversal(#[from] TraversalError),
}

/// Whether the formula is read along every individual path or along the
/// power-set run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Paths,
    Sets,
}

/// One of the eight decision problems.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    ModelCheck {
        formula: Formula,
        mode: Mode,
        sync: bool,
    },
    Constrained {
        spec: ConstraintSpec,
        sync: bool,
    },
}

impl Problem {
    pub fn solve(&self, dfa: &Dfa) -> Result<Verdict, EngineError> {
        self.solve_report(dfa, None, NODE_CAP).map(|(v, _)| v)
    }

    pub fn solve_report(
        &self,
        dfa: &Dfa,
        s: Option<&StateSet>,
        cap: usize,
    ) -> Result<(Verdict, SearchStats), EngineError> {
        match self {
            Problem::ModelCheck {
                formula,
                mode,
                sync,
            } => model_check_report(dfa, formula, *mode, *sync, s, cap),
            Problem::Constrained { spec, sync } => constrained_sync_report(dfa, spec, *sync, cap),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchStats {
    /// Deduplicated nodes inserted into the frontier.
    pub explored: usize,
}

/// One search instantiation: a root node, letter successors, and the
/// acceptance test for the word leading to a node. `child` returns None to
/// prune branches that provably contain no accepting descendant.
trait SearchSpace {
    type Node: Clone + Eq + Hash;

    fn root(&self) -> Result<Self::Node, EngineError>;
    fn accepting(&self, node: &Self::Node) -> Result<bool, EngineError>;
    fn child(&self, node: &Self::Node, letter: LetterId) -> Result<Option<Self::Node>, EngineError>;
}

fn bfs<S: SearchSpace>(
    space: &S,
    n_letters: usize,
    cap: usize,
) -> Result<(Verdict, SearchStats), EngineError> {
    let root = space.root()?;
    let mut nodes = vec![root.clone()];
    let mut index: HashMap<S::Node, usize> = HashMap::from([(root, 0)]);
    let mut parent: Vec<(usize, LetterId)> = vec![(usize::MAX, 0)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if space.accepting(&nodes[i])? {
            let mut letters = Vec::new();
            let mut at = i;
            while parent[at].0 != usize::MAX {
                letters.push(parent[at].1);
                at = parent[at].0;
            }
            letters.reverse();
            let stats = SearchStats {
                explored: nodes.len(),
            };
            return Ok((Verdict::Yes(Word(letters)), stats));
        }
        for a in 0..n_letters {
            let Some(child) = space.child(&nodes[i], a)? else {
                continue;
            };
            if index.contains_key(&child) {
                continue;
            }
            if nodes.len() >= cap {
                return Ok((
                    Verdict::ResourceLimit,
                    SearchStats {
                        explored: nodes.len(),
                    },
                ));
            }
            index.insert(child.clone(), nodes.len());
            nodes.push(child);
            parent.push((i, a));
            queue.push_back(nodes.len() - 1);
        }
    }
    Ok((
        Verdict::No,
        SearchStats {
            explored: nodes.len(),
        },
    ))
}

/// Paths mode: one component per start state, deduplicated, each carrying
/// its own formula state. Identical components have identical futures.
struct PathsSpace<'a> {
    dfa: &'a Dfa,
    nfa: &'a FormulaNfa,
    starts: Vec<StateId>,
    state_masks: Vec<u64>,
    sync: bool,
}

impl SearchSpace for PathsSpace<'_> {
    type Node = Vec<(StateId, u32)>;

    fn root(&self) -> Result<Self::Node, EngineError> {
        let mut node: Vec<(StateId, u32)> = self
            .starts
            .iter()
            .map(|&r| (r, self.nfa.initial()))
            .collect();
        node.sort_unstable();
        node.dedup();
        Ok(node)
    }

    fn accepting(&self, node: &Self::Node) -> Result<bool, EngineError> {
        if self.sync && node.first().map(|c| c.0) != node.last().map(|c| c.0) {
            return Ok(false);
        }
        for &(q, f) in node {
            if !self.nfa.step(f, self.state_masks[q])?.accepting {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn child(&self, node: &Self::Node, letter: LetterId) -> Result<Option<Self::Node>, EngineError> {
        let mut next = Vec::with_capacity(node.len());
        for &(q, f) in node {
            let out = self.nfa.step(f, self.state_masks[q])?;
            if self.nfa.is_dead(out.next) {
                return Ok(None);
            }
            next.push((self.dfa.step(q, letter), out.next));
        }
        next.sort_unstable();
        next.dedup();
        Ok(Some(next))
    }
}

/// Sets mode: the image of the start set plus one formula state for the
/// power-set trace.
struct SetsSpace<'a> {
    dfa: &'a Dfa,
    nfa: &'a FormulaNfa,
    start: StateSet,
    state_masks: Vec<u64>,
    sync: bool,
}

impl SetsSpace<'_> {
    fn mask_of(&self, set: &StateSet) -> u64 {
        set.iter().map(|q| self.state_masks[q]).fold(0, |m, b| m | b)
    }
}

impl SearchSpace for SetsSpace<'_> {
    type Node = (StateSet, u32);

    fn root(&self) -> Result<Self::Node, EngineError> {
        Ok((self.start.clone(), self.nfa.initial()))
    }

    fn accepting(&self, node: &Self::Node) -> Result<bool, EngineError> {
        if self.sync && !node.0.is_singleton() {
            return Ok(false);
        }
        Ok(self.nfa.step(node.1, self.mask_of(&node.0))?.accepting)
    }

    fn child(&self, node: &Self::Node, letter: LetterId) -> Result<Option<Self::Node>, EngineError> {
        let out = self.nfa.step(node.1, self.mask_of(&node.0))?;
        if self.nfa.is_dead(out.next) {
            return Ok(None);
        }
        Ok(Some((self.dfa.step_set_letter(&node.0, letter), out.next)))
    }
}

/// The vacuous weak last-last reading on paths, decided directly. Each
/// component tracks two bits per pair: whether the second state was ever
/// visited, and whether the first state was visited since the last visit of
/// the second. A pair is violated at the end exactly when both bits are set.
struct VacuousSpace<'a> {
    dfa: &'a Dfa,
    starts: Vec<StateId>,
    set_pend: Vec<u64>,
    set_qv_clear_pend: Vec<(u64, u64)>,
    viol_even_bits: u64,
    sync: bool,
}

impl<'a> VacuousSpace<'a> {
    fn new(
        dfa: &'a Dfa,
        pairs: &[(StateId, StateId)],
        starts: Vec<StateId>,
        sync: bool,
    ) -> VacuousSpace<'a> {
        let n = dfa.n_states();
        let mut set_pend = vec![0u64; n];
        let mut set_qv_clear_pend = vec![(0u64, 0u64); n];
        for (i, &(p, q)) in pairs.iter().enumerate() {
            set_pend[p] |= 1 << (2 * i + 1);
            set_qv_clear_pend[q].0 |= 1 << (2 * i);
            set_qv_clear_pend[q].1 |= 1 << (2 * i + 1);
        }
        let viol_even_bits = if pairs.is_empty() {
            0
        } else {
            u64::MAX >> (64 - 2 * pairs.len()) & 0x5555_5555_5555_5555
        };
        VacuousSpace {
            dfa,
            starts,
            set_pend,
            set_qv_clear_pend,
            viol_even_bits,
            sync,
        }
    }

    fn visit(&self, bits: u64, q: StateId) -> u64 {
        let (set_qv, clear_pend) = self.set_qv_clear_pend[q];
        (bits | self.set_pend[q] | set_qv) & !clear_pend
    }

    fn violated(&self, bits: u64) -> bool {
        bits & (bits >> 1) & self.viol_even_bits != 0
    }
}

impl SearchSpace for VacuousSpace<'_> {
    type Node = Vec<(StateId, u64)>;

    fn root(&self) -> Result<Self::Node, EngineError> {
        let mut node: Vec<(StateId, u64)> = self
            .starts
            .iter()
            .map(|&r| (r, self.visit(0, r)))
            .collect();
        node.sort_unstable();
        node.dedup();
        Ok(node)
    }

    fn accepting(&self, node: &Self::Node) -> Result<bool, EngineError> {
        if self.sync && node.first().map(|c| c.0) != node.last().map(|c| c.0) {
            return Ok(false);
        }
        Ok(node.iter().all(|&(_, bits)| !self.violated(bits)))
    }

    fn child(&self, node: &Self::Node, letter: LetterId) -> Result<Option<Self::Node>, EngineError> {
        let mut next: Vec<(StateId, u64)> = node
            .iter()
            .map(|&(q, bits)| {
                let target = self.dfa.step(q, letter);
                (target, self.visit(bits, target))
            })
            .collect();
        next.sort_unstable();
        next.dedup();
        Ok(Some(next))
    }
}

fn state_masks(dfa: &Dfa, nfa: &FormulaNfa) -> Vec<u64> {
    (0..dfa.n_states())
        .map(|q| nfa.label_mask(std::iter::once(dfa.state_name(q))))
        .collect()
}

fn starts_of(dfa: &Dfa, s: Option<&StateSet>) -> Result<StateSet, EngineError> {
    let set = match s {
        Some(set) => set.clone(),
        None => StateSet::full(dfa.n_states()),
    };
    if set.is_empty() {
        return Err(EngineError::EmptyStartSet);
    }
    Ok(set)
}

/// The trace of the path from `r` under `w`; each position is labeled by the
/// state it sits on.
fn path_trace(dfa: &Dfa, r: StateId, w: &Word) -> Trace {
    Trace::from_names(
        &dfa.path_of(r, w)
            .iter()
            .map(|&q| vec![dfa.state_name(q)])
            .collect::<Vec<_>>()
            .iter()
            .map(|v| v.as_slice())
            .collect::<Vec<_>>(),
    )
}

/// The trace of the power-set run from `s` under `w`; each position is
/// labeled by all member states.
fn set_trace(dfa: &Dfa, s: &StateSet, w: &Word) -> Trace {
    let mut labels = Vec::with_capacity(w.len() + 1);
    let mut cur = s.clone();
    labels.push(cur.iter().map(|q| dfa.state_name(q).to_string()).collect());
    for &a in w.letters() {
        cur = dfa.step_set_letter(&cur, a);
        labels.push(cur.iter().map(|q| dfa.state_name(q).to_string()).collect());
    }
    Trace::new(labels).expect("set traces are non-empty")
}

fn verify_model_check(dfa: &Dfa, f: &Formula, mode: Mode, sync: bool, s: &StateSet, w: &Word) {
    let holds = match mode {
        Mode::Paths => s.iter().all(|r| eval_trace(f, &path_trace(dfa, r, w))),
        Mode::Sets => eval_trace(f, &set_trace(dfa, s, w)),
    };
    let synced = !sync || dfa.step_set(s, w).is_singleton();
    assert!(
        holds && synced,
        "internal error: witness {:?} failed independent re-verification",
        w.render(dfa.alphabet())
    );
}

/// Decides whether some word makes the formula hold along every path from
/// `S` (paths mode) or along the power-set run (sets mode), optionally also
/// requiring the word to merge `S` to a single state. `S` defaults to the
/// full state set. The witness is length-lexicographically minimal.
pub fn model_check(
    dfa: &Dfa,
    f: &Formula,
    mode: Mode,
    sync: bool,
    s: Option<&StateSet>,
) -> Result<Verdict, EngineError> {
    model_check_report(dfa, f, mode, sync, s, NODE_CAP).map(|(v, _)| v)
}

pub fn model_check_report(
    dfa: &Dfa,
    f: &Formula,
    mode: Mode,
    sync: bool,
    s: Option<&StateSet>,
    cap: usize,
) -> Result<(Verdict, SearchStats), EngineError> {
    let start = starts_of(dfa, s)?;
    let nfa = nfa_of_formula(f, dfa.states())?;
    let masks = state_masks(dfa, &nfa);
    let searched = match mode {
        Mode::Paths => bfs(
            &PathsSpace {
                dfa,
                nfa: &nfa,
                starts: start.iter().collect(),
                state_masks: masks,
                sync,
            },
            dfa.n_letters(),
            cap,
        ),
        Mode::Sets => bfs(
            &SetsSpace {
                dfa,
                nfa: &nfa,
                start: start.clone(),
                state_masks: masks,
                sync,
            },
            dfa.n_letters(),
            cap,
        ),
    };
    let (verdict, stats) = soften_state_cap(searched)?;
    if let Verdict::Yes(w) = &verdict {
        verify_model_check(dfa, f, mode, sync, &start, w);
    }
    Ok((verdict, stats))
}

/// A formula-state explosion is a resource outcome, not an input error.
fn soften_state_cap(
    r: Result<(Verdict, SearchStats), EngineError>,
) -> Result<(Verdict, SearchStats), EngineError> {
    match r {
        Err(EngineError::Ltlf(LtlfError::StateCap(_))) => {
            Ok((Verdict::ResourceLimit, SearchStats::default()))
        }
        other => other,
    }
}

/// Decides whether some word realizes every pair of the constraint,
/// optionally also synchronizing the full state set. Literal readings go
/// through the formula translation; the vacuous reading runs the direct
/// obligation-bit search.
pub fn constrained_sync(
    dfa: &Dfa,
    spec: &ConstraintSpec,
    require_sync: bool,
) -> Result<Verdict, EngineError> {
    constrained_sync_report(dfa, spec, require_sync, NODE_CAP).map(|(v, _)| v)
}

pub fn constrained_sync_report(
    dfa: &Dfa,
    spec: &ConstraintSpec,
    require_sync: bool,
    cap: usize,
) -> Result<(Verdict, SearchStats), EngineError> {
    let full = StateSet::full(dfa.n_states());
    let vacuous = spec.kind == RelationKind::LeLlPaths && spec.variant == Variant::Vacuous;
    let (verdict, stats) = if vacuous {
        if spec.pairs.len() > VACUOUS_PAIR_CAP {
            return Err(EngineError::TooManyPairs(spec.pairs.len()));
        }
        let space = VacuousSpace::new(dfa, &spec.pairs, full.iter().collect(), require_sync);
        bfs(&space, dfa.n_letters(), cap)?
    } else {
        let f = crate::traversal::constraint_to_formula(spec, dfa.states())?;
        let mode = if spec.kind.on_paths() {
            Mode::Paths
        } else {
            Mode::Sets
        };
        soften_state_cap(model_check_report(dfa, &f, mode, require_sync, None, cap))?.clone()
    };
    if let Verdict::Yes(w) = &verdict {
        let ok = agrees(spec, dfa, w)? && (!require_sync || dfa.step_set(&full, w).is_singleton());
        assert!(
            ok,
            "internal error: witness {:?} failed constraint re-verification",
            w.render(dfa.alphabet())
        );
    }
    Ok((verdict, stats))
}

/// The polynomial certificate route for strict last-last constraints on
/// paths with synchronization: restrict to the unique sink component, solve
/// Last-Visits Traversal there, and glue a synchronizing word, a transfer
/// word, and the path labels. The composed witness re-verifies before it is
/// returned; it is valid but not necessarily shortest.
pub fn solve_cs_orep_np(
    dfa: &Dfa,
    pairs: &[(StateId, StateId)],
) -> Result<Verdict, EngineError> {
    let spec = ConstraintSpec::new(
        RelationKind::LtLlPaths,
        pairs.to_vec(),
        Variant::Literal,
        dfa.states(),
    )?;
    let Some((inst, f)) = cs_orep_to_lvt(dfa, pairs) else {
        return Ok(Verdict::No);
    };
    let path = match solve_lvt(&inst) {
        PathVerdict::Yes(path) => path,
        PathVerdict::No => return Ok(Verdict::No),
        PathVerdict::ResourceLimit => return Ok(Verdict::ResourceLimit),
    };
    let global: Vec<StateId> = path
        .iter()
        .map(|&v| {
            dfa.state_index(inst.g.vertex_name(v))
                .expect("component vertices are named after states")
        })
        .collect();

    let Verdict::Yes(w1) = dfa.synchronizing_word(crate::automata::SyncStrategy::Greedy) else {
        unreachable!("the restriction step already certified synchronizability");
    };
    let Verdict::Yes(w2) = dfa.word_between(f, global[0]) else {
        unreachable!("the anchor and the path stay inside one strongly connected sink");
    };
    let mut letters = Vec::new();
    letters.extend_from_slice(w1.letters());
    letters.extend_from_slice(w2.letters());
    for edge in global.windows(2) {
        let a = (0..dfa.n_letters())
            .find(|&a| dfa.step(edge[0], a) == edge[1])
            .expect("instance edges come from transitions");
        letters.push(a);
    }
    let w = Word(letters);

    let full = StateSet::full(dfa.n_states());
    let ok = agrees(&spec, dfa, &w)? && dfa.step_set(&full, &w).is_singleton();
    assert!(
        ok,
        "internal error: composed witness {:?} failed re-verification",
        w.render(dfa.alphabet())
    );
    Ok(Verdict::Yes(w))
}
