//! Instance generators that map three source problems onto the decision
//! problems served by the engine and the traversal solver, keeping enough
//! metadata to pull a witness of the generated instance back to the source
//! and re-verify it there.
//!
//! The three routes: careful synchronization of a partial DFA becomes a
//! constrained synchronization instance, nonemptiness of an intersection of
//! acceptor languages becomes a path-order instance over the disjoint union
//! of the acceptors, and CNF satisfiability becomes a first-visit traversal
//! on a digraph of variable and clause gadgets. Generated names never
//! collide with source names; every generated automaton is complete.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{
    sink_sccs, Acceptor, AutomataError, AutomatonFile, Dfa, LetterId, PartialDfa, StateId,
    StateSet, Word,
};
use crate::engine::{Mode, Problem};
use crate::ltlf::{parse_formula, print_formula, Formula, LtlfError};
use crate::traversal::{ConstraintFile, ConstraintSpec, RelationKind, TraversalError, Variant};
use crate::travgraph::{Digraph, DigraphFile, TravGraphError, TraversalInstance};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("not carefully synchronizable: multiple sink components")]
    MultipleSinkComponents,
    #[error("acceptors must share one alphabet")]
    AlphabetMismatch,
    #[error("at least one acceptor is required")]
    NoAcceptors,
    #[error("unknown reduction variant: {0}")]
    UnknownVariant(String),
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("a formula needs at least one variable and one clause")]
    EmptyCnf,
    #[error("literal {0} is out of range for {1} variables")]
    LiteralOutOfRange(i32, usize),
    #[error("clause {0} contains a literal together with its negation")]
    ContradictoryClause(usize),
    #[error("malformed DIMACS input: {0}")]
    BadDimacs(String),
    #[error("malformed instance bundle: {0}")]
    BadBundle(String),
    #[error("witness failed source re-verification: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Ltlf(#[from] LtlfError),
    #[error(transparent)]
    Traversal(#[from] TraversalError),
    #[error(transparent)]
    TravGraph(#[from] TravGraphError),
}

/// Gadget families for the careful-synchronization route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarefulVariant {
    /// Weak set order on (error, marker); target is synchronization.
    Orz,
    /// Strict set order; hat states re-inject their base at position one.
    Ore,
    /// Strict set order plus a gate letter; synchronization is not required.
    CwOre,
}

impl CarefulVariant {
    pub const ALL: [CarefulVariant; 3] =
        [CarefulVariant::Orz, CarefulVariant::Ore, CarefulVariant::CwOre];

    pub fn id(self) -> &'static str {
        match self {
            CarefulVariant::Orz => "orz",
            CarefulVariant::Ore => "ore",
            CarefulVariant::CwOre => "cw-ore",
        }
    }

    pub fn parse(id: &str) -> Result<Self, ReductionError> {
        Self::ALL
            .into_iter()
            .find(|v| v.id() == id)
            .ok_or_else(|| ReductionError::UnknownVariant(id.to_string()))
    }
}

/// Constraint or formula emitted for the intersection route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaiVariant {
    /// Weak path order (start, accept) per acceptor, with synchronization.
    Orzp,
    /// Last-before-first path order (reject, start), with synchronization.
    Ordp,
    /// Weak path order plus (state, final) pairs; no synchronization.
    CwOrzp,
    /// Reachability formula over the indicator states, path mode.
    McF,
    /// Safety formula over the reject indicator, path mode with
    /// synchronization.
    McG,
}

impl FaiVariant {
    pub const ALL: [FaiVariant; 5] = [
        FaiVariant::Orzp,
        FaiVariant::Ordp,
        FaiVariant::CwOrzp,
        FaiVariant::McF,
        FaiVariant::McG,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FaiVariant::Orzp => "orzp",
            FaiVariant::Ordp => "ordp",
            FaiVariant::CwOrzp => "cw-orzp",
            FaiVariant::McF => "mc-F-fixture",
            FaiVariant::McG => "mc-G-fixture",
        }
    }

    pub fn parse(id: &str) -> Result<Self, ReductionError> {
        Self::ALL
            .into_iter()
            .find(|v| v.id() == id)
            .ok_or_else(|| ReductionError::UnknownVariant(id.to_string()))
    }
}

/// Returns `desired` when free, otherwise the first free `desired_0`,
/// `desired_1`, .... The returned name is recorded in `taken`.
fn fresh_name(desired: &str, taken: &mut HashSet<String>) -> String {
    if taken.insert(desired.to_string()) {
        return desired.to_string();
    }
    for i in 0.. {
        let candidate = format!("{desired}_{i}");
        if taken.insert(candidate.clone()) {
            return candidate;
        }
    }
    unreachable!("the candidate space is unbounded")
}

/// FNV-1a over a canonical source serialization; stable across runs.
fn digest(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// A CNF formula over variables `1..=num_vars`. No clause holds a literal
/// together with its negation; duplicate literals within a clause are
/// dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, ReductionError> {
        let mut cleaned = Vec::with_capacity(clauses.len());
        for (j, clause) in clauses.into_iter().enumerate() {
            let mut kept: Vec<i32> = Vec::with_capacity(clause.len());
            for lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(ReductionError::LiteralOutOfRange(lit, num_vars));
                }
                if kept.contains(&-lit) {
                    return Err(ReductionError::ContradictoryClause(j + 1));
                }
                if !kept.contains(&lit) {
                    kept.push(lit);
                }
            }
            cleaned.push(kept);
        }
        Ok(CnfFormula {
            num_vars,
            clauses: cleaned,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// True when every clause holds a literal satisfied by `assignment`
    /// (indexed by variable minus one).
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.num_vars, "one value per variable");
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let v = lit.unsigned_abs() as usize - 1;
                if lit > 0 {
                    assignment[v]
                } else {
                    !assignment[v]
                }
            })
        })
    }

    /// Parses DIMACS CNF: a `p cnf <vars> <clauses>` header followed by
    /// zero-terminated clauses. Comment lines start with `c`; clauses may
    /// span lines.
    pub fn parse_dimacs(text: &str) -> Result<Self, ReductionError> {
        let mut tokens = text
            .lines()
            .filter(|line| !line.trim_start().starts_with('c'))
            .flat_map(str::split_whitespace);
        if tokens.next() != Some("p") || tokens.next() != Some("cnf") {
            return Err(ReductionError::BadDimacs("missing 'p cnf' header".into()));
        }
        let num_vars: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ReductionError::BadDimacs("unreadable variable count".into()))?;
        let num_clauses: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ReductionError::BadDimacs("unreadable clause count".into()))?;
        let mut clauses = Vec::with_capacity(num_clauses);
        let mut current: Vec<i32> = Vec::new();
        for tok in tokens {
            let lit: i32 = tok
                .parse()
                .map_err(|_| ReductionError::BadDimacs(format!("unreadable literal '{tok}'")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
        if !current.is_empty() {
            return Err(ReductionError::BadDimacs("unterminated clause".into()));
        }
        if clauses.len() != num_clauses {
            return Err(ReductionError::BadDimacs(format!(
                "header promises {num_clauses} clauses, found {}",
                clauses.len()
            )));
        }
        CnfFormula::new(num_vars, clauses)
    }

    pub fn render_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

/// A generated decision-problem instance.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratedInstance {
    Automaton { dfa: Dfa, problem: Problem },
    Traversal(TraversalInstance),
}

impl GeneratedInstance {
    /// Bundle identifier: `cs`, `cw`, `mc-paths`, `mc-paths-sync`,
    /// `mc-sets`, `mc-sets-sync`, or `fvt`.
    pub fn problem_id(&self) -> &'static str {
        match self {
            GeneratedInstance::Automaton { problem, .. } => match problem {
                Problem::Constrained { sync: true, .. } => "cs",
                Problem::Constrained { sync: false, .. } => "cw",
                Problem::ModelCheck {
                    mode: Mode::Paths,
                    sync,
                    ..
                } => {
                    if *sync {
                        "mc-paths-sync"
                    } else {
                        "mc-paths"
                    }
                }
                Problem::ModelCheck {
                    mode: Mode::Sets,
                    sync,
                    ..
                } => {
                    if *sync {
                        "mc-sets-sync"
                    } else {
                        "mc-sets"
                    }
                }
            },
            GeneratedInstance::Traversal(_) => "fvt",
        }
    }
}

/// Metadata for mapping a generated-instance witness back to its source.
#[derive(Clone, Debug, PartialEq)]
pub enum PullbackInfo {
    Careful {
        source: PartialDfa,
        variant: CarefulVariant,
        /// State absorbing every rerouted undefined transition.
        error_state: String,
        /// Reference state paired against the error state.
        marker_state: String,
        /// Letter feeding the gate chain; present for the gate variant only.
        gate_letter: Option<String>,
    },
    Intersection {
        sources: Vec<Acceptor>,
        variant: FaiVariant,
        /// Letter sending every acceptor state to its initial state.
        reset_letter: String,
        /// Letter routing final states to the accept indicator and the rest
        /// to the reject indicator.
        test_letter: String,
        accept_state: String,
        reject_state: String,
        final_state: String,
    },
    Assignment {
        source: CnfFormula,
        /// `zero_vertices[i]` / `one_vertices[i]`: whichever is visited
        /// first fixes variable `i + 1` to 0 / 1.
        zero_vertices: Vec<usize>,
        one_vertices: Vec<usize>,
    },
}

/// A generated instance together with its source fingerprint and pullback
/// metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOutput {
    pub instance: GeneratedInstance,
    pub source_digest: String,
    pub pullback: PullbackInfo,
}

/// Builds a complete DFA whose constrained-synchronization answer matches
/// careful synchronizability of `source`.
///
/// Undefined transitions are rerouted to a fresh error state. A fresh marker
/// state has no incoming transitions from source states; the error and
/// marker rows copy the row of the first source state. `Ore` adds one hat
/// state per source state and for the marker, feeding its base under every
/// letter, so the marker is re-entered exactly at position one and the order
/// can be strict. `CwOre` adds a gate letter and a two-state gate chain
/// entered only from the first state of the unique sink component of
/// `source`; every other state moves to the error state under the gate
/// letter, and the target problem drops the synchronization requirement.
pub fn careful_to_constrained(
    source: &PartialDfa,
    variant: CarefulVariant,
) -> Result<ReductionOutput, ReductionError> {
    let n = source.n_states();
    let k = source.n_letters();
    let with_hats = variant != CarefulVariant::Orz;
    let with_gate = variant == CarefulVariant::CwOre;

    let mut taken: HashSet<String> = source.states().iter().cloned().collect();
    let error_state = fresh_name("q_err", &mut taken);
    let marker_state = fresh_name("r", &mut taken);
    let mut names: Vec<String> = source.states().to_vec();
    names.push(error_state.clone());
    names.push(marker_state.clone());
    let err = n;
    let marker = n + 1;

    let hat_base = names.len();
    if with_hats {
        for i in 0..=n {
            let base = if i < n {
                source.state_name(i)
            } else {
                marker_state.as_str()
            };
            names.push(fresh_name(&format!("{base}_hat"), &mut taken));
        }
    }
    let (gate1, gate2) = if with_gate {
        let g1 = names.len();
        names.push(fresh_name("q_gate1", &mut taken));
        names.push(fresh_name("q_gate2", &mut taken));
        (g1, g1 + 1)
    } else {
        (usize::MAX, usize::MAX)
    };

    let mut letters: Vec<String> = source.alphabet().to_vec();
    let gate_letter = if with_gate {
        let mut taken_letters: HashSet<String> = letters.iter().cloned().collect();
        let c = fresh_name("c", &mut taken_letters);
        letters.push(c.clone());
        Some(c)
    } else {
        None
    };

    let anchor = if with_gate {
        let sinks = sink_sccs(&source.underlying_adjacency());
        if sinks.len() != 1 {
            return Err(ReductionError::MultipleSinkComponents);
        }
        sinks[0].iter().copied().min().expect("components are non-empty")
    } else {
        0
    };

    let total = names.len();
    let reroute = |t: Option<StateId>| t.unwrap_or(err);
    let mut delta: Vec<Vec<StateId>> = vec![vec![0; letters.len()]; total];
    for q in 0..n {
        for a in 0..k {
            delta[q][a] = reroute(source.step(q, a));
        }
    }
    for a in 0..k {
        let first_row = reroute(source.step(0, a));
        delta[err][a] = first_row;
        delta[marker][a] = first_row;
    }
    if with_hats {
        for i in 0..=n {
            let base = if i < n { i } else { marker };
            for a in 0..k {
                delta[hat_base + i][a] = base;
            }
        }
    }
    if with_gate {
        for a in 0..k {
            delta[gate1][a] = gate1;
            delta[gate2][a] = gate2;
        }
        for (q, row) in delta.iter_mut().enumerate() {
            row[k] = if q == anchor {
                gate1
            } else if q == gate1 || q == gate2 {
                gate2
            } else {
                err
            };
        }
    }

    let dfa = Dfa::new(names, letters, delta)?;
    let mut pairs = vec![(err, marker)];
    if with_gate {
        pairs.push((gate1, gate2));
    }
    let kind = if with_hats {
        RelationKind::LtLlSets
    } else {
        RelationKind::LeLlSets
    };
    let spec = ConstraintSpec::new(kind, pairs, Variant::Literal, dfa.states())?;
    let source_digest = digest(&AutomatonFile::from_partial(source).to_json());
    Ok(ReductionOutput {
        instance: GeneratedInstance::Automaton {
            dfa,
            problem: Problem::Constrained {
                spec,
                sync: !with_gate,
            },
        },
        source_digest,
        pullback: PullbackInfo::Careful {
            source: source.clone(),
            variant,
            error_state,
            marker_state,
            gate_letter,
        },
    })
}

/// Builds a complete DFA over the shared alphabet plus fresh reset and test
/// letters whose answer matches nonemptiness of the intersection of the
/// acceptor languages.
///
/// States are the disjoint union of the acceptor states, each name suffixed
/// with its 1-based acceptor index, followed by accept, reject, and final
/// indicators. The indicators self-loop on the shared alphabet and on reset;
/// the test letter routes final acceptor states to the accept indicator, the
/// rest to the reject indicator, and every indicator to the final one.
/// Source letters named like the added ones are suffixed with `_0`.
pub fn fai_to_constrained(
    sources: &[Acceptor],
    variant: FaiVariant,
) -> Result<ReductionOutput, ReductionError> {
    let Some(first) = sources.first() else {
        return Err(ReductionError::NoAcceptors);
    };
    if sources
        .iter()
        .any(|acc| acc.dfa.alphabet() != first.dfa.alphabet())
    {
        return Err(ReductionError::AlphabetMismatch);
    }
    let k = first.dfa.n_letters();

    let mut taken_letters: HashSet<String> = HashSet::new();
    let mut letters: Vec<String> = Vec::new();
    for name in first.dfa.alphabet() {
        let desired = if name == "r" || name == "t" {
            format!("{name}_0")
        } else {
            name.clone()
        };
        letters.push(fresh_name(&desired, &mut taken_letters));
    }
    let reset_letter = fresh_name("r", &mut taken_letters);
    let test_letter = fresh_name("t", &mut taken_letters);
    letters.push(reset_letter.clone());
    letters.push(test_letter.clone());
    let reset = k;
    let test = k + 1;

    let mut taken: HashSet<String> = HashSet::new();
    let mut names: Vec<String> = Vec::new();
    let mut offsets: Vec<usize> = Vec::new();
    for (i, acc) in sources.iter().enumerate() {
        offsets.push(names.len());
        for q in acc.dfa.states() {
            names.push(fresh_name(&format!("{q}_{}", i + 1), &mut taken));
        }
    }
    let accept = names.len();
    names.push(fresh_name("y", &mut taken));
    let reject = names.len();
    names.push(fresh_name("n", &mut taken));
    let fin = names.len();
    names.push(fresh_name("f", &mut taken));
    let accept_state = names[accept].clone();
    let reject_state = names[reject].clone();
    let final_state = names[fin].clone();

    let total = names.len();
    let mut delta: Vec<Vec<StateId>> = vec![vec![0; letters.len()]; total];
    for (i, acc) in sources.iter().enumerate() {
        let off = offsets[i];
        for q in 0..acc.dfa.n_states() {
            for a in 0..k {
                delta[off + q][a] = off + acc.dfa.step(q, a);
            }
            delta[off + q][reset] = off + acc.initial;
            delta[off + q][test] = if acc.finals.contains(q) { accept } else { reject };
        }
    }
    for ind in [accept, reject, fin] {
        for a in 0..k {
            delta[ind][a] = ind;
        }
        delta[ind][reset] = ind;
        delta[ind][test] = fin;
    }

    let dfa = Dfa::new(names, letters, delta)?;
    let starts: Vec<StateId> = sources
        .iter()
        .enumerate()
        .map(|(i, acc)| offsets[i] + acc.initial)
        .collect();

    let problem = match variant {
        FaiVariant::Orzp => Problem::Constrained {
            spec: ConstraintSpec::new(
                RelationKind::LeLlPaths,
                starts.iter().map(|&s| (s, accept)).collect(),
                Variant::Literal,
                dfa.states(),
            )?,
            sync: true,
        },
        FaiVariant::Ordp => Problem::Constrained {
            spec: ConstraintSpec::new(
                RelationKind::LtLfPaths,
                starts.iter().map(|&s| (reject, s)).collect(),
                Variant::Literal,
                dfa.states(),
            )?,
            sync: true,
        },
        FaiVariant::CwOrzp => {
            let mut pairs: Vec<(StateId, StateId)> =
                starts.iter().map(|&s| (s, accept)).collect();
            pairs.extend((0..total).filter(|&p| p != fin).map(|p| (p, fin)));
            // The pairs against the final indicator constrain paths only
            // under the literal reading, so the variant is pinned here.
            Problem::Constrained {
                spec: ConstraintSpec::new(
                    RelationKind::LeLlPaths,
                    pairs,
                    Variant::Literal,
                    dfa.states(),
                )?,
                sync: false,
            }
        }
        FaiVariant::McF => Problem::ModelCheck {
            formula: Formula::and(
                Formula::finally(Formula::atom(&final_state)),
                Formula::implies(
                    Formula::and(
                        Formula::not(Formula::atom(&reject_state)),
                        Formula::not(Formula::atom(&final_state)),
                    ),
                    Formula::finally(Formula::atom(&accept_state)),
                ),
            ),
            mode: Mode::Paths,
            sync: false,
        },
        FaiVariant::McG => Problem::ModelCheck {
            formula: Formula::implies(
                Formula::not(Formula::atom(&reject_state)),
                Formula::globally(Formula::not(Formula::atom(&reject_state))),
            ),
            mode: Mode::Paths,
            sync: true,
        },
    };

    let source_digest = digest(
        &sources
            .iter()
            .map(|acc| AutomatonFile::from_acceptor(acc).to_json())
            .collect::<Vec<_>>()
            .join("\n"),
    );
    Ok(ReductionOutput {
        instance: GeneratedInstance::Automaton { dfa, problem },
        source_digest,
        pullback: PullbackInfo::Intersection {
            sources: sources.to_vec(),
            variant,
            reset_letter,
            test_letter,
            accept_state,
            reject_state,
            final_state,
        },
    })
}

/// Builds a strongly connected digraph whose first-visit traversal answer
/// matches satisfiability of `cnf`.
///
/// Variable `i` contributes a chooser `xi'` fanning out to `xi_0` and
/// `xi_1`, both of which continue to the next chooser; clause `j`
/// contributes a chooser `cj'` fanning out to one vertex `cj_i` per literal
/// on variable `i`, each continuing to the next clause. Two closing
/// vertices `f1`, `f2` lead back to the first chooser. Each literal pair
/// demands that the matching variable branch is visited before the clause
/// vertex; the two closing pairs force a full circuit.
pub fn cnf_to_fvt(cnf: &CnfFormula) -> Result<ReductionOutput, ReductionError> {
    let n = cnf.num_vars();
    let m = cnf.clauses().len();
    if n == 0 || m == 0 {
        return Err(ReductionError::EmptyCnf);
    }
    for (j, clause) in cnf.clauses().iter().enumerate() {
        if clause.is_empty() {
            return Err(ReductionError::EmptyClause(j + 1));
        }
    }

    let mut names: Vec<String> = Vec::new();
    let mut chooser = Vec::with_capacity(n);
    let mut zero_vertices = Vec::with_capacity(n);
    let mut one_vertices = Vec::with_capacity(n);
    for i in 1..=n {
        chooser.push(names.len());
        names.push(format!("x{i}'"));
        zero_vertices.push(names.len());
        names.push(format!("x{i}_0"));
        one_vertices.push(names.len());
        names.push(format!("x{i}_1"));
    }
    let mut clause_chooser = Vec::with_capacity(m);
    let mut literal_vertex: Vec<Vec<usize>> = Vec::with_capacity(m);
    for (j0, clause) in cnf.clauses().iter().enumerate() {
        let j = j0 + 1;
        clause_chooser.push(names.len());
        names.push(format!("c{j}'"));
        let mut per_literal = Vec::with_capacity(clause.len());
        for lit in clause {
            let i = lit.unsigned_abs();
            per_literal.push(names.len());
            names.push(format!("c{j}_{i}"));
        }
        literal_vertex.push(per_literal);
    }
    let f1 = names.len();
    names.push("f1".to_string());
    let f2 = names.len();
    names.push("f2".to_string());

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let next = if i + 1 < n {
            chooser[i + 1]
        } else {
            clause_chooser[0]
        };
        edges.push((chooser[i], zero_vertices[i]));
        edges.push((chooser[i], one_vertices[i]));
        edges.push((zero_vertices[i], next));
        edges.push((one_vertices[i], next));
    }
    for j in 0..m {
        let next = if j + 1 < m { clause_chooser[j + 1] } else { f1 };
        for &lv in &literal_vertex[j] {
            edges.push((clause_chooser[j], lv));
            edges.push((lv, next));
        }
    }
    edges.push((f1, f2));
    edges.push((f2, chooser[0]));

    let g = Digraph::new(names, &edges)?;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (j, clause) in cnf.clauses().iter().enumerate() {
        for (pos, &lit) in clause.iter().enumerate() {
            let i = lit.unsigned_abs() as usize - 1;
            let branch = if lit > 0 {
                one_vertices[i]
            } else {
                zero_vertices[i]
            };
            pairs.push((branch, literal_vertex[j][pos]));
        }
    }
    pairs.push((chooser[0], f1));
    pairs.push((f1, f2));

    let instance = TraversalInstance::new(g, pairs, Vec::new())?;
    let source_digest = digest(&cnf.render_dimacs());
    Ok(ReductionOutput {
        instance: GeneratedInstance::Traversal(instance),
        source_digest,
        pullback: PullbackInfo::Assignment {
            source: cnf.clone(),
            zero_vertices,
            one_vertices,
        },
    })
}

/// A witness of a generated instance, as produced by the engine or the
/// traversal solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratedWitness {
    Word(Word),
    Path(Vec<usize>),
}

/// A witness mapped back to the source problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceWitness {
    /// A word over the source alphabet.
    Word(Word),
    /// One boolean per variable, in variable order.
    Assignment(Vec<bool>),
}

/// Maps a witness of the generated instance back to the source problem and
/// re-verifies it there. A failed re-check means the witness or the
/// generator is wrong; it is reported as an error, never repaired.
pub fn pullback_witness(
    out: &ReductionOutput,
    witness: &GeneratedWitness,
) -> Result<SourceWitness, ReductionError> {
    match (&out.pullback, witness) {
        (
            PullbackInfo::Careful {
                source, variant, ..
            },
            GeneratedWitness::Word(w),
        ) => {
            let k = source.n_letters();
            // The gate letter is the only generated letter and sorts after
            // the source alphabet, so the careful part is the prefix below k.
            let letters: Vec<LetterId> = match variant {
                CarefulVariant::CwOre => {
                    w.letters().iter().copied().take_while(|&a| a < k).collect()
                }
                _ => w.letters().to_vec(),
            };
            let word = Word(letters);
            let full = StateSet::full(source.n_states());
            match source.step_set(&full, &word) {
                Some(image) if image.is_singleton() => Ok(SourceWitness::Word(word)),
                _ => Err(ReductionError::VerificationFailed(
                    "pulled-back word does not carefully synchronize the source".into(),
                )),
            }
        }
        (PullbackInfo::Intersection { sources, .. }, GeneratedWitness::Word(w)) => {
            let k = sources[0].dfa.n_letters();
            let upto = w
                .letters()
                .iter()
                .position(|&a| a == k + 1)
                .unwrap_or(w.len());
            let prefix = &w.letters()[..upto];
            let from = prefix
                .iter()
                .rposition(|&a| a == k)
                .map_or(0, |p| p + 1);
            let shared: Vec<LetterId> = prefix[from..].to_vec();
            if shared.iter().any(|&a| a >= k) {
                return Err(ReductionError::VerificationFailed(
                    "pulled-back segment contains generated letters".into(),
                ));
            }
            let word = Word(shared);
            if sources.iter().all(|acc| acc.accepts(&word)) {
                Ok(SourceWitness::Word(word))
            } else {
                Err(ReductionError::VerificationFailed(
                    "pulled-back word is rejected by some source acceptor".into(),
                ))
            }
        }
        (
            PullbackInfo::Assignment {
                source,
                zero_vertices,
                one_vertices,
            },
            GeneratedWitness::Path(path),
        ) => {
            let first_of = |v: usize| path.iter().position(|&x| x == v);
            let mut assignment = Vec::with_capacity(source.num_vars());
            for i in 0..source.num_vars() {
                let zero = first_of(zero_vertices[i]);
                let one = first_of(one_vertices[i]);
                let value = match (zero, one) {
                    (Some(z), Some(o)) => o < z,
                    (None, Some(_)) => true,
                    _ => false,
                };
                assignment.push(value);
            }
            if source.satisfied_by(&assignment) {
                Ok(SourceWitness::Assignment(assignment))
            } else {
                Err(ReductionError::VerificationFailed(
                    "pulled-back assignment does not satisfy the source formula".into(),
                ))
            }
        }
        _ => Err(ReductionError::VerificationFailed(
            "witness shape does not match the generated instance".into(),
        )),
    }
}

/// Pullback metadata as stored in instance bundles.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PullbackFile {
    Careful {
        variant: String,
        source: AutomatonFile,
        error_state: String,
        marker_state: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gate_letter: Option<String>,
    },
    Intersection {
        variant: String,
        sources: Vec<AutomatonFile>,
        reset_letter: String,
        test_letter: String,
        accept_state: String,
        reject_state: String,
        final_state: String,
    },
    Assignment {
        dimacs: String,
        zero_vertices: Vec<String>,
        one_vertices: Vec<String>,
    },
}

/// On-disk instance bundle: a problem id, the instance, and optional
/// pullback metadata. Written by the generators and accepted anywhere an
/// instance is read.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleFile {
    pub problem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dfa: Option<AutomatonFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digraph: Option<DigraphFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pullback: Option<PullbackFile>,
}

impl BundleFile {
    pub fn from_output(out: &ReductionOutput) -> BundleFile {
        let mut bundle = BundleFile {
            problem: out.instance.problem_id().to_string(),
            dfa: None,
            digraph: None,
            constraint: None,
            formula: None,
            source_digest: Some(out.source_digest.clone()),
            pullback: None,
        };
        match &out.instance {
            GeneratedInstance::Automaton { dfa, problem } => {
                bundle.dfa = Some(AutomatonFile::from_dfa(dfa));
                match problem {
                    Problem::Constrained { spec, .. } => {
                        bundle.constraint = Some(ConstraintFile::from_spec(spec, dfa));
                    }
                    Problem::ModelCheck { formula, .. } => {
                        bundle.formula = Some(print_formula(formula));
                    }
                }
            }
            GeneratedInstance::Traversal(inst) => {
                bundle.digraph = Some(DigraphFile::from_instance(inst));
            }
        }
        bundle.pullback = Some(match &out.pullback {
            PullbackInfo::Careful {
                source,
                variant,
                error_state,
                marker_state,
                gate_letter,
            } => PullbackFile::Careful {
                variant: variant.id().to_string(),
                source: AutomatonFile::from_partial(source),
                error_state: error_state.clone(),
                marker_state: marker_state.clone(),
                gate_letter: gate_letter.clone(),
            },
            PullbackInfo::Intersection {
                sources,
                variant,
                reset_letter,
                test_letter,
                accept_state,
                reject_state,
                final_state,
            } => PullbackFile::Intersection {
                variant: variant.id().to_string(),
                sources: sources.iter().map(AutomatonFile::from_acceptor).collect(),
                reset_letter: reset_letter.clone(),
                test_letter: test_letter.clone(),
                accept_state: accept_state.clone(),
                reject_state: reject_state.clone(),
                final_state: final_state.clone(),
            },
            PullbackInfo::Assignment {
                source,
                zero_vertices,
                one_vertices,
            } => {
                let GeneratedInstance::Traversal(inst) = &out.instance else {
                    unreachable!("assignment pullbacks come from traversal instances")
                };
                let to_names = |ids: &[usize]| {
                    ids.iter()
                        .map(|&v| inst.g.vertex_name(v).to_string())
                        .collect()
                };
                PullbackFile::Assignment {
                    dimacs: source.render_dimacs(),
                    zero_vertices: to_names(zero_vertices),
                    one_vertices: to_names(one_vertices),
                }
            }
        });
        bundle
    }

    /// Decodes the generated instance; the problem id selects the shape.
    pub fn instance(&self) -> Result<GeneratedInstance, ReductionError> {
        match self.problem.as_str() {
            "cs" | "cw" => {
                let dfa = self.require_dfa()?;
                let constraint = self
                    .constraint
                    .as_ref()
                    .ok_or_else(|| ReductionError::BadBundle("missing constraint".into()))?;
                let spec = constraint.to_spec(&dfa)?;
                Ok(GeneratedInstance::Automaton {
                    problem: Problem::Constrained {
                        spec,
                        sync: self.problem == "cs",
                    },
                    dfa,
                })
            }
            "mc-paths" | "mc-paths-sync" | "mc-sets" | "mc-sets-sync" => {
                let dfa = self.require_dfa()?;
                let text = self
                    .formula
                    .as_ref()
                    .ok_or_else(|| ReductionError::BadBundle("missing formula".into()))?;
                let formula = parse_formula(text)?;
                let mode = if self.problem.starts_with("mc-paths") {
                    Mode::Paths
                } else {
                    Mode::Sets
                };
                Ok(GeneratedInstance::Automaton {
                    problem: Problem::ModelCheck {
                        formula,
                        mode,
                        sync: self.problem.ends_with("-sync"),
                    },
                    dfa,
                })
            }
            "fvt" | "lvt" => {
                let digraph = self
                    .digraph
                    .as_ref()
                    .ok_or_else(|| ReductionError::BadBundle("missing digraph".into()))?;
                Ok(GeneratedInstance::Traversal(digraph.to_instance()?))
            }
            other => Err(ReductionError::BadBundle(format!(
                "unknown problem id '{other}'"
            ))),
        }
    }

    /// Reconstructs the full reduction output when pullback metadata is
    /// present.
    pub fn output(&self) -> Result<Option<ReductionOutput>, ReductionError> {
        let Some(pullback) = &self.pullback else {
            return Ok(None);
        };
        let instance = self.instance()?;
        let pullback = match pullback {
            PullbackFile::Careful {
                variant,
                source,
                error_state,
                marker_state,
                gate_letter,
            } => PullbackInfo::Careful {
                source: source.to_partial()?,
                variant: CarefulVariant::parse(variant)?,
                error_state: error_state.clone(),
                marker_state: marker_state.clone(),
                gate_letter: gate_letter.clone(),
            },
            PullbackFile::Intersection {
                variant,
                sources,
                reset_letter,
                test_letter,
                accept_state,
                reject_state,
                final_state,
            } => PullbackInfo::Intersection {
                sources: sources
                    .iter()
                    .map(AutomatonFile::to_acceptor)
                    .collect::<Result<_, _>>()?,
                variant: FaiVariant::parse(variant)?,
                reset_letter: reset_letter.clone(),
                test_letter: test_letter.clone(),
                accept_state: accept_state.clone(),
                reject_state: reject_state.clone(),
                final_state: final_state.clone(),
            },
            PullbackFile::Assignment {
                dimacs,
                zero_vertices,
                one_vertices,
            } => {
                let GeneratedInstance::Traversal(inst) = &instance else {
                    return Err(ReductionError::BadBundle(
                        "assignment pullback requires a digraph instance".into(),
                    ));
                };
                let to_ids = |names: &[String]| -> Result<Vec<usize>, TravGraphError> {
                    names.iter().map(|nm| inst.g.vertex_index(nm)).collect()
                };
                PullbackInfo::Assignment {
                    source: CnfFormula::parse_dimacs(dimacs)?,
                    zero_vertices: to_ids(zero_vertices)?,
                    one_vertices: to_ids(one_vertices)?,
                }
            }
        };
        Ok(Some(ReductionOutput {
            instance,
            source_digest: self.source_digest.clone().unwrap_or_default(),
            pullback,
        }))
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        serde_json::from_str(text).map_err(|e| ReductionError::BadBundle(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serialization cannot fail")
    }

    fn require_dfa(&self) -> Result<Dfa, ReductionError> {
        let file = self
            .dfa
            .as_ref()
            .ok_or_else(|| ReductionError::BadBundle("missing dfa".into()))?;
        Ok(file.to_dfa()?)
    }
}
