//! Brute-force enumeration used as ground truth by the equivalence tests.
//! Trace evaluation, visit bookkeeping, and the relation checks are written
//! out here from the definitions rather than shared with the fast modules;
//! the duplication is deliberate, so a disagreement points at a real bug.

use std::collections::BTreeSet;

use crate::automata::{Dfa, StateId, StateSet, Verdict, Word};
use crate::engine::{EngineError, Mode, Problem, NODE_CAP};
use crate::ltlf::{Formula, Trace};
use crate::traversal::{RelationKind, Variant};

/// Truth of `f` at position 0, computed bottom-up: one truth table per
/// subformula over all positions of the trace.
pub fn trace_satisfies(f: &Formula, t: &Trace) -> bool {
    truth_table(f, t.labels())[0]
}

fn truth_table(f: &Formula, labels: &[BTreeSet<String>]) -> Vec<bool> {
    let n = labels.len();
    let zip = |a: Vec<bool>, b: Vec<bool>, op: fn(bool, bool) -> bool| -> Vec<bool> {
        a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
    };
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(p) => labels.iter().map(|l| l.contains(p)).collect(),
        Formula::Not(x) => truth_table(x, labels).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => zip(truth_table(a, labels), truth_table(b, labels), |x, y| {
            x && y
        }),
        Formula::Or(a, b) => zip(truth_table(a, labels), truth_table(b, labels), |x, y| {
            x || y
        }),
        Formula::Implies(a, b) => zip(truth_table(a, labels), truth_table(b, labels), |x, y| {
            !x || y
        }),
        Formula::Next(x) => {
            let inner = truth_table(x, labels);
            (0..n).map(|i| i + 1 < n && inner[i + 1]).collect()
        }
        Formula::Until(a, b) => {
            let hold = truth_table(a, labels);
            let goal = truth_table(b, labels);
            let mut out = vec![false; n];
            for i in (0..n).rev() {
                out[i] = goal[i] || (hold[i] && i + 1 < n && out[i + 1]);
            }
            out
        }
        Formula::Finally(x) => {
            let inner = truth_table(x, labels);
            let mut out = vec![false; n];
            for i in (0..n).rev() {
                out[i] = inner[i] || (i + 1 < n && out[i + 1]);
            }
            out
        }
        Formula::Globally(x) => {
            let inner = truth_table(x, labels);
            let mut out = vec![false; n];
            for i in (0..n).rev() {
                out[i] = inner[i] && (i + 1 >= n || out[i + 1]);
            }
            out
        }
    }
}

/// Visit positions with integer sentinels: an unvisited state keeps
/// `first = i64::MAX` and `last = -1`, so plain comparisons reproduce the
/// unvisited conventions of the traversal relations.
struct VisitTable {
    first: Vec<i64>,
    last: Vec<i64>,
}

impl VisitTable {
    fn new(n: usize) -> VisitTable {
        VisitTable {
            first: vec![i64::MAX; n],
            last: vec![-1; n],
        }
    }

    fn record(&mut self, q: StateId, position: usize) {
        let pos = position as i64;
        self.first[q] = self.first[q].min(pos);
        self.last[q] = self.last[q].max(pos);
    }
}

fn path_visits(dfa: &Dfa, start: StateId, w: &Word) -> VisitTable {
    let mut table = VisitTable::new(dfa.n_states());
    let mut q = start;
    table.record(q, 0);
    for (i, &a) in w.letters().iter().enumerate() {
        q = dfa.step(q, a);
        table.record(q, i + 1);
    }
    table
}

fn set_visits(dfa: &Dfa, starts: &[StateId], w: &Word) -> VisitTable {
    let mut table = VisitTable::new(dfa.n_states());
    let mut current = members(dfa.n_states(), starts);
    record_members(&mut table, &current, 0);
    for (i, &a) in w.letters().iter().enumerate() {
        current = advance(dfa, &current, a);
        record_members(&mut table, &current, i + 1);
    }
    table
}

fn members(n: usize, starts: &[StateId]) -> Vec<bool> {
    let mut current = vec![false; n];
    for &s in starts {
        current[s] = true;
    }
    current
}

fn advance(dfa: &Dfa, current: &[bool], a: usize) -> Vec<bool> {
    let mut next = vec![false; current.len()];
    for (q, &inside) in current.iter().enumerate() {
        if inside {
            next[dfa.step(q, a)] = true;
        }
    }
    next
}

fn record_members(table: &mut VisitTable, current: &[bool], position: usize) {
    for (q, &inside) in current.iter().enumerate() {
        if inside {
            table.record(q, position);
        }
    }
}

fn pair_ok(kind: RelationKind, variant: Variant, table: &VisitTable, p: StateId, q: StateId) -> bool {
    match kind {
        RelationKind::LtLlSets | RelationKind::LtLlPaths => table.last[p] < table.last[q],
        RelationKind::LeLlSets => table.last[p] <= table.last[q],
        RelationKind::LeLlPaths => {
            (variant == Variant::Vacuous && table.last[q] == -1)
                || table.last[p] <= table.last[q]
        }
        RelationKind::LtLfPaths => table.last[p] < table.first[q],
    }
}

fn image_is_singleton(dfa: &Dfa, starts: &[StateId], w: &Word) -> bool {
    let mut current = members(dfa.n_states(), starts);
    for &a in w.letters() {
        current = advance(dfa, &current, a);
    }
    current.iter().filter(|&&inside| inside).count() == 1
}

fn path_trace(dfa: &Dfa, start: StateId, w: &Word) -> Trace {
    let mut q = start;
    let mut labels = vec![BTreeSet::from([dfa.state_name(q).to_string()])];
    for &a in w.letters() {
        q = dfa.step(q, a);
        labels.push(BTreeSet::from([dfa.state_name(q).to_string()]));
    }
    Trace::new(labels).expect("path traces are non-empty")
}

fn set_trace(dfa: &Dfa, starts: &[StateId], w: &Word) -> Trace {
    let names = |current: &[bool]| -> BTreeSet<String> {
        current
            .iter()
            .enumerate()
            .filter(|&(_, &inside)| inside)
            .map(|(q, _)| dfa.state_name(q).to_string())
            .collect()
    };
    let mut current = members(dfa.n_states(), starts);
    let mut labels = vec![names(&current)];
    for &a in w.letters() {
        current = advance(dfa, &current, a);
        labels.push(names(&current));
    }
    Trace::new(labels).expect("set traces are non-empty")
}

fn word_satisfies(problem: &Problem, dfa: &Dfa, starts: &[StateId], w: &Word) -> bool {
    match problem {
        Problem::ModelCheck {
            formula,
            mode,
            sync,
        } => {
            let holds = match mode {
                Mode::Paths => starts
                    .iter()
                    .all(|&s| trace_satisfies(formula, &path_trace(dfa, s, w))),
                Mode::Sets => trace_satisfies(formula, &set_trace(dfa, starts, w)),
            };
            holds && (!sync || image_is_singleton(dfa, starts, w))
        }
        Problem::Constrained { spec, sync } => {
            let holds = if spec.kind.on_paths() {
                starts.iter().all(|&s| {
                    let table = path_visits(dfa, s, w);
                    spec.pairs
                        .iter()
                        .all(|&(p, q)| pair_ok(spec.kind, spec.variant, &table, p, q))
                })
            } else {
                let table = set_visits(dfa, starts, w);
                spec.pairs
                    .iter()
                    .all(|&(p, q)| pair_ok(spec.kind, spec.variant, &table, p, q))
            };
            holds && (!sync || image_is_singleton(dfa, starts, w))
        }
    }
}

/// Answer of an exhaustive scan: the first witness in length-lexicographic
/// order, or a bound up to which none exists. A bounded no is never a
/// definitive no.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Yes(Word),
    NoUpTo(usize),
}

impl OracleVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleVerdict::Yes(_))
    }

    pub fn witness_len(&self) -> Option<usize> {
        match self {
            OracleVerdict::Yes(w) => Some(w.len()),
            OracleVerdict::NoUpTo(_) => None,
        }
    }
}

/// Scans every word of length 0..=`max_len` in length-lexicographic order
/// and returns the first satisfying one. Constrained problems always start
/// from the full state set; model checking defaults to it.
pub fn enumerate_decide(
    problem: &Problem,
    dfa: &Dfa,
    starts: Option<&StateSet>,
    max_len: usize,
) -> OracleVerdict {
    let starts: Vec<StateId> = match problem {
        Problem::Constrained { .. } => (0..dfa.n_states()).collect(),
        Problem::ModelCheck { .. } => match starts {
            Some(s) => s.iter().collect(),
            None => (0..dfa.n_states()).collect(),
        },
    };
    assert!(!starts.is_empty(), "start set must be non-empty");
    let k = dfa.n_letters();
    for len in 0..=max_len {
        let mut digits = vec![0usize; len];
        loop {
            let word = Word(digits.clone());
            if word_satisfies(problem, dfa, &starts, &word) {
                return OracleVerdict::Yes(word);
            }
            let mut i = len;
            while i > 0 && digits[i - 1] == k - 1 {
                digits[i - 1] = 0;
                i -= 1;
            }
            if i == 0 {
                break;
            }
            digits[i - 1] += 1;
        }
    }
    OracleVerdict::NoUpTo(max_len)
}

/// How the two routes relate on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossOutcome {
    /// Same answer, and equal witness lengths when both are conclusive.
    Agree,
    /// The engine hit a resource limit; there is nothing to compare.
    Inconclusive,
    /// The routes contradict each other.
    Failure(String),
}

/// Side-by-side run of the search engine and the enumeration oracle.
#[derive(Clone, Debug)]
pub struct CrossReport {
    pub engine: Verdict,
    pub oracle: OracleVerdict,
    pub outcome: CrossOutcome,
}

pub fn cross_check(
    problem: &Problem,
    dfa: &Dfa,
    starts: Option<&StateSet>,
    max_len: usize,
) -> Result<CrossReport, EngineError> {
    let (engine, _) = problem.solve_report(dfa, starts, NODE_CAP)?;
    let oracle = enumerate_decide(problem, dfa, starts, max_len);
    let outcome = classify(&engine, &oracle);
    Ok(CrossReport {
        engine,
        oracle,
        outcome,
    })
}

fn classify(engine: &Verdict, oracle: &OracleVerdict) -> CrossOutcome {
    match (engine, oracle) {
        (Verdict::ResourceLimit | Verdict::Inconclusive(_), _) => CrossOutcome::Inconclusive,
        (Verdict::Yes(w), OracleVerdict::Yes(v)) => {
            if w.len() == v.len() {
                CrossOutcome::Agree
            } else {
                CrossOutcome::Failure(format!(
                    "engine witness length {} differs from oracle witness length {}",
                    w.len(),
                    v.len()
                ))
            }
        }
        (Verdict::Yes(w), OracleVerdict::NoUpTo(bound)) => {
            // A bounded no is consistent with witnesses past the bound.
            if w.len() <= *bound {
                CrossOutcome::Failure(format!(
                    "oracle missed a length-{} witness within bound {}",
                    w.len(),
                    bound
                ))
            } else {
                CrossOutcome::Agree
            }
        }
        (Verdict::No, OracleVerdict::Yes(v)) => CrossOutcome::Failure(format!(
            "oracle found a length-{} witness where the engine answered no",
            v.len()
        )),
        (Verdict::No, OracleVerdict::NoUpTo(_)) => CrossOutcome::Agree,
    }
}
