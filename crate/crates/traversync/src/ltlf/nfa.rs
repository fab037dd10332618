//! Formula automata by progression.
//!
//! A state is a formula, kept in a canonical form (flattened, sorted,
//! constant-folded conjunctions and disjunctions) so that states reached
//! along different routes coincide. Consuming a label set rewrites the state
//! to what must hold of the rest of the trace; a separate check says whether
//! the trace may end on the consumed label. The full state space is never
//! built eagerly: transitions are computed and memoized on demand, behind a
//! lock so concurrent queries stay safe.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use super::{expand_finally_globally, expand_implications, Formula, LtlfError, Trace};

/// Distinct formula states allowed before a query gives up.
pub const NFA_STATE_CAP: usize = 1 << 16;

/// One transition: the continuation state for longer traces, plus whether a
/// trace ending on the consumed label set is accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepOut {
    pub next: u32,
    pub accepting: bool,
}

pub struct FormulaNfa {
    props: Vec<String>,
    prop_index: HashMap<String, usize>,
    cap: usize,
    initial: u32,
    inner: Mutex<Inner>,
}

struct Inner {
    states: Vec<Formula>,
    ids: HashMap<Formula, u32>,
    memo: HashMap<(u32, u64), StepOut>,
}

/// Compiles a formula against a proposition vocabulary.
pub fn nfa_of_formula(f: &Formula, props: &[String]) -> Result<FormulaNfa, LtlfError> {
    FormulaNfa::new(f, props, NFA_STATE_CAP)
}

impl FormulaNfa {
    pub fn new(f: &Formula, props: &[String], cap: usize) -> Result<Self, LtlfError> {
        if props.len() > 64 {
            return Err(LtlfError::StateCap(cap));
        }
        let prop_index: HashMap<String, usize> = props
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        for atom in f.atoms() {
            if !prop_index.contains_key(&atom) {
                return Err(LtlfError::UnknownAtom(atom));
            }
        }
        let core = canon(&expand_finally_globally(&expand_implications(f)));
        let mut inner = Inner {
            states: Vec::new(),
            ids: HashMap::new(),
            memo: HashMap::new(),
        };
        let initial = inner.intern(core, cap)?;
        Ok(FormulaNfa {
            props: props.to_vec(),
            prop_index,
            cap,
            initial,
            inner: Mutex::new(inner),
        })
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn num_states(&self) -> usize {
        self.inner.lock().unwrap().states.len()
    }

    /// Bit mask of a label set; names outside the vocabulary are ignored.
    pub fn label_mask<'a, I: IntoIterator<Item = &'a str>>(&self, labels: I) -> u64 {
        let mut mask = 0u64;
        for name in labels {
            if let Some(&i) = self.prop_index.get(name) {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// A dead state has no accepting continuation of any length.
    pub fn is_dead(&self, state: u32) -> bool {
        self.inner.lock().unwrap().states[state as usize] == Formula::False
    }

    pub fn step(&self, state: u32, mask: u64) -> Result<StepOut, LtlfError> {
        let mut inner = self.inner.lock().unwrap();
        if let Some(&out) = inner.memo.get(&(state, mask)) {
            return Ok(out);
        }
        let f = inner.states[state as usize].clone();
        let next_formula = canon(&progress(&f, mask, &self.prop_index));
        let accepting = may_end(&f, mask, &self.prop_index);
        let next = inner.intern(next_formula, self.cap)?;
        let out = StepOut { next, accepting };
        inner.memo.insert((state, mask), out);
        Ok(out)
    }

    /// Runs the automaton over a trace; equals `eval_trace` by construction.
    pub fn accepts(&self, t: &Trace) -> Result<bool, LtlfError> {
        let mut state = self.initial;
        let last = t.len() - 1;
        for (i, labels) in t.labels().iter().enumerate() {
            let mask = self.label_mask(labels.iter().map(|s| s.as_str()));
            let out = self.step(state, mask)?;
            if i == last {
                return Ok(out.accepting);
            }
            state = out.next;
        }
        unreachable!("traces are non-empty")
    }
}

impl Inner {
    fn intern(&mut self, f: Formula, cap: usize) -> Result<u32, LtlfError> {
        if let Some(&id) = self.ids.get(&f) {
            return Ok(id);
        }
        if self.states.len() >= cap {
            return Err(LtlfError::StateCap(cap));
        }
        let id = self.states.len() as u32;
        self.states.push(f.clone());
        self.ids.insert(f, id);
        Ok(id)
    }
}

/// What must hold of the trace after the current position, given that the
/// current label set is `mask`. Input and output are core-connective
/// formulas; the output still needs `canon`.
fn progress(f: &Formula, mask: u64, idx: &HashMap<String, usize>) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(p) => {
            if mask >> idx[p] & 1 == 1 {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Not(x) => Formula::not(progress(x, mask, idx)),
        Formula::And(a, b) => Formula::and(progress(a, mask, idx), progress(b, mask, idx)),
        Formula::Or(a, b) => Formula::or(progress(a, mask, idx), progress(b, mask, idx)),
        Formula::Next(x) => (**x).clone(),
        Formula::Until(a, b) => Formula::or(
            progress(b, mask, idx),
            Formula::and(progress(a, mask, idx), f.clone()),
        ),
        Formula::Implies(_, _) | Formula::Finally(_) | Formula::Globally(_) => {
            unreachable!("surface forms are expanded before compilation")
        }
    }
}

/// Whether a trace ending at the current position (labeled `mask`) satisfies
/// the state formula. Strong next makes `X` fail here.
fn may_end(f: &Formula, mask: u64, idx: &HashMap<String, usize>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p) => mask >> idx[p] & 1 == 1,
        Formula::Not(x) => !may_end(x, mask, idx),
        Formula::And(a, b) => may_end(a, mask, idx) && may_end(b, mask, idx),
        Formula::Or(a, b) => may_end(a, mask, idx) || may_end(b, mask, idx),
        Formula::Next(_) => false,
        Formula::Until(_, b) => may_end(b, mask, idx),
        Formula::Implies(_, _) | Formula::Finally(_) | Formula::Globally(_) => {
            unreachable!("surface forms are expanded before compilation")
        }
    }
}

/// Conjunction of literals, sorted; kept contradiction-free by construction.
type Clause = BTreeSet<Formula>;

fn rebuild(items: Vec<Formula>, and: bool, empty: Formula) -> Formula {
    let mut iter = items.into_iter().rev();
    match iter.next() {
        None => empty,
        Some(last) => iter.fold(last, |acc, x| {
            if and {
                Formula::and(x, acc)
            } else {
                Formula::or(x, acc)
            }
        }),
    }
}

fn complement(lit: &Formula) -> Formula {
    match lit {
        Formula::Not(inner) => (**inner).clone(),
        other => Formula::not(other.clone()),
    }
}

/// Unions two clauses; None when they carry complementary literals.
fn merge_clauses(a: &Clause, b: &Clause) -> Option<Clause> {
    let mut merged = a.clone();
    for lit in b {
        if merged.contains(&complement(lit)) {
            return None;
        }
        merged.insert(lit.clone());
    }
    Some(merged)
}

/// Drops every clause that strictly contains another one; the kept clauses
/// are exactly the minimal ones, so the result is order-independent.
fn absorb(clauses: BTreeSet<Clause>) -> BTreeSet<Clause> {
    clauses
        .iter()
        .filter(|c| {
            !clauses
                .iter()
                .any(|other| other != *c && other.is_subset(c))
        })
        .cloned()
        .collect()
}

/// Disjunctive normal form over temporal literals: atoms, `X`, `U`, and
/// their negations. The empty set is `false`; a set holding the empty
/// clause is `true`.
fn dnf(f: &Formula) -> BTreeSet<Clause> {
    match f {
        Formula::True => BTreeSet::from([Clause::new()]),
        Formula::False => BTreeSet::new(),
        Formula::Atom(_) => BTreeSet::from([Clause::from([f.clone()])]),
        Formula::Next(x) => BTreeSet::from([Clause::from([Formula::next(canon(x))])]),
        Formula::Until(a, b) => {
            BTreeSet::from([Clause::from([Formula::until(canon(a), canon(b))])])
        }
        Formula::Not(x) => match &**x {
            Formula::True => BTreeSet::new(),
            Formula::False => BTreeSet::from([Clause::new()]),
            Formula::Not(y) => dnf(y),
            Formula::And(a, b) => dnf(&Formula::or(
                Formula::not((**a).clone()),
                Formula::not((**b).clone()),
            )),
            Formula::Or(a, b) => dnf(&Formula::and(
                Formula::not((**a).clone()),
                Formula::not((**b).clone()),
            )),
            Formula::Atom(_) => BTreeSet::from([Clause::from([f.clone()])]),
            Formula::Next(y) => {
                BTreeSet::from([Clause::from([Formula::not(Formula::next(canon(y)))])])
            }
            Formula::Until(a, b) => BTreeSet::from([Clause::from([Formula::not(
                Formula::until(canon(a), canon(b)),
            )])]),
            Formula::Implies(_, _) | Formula::Finally(_) | Formula::Globally(_) => {
                unreachable!("surface forms are expanded before compilation")
            }
        },
        Formula::And(a, b) => {
            let left = dnf(a);
            let right = dnf(b);
            let mut out = BTreeSet::new();
            for ca in &left {
                for cb in &right {
                    if let Some(merged) = merge_clauses(ca, cb) {
                        out.insert(merged);
                    }
                }
            }
            absorb(out)
        }
        Formula::Or(a, b) => {
            let mut out = dnf(a);
            out.extend(dnf(b));
            absorb(out)
        }
        Formula::Implies(_, _) | Formula::Finally(_) | Formula::Globally(_) => {
            unreachable!("surface forms are expanded before compilation")
        }
    }
}

/// Canonical form for core-connective formulas: a sorted disjunction of
/// sorted, contradiction-free, absorption-minimal conjunctions of temporal
/// literals. Progression never invents new `X` or `U` nodes, so the literal
/// pool of any reachable state is fixed by the compiled formula and the
/// state space is finite. Idempotent, so states reached along different
/// routes compare equal.
fn canon(f: &Formula) -> Formula {
    let clauses = dnf(f);
    let items: Vec<Formula> = clauses
        .into_iter()
        .map(|clause| rebuild(clause.into_iter().collect(), true, Formula::True))
        .collect();
    rebuild(items, false, Formula::False)
}
