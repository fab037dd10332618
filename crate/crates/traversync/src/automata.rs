//! Complete and partial deterministic automata, words, state sets, and the
//! synchronization algorithms that everything else builds on.
//!
//! States and letters are strings at the API boundary and dense indices
//! internally. The canonical order of states and letters is their input
//! order; searches break ties by that order, so witnesses are deterministic.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type StateId = usize;
pub type LetterId = usize;

/// Subset-search budget for shortest and careful synchronization.
pub const SUBSET_SEARCH_CAP: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum AutomataError {
    #[error("unknown state name {0:?}")]
    UnknownState(String),
    #[error("unknown letter name {0:?}")]
    UnknownLetter(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("empty names are not allowed")]
    EmptyName,
    #[error("automaton needs at least one state")]
    NoStates,
    #[error("complete automaton is missing the transition {state:?} --{letter:?}-> ...")]
    MissingTransition { state: String, letter: String },
    #[error("transition {state:?} --{letter:?}-> ... defined twice")]
    DuplicateTransition { state: String, letter: String },
    #[error("cannot parse word {0:?}: {1}")]
    BadWord(String, String),
    #[error("malformed automaton description: {0}")]
    BadFile(String),
}

/// A word over some automaton's alphabet, stored as letter indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<LetterId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[LetterId] {
        &self.0
    }

    /// Parses a word against an alphabet. Letters may be separated by
    /// whitespace; a string without whitespace is split per character when
    /// every character is itself a letter, and is otherwise tried as one
    /// letter name. The empty string is the empty word.
    pub fn parse(text: &str, alphabet: &[String]) -> Result<Word, AutomataError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(Word::empty());
        }
        let index_of = |name: &str| alphabet.iter().position(|l| l == name);
        if trimmed.split_whitespace().nth(1).is_some() {
            let mut letters = Vec::new();
            for token in trimmed.split_whitespace() {
                match index_of(token) {
                    Some(i) => letters.push(i),
                    None => {
                        return Err(AutomataError::BadWord(
                            text.to_string(),
                            format!("unknown letter {token:?}"),
                        ))
                    }
                }
            }
            return Ok(Word(letters));
        }
        let per_char: Option<Vec<LetterId>> = trimmed
            .chars()
            .map(|c| index_of(&c.to_string()))
            .collect();
        if let Some(letters) = per_char {
            return Ok(Word(letters));
        }
        match index_of(trimmed) {
            Some(i) => Ok(Word(vec![i])),
            None => Err(AutomataError::BadWord(
                text.to_string(),
                "not a letter sequence of this alphabet".to_string(),
            )),
        }
    }

    /// Renders the word as space-separated letter names. The empty word
    /// renders as the empty string.
    pub fn render(&self, alphabet: &[String]) -> String {
        self.0
            .iter()
            .map(|&l| alphabet[l].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Fixed-width bit set over the states of one automaton.
///
/// Bits beyond the width are kept zero so that equality and hashing work on
/// the raw blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateSet {
    width: usize,
    bits: Vec<u64>,
}

impl StateSet {
    pub fn new(width: usize) -> Self {
        StateSet {
            width,
            bits: vec![0; width.div_ceil(64)],
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = StateSet::new(width);
        for q in 0..width {
            s.insert(q);
        }
        s
    }

    pub fn singleton(width: usize, q: StateId) -> Self {
        let mut s = StateSet::new(width);
        s.insert(q);
        s
    }

    pub fn from_states<I: IntoIterator<Item = StateId>>(width: usize, states: I) -> Self {
        let mut s = StateSet::new(width);
        for q in states {
            s.insert(q);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, q: StateId) {
        assert!(q < self.width, "state index out of range");
        self.bits[q / 64] |= 1 << (q % 64);
    }

    pub fn contains(&self, q: StateId) -> bool {
        q < self.width && self.bits[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn is_singleton(&self) -> bool {
        self.len() == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.width).filter(|&q| self.contains(q))
    }

    pub fn first(&self) -> Option<StateId> {
        self.iter().next()
    }

    pub fn render(&self, names: &[String]) -> String {
        self.iter()
            .map(|q| names[q].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Answer of a decision search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A witness, verified by the producer before being returned.
    Yes(Word),
    /// Definitive no.
    No,
    /// Nothing found up to the stated bound; not a definitive no.
    Inconclusive(usize),
    /// The search exceeded its configured budget.
    ResourceLimit,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn witness(&self) -> Option<&Word> {
        match self {
            Verdict::Yes(w) => Some(w),
            _ => None,
        }
    }
}

/// How `synchronizing_word` should search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyncStrategy {
    /// Repeatedly merge one pair of states; fast, witness not length-optimal.
    Greedy,
    /// Breadth-first search over the power-set automaton; minimal witness.
    Shortest,
}

fn check_names(names: &[String]) -> Result<(), AutomataError> {
    let mut seen = HashMap::new();
    for n in names {
        if n.is_empty() {
            return Err(AutomataError::EmptyName);
        }
        if seen.insert(n.as_str(), ()).is_some() {
            return Err(AutomataError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

fn name_index(names: &[String], name: &str) -> Option<usize> {
    names.iter().position(|n| n == name)
}

/// A complete deterministic finite semi-automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    states: Vec<String>,
    alphabet: Vec<String>,
    delta: Vec<Vec<StateId>>,
}

impl Dfa {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        delta: Vec<Vec<StateId>>,
    ) -> Result<Self, AutomataError> {
        if states.is_empty() {
            return Err(AutomataError::NoStates);
        }
        check_names(&states)?;
        check_names(&alphabet)?;
        assert_eq!(delta.len(), states.len(), "delta rows must match states");
        for (q, row) in delta.iter().enumerate() {
            assert_eq!(row.len(), alphabet.len(), "delta columns must match alphabet");
            for &t in row {
                assert!(t < states.len(), "transition target out of range in state {q}");
            }
        }
        Ok(Dfa {
            states,
            alphabet,
            delta,
        })
    }

    /// Builds a DFA from (state, letter, target) triples; every pair must be
    /// covered exactly once.
    pub fn from_edges(
        states: &[&str],
        alphabet: &[&str],
        edges: &[(&str, &str, &str)],
    ) -> Result<Self, AutomataError> {
        let partial = PartialDfa::from_edges(states, alphabet, edges)?;
        partial.require_complete()
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn n_letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn letter_name(&self, a: LetterId) -> &str {
        &self.alphabet[a]
    }

    pub fn state_index(&self, name: &str) -> Result<StateId, AutomataError> {
        name_index(&self.states, name).ok_or_else(|| AutomataError::UnknownState(name.to_string()))
    }

    pub fn letter_index(&self, name: &str) -> Result<LetterId, AutomataError> {
        name_index(&self.alphabet, name)
            .ok_or_else(|| AutomataError::UnknownLetter(name.to_string()))
    }

    pub fn step(&self, q: StateId, a: LetterId) -> StateId {
        self.delta[q][a]
    }

    pub fn run(&self, q: StateId, w: &Word) -> StateId {
        w.letters().iter().fold(q, |s, &a| self.step(s, a))
    }

    /// The state sequence of length `|w| + 1` starting at `q`.
    pub fn path_of(&self, q: StateId, w: &Word) -> Vec<StateId> {
        let mut path = Vec::with_capacity(w.len() + 1);
        path.push(q);
        let mut cur = q;
        for &a in w.letters() {
            cur = self.step(cur, a);
            path.push(cur);
        }
        path
    }

    pub fn step_set_letter(&self, set: &StateSet, a: LetterId) -> StateSet {
        let mut out = StateSet::new(self.n_states());
        for q in set.iter() {
            out.insert(self.step(q, a));
        }
        out
    }

    /// Elementwise image of a state set under a word.
    pub fn step_set(&self, set: &StateSet, w: &Word) -> StateSet {
        let mut cur = set.clone();
        for &a in w.letters() {
            cur = self.step_set_letter(&cur, a);
        }
        cur
    }

    /// Adjacency of the underlying digraph (deduplicated, sorted targets).
    pub fn underlying_adjacency(&self) -> Vec<Vec<usize>> {
        self.delta
            .iter()
            .map(|row| {
                let mut targets = row.clone();
                targets.sort_unstable();
                targets.dedup();
                targets
            })
            .collect()
    }

    /// Finds a word with `|delta(Q, w)| = 1`.
    pub fn synchronizing_word(&self, strategy: SyncStrategy) -> Verdict {
        match strategy {
            SyncStrategy::Greedy => self.greedy_sync(),
            SyncStrategy::Shortest => self.shortest_sync(),
        }
    }

    fn greedy_sync(&self) -> Verdict {
        let n = self.n_states();
        let mut active: Vec<StateId> = (0..n).collect();
        let mut word = Vec::new();
        while active.len() > 1 {
            // A DFA synchronizes iff every pair of states can be merged, so
            // one unmergeable pair is a definitive no.
            let (p, q) = (active[0], active[1]);
            let Some(merge) = self.merge_pair(p, q) else {
                return Verdict::No;
            };
            for &a in &merge {
                for s in active.iter_mut() {
                    *s = self.step(*s, a);
                }
                word.push(a);
            }
            active.sort_unstable();
            active.dedup();
        }
        Verdict::Yes(Word(word))
    }

    /// Shortest word sending both p and q to one state, by BFS on unordered
    /// state pairs.
    fn merge_pair(&self, p: StateId, q: StateId) -> Option<Vec<LetterId>> {
        let key = |a: StateId, b: StateId| if a <= b { (a, b) } else { (b, a) };
        let start = key(p, q);
        if start.0 == start.1 {
            return Some(Vec::new());
        }
        let mut parents: HashMap<(StateId, StateId), ((StateId, StateId), LetterId)> =
            HashMap::new();
        let mut queue = VecDeque::new();
        parents.insert(start, (start, 0));
        queue.push_back(start);
        while let Some(cur) = queue.pop_front() {
            for a in 0..self.n_letters() {
                let next = key(self.step(cur.0, a), self.step(cur.1, a));
                if next.0 == next.1 {
                    let mut letters = vec![a];
                    let mut back = cur;
                    while back != start {
                        let (prev, letter) = parents[&back];
                        letters.push(letter);
                        back = prev;
                    }
                    letters.reverse();
                    return Some(letters);
                }
                if let Entry::Vacant(e) = parents.entry(next) {
                    e.insert((cur, a));
                    queue.push_back(next);
                }
            }
        }
        None
    }

    fn shortest_sync(&self) -> Verdict {
        let n = self.n_states();
        if n > 64 {
            return Verdict::ResourceLimit;
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let step_mask = |mask: u64, a: LetterId| {
            let mut out = 0u64;
            for q in 0..n {
                if mask >> q & 1 == 1 {
                    out |= 1 << self.step(q, a);
                }
            }
            out
        };
        let mut parents: HashMap<u64, (u64, LetterId)> = HashMap::new();
        let mut queue = VecDeque::new();
        parents.insert(full, (full, 0));
        queue.push_back(full);
        if full.count_ones() == 1 {
            return Verdict::Yes(Word::empty());
        }
        while let Some(cur) = queue.pop_front() {
            for a in 0..self.n_letters() {
                let next = step_mask(cur, a);
                if parents.contains_key(&next) {
                    continue;
                }
                parents.insert(next, (cur, a));
                if next.count_ones() == 1 {
                    let mut letters = Vec::new();
                    let mut back = next;
                    while back != full {
                        let (prev, letter) = parents[&back];
                        letters.push(letter);
                        back = prev;
                    }
                    letters.reverse();
                    return Verdict::Yes(Word(letters));
                }
                if parents.len() > SUBSET_SEARCH_CAP {
                    return Verdict::ResourceLimit;
                }
                queue.push_back(next);
            }
        }
        Verdict::No
    }

    /// Shortest word with `delta(p, w) = q`.
    pub fn word_between(&self, p: StateId, q: StateId) -> Verdict {
        if p == q {
            return Verdict::Yes(Word::empty());
        }
        let mut parents: HashMap<StateId, (StateId, LetterId)> = HashMap::new();
        let mut queue = VecDeque::new();
        parents.insert(p, (p, 0));
        queue.push_back(p);
        while let Some(cur) = queue.pop_front() {
            for a in 0..self.n_letters() {
                let next = self.step(cur, a);
                if let Entry::Vacant(e) = parents.entry(next) {
                    e.insert((cur, a));
                    if next == q {
                        let mut letters = Vec::new();
                        let mut back = next;
                        while back != p {
                            let (prev, letter) = parents[&back];
                            letters.push(letter);
                            back = prev;
                        }
                        letters.reverse();
                        return Verdict::Yes(Word(letters));
                    }
                    queue.push_back(next);
                }
            }
        }
        Verdict::No
    }
}

/// A deterministic finite semi-automaton with a partial transition function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialDfa {
    states: Vec<String>,
    alphabet: Vec<String>,
    delta: Vec<Vec<Option<StateId>>>,
}

impl PartialDfa {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        delta: Vec<Vec<Option<StateId>>>,
    ) -> Result<Self, AutomataError> {
        if states.is_empty() {
            return Err(AutomataError::NoStates);
        }
        check_names(&states)?;
        check_names(&alphabet)?;
        assert_eq!(delta.len(), states.len(), "delta rows must match states");
        for row in &delta {
            assert_eq!(row.len(), alphabet.len(), "delta columns must match alphabet");
            for t in row.iter().flatten() {
                assert!(*t < states.len(), "transition target out of range");
            }
        }
        Ok(PartialDfa {
            states,
            alphabet,
            delta,
        })
    }

    pub fn from_edges(
        states: &[&str],
        alphabet: &[&str],
        edges: &[(&str, &str, &str)],
    ) -> Result<Self, AutomataError> {
        let state_names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let letter_names: Vec<String> = alphabet.iter().map(|s| s.to_string()).collect();
        if state_names.is_empty() {
            return Err(AutomataError::NoStates);
        }
        check_names(&state_names)?;
        check_names(&letter_names)?;
        let mut delta = vec![vec![None; letter_names.len()]; state_names.len()];
        for (src, letter, dst) in edges {
            let q = name_index(&state_names, src)
                .ok_or_else(|| AutomataError::UnknownState(src.to_string()))?;
            let a = name_index(&letter_names, letter)
                .ok_or_else(|| AutomataError::UnknownLetter(letter.to_string()))?;
            let t = name_index(&state_names, dst)
                .ok_or_else(|| AutomataError::UnknownState(dst.to_string()))?;
            if delta[q][a].is_some() {
                return Err(AutomataError::DuplicateTransition {
                    state: src.to_string(),
                    letter: letter.to_string(),
                });
            }
            delta[q][a] = Some(t);
        }
        PartialDfa::new(state_names, letter_names, delta)
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn n_letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Result<StateId, AutomataError> {
        name_index(&self.states, name).ok_or_else(|| AutomataError::UnknownState(name.to_string()))
    }

    pub fn step(&self, q: StateId, a: LetterId) -> Option<StateId> {
        self.delta[q][a]
    }

    /// Image of a set under a word; `None` if any letter is undefined on any
    /// intermediate active state.
    pub fn step_set(&self, set: &StateSet, w: &Word) -> Option<StateSet> {
        let mut cur = set.clone();
        for &a in w.letters() {
            let mut next = StateSet::new(self.n_states());
            for q in cur.iter() {
                next.insert(self.step(q, a)?);
            }
            cur = next;
        }
        Some(cur)
    }

    pub fn underlying_adjacency(&self) -> Vec<Vec<usize>> {
        self.delta
            .iter()
            .map(|row| {
                let mut targets: Vec<usize> = row.iter().flatten().copied().collect();
                targets.sort_unstable();
                targets.dedup();
                targets
            })
            .collect()
    }

    /// Promotes to a complete DFA; errors on the first missing transition.
    pub fn require_complete(&self) -> Result<Dfa, AutomataError> {
        let mut delta = Vec::with_capacity(self.states.len());
        for (q, row) in self.delta.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (a, t) in row.iter().enumerate() {
                match t {
                    Some(t) => out.push(*t),
                    None => {
                        return Err(AutomataError::MissingTransition {
                            state: self.states[q].clone(),
                            letter: self.alphabet[a].clone(),
                        })
                    }
                }
            }
            delta.push(out);
        }
        Dfa::new(self.states.clone(), self.alphabet.clone(), delta)
    }

    /// Finds a word that is defined on every state along the way and merges
    /// all states, by BFS over active-state subsets.
    pub fn carefully_synchronizing_word(&self) -> Verdict {
        let n = self.n_states();
        if n > 64 {
            return Verdict::ResourceLimit;
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if full.count_ones() == 1 {
            return Verdict::Yes(Word::empty());
        }
        let step_mask = |mask: u64, a: LetterId| -> Option<u64> {
            let mut out = 0u64;
            for q in 0..n {
                if mask >> q & 1 == 1 {
                    out |= 1 << self.step(q, a)?;
                }
            }
            Some(out)
        };
        let mut parents: HashMap<u64, (u64, LetterId)> = HashMap::new();
        let mut queue = VecDeque::new();
        parents.insert(full, (full, 0));
        queue.push_back(full);
        while let Some(cur) = queue.pop_front() {
            for a in 0..self.n_letters() {
                let Some(next) = step_mask(cur, a) else {
                    continue;
                };
                if parents.contains_key(&next) {
                    continue;
                }
                parents.insert(next, (cur, a));
                if next.count_ones() == 1 {
                    let mut letters = Vec::new();
                    let mut back = next;
                    while back != full {
                        let (prev, letter) = parents[&back];
                        letters.push(letter);
                        back = prev;
                    }
                    letters.reverse();
                    return Verdict::Yes(Word(letters));
                }
                if parents.len() > SUBSET_SEARCH_CAP {
                    return Verdict::ResourceLimit;
                }
                queue.push_back(next);
            }
        }
        Verdict::No
    }
}

/// A DFA with an initial state and accepting states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Acceptor {
    pub dfa: Dfa,
    pub initial: StateId,
    pub finals: StateSet,
}

impl Acceptor {
    pub fn new(dfa: Dfa, initial: StateId, finals: StateSet) -> Self {
        assert!(initial < dfa.n_states());
        assert_eq!(finals.width(), dfa.n_states());
        Acceptor {
            dfa,
            initial,
            finals,
        }
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.finals.contains(self.dfa.run(self.initial, w))
    }
}

/// Strongly connected components of an adjacency list, iteratively.
///
/// Components are returned with members sorted ascending and components
/// ordered by their smallest vertex.
pub fn sccs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.1 < adj[v].len() {
                let w = adj[v][frame.1];
                frame.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
                frames.pop();
                if let Some(parent) = frames.last() {
                    low[parent.0] = low[parent.0].min(low[v]);
                }
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Components with no edge leaving them.
pub fn sink_sccs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let comps = sccs(adj);
    let mut comp_of = vec![0usize; adj.len()];
    for (i, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = i;
        }
    }
    comps
        .iter()
        .enumerate()
        .filter(|(i, comp)| {
            comp.iter()
                .all(|&v| adj[v].iter().all(|&w| comp_of[w] == *i))
        })
        .map(|(_, comp)| comp.clone())
        .collect()
}

/// On-disk automaton description.
///
/// Missing transition entries are legal only when `partial` is true.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutomatonFile {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    #[serde(default)]
    pub partial: bool,
    pub transitions: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finals: Option<Vec<String>>,
}

impl AutomatonFile {
    pub fn from_dfa(dfa: &Dfa) -> Self {
        let mut transitions = BTreeMap::new();
        for (q, row) in dfa.delta.iter().enumerate() {
            let entry: BTreeMap<String, String> = row
                .iter()
                .enumerate()
                .map(|(a, &t)| (dfa.alphabet[a].clone(), dfa.states[t].clone()))
                .collect();
            transitions.insert(dfa.states[q].clone(), entry);
        }
        AutomatonFile {
            states: dfa.states.clone(),
            alphabet: dfa.alphabet.clone(),
            partial: false,
            transitions,
            initial: None,
            finals: None,
        }
    }

    pub fn from_partial(pdfa: &PartialDfa) -> Self {
        let mut transitions = BTreeMap::new();
        for (q, row) in pdfa.delta.iter().enumerate() {
            let mut entry = BTreeMap::new();
            for (a, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    entry.insert(pdfa.alphabet[a].clone(), pdfa.states[*t].clone());
                }
            }
            transitions.insert(pdfa.states[q].clone(), entry);
        }
        AutomatonFile {
            states: pdfa.states.clone(),
            alphabet: pdfa.alphabet.clone(),
            partial: true,
            transitions,
            initial: None,
            finals: None,
        }
    }

    pub fn from_acceptor(acc: &Acceptor) -> Self {
        let mut file = AutomatonFile::from_dfa(&acc.dfa);
        file.initial = Some(acc.dfa.states[acc.initial].clone());
        file.finals = Some(
            acc.finals
                .iter()
                .map(|q| acc.dfa.states[q].clone())
                .collect(),
        );
        file
    }

    fn build_partial(&self) -> Result<PartialDfa, AutomataError> {
        if self.states.is_empty() {
            return Err(AutomataError::NoStates);
        }
        check_names(&self.states)?;
        check_names(&self.alphabet)?;
        let mut delta = vec![vec![None; self.alphabet.len()]; self.states.len()];
        for (src, row) in &self.transitions {
            let q = name_index(&self.states, src)
                .ok_or_else(|| AutomataError::UnknownState(src.clone()))?;
            for (letter, dst) in row {
                let a = name_index(&self.alphabet, letter)
                    .ok_or_else(|| AutomataError::UnknownLetter(letter.clone()))?;
                let t = name_index(&self.states, dst)
                    .ok_or_else(|| AutomataError::UnknownState(dst.clone()))?;
                delta[q][a] = Some(t);
            }
        }
        PartialDfa::new(self.states.clone(), self.alphabet.clone(), delta)
    }

    pub fn to_partial(&self) -> Result<PartialDfa, AutomataError> {
        self.build_partial()
    }

    pub fn to_dfa(&self) -> Result<Dfa, AutomataError> {
        self.build_partial()?.require_complete()
    }

    pub fn to_acceptor(&self) -> Result<Acceptor, AutomataError> {
        let dfa = self.to_dfa()?;
        let initial = match &self.initial {
            Some(name) => dfa.state_index(name)?,
            None => {
                return Err(AutomataError::BadFile(
                    "acceptor needs an \"initial\" state".to_string(),
                ))
            }
        };
        let finals = match &self.finals {
            Some(names) => {
                let mut set = StateSet::new(dfa.n_states());
                for name in names {
                    set.insert(dfa.state_index(name)?);
                }
                set
            }
            None => {
                return Err(AutomataError::BadFile(
                    "acceptor needs a \"finals\" list".to_string(),
                ))
            }
        };
        Ok(Acceptor::new(dfa, initial, finals))
    }

    pub fn from_json(text: &str) -> Result<Self, AutomataError> {
        serde_json::from_str(text).map_err(|e| AutomataError::BadFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("automaton file serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two states feeding an absorbing sink: p and q swap on a, idle on b,
    /// and fall into r on d and c respectively; r absorbs everything.
    pub(crate) fn funnel() -> Dfa {
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
        .unwrap()
    }

    fn w(dfa: &Dfa, text: &str) -> Word {
        Word::parse(text, dfa.alphabet()).unwrap()
    }

    #[test]
    fn step_set_images() {
        let dfa = funnel();
        let full = StateSet::full(3);
        let image = dfa.step_set(&full, &w(&dfa, "dc"));
        assert_eq!(image.iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(dfa.step_set(&full, &Word::empty()), full);
    }

    #[test]
    fn paths_have_word_length_plus_one() {
        let dfa = funnel();
        let p = dfa.state_index("p").unwrap();
        let q = dfa.state_index("q").unwrap();
        let r = dfa.state_index("r").unwrap();
        assert_eq!(dfa.path_of(p, &w(&dfa, "dc")), vec![p, r, r]);
        assert_eq!(dfa.path_of(q, &w(&dfa, "cd")), vec![q, r, r]);
        assert_eq!(dfa.path_of(q, &Word::empty()), vec![q]);
    }

    #[test]
    fn shortest_synchronization_of_the_funnel_has_length_two() {
        let dfa = funnel();
        let verdict = dfa.synchronizing_word(SyncStrategy::Shortest);
        let witness = verdict.witness().expect("funnel synchronizes");
        assert_eq!(witness.len(), 2);
        assert!(dfa.step_set(&StateSet::full(3), witness).is_singleton());
    }

    #[test]
    fn greedy_synchronization_verifies() {
        let dfa = funnel();
        let verdict = dfa.synchronizing_word(SyncStrategy::Greedy);
        let witness = verdict.witness().expect("funnel synchronizes");
        assert!(dfa.step_set(&StateSet::full(3), witness).is_singleton());
    }

    #[test]
    fn single_state_synchronizes_with_the_empty_word() {
        let dfa = Dfa::from_edges(&["only"], &["a"], &[("only", "a", "only")]).unwrap();
        assert_eq!(
            dfa.synchronizing_word(SyncStrategy::Shortest),
            Verdict::Yes(Word::empty())
        );
        assert_eq!(
            dfa.synchronizing_word(SyncStrategy::Greedy),
            Verdict::Yes(Word::empty())
        );
    }

    #[test]
    fn permutations_never_synchronize() {
        let dfa = Dfa::from_edges(
            &["0", "1", "2"],
            &["a"],
            &[("0", "a", "1"), ("1", "a", "2"), ("2", "a", "0")],
        )
        .unwrap();
        assert_eq!(dfa.synchronizing_word(SyncStrategy::Shortest), Verdict::No);
        assert_eq!(dfa.synchronizing_word(SyncStrategy::Greedy), Verdict::No);
    }

    #[test]
    fn word_between_states() {
        let dfa = funnel();
        let p = dfa.state_index("p").unwrap();
        let r = dfa.state_index("r").unwrap();
        assert_eq!(dfa.word_between(p, r), Verdict::Yes(w(&dfa, "d")));
        assert_eq!(dfa.word_between(p, p), Verdict::Yes(Word::empty()));
        assert_eq!(dfa.word_between(r, p), Verdict::No);
    }

    #[test]
    fn funnel_sink_is_the_absorbing_state() {
        let adj = funnel().underlying_adjacency();
        assert_eq!(sccs(&adj), vec![vec![0, 1], vec![2]]);
        assert_eq!(sink_sccs(&adj), vec![vec![2]]);
    }

    #[test]
    fn isolated_and_disjoint_components_are_sinks() {
        assert_eq!(sink_sccs(&[vec![]]), vec![vec![0]]);
        let two_loops = vec![vec![0], vec![1]];
        assert_eq!(sink_sccs(&two_loops), vec![vec![0], vec![1]]);
    }

    #[test]
    fn partial_step_set_is_undefined_on_missing_transitions() {
        let pdfa = PartialDfa::from_edges(&["1", "2"], &["a"], &[("1", "a", "2")]).unwrap();
        let full = StateSet::full(2);
        let word = Word::parse("a", pdfa.alphabet()).unwrap();
        assert_eq!(pdfa.step_set(&full, &word), None);
        assert_eq!(pdfa.step_set(&full, &Word::empty()), Some(full));
    }

    #[test]
    fn careful_synchronization_examples() {
        let merging =
            PartialDfa::from_edges(&["1", "2"], &["a"], &[("1", "a", "2"), ("2", "a", "2")])
                .unwrap();
        assert_eq!(
            merging.carefully_synchronizing_word(),
            Verdict::Yes(Word(vec![0]))
        );

        let stuck = PartialDfa::from_edges(&["1", "2"], &["a"], &[("1", "a", "2")]).unwrap();
        assert_eq!(stuck.carefully_synchronizing_word(), Verdict::No);

        let lonely = PartialDfa::from_edges(&["1"], &["a"], &[]).unwrap();
        assert_eq!(
            lonely.carefully_synchronizing_word(),
            Verdict::Yes(Word::empty())
        );
    }

    #[test]
    fn complete_automaton_as_partial_synchronizes_identically() {
        let dfa = funnel();
        let file = AutomatonFile::from_dfa(&dfa);
        let mut as_partial_file = file.clone();
        as_partial_file.partial = true;
        let pdfa = as_partial_file.to_partial().unwrap();
        let careful = pdfa.carefully_synchronizing_word();
        let shortest = dfa.synchronizing_word(SyncStrategy::Shortest);
        assert_eq!(
            careful.witness().map(Word::len),
            shortest.witness().map(Word::len)
        );
    }

    #[test]
    fn word_parsing_accepts_tokens_and_compact_form() {
        let alphabet: Vec<String> = ["a", "b", "e_0", "s"].iter().map(|s| s.to_string()).collect();
        assert_eq!(Word::parse("a b", &alphabet).unwrap(), Word(vec![0, 1]));
        assert_eq!(Word::parse("ab", &alphabet).unwrap(), Word(vec![0, 1]));
        assert_eq!(Word::parse("e_0 s a", &alphabet).unwrap(), Word(vec![2, 3, 0]));
        assert_eq!(Word::parse("e_0", &alphabet).unwrap(), Word(vec![2]));
        assert_eq!(Word::parse("", &alphabet).unwrap(), Word::empty());
        assert!(Word::parse("xy", &alphabet).is_err());
        assert_eq!(Word(vec![2, 0]).render(&alphabet), "e_0 a");
    }

    #[test]
    fn json_round_trip_preserves_the_automaton() {
        let dfa = funnel();
        let file = AutomatonFile::from_dfa(&dfa);
        let parsed = AutomatonFile::from_json(&file.to_json()).unwrap();
        assert_eq!(parsed.to_dfa().unwrap(), dfa);
    }

    #[test]
    fn complete_files_must_cover_every_transition() {
        let mut file = AutomatonFile::from_dfa(&funnel());
        file.transitions.get_mut("p").unwrap().remove("a");
        assert!(matches!(
            file.to_dfa(),
            Err(AutomataError::MissingTransition { .. })
        ));
        file.partial = true;
        assert!(file.to_partial().is_ok());
    }

    #[test]
    fn acceptor_files_carry_initial_and_finals() {
        let dfa = funnel();
        let acc = Acceptor::new(dfa.clone(), 0, StateSet::singleton(3, 2));
        let file = AutomatonFile::from_acceptor(&acc);
        let parsed = AutomatonFile::from_json(&file.to_json()).unwrap().to_acceptor().unwrap();
        assert_eq!(parsed, acc);
        assert!(parsed.accepts(&Word::parse("d", dfa.alphabet()).unwrap()));
        assert!(!parsed.accepts(&Word::empty()));
    }
}
