//! First-Visits and Last-Visits Traversal on digraphs.
//!
//! A First-Visits instance asks for a walk that visits every key vertex,
//! where the keys are the first components of the pair relation plus an
//! explicit must-visit set, and no vertex may be entered while one of its
//! lockers (pair first components pointing at it) is still unvisited. The
//! Last-Visits problem is the edge-and-pair reversal of the same question.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{sccs, sink_sccs, Dfa, StateId, SyncStrategy, Verdict};

/// Bound on `|V| * 2^|U|` search states for the key-subset BFS.
pub const FVT_SEARCH_CAP: usize = 1 << 22;

#[derive(Debug, Error)]
pub enum TravGraphError {
    #[error("vertex name {0:?} is not unique")]
    DuplicateName(String),
    #[error("vertex names must be non-empty")]
    EmptyName,
    #[error("digraph must have at least one vertex")]
    NoVertices,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("pairs must be irreflexive, got ({0:?}, {0:?})")]
    ReflexivePair(String),
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
}

/// A finite digraph with named vertices. Parallel edges collapse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    names: Vec<String>,
    adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, TravGraphError> {
        if names.is_empty() {
            return Err(TravGraphError::NoVertices);
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(TravGraphError::EmptyName);
            }
            if !seen.insert(name.clone()) {
                return Err(TravGraphError::DuplicateName(name.clone()));
            }
        }
        let n = names.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge endpoints must be valid indices");
            adj[u].push(v);
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Digraph { names, adj })
    }

    pub fn from_edges(names: &[&str], edges: &[(&str, &str)]) -> Result<Self, TravGraphError> {
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let index = |name: &str| {
            owned
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| TravGraphError::UnknownVertex(name.to_string()))
        };
        let mut indexed = Vec::new();
        for (u, v) in edges {
            indexed.push((index(u)?, index(v)?));
        }
        Digraph::new(owned, &indexed)
    }

    pub fn n_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, TravGraphError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| TravGraphError::UnknownVertex(name.to_string()))
    }

    /// Out-neighbors in ascending index order.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn reverse(&self) -> Digraph {
        let edges: Vec<(usize, usize)> = self.edges().map(|(u, v)| (v, u)).collect();
        Digraph::new(self.names.clone(), &edges).expect("names already validated")
    }

    pub fn is_strongly_connected(&self) -> bool {
        sccs(&self.adj).len() == 1
    }
}

/// A digraph with the ordered pair relation and the must-visit set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraversalInstance {
    pub g: Digraph,
    pub pairs: Vec<(usize, usize)>,
    pub must_visit: Vec<usize>,
}

impl TraversalInstance {
    pub fn new(
        g: Digraph,
        pairs: Vec<(usize, usize)>,
        must_visit: Vec<usize>,
    ) -> Result<Self, TravGraphError> {
        let n = g.n_vertices();
        for &(u, v) in &pairs {
            assert!(u < n && v < n, "pair components must be valid vertices");
            if u == v {
                return Err(TravGraphError::ReflexivePair(g.vertex_name(u).to_string()));
            }
        }
        for &m in &must_visit {
            assert!(m < n, "must-visit vertices must be valid");
        }
        let mut must_visit = must_visit;
        must_visit.sort_unstable();
        must_visit.dedup();
        Ok(TraversalInstance {
            g,
            pairs,
            must_visit,
        })
    }

    /// The reversed instance: edges and pairs flipped, must-visit kept.
    pub fn reverse(&self) -> TraversalInstance {
        TraversalInstance {
            g: self.g.reverse(),
            pairs: self.pairs.iter().map(|&(u, v)| (v, u)).collect(),
            must_visit: self.must_visit.clone(),
        }
    }

    /// First components of the pairs plus the must-visit set, deduplicated.
    fn fvt_keys(&self) -> Vec<usize> {
        let mut keys: Vec<usize> = self
            .pairs
            .iter()
            .map(|&(u, _)| u)
            .chain(self.must_visit.iter().copied())
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }
}

/// Outcome of a traversal search; the witness is a vertex walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathVerdict {
    Yes(Vec<usize>),
    No,
    ResourceLimit,
}

impl PathVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, PathVerdict::Yes(_))
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            PathVerdict::Yes(path) => Some(path),
            _ => None,
        }
    }
}

/// First-Visits Traversal by breadth-first search over pairs of current
/// vertex and visited-key subset. Starts are exactly the vertices with empty
/// locker sets, so the witness walk has minimal edge count.
pub fn solve_fvt(inst: &TraversalInstance) -> PathVerdict {
    let n = inst.g.n_vertices();
    let keys = inst.fvt_keys();
    let k = keys.len();
    if k >= usize::BITS as usize || n.saturating_mul(1 << k) > FVT_SEARCH_CAP {
        return PathVerdict::ResourceLimit;
    }
    let key_bit: Vec<usize> = (0..n)
        .map(|v| match keys.binary_search(&v) {
            Ok(i) => 1 << i,
            Err(_) => 0,
        })
        .collect();
    let mut lockers = vec![0usize; n];
    for &(u, v) in &inst.pairs {
        lockers[v] |= key_bit[u];
    }
    let goal = (1usize << k) - 1;

    let state = |v: usize, mask: usize| (v << k) | mask;
    let mut seen = vec![false; n << k];
    let mut parent = vec![usize::MAX; n << k];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if lockers[v] == 0 {
            let s = state(v, key_bit[v]);
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
    }
    let mut found = None;
    'search: while let Some(s) = queue.pop_front() {
        let (v, mask) = (s >> k, s & goal);
        if mask == goal {
            found = Some(s);
            break 'search;
        }
        for &y in inst.g.out_neighbors(v) {
            if lockers[y] & !mask != 0 {
                continue;
            }
            let t = state(y, mask | key_bit[y]);
            if !seen[t] {
                seen[t] = true;
                parent[t] = s;
                queue.push_back(t);
            }
        }
    }
    match found {
        Some(mut s) => {
            let mut path = vec![s >> k];
            while parent[s] != usize::MAX {
                s = parent[s];
                path.push(s >> k);
            }
            path.reverse();
            debug_assert!(verify_traversal_path(inst, &path, TraversalKind::Fvt));
            PathVerdict::Yes(path)
        }
        None => PathVerdict::No,
    }
}

/// Last-Visits Traversal via the reversal to First-Visits.
pub fn solve_lvt(inst: &TraversalInstance) -> PathVerdict {
    match solve_fvt(&inst.reverse()) {
        PathVerdict::Yes(mut path) => {
            path.reverse();
            debug_assert!(verify_traversal_path(inst, &path, TraversalKind::Lvt));
            PathVerdict::Yes(path)
        }
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraversalKind {
    Fvt,
    Lvt,
}

/// Direct check of a walk against the problem conditions. Position 0 counts
/// as a visit; a walk must be non-empty and follow edges of the digraph.
pub fn verify_traversal_path(inst: &TraversalInstance, path: &[usize], kind: TraversalKind) -> bool {
    let n = inst.g.n_vertices();
    if path.is_empty() || path.iter().any(|&v| v >= n) {
        return false;
    }
    if path.windows(2).any(|e| !inst.g.has_edge(e[0], e[1])) {
        return false;
    }
    let mut first = vec![None; n];
    let mut last = vec![None; n];
    for (i, &v) in path.iter().enumerate() {
        first[v].get_or_insert(i);
        last[v] = Some(i);
    }
    let visited = |v: usize| first[v].is_some();
    if !inst.must_visit.iter().all(|&m| visited(m)) {
        return false;
    }
    match kind {
        TraversalKind::Fvt => inst.pairs.iter().all(|&(u, v)| {
            visited(u) && first[v].is_none_or(|fv| first[u].unwrap() < fv)
        }),
        TraversalKind::Lvt => inst.pairs.iter().all(|&(u, v)| {
            visited(v) && last[u].is_none_or(|lu| lu < last[v].unwrap())
        }),
    }
}

/// Builds a complete DFA whose underlying digraph is `g`: per-vertex edge
/// letters `e_0..e_{d-1}` padded by repeating the last out-edge, plus a fresh
/// letter `s` acting along a reverse breadth-first in-tree toward the first
/// vertex. The word `s^{|Q|}` synchronizes the result; the pairs carry over
/// unchanged because vertex order is preserved.
pub fn lvt_to_cs_orep(
    g: &Digraph,
    pairs: &[(usize, usize)],
) -> Result<(Dfa, Vec<(StateId, StateId)>), TravGraphError> {
    if !g.is_strongly_connected() {
        return Err(TravGraphError::NotStronglyConnected);
    }
    let n = g.n_vertices();
    let d = (0..n).map(|v| g.out_neighbors(v).len()).max().unwrap_or(0);

    let rev = g.reverse();
    let mut tree_next = vec![0usize; n];
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &v in rev.out_neighbors(u) {
            if !reached[v] {
                reached[v] = true;
                tree_next[v] = u;
                queue.push_back(v);
            }
        }
    }
    debug_assert!(reached.iter().all(|&r| r), "strong connectivity reaches all");

    let letters: Vec<String> = (0..d)
        .map(|i| format!("e_{i}"))
        .chain(std::iter::once("s".to_string()))
        .collect();
    let letter_refs: Vec<&str> = letters.iter().map(|s| s.as_str()).collect();
    let name_refs: Vec<&str> = g.vertex_names().iter().map(|s| s.as_str()).collect();
    let mut edges = Vec::new();
    for v in 0..n {
        let out = g.out_neighbors(v);
        for i in 0..d {
            let target = out[i.min(out.len() - 1)];
            edges.push((name_refs[v], letter_refs[i], name_refs[target]));
        }
        edges.push((name_refs[v], "s", name_refs[tree_next[v]]));
    }
    let dfa = Dfa::from_edges(&name_refs, &letter_refs, &edges)
        .expect("vertex names are valid state names");
    Ok((dfa, pairs.to_vec()))
}

/// Restricts a constrained synchronization question to the unique sink
/// component. None when the DFA is not synchronizing or some pair's second
/// component lies outside that component; otherwise the traversal instance
/// on the component plus the image state of a synchronizing word. Every
/// second component becomes a must-visit so dropped pairs keep their visit
/// obligation.
pub fn cs_orep_to_lvt(
    dfa: &Dfa,
    pairs: &[(StateId, StateId)],
) -> Option<(TraversalInstance, StateId)> {
    let w = match dfa.synchronizing_word(SyncStrategy::Greedy) {
        Verdict::Yes(w) => w,
        _ => return None,
    };
    let f = dfa
        .step_set(&crate::automata::StateSet::full(dfa.n_states()), &w)
        .first()
        .expect("synchronizing word yields a singleton");

    let components = sink_sccs(&dfa.underlying_adjacency());
    debug_assert_eq!(components.len(), 1, "synchronizing DFAs have one sink");
    let component = &components[0];
    let mut local = vec![None; dfa.n_states()];
    for (i, &q) in component.iter().enumerate() {
        local[q] = Some(i);
    }
    if pairs.iter().any(|&(_, q)| local[q].is_none()) {
        return None;
    }

    let names: Vec<String> = component
        .iter()
        .map(|&q| dfa.state_name(q).to_string())
        .collect();
    let mut edges = Vec::new();
    for (i, &q) in component.iter().enumerate() {
        for a in 0..dfa.n_letters() {
            let target = local[dfa.step(q, a)].expect("sink components are closed");
            edges.push((i, target));
        }
    }
    let g = Digraph::new(names, &edges).expect("component is non-empty");
    let local_pairs: Vec<(usize, usize)> = pairs
        .iter()
        .filter_map(|&(p, q)| Some((local[p]?, local[q]?)))
        .collect();
    let must_visit: Vec<usize> = pairs.iter().map(|&(_, q)| local[q].unwrap()).collect();
    let inst = TraversalInstance::new(g, local_pairs, must_visit)
        .expect("pairs stay irreflexive under restriction");
    Some((inst, f))
}

/// On-disk instance description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DigraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub pairs: Vec<(String, String)>,
    #[serde(default)]
    pub must_visit: Vec<String>,
}

impl DigraphFile {
    pub fn from_instance(inst: &TraversalInstance) -> Self {
        let name = |v: usize| inst.g.vertex_name(v).to_string();
        DigraphFile {
            vertices: inst.g.vertex_names().to_vec(),
            edges: inst.g.edges().map(|(u, v)| (name(u), name(v))).collect(),
            pairs: inst.pairs.iter().map(|&(u, v)| (name(u), name(v))).collect(),
            must_visit: inst.must_visit.iter().map(|&v| name(v)).collect(),
        }
    }

    pub fn to_instance(&self) -> Result<TraversalInstance, TravGraphError> {
        let g = Digraph::from_edges(
            &self.vertices.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            &self
                .edges
                .iter()
                .map(|(u, v)| (u.as_str(), v.as_str()))
                .collect::<Vec<_>>(),
        )?;
        let mut pairs = Vec::new();
        for (u, v) in &self.pairs {
            pairs.push((g.vertex_index(u)?, g.vertex_index(v)?));
        }
        let mut must_visit = Vec::new();
        for m in &self.must_visit {
            must_visit.push(g.vertex_index(m)?);
        }
        TraversalInstance::new(g, pairs, must_visit)
    }
}
