//! First/last visit positions and the five visit-order relations.
//!
//! For a word `w` and a start set `S`, each start state `r` induces the path
//! `r, delta(r, w[..1]), ..., delta(r, w)`; positions run from 0 to `|w|`.
//! `first(q, w, {r})` and `last(q, w, {r})` are the extreme positions at
//! which that path visits `q`, and the set-aggregated values range over all
//! starts. Unvisited states get `first = +inf` and `last = -inf`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{AutomataError, Dfa, StateId, StateSet, Word};
use crate::ltlf::Formula;

#[derive(Debug, Error)]
pub enum TraversalError {
    #[error("start set must be non-empty")]
    EmptyStartSet,
    #[error("constraint pairs must be irreflexive, got ({0:?}, {0:?})")]
    ReflexivePair(String),
    #[error("the vacuous reading has no formula translation")]
    VacuousUntranslatable,
    #[error("unknown relation kind {0:?}")]
    UnknownRelation(String),
    #[error("unknown variant {0:?}")]
    UnknownVariant(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// Position values extended with the two infinities.
///
/// The derived order gives `-inf < n < +inf` for every finite `n`, and makes
/// `-inf <= -inf` and `+inf <= +inf` hold while their strict forms do not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtInt {
    NegInf,
    Fin(usize),
    PosInf,
}

/// The five visit-order relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    /// `last(p, w, S) <  last(q, w, S)` on the set run.
    LtLlSets,
    /// `last(p, w, S) <= last(q, w, S)` on the set run.
    LeLlSets,
    /// `last(p) < last(q)` on every single path.
    LtLlPaths,
    /// `last(p) <= last(q)` on every single path; see [`Variant`].
    LeLlPaths,
    /// `last(p) < first(q)` on every single path.
    LtLfPaths,
}

impl RelationKind {
    pub const ALL: [RelationKind; 5] = [
        RelationKind::LtLlSets,
        RelationKind::LeLlSets,
        RelationKind::LtLlPaths,
        RelationKind::LeLlPaths,
        RelationKind::LtLfPaths,
    ];

    pub fn id(self) -> &'static str {
        match self {
            RelationKind::LtLlSets => "lt-ll-sets",
            RelationKind::LeLlSets => "le-ll-sets",
            RelationKind::LtLlPaths => "lt-ll-paths",
            RelationKind::LeLlPaths => "le-ll-paths",
            RelationKind::LtLfPaths => "lt-lf-paths",
        }
    }

    pub fn parse(id: &str) -> Result<Self, TraversalError> {
        Self::ALL
            .into_iter()
            .find(|k| k.id() == id)
            .ok_or_else(|| TraversalError::UnknownRelation(id.to_string()))
    }

    pub fn on_paths(self) -> bool {
        matches!(
            self,
            RelationKind::LtLlPaths | RelationKind::LeLlPaths | RelationKind::LtLfPaths
        )
    }
}

/// Reading of the `<=` last-last relation on paths.
///
/// The literal reading compares the two last-visit positions on every path,
/// with `-inf <= -inf` holding for doubly unvisited pairs. The vacuous
/// reading additionally grants any path that never visits the second state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Variant {
    #[default]
    Literal,
    Vacuous,
}

impl Variant {
    pub fn id(self) -> &'static str {
        match self {
            Variant::Literal => "literal",
            Variant::Vacuous => "vacuous",
        }
    }

    pub fn parse(id: &str) -> Result<Self, TraversalError> {
        match id {
            "literal" => Ok(Variant::Literal),
            "vacuous" => Ok(Variant::Vacuous),
            other => Err(TraversalError::UnknownVariant(other.to_string())),
        }
    }
}

/// A relation kind with the ordered pairs that must belong to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSpec {
    pub kind: RelationKind,
    pub pairs: Vec<(StateId, StateId)>,
    pub variant: Variant,
}

impl ConstraintSpec {
    pub fn new(
        kind: RelationKind,
        pairs: Vec<(StateId, StateId)>,
        variant: Variant,
        state_names: &[String],
    ) -> Result<Self, TraversalError> {
        for &(p, q) in &pairs {
            if p == q {
                return Err(TraversalError::ReflexivePair(state_names[p].clone()));
            }
        }
        Ok(ConstraintSpec {
            kind,
            pairs,
            variant,
        })
    }
}

/// First and last visit positions, per start state and aggregated.
#[derive(Clone, Debug)]
pub struct TraversalProfile {
    /// Row index per start state; `None` for states outside `S`.
    row_of: Vec<Option<usize>>,
    first_per_start: Vec<Vec<ExtInt>>,
    last_per_start: Vec<Vec<ExtInt>>,
    first_agg: Vec<ExtInt>,
    last_agg: Vec<ExtInt>,
}

impl TraversalProfile {
    pub fn first_on_path(&self, start: StateId, q: StateId) -> ExtInt {
        let row = self.row_of[start].expect("start state must be in S");
        self.first_per_start[row][q]
    }

    pub fn last_on_path(&self, start: StateId, q: StateId) -> ExtInt {
        let row = self.row_of[start].expect("start state must be in S");
        self.last_per_start[row][q]
    }

    pub fn first_in_set(&self, q: StateId) -> ExtInt {
        self.first_agg[q]
    }

    pub fn last_in_set(&self, q: StateId) -> ExtInt {
        self.last_agg[q]
    }
}

/// Simulates all `|S|` paths once and tabulates visit positions.
pub fn traversal_profile(
    dfa: &Dfa,
    w: &Word,
    s: &StateSet,
) -> Result<TraversalProfile, TraversalError> {
    if s.is_empty() {
        return Err(TraversalError::EmptyStartSet);
    }
    let n = dfa.n_states();
    let mut row_of = vec![None; n];
    let mut first_per_start = Vec::new();
    let mut last_per_start = Vec::new();
    for r in s.iter() {
        row_of[r] = Some(first_per_start.len());
        let mut first = vec![ExtInt::PosInf; n];
        let mut last = vec![ExtInt::NegInf; n];
        for (i, q) in dfa.path_of(r, w).into_iter().enumerate() {
            if first[q] == ExtInt::PosInf {
                first[q] = ExtInt::Fin(i);
            }
            last[q] = ExtInt::Fin(i);
        }
        first_per_start.push(first);
        last_per_start.push(last);
    }
    let mut first_agg = vec![ExtInt::PosInf; n];
    let mut last_agg = vec![ExtInt::NegInf; n];
    for q in 0..n {
        for row in 0..first_per_start.len() {
            first_agg[q] = first_agg[q].min(first_per_start[row][q]);
            last_agg[q] = last_agg[q].max(last_per_start[row][q]);
        }
    }
    Ok(TraversalProfile {
        row_of,
        first_per_start,
        last_per_start,
        first_agg,
        last_agg,
    })
}

/// Whether `(p, q)` belongs to the relation of `w`, with starts ranging over
/// the full state set.
pub fn relation_membership(
    kind: RelationKind,
    dfa: &Dfa,
    w: &Word,
    p: StateId,
    q: StateId,
    variant: Variant,
) -> Result<bool, TraversalError> {
    relation_membership_from(kind, dfa, w, p, q, variant, &StateSet::full(dfa.n_states()))
}

/// Whether `(p, q)` belongs to the relation of `w` started from `S`.
pub fn relation_membership_from(
    kind: RelationKind,
    dfa: &Dfa,
    w: &Word,
    p: StateId,
    q: StateId,
    variant: Variant,
    s: &StateSet,
) -> Result<bool, TraversalError> {
    if p == q {
        return Err(TraversalError::ReflexivePair(
            dfa.state_name(p).to_string(),
        ));
    }
    let profile = traversal_profile(dfa, w, s)?;
    let ok = match kind {
        RelationKind::LtLlSets => profile.last_in_set(p) < profile.last_in_set(q),
        RelationKind::LeLlSets => profile.last_in_set(p) <= profile.last_in_set(q),
        RelationKind::LtLlPaths => s
            .iter()
            .all(|r| profile.last_on_path(r, p) < profile.last_on_path(r, q)),
        RelationKind::LeLlPaths => s.iter().all(|r| {
            let lq = profile.last_on_path(r, q);
            if variant == Variant::Vacuous && lq == ExtInt::NegInf {
                return true;
            }
            profile.last_on_path(r, p) <= lq
        }),
        RelationKind::LtLfPaths => s
            .iter()
            .all(|r| profile.last_on_path(r, p) < profile.first_on_path(r, q)),
    };
    Ok(ok)
}

/// Whether every pair of the constraint belongs to the relation of `w`.
pub fn agrees(spec: &ConstraintSpec, dfa: &Dfa, w: &Word) -> Result<bool, TraversalError> {
    for &(p, q) in &spec.pairs {
        if !relation_membership(spec.kind, dfa, w, p, q, spec.variant)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The per-pair formula templates, conjoined over all pairs. Atoms are state
/// names; on-paths kinds target single-path traces, on-sets kinds the set
/// trace. Only the literal reading translates.
pub fn constraint_to_formula(
    spec: &ConstraintSpec,
    state_names: &[String],
) -> Result<Formula, TraversalError> {
    if spec.kind == RelationKind::LeLlPaths && spec.variant == Variant::Vacuous {
        return Err(TraversalError::VacuousUntranslatable);
    }
    let parts = spec.pairs.iter().map(|&(p, q)| {
        let p = Formula::atom(&state_names[p]);
        let q = Formula::atom(&state_names[q]);
        match spec.kind {
            // p may only occur when q is still to come.
            RelationKind::LeLlSets | RelationKind::LeLlPaths => {
                Formula::globally(Formula::implies(p, Formula::finally(q)))
            }
            // Some q-visit strictly after the final p-visit.
            RelationKind::LtLlSets | RelationKind::LtLlPaths => Formula::finally(Formula::and(
                q,
                Formula::globally(Formula::not(p)),
            )),
            // Once q has been seen, p is forbidden forever.
            RelationKind::LtLfPaths => {
                Formula::globally(Formula::implies(q, Formula::globally(Formula::not(p))))
            }
        }
    });
    Ok(Formula::conj(parts))
}

/// On-disk constraint description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintFile {
    pub relation: String,
    pub pairs: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

impl ConstraintFile {
    pub fn from_spec(spec: &ConstraintSpec, dfa: &Dfa) -> Self {
        ConstraintFile {
            relation: spec.kind.id().to_string(),
            pairs: spec
                .pairs
                .iter()
                .map(|&(p, q)| (dfa.state_name(p).to_string(), dfa.state_name(q).to_string()))
                .collect(),
            variant: Some(spec.variant.id().to_string()),
        }
    }

    pub fn to_spec(&self, dfa: &Dfa) -> Result<ConstraintSpec, TraversalError> {
        let kind = RelationKind::parse(&self.relation)?;
        let variant = match &self.variant {
            Some(v) => Variant::parse(v)?,
            None => Variant::Literal,
        };
        let mut pairs = Vec::new();
        for (p, q) in &self.pairs {
            pairs.push((dfa.state_index(p)?, dfa.state_index(q)?));
        }
        ConstraintSpec::new(kind, pairs, variant, dfa.states())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Dfa;

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
        .unwrap()
    }

    fn w(dfa: &Dfa, text: &str) -> Word {
        Word::parse(text, dfa.alphabet()).unwrap()
    }

    #[test]
    fn extended_integers_order_as_required() {
        use ExtInt::*;
        assert!(NegInf < Fin(0) && Fin(0) < PosInf);
        assert!(NegInf <= NegInf && PosInf <= PosInf);
        assert!(!(NegInf < NegInf) && !(PosInf < PosInf));
        assert!(Fin(1) < Fin(2));
    }

    #[test]
    fn set_profile_of_the_funnel() {
        let dfa = funnel();
        let full = StateSet::full(3);
        let profile = traversal_profile(&dfa, &w(&dfa, "dc"), &full).unwrap();
        assert_eq!(profile.last_in_set(0), ExtInt::Fin(0));
        assert_eq!(profile.last_in_set(1), ExtInt::Fin(1));
        assert_eq!(profile.last_in_set(2), ExtInt::Fin(2));
        assert_eq!(profile.first_in_set(0), ExtInt::Fin(0));

        let at_start = traversal_profile(&dfa, &Word::empty(), &full).unwrap();
        for q in 0..3 {
            assert_eq!(at_start.first_in_set(q), ExtInt::Fin(0));
            assert_eq!(at_start.last_in_set(q), ExtInt::Fin(0));
        }
    }

    #[test]
    fn path_profile_tracks_a_single_start() {
        let dfa = funnel();
        let profile =
            traversal_profile(&dfa, &w(&dfa, "b"), &StateSet::singleton(3, 0)).unwrap();
        assert_eq!(profile.last_on_path(0, 0), ExtInt::Fin(1));
        assert_eq!(profile.last_on_path(0, 1), ExtInt::NegInf);
        assert_eq!(profile.first_on_path(0, 1), ExtInt::PosInf);
    }

    #[test]
    fn membership_examples() {
        let dfa = funnel();
        let m = |kind, word, variant| {
            relation_membership(kind, &dfa, &w(&dfa, word), 0, 1, variant).unwrap()
        };
        assert!(m(RelationKind::LtLlSets, "dc", Variant::Literal));
        assert!(!m(RelationKind::LeLlSets, "cd", Variant::Literal));
        assert!(m(RelationKind::LtLfPaths, "b", Variant::Literal));
        assert!(!m(RelationKind::LtLfPaths, "a", Variant::Literal));
        // The path from p under "b" is p,p: it never visits q, so the weak
        // last-last comparison fails literally and holds vacuously.
        assert!(!m(RelationKind::LeLlPaths, "b", Variant::Literal));
        assert!(m(RelationKind::LeLlPaths, "b", Variant::Vacuous));
    }

    #[test]
    fn reflexive_pairs_are_rejected() {
        let dfa = funnel();
        assert!(matches!(
            relation_membership(
                RelationKind::LtLlSets,
                &dfa,
                &Word::empty(),
                1,
                1,
                Variant::Literal
            ),
            Err(TraversalError::ReflexivePair(_))
        ));
        assert!(ConstraintSpec::new(
            RelationKind::LtLlSets,
            vec![(2, 2)],
            Variant::Literal,
            dfa.states()
        )
        .is_err());
    }

    #[test]
    fn agreement_is_a_conjunction_over_pairs() {
        let dfa = funnel();
        let spec = ConstraintSpec::new(
            RelationKind::LtLlSets,
            vec![(0, 1)],
            Variant::Literal,
            dfa.states(),
        )
        .unwrap();
        assert!(agrees(&spec, &dfa, &w(&dfa, "dc")).unwrap());

        let empty = ConstraintSpec::new(
            RelationKind::LtLlSets,
            vec![],
            Variant::Literal,
            dfa.states(),
        )
        .unwrap();
        assert!(agrees(&empty, &dfa, &w(&dfa, "a")).unwrap());

        let weak = ConstraintSpec::new(
            RelationKind::LeLlSets,
            vec![(0, 1)],
            Variant::Literal,
            dfa.states(),
        )
        .unwrap();
        assert!(agrees(&weak, &dfa, &Word::empty()).unwrap());
    }

    #[test]
    fn formula_templates() {
        let dfa = funnel();
        let names = dfa.states();
        let le = ConstraintSpec::new(
            RelationKind::LeLlSets,
            vec![(0, 1)],
            Variant::Literal,
            names,
        )
        .unwrap();
        assert_eq!(
            constraint_to_formula(&le, names).unwrap(),
            Formula::globally(Formula::implies(
                Formula::atom("p"),
                Formula::finally(Formula::atom("q"))
            ))
        );

        let lt = ConstraintSpec::new(
            RelationKind::LtLlPaths,
            vec![(0, 1), (1, 2)],
            Variant::Literal,
            names,
        )
        .unwrap();
        let one = |p: &str, q: &str| {
            Formula::finally(Formula::and(
                Formula::atom(q),
                Formula::globally(Formula::not(Formula::atom(p))),
            ))
        };
        assert_eq!(
            constraint_to_formula(&lt, names).unwrap(),
            Formula::and(one("p", "q"), one("q", "r"))
        );

        let lf = ConstraintSpec::new(
            RelationKind::LtLfPaths,
            vec![(1, 2)],
            Variant::Literal,
            names,
        )
        .unwrap();
        assert_eq!(
            constraint_to_formula(&lf, names).unwrap(),
            Formula::globally(Formula::implies(
                Formula::atom("r"),
                Formula::globally(Formula::not(Formula::atom("q")))
            ))
        );

        let vac = ConstraintSpec::new(
            RelationKind::LeLlPaths,
            vec![(0, 1)],
            Variant::Vacuous,
            names,
        )
        .unwrap();
        assert!(matches!(
            constraint_to_formula(&vac, names),
            Err(TraversalError::VacuousUntranslatable)
        ));
    }

    #[test]
    fn constraint_files_round_trip() {
        let dfa = funnel();
        let spec = ConstraintSpec::new(
            RelationKind::LeLlPaths,
            vec![(0, 1), (2, 0)],
            Variant::Vacuous,
            dfa.states(),
        )
        .unwrap();
        let file = ConstraintFile::from_spec(&spec, &dfa);
        let json = serde_json::to_string(&file).unwrap();
        let parsed: ConstraintFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.to_spec(&dfa).unwrap(), spec);
    }
}
