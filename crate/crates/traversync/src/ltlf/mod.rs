//! Temporal formulas over finite traces.
//!
//! Semantics on a trace `t = t_0 ... t_k` (every `t_i` a label set, `k >= 0`):
//! an atom holds at `i` iff it is in `t_i`; `X` is strong next (fails at the
//! last position); `phi U psi` requires `psi` at some `j in [i, k]` with `phi`
//! at every position before `j`; `F` and `G` are the usual derived forms and
//! both include the current position. Empty traces are rejected: every trace
//! this crate produces is a path of length `|w| + 1 >= 1`.

mod nfa;
mod parse;

use std::collections::BTreeSet;

use thiserror::Error;

pub use nfa::{nfa_of_formula, FormulaNfa, StepOut, NFA_STATE_CAP};
pub use parse::{parse_formula, print_formula};

#[derive(Debug, Error)]
pub enum LtlfError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("empty traces have no semantics")]
    EmptyTrace,
    #[error("formula atom {0:?} is not among the declared propositions")]
    UnknownAtom(String),
    #[error("formula automaton exceeded its state cap of {0}")]
    StateCap(usize),
}

/// Formula AST. `Implies`, `Finally`, and `Globally` are surface forms; the
/// automaton construction rewrites them into the core connectives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    /// Conjunction of a list, `True` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        match parts.pop() {
            None => Formula::True,
            Some(last) => parts
                .into_iter()
                .rev()
                .fold(last, |acc, f| Formula::and(f, acc)),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(x) | Formula::Next(x) | Formula::Finally(x) | Formula::Globally(x) => {
                1 + x.node_count()
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// Sorted, deduplicated atom names.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out.into_iter().collect()
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(name) => {
                out.insert(name.clone());
            }
            Formula::Not(x) | Formula::Next(x) | Formula::Finally(x) | Formula::Globally(x) => {
                x.collect_atoms(out)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

/// Rewrites every `a -> b` into `!a | b`.
pub fn expand_implications(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(n) => Formula::Atom(n.clone()),
        Formula::Not(x) => Formula::not(expand_implications(x)),
        Formula::And(a, b) => Formula::and(expand_implications(a), expand_implications(b)),
        Formula::Or(a, b) => Formula::or(expand_implications(a), expand_implications(b)),
        Formula::Implies(a, b) => Formula::or(
            Formula::not(expand_implications(a)),
            expand_implications(b),
        ),
        Formula::Next(x) => Formula::next(expand_implications(x)),
        Formula::Until(a, b) => Formula::until(expand_implications(a), expand_implications(b)),
        Formula::Finally(x) => Formula::finally(expand_implications(x)),
        Formula::Globally(x) => Formula::globally(expand_implications(x)),
    }
}

/// Rewrites `F x` into `true U x` and `G x` into `!(true U !x)`.
pub fn expand_finally_globally(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(n) => Formula::Atom(n.clone()),
        Formula::Not(x) => Formula::not(expand_finally_globally(x)),
        Formula::And(a, b) => {
            Formula::and(expand_finally_globally(a), expand_finally_globally(b))
        }
        Formula::Or(a, b) => Formula::or(expand_finally_globally(a), expand_finally_globally(b)),
        Formula::Implies(a, b) => {
            Formula::implies(expand_finally_globally(a), expand_finally_globally(b))
        }
        Formula::Next(x) => Formula::next(expand_finally_globally(x)),
        Formula::Until(a, b) => {
            Formula::until(expand_finally_globally(a), expand_finally_globally(b))
        }
        Formula::Finally(x) => Formula::until(Formula::True, expand_finally_globally(x)),
        Formula::Globally(x) => Formula::not(Formula::until(
            Formula::True,
            Formula::not(expand_finally_globally(x)),
        )),
    }
}

/// Pushes negations inward as far as the connectives allow. Implications must
/// already be expanded. A negation in front of `X` or `U` has no dual in this
/// AST and stays put.
pub fn negation_normal_form(f: &Formula) -> Formula {
    match f {
        Formula::Not(x) => match &**x {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Atom(_) => f.clone(),
            Formula::Not(y) => negation_normal_form(y),
            Formula::And(a, b) => Formula::or(
                negation_normal_form(&Formula::not((**a).clone())),
                negation_normal_form(&Formula::not((**b).clone())),
            ),
            Formula::Or(a, b) => Formula::and(
                negation_normal_form(&Formula::not((**a).clone())),
                negation_normal_form(&Formula::not((**b).clone())),
            ),
            Formula::Finally(y) => {
                Formula::globally(negation_normal_form(&Formula::not((**y).clone())))
            }
            Formula::Globally(y) => {
                Formula::finally(negation_normal_form(&Formula::not((**y).clone())))
            }
            Formula::Next(y) => Formula::not(Formula::next(negation_normal_form(y))),
            Formula::Until(a, b) => Formula::not(Formula::until(
                negation_normal_form(a),
                negation_normal_form(b),
            )),
            Formula::Implies(_, _) => panic!("expand implications before NNF"),
        },
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::And(a, b) => Formula::and(negation_normal_form(a), negation_normal_form(b)),
        Formula::Or(a, b) => Formula::or(negation_normal_form(a), negation_normal_form(b)),
        Formula::Next(x) => Formula::next(negation_normal_form(x)),
        Formula::Until(a, b) => Formula::until(negation_normal_form(a), negation_normal_form(b)),
        Formula::Finally(x) => Formula::finally(negation_normal_form(x)),
        Formula::Globally(x) => Formula::globally(negation_normal_form(x)),
        Formula::Implies(_, _) => panic!("expand implications before NNF"),
    }
}

/// A non-empty sequence of label sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    labels: Vec<BTreeSet<String>>,
}

impl Trace {
    pub fn new(labels: Vec<BTreeSet<String>>) -> Result<Self, LtlfError> {
        if labels.is_empty() {
            return Err(LtlfError::EmptyTrace);
        }
        Ok(Trace { labels })
    }

    /// Convenience constructor from name slices.
    pub fn from_names(positions: &[&[&str]]) -> Self {
        let labels = positions
            .iter()
            .map(|names| names.iter().map(|n| n.to_string()).collect())
            .collect();
        Trace::new(labels).expect("from_names requires at least one position")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[BTreeSet<String>] {
        &self.labels
    }
}

/// Truth value of `f` at position 0 of `t`.
pub fn eval_trace(f: &Formula, t: &Trace) -> bool {
    eval_at(f, t.labels(), 0)
}

fn eval_at(f: &Formula, t: &[BTreeSet<String>], i: usize) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p) => t[i].contains(p),
        Formula::Not(x) => !eval_at(x, t, i),
        Formula::And(a, b) => eval_at(a, t, i) && eval_at(b, t, i),
        Formula::Or(a, b) => eval_at(a, t, i) || eval_at(b, t, i),
        Formula::Implies(a, b) => !eval_at(a, t, i) || eval_at(b, t, i),
        Formula::Next(x) => i + 1 < t.len() && eval_at(x, t, i + 1),
        Formula::Until(a, b) => {
            eval_at(b, t, i) || (eval_at(a, t, i) && i + 1 < t.len() && eval_at(f, t, i + 1))
        }
        Formula::Finally(x) => (i..t.len()).any(|j| eval_at(x, t, j)),
        Formula::Globally(x) => (i..t.len()).all(|j| eval_at(x, t, j)),
    }
}

/// Syntactic fragment membership, reported on the implication-expanded
/// negation normal form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FragmentTags {
    /// Negations only on atoms; no modality except `F`.
    pub lplus_f: bool,
    /// Negations only on atoms; no modality except `G`.
    pub lplus_g: bool,
    /// Negations only on atoms; no modality except `U`.
    pub lplus_u: bool,
    /// A conjunction of formulas of the shape `!v U u`.
    pub flat_until_conjunction: bool,
    /// None of the above.
    pub general: bool,
}

pub fn classify_fragment(f: &Formula) -> FragmentTags {
    let e = negation_normal_form(&expand_implications(f));
    let mut neg_ok = true;
    let mut uses_x = false;
    let mut uses_f = false;
    let mut uses_g = false;
    let mut uses_u = false;
    scan_fragment(
        &e, &mut neg_ok, &mut uses_x, &mut uses_f, &mut uses_g, &mut uses_u,
    );
    let lplus_f = neg_ok && !uses_x && !uses_g && !uses_u;
    let lplus_g = neg_ok && !uses_x && !uses_f && !uses_u;
    let lplus_u = neg_ok && !uses_x && !uses_f && !uses_g;
    let flat = is_flat_until_conjunction(&e);
    FragmentTags {
        lplus_f,
        lplus_g,
        lplus_u,
        flat_until_conjunction: flat,
        general: !(lplus_f || lplus_g || lplus_u),
    }
}

fn scan_fragment(
    f: &Formula,
    neg_ok: &mut bool,
    uses_x: &mut bool,
    uses_f: &mut bool,
    uses_g: &mut bool,
    uses_u: &mut bool,
) {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => {}
        Formula::Not(x) => {
            if !matches!(**x, Formula::Atom(_)) {
                *neg_ok = false;
            }
            scan_fragment(x, neg_ok, uses_x, uses_f, uses_g, uses_u);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            scan_fragment(a, neg_ok, uses_x, uses_f, uses_g, uses_u);
            scan_fragment(b, neg_ok, uses_x, uses_f, uses_g, uses_u);
        }
        Formula::Implies(a, b) => {
            // NNF input never contains implications, but stay total.
            *neg_ok = false;
            scan_fragment(a, neg_ok, uses_x, uses_f, uses_g, uses_u);
            scan_fragment(b, neg_ok, uses_x, uses_f, uses_g, uses_u);
        }
        Formula::Next(x) => {
            *uses_x = true;
            scan_fragment(x, neg_ok, uses_x, uses_f, uses_g, uses_u);
        }
        Formula::Until(a, b) => {
            *uses_u = true;
            scan_fragment(a, neg_ok, uses_x, uses_f, uses_g, uses_u);
            scan_fragment(b, neg_ok, uses_x, uses_f, uses_g, uses_u);
        }
        Formula::Finally(x) => {
            *uses_f = true;
            scan_fragment(x, neg_ok, uses_x, uses_f, uses_g, uses_u);
        }
        Formula::Globally(x) => {
            *uses_g = true;
            scan_fragment(x, neg_ok, uses_x, uses_f, uses_g, uses_u);
        }
    }
}

fn is_flat_until_conjunction(f: &Formula) -> bool {
    match f {
        Formula::And(a, b) => is_flat_until_conjunction(a) && is_flat_until_conjunction(b),
        Formula::Until(a, b) => {
            matches!(&**a, Formula::Not(x) if matches!(**x, Formula::Atom(_)))
                && matches!(**b, Formula::Atom(_))
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g_p_implies_f_q() -> Formula {
        Formula::globally(Formula::implies(
            Formula::atom("p"),
            Formula::finally(Formula::atom("q")),
        ))
    }

    #[test]
    fn eventually_forced_response() {
        let f = g_p_implies_f_q();
        assert!(eval_trace(&f, &Trace::from_names(&[&["p"], &["q"]])));
        assert!(!eval_trace(&f, &Trace::from_names(&[&["p"], &["p"]])));
    }

    #[test]
    fn strict_order_formula_on_a_set_trace() {
        // F (q & G !p) over the label sets of the set run under "dc".
        let f = Formula::finally(Formula::and(
            Formula::atom("q"),
            Formula::globally(Formula::not(Formula::atom("p"))),
        ));
        let t = Trace::from_names(&[&["p", "q", "r"], &["q", "r"], &["r"]]);
        assert!(eval_trace(&f, &t));
    }

    #[test]
    fn tautology_holds_everywhere() {
        assert!(eval_trace(&Formula::True, &Trace::from_names(&[&[]])));
    }

    #[test]
    fn next_is_strong() {
        let f = Formula::next(Formula::atom("p"));
        assert!(!eval_trace(&f, &Trace::from_names(&[&["p"]])));
        assert!(eval_trace(&f, &Trace::from_names(&[&[], &["p"]])));
        let xt = Formula::next(Formula::True);
        assert!(!eval_trace(&xt, &Trace::from_names(&[&["p"]])));
    }

    #[test]
    fn finally_and_globally_include_the_current_position() {
        let t = Trace::from_names(&[&["p"]]);
        assert!(eval_trace(&Formula::finally(Formula::atom("p")), &t));
        assert!(eval_trace(&Formula::globally(Formula::atom("p")), &t));
    }

    #[test]
    fn empty_traces_are_rejected() {
        assert!(matches!(Trace::new(vec![]), Err(LtlfError::EmptyTrace)));
    }

    #[test]
    fn fragment_tags_match_the_shapes() {
        let reach = Formula::and(
            Formula::finally(Formula::atom("f")),
            Formula::implies(
                Formula::and(
                    Formula::not(Formula::atom("n")),
                    Formula::not(Formula::atom("f")),
                ),
                Formula::finally(Formula::atom("y")),
            ),
        );
        let tags = classify_fragment(&reach);
        assert!(tags.lplus_f && !tags.lplus_g && !tags.lplus_u && !tags.general);

        let avoid = Formula::globally(Formula::implies(
            Formula::atom("q"),
            Formula::globally(Formula::not(Formula::atom("p"))),
        ));
        let tags = classify_fragment(&avoid);
        assert!(tags.lplus_g && !tags.lplus_f && !tags.general);

        let flat = Formula::and(
            Formula::until(Formula::not(Formula::atom("v")), Formula::atom("u")),
            Formula::until(Formula::not(Formula::atom("x")), Formula::atom("y")),
        );
        let tags = classify_fragment(&flat);
        assert!(tags.flat_until_conjunction && tags.lplus_u && !tags.general);

        let stuck = Formula::not(Formula::until(Formula::atom("p"), Formula::atom("q")));
        let tags = classify_fragment(&stuck);
        assert!(tags.general && !tags.lplus_u && !tags.flat_until_conjunction);

        let plain = Formula::or(Formula::atom("p"), Formula::not(Formula::atom("q")));
        let tags = classify_fragment(&plain);
        assert!(tags.lplus_f && tags.lplus_g && tags.lplus_u && !tags.general);
    }

    prop_compose! {
        fn arb_labels()(mask in 0u8..8) -> BTreeSet<String> {
            let mut set = BTreeSet::new();
            for (i, name) in ["p", "q", "r"].iter().enumerate() {
                if mask >> i & 1 == 1 {
                    set.insert(name.to_string());
                }
            }
            set
        }
    }

    fn arb_trace() -> impl Strategy<Value = Trace> {
        prop::collection::vec(arb_labels(), 1..6).prop_map(|labels| Trace::new(labels).unwrap())
    }

    pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::True),
            Just(Formula::False),
            prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(Formula::atom),
        ];
        leaf.prop_recursive(3, 10, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::next),
                inner.clone().prop_map(Formula::finally),
                inner.clone().prop_map(Formula::globally),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::until(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn finally_is_true_until(f in arb_formula(), t in arb_trace()) {
            let lhs = eval_trace(&Formula::finally(f.clone()), &t);
            let rhs = eval_trace(&Formula::until(Formula::True, f.clone()), &t);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn globally_is_not_finally_not(f in arb_formula(), t in arb_trace()) {
            let lhs = eval_trace(&Formula::globally(f.clone()), &t);
            let rhs = !eval_trace(&Formula::finally(Formula::not(f.clone())), &t);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn expansions_preserve_meaning(f in arb_formula(), t in arb_trace()) {
            let core = expand_finally_globally(&expand_implications(&f));
            prop_assert_eq!(eval_trace(&f, &t), eval_trace(&core, &t));
            let nnf = negation_normal_form(&expand_implications(&f));
            prop_assert_eq!(eval_trace(&f, &t), eval_trace(&nnf, &t));
        }
    }
}
