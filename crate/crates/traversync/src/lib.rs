//! Synchronizing words under traversal constraints.
//!
//! A synchronizing word drives every state of a deterministic finite automaton
//! into one state. This crate decides richer variants of that question: the
//! input may constrain the *order* in which states are visited (first/last
//! visit relations, over the run of the whole state set or over every
//! individual path), or give a finite-trace temporal formula that the run must
//! satisfy. The same search core also answers careful synchronization of
//! partial automata and two traversal puzzles on plain digraphs, and the
//! `reductions` module generates the instances that connect all of these.
//!
//! Entry points, roughly bottom-up:
//!
//! * [`automata`]: DFAs, partial DFAs, acceptors, words, subset simulation,
//!   synchronizing words, SCCs.
//! * [`ltlf`]: temporal formulas over finite traces, parsing, evaluation, and
//!   compilation to a small automaton over label sets.
//! * [`traversal`]: first/last visit profiles and the five visit-order
//!   relations, plus their formula translations.
//! * [`engine`]: the breadth-first product search that decides every problem
//!   form and extracts shortest witnesses.
//! * [`travgraph`]: First-Visits / Last-Visits traversal on digraphs and the
//!   bridges between those puzzles and constrained synchronization.
//! * [`reductions`]: instance generators (careful sync, acceptor
//!   intersection, CNF) with witness pullback.
//! * [`oracle`]: brute-force enumeration used to cross-check the engine.
//! * [`corpus`]: seeded random instance generators shared by tests and the
//!   CLI.
//! * [`cli`]: the `traversync` command-line front end.

pub mod automata;
pub mod cli;
pub mod corpus;
pub mod engine;
pub mod ltlf;
pub mod oracle;
pub mod reductions;
pub mod traversal;
pub mod travgraph;

pub use automata::{Acceptor, Dfa, PartialDfa, StateSet, Verdict, Word};
pub use engine::{Mode, Problem};
pub use ltlf::Formula;
pub use traversal::{ConstraintSpec, RelationKind, Variant};
