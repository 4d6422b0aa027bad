#![allow(clippy::result_large_err)]

//! Exact-arithmetic toolkit for building and checking small cutpoint
//! automata from word-matching problems.
//!
//! The crate turns word-pair correspondence instances and string-rewriting
//! systems into weighted automata and stochastic-matrix automata whose
//! acceptance behaviour mirrors the source problem exactly, and verifies
//! every algebraic invariant of those constructions at desk scale. All
//! arithmetic is exact rational arithmetic; nothing is ever rounded.
//!
//! Module map:
//!
//! * [`rational`], [`digits`] — exact fractions, digit words and their
//!   fractional values.
//! * [`pcp`] — correspondence instances (plain and generalized), bounded
//!   configuration search.
//! * [`semithue`] — string rewriting, the reduction chain from a rewriting
//!   system to a binary-alphabet correspondence instance, and a published
//!   counterexample involving empty words.
//! * [`matrix`], [`construction`] — the 6-state word-pair gadgets and the
//!   pipeline that turns them into stochastic automata.
//! * [`binarize`] — alphabet reduction to two input symbols.
//! * [`pfa`] — automaton evaluation, validation, cutpoint shifting,
//!   bounded emptiness search, and the JSON schema.
//! * [`verify`] — named invariant suites shared by the CLI and the test
//!   harness.

pub mod binarize;
pub mod construction;
pub mod digits;
pub mod matrix;
pub mod pcp;
pub mod pfa;
pub mod rational;
pub mod report;
pub mod semithue;
pub mod verify;

pub use digits::{pow10_neg, recode_binary, DigitWord};
pub use matrix::{ColVector, Matrix, RowVector};
pub use pcp::{
    GpcpInstance, IndexSequence, Instance, PcpInstance, SearchLimits, SearchResult, WordPair,
};
pub use pfa::{Comparison, Pfa, StochasticKind, WeightedAutomaton};
pub use rational::Rational;
pub use semithue::{RewriteRule, SemiThueSystem, SymbolCode};
