//! Syntax, semantics, proof systems and decision procedures for six
//! syllogistic fragments of first-order logic.
//!
//! The fragments range from the traditional syllogistic `S` through the
//! relational syllogistic `R` up to `Rsd`, which allows relative-clause
//! subjects and noun-level negation. The crate provides:
//!
//! - abstract and concrete syntax with English glosses ([`syntax`],
//!   [`surface`]);
//! - finite structures, truth evaluation, theory enumeration and a
//!   brute-force model finder ([`semantics`]);
//! - the four rule sets as data, derivation trees with reductio and
//!   discharge, proof checking and saturation-based proof search
//!   ([`calculus`]);
//! - exact polynomial decision procedures for `S`/`Sd` and `R` with
//!   checked certificates, and bounded search for the rest
//!   ([`deciders`]);
//! - generators for the witness structures and formula families used in
//!   the test suites, plus a modal-logic translation ([`fixtures`]).
//!
//! See the `examples/` directory for a tour of each capability; the
//! `syllog` binary exposes the same operations on the command line.

pub mod calculus;
pub mod cli;
pub mod deciders;
pub mod fixtures;
pub mod semantics;
pub mod surface;
pub mod syntax;

pub use surface::{gloss, parse_formula, parse_sequent, print_formula, SequentFile};
pub use syntax::{ETerm, Formula, Fragment, Quantifier, Signature};
