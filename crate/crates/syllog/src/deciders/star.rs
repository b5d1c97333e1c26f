//! Bounded decision for the fragments without exact deciders.
//!
//! `Rs`, `Rd` and `Rsd` satisfiability is co-NP-hard or worse, and the
//! two dagger fragments admit no complete syllogistic certificates at
//! all, so this decider never claims unsatisfiability: it reports a
//! verified model or an honest no-model-within-bound.

use crate::semantics::{find_model, ModelSearch};
use crate::syntax::{Formula, Signature};

use super::Verdict;

/// Heuristic search bound: twice the squared number of positive c-terms
/// over the signature of the input, capped.
pub fn default_star_bound(gamma: &[Formula], cap: usize) -> usize {
    let mut sig = Signature::default();
    for phi in gamma {
        sig.extend_with(&phi.atoms());
    }
    let k = sig.unaries.len();
    let m = sig.binaries.len();
    let positive_cterms = k + 2 * k * m;
    cap.max(1).min((2 * positive_cterms * positive_cterms).max(1))
}

/// Bounded satisfiability: a verified model, or no-model-within-bound.
pub fn decide_star_sat(gamma: &[Formula], bound: usize) -> Verdict {
    match find_model(gamma, bound) {
        ModelSearch::Found(m) => Verdict::Satisfiable(m),
        ModelSearch::NoModelWithinBound(b) => Verdict::NoModelWithinBound(b),
    }
}
