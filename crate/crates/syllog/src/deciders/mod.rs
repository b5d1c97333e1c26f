//! Decision procedures with constructive certificates.
//!
//! `S` and `Sd` sequents are decided exactly through literal closures,
//! `R` sequents through the witness-set criterion, both in polynomial
//! time and with checked certificates (a model, or a refutation that
//! passes the proof checker). The remaining fragments get bounded model
//! search with an honest three-valued verdict.

mod relational;
mod sdagger;
mod star;

pub use relational::{
    build_witness_set, check_condition_c, decide_r_sat, decide_r_valid,
    ConditionCWitness, RValidity, WitnessId, WitnessSet,
};
pub use sdagger::{closure, decide_sdagger_sat, decide_sdagger_valid, LiteralClosure, SdValidity};
pub use star::{decide_star_sat, default_star_bound};

use crate::calculus::Derivation;
use crate::semantics::{print_model, Structure};
use crate::surface::print_formula;
use crate::syntax::{Formula, Fragment, FragmentSet};

/// Default cap on the bounded-search domain size.
pub const DEFAULT_BOUND_CAP: usize = 12;

/// A formula fell outside the fragment a decider requires.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("formula {formula} is outside fragment {fragment}")]
pub struct FragmentError {
    pub formula: String,
    pub fragment: Fragment,
}

pub(crate) fn require_fragment(
    formulas: &[Formula],
    fragment: Fragment,
) -> Result<(), FragmentError> {
    for phi in formulas {
        if !phi.classify().contains(fragment) {
            return Err(FragmentError { formula: print_formula(phi), fragment });
        }
    }
    Ok(())
}

/// Certificate of unsatisfiability: a refutation that passes the proof
/// checker, plus the witness-set evidence for the relational decider.
#[derive(Debug, Clone)]
pub struct UnsatCertificate {
    pub refutation: Derivation,
    pub condition_c: Option<ConditionCWitness>,
}

/// Decision result for a formula set.
#[derive(Debug, Clone)]
pub enum Verdict {
    Satisfiable(Structure),
    Unsatisfiable(UnsatCertificate),
    NoModelWithinBound(usize),
}

impl Verdict {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, Verdict::Satisfiable(_))
    }

    pub fn is_unsatisfiable(&self) -> bool {
        matches!(self, Verdict::Unsatisfiable(_))
    }
}

/// Decision result for a sequent.
#[derive(Debug, Clone)]
pub enum ValidityOutcome {
    /// Valid, with a derivation of the conclusion from the premises.
    Valid(Derivation),
    /// Invalid, with a countermodel.
    Invalid(Structure),
    /// Bounded search found no countermodel up to the bound.
    NoCounterModelWithinBound(usize),
}

/// The tightest fragment containing every formula, used for routing.
pub fn common_fragment(formulas: &[Formula]) -> Fragment {
    let mut common = FragmentSet::empty();
    for f in Fragment::ALL {
        if formulas.iter().all(|phi| phi.classify().contains(f)) {
            common.insert(f);
        }
    }
    common.tightest().unwrap_or(Fragment::RStarDagger)
}

/// Decide satisfiability, preferring the exact deciders when the common
/// fragment admits one. Returns the fragment used for routing.
pub fn decide_sat(theta: &[Formula], bound_cap: usize) -> (Fragment, Verdict) {
    let fragment = common_fragment(theta);
    let verdict = match fragment {
        Fragment::S | Fragment::SDagger => {
            decide_sdagger_sat(theta).expect("formulas are in Sd")
        }
        Fragment::R => decide_r_sat(theta).expect("formulas are in R"),
        _ => decide_star_sat(theta, default_star_bound(theta, bound_cap)),
    };
    (fragment, verdict)
}

/// Decide validity of a sequent, preferring the exact deciders.
pub fn decide_valid(
    theta: &[Formula],
    conclusion: &Formula,
    bound_cap: usize,
) -> (Fragment, ValidityOutcome) {
    let mut all = theta.to_vec();
    all.push(conclusion.clone());
    let fragment = common_fragment(&all);
    let outcome = match fragment {
        Fragment::S | Fragment::SDagger => {
            match decide_sdagger_valid(theta, conclusion).expect("formulas are in Sd") {
                SdValidity::Valid(d) => ValidityOutcome::Valid(d),
                SdValidity::Invalid(m) => ValidityOutcome::Invalid(m),
            }
        }
        Fragment::R => {
            match decide_r_valid(theta, conclusion).expect("formulas are in R") {
                RValidity::Valid(d) => ValidityOutcome::Valid(d),
                RValidity::Invalid(m) => ValidityOutcome::Invalid(m),
            }
        }
        _ => {
            let bound = default_star_bound(&all, bound_cap);
            match crate::semantics::oracle_valid(theta, conclusion, bound) {
                crate::semantics::OracleOutcome::CounterModel(m) => {
                    ValidityOutcome::Invalid(m)
                }
                crate::semantics::OracleOutcome::ValidWithinBound(b) => {
                    ValidityOutcome::NoCounterModelWithinBound(b)
                }
            }
        }
    };
    (fragment, outcome)
}

/// Render a verdict: a `verdict:` line followed by the embedded model or
/// derivation, and a `condition-c` block when present.
pub fn print_verdict(verdict: &Verdict) -> String {
    match verdict {
        Verdict::Satisfiable(m) => format!("verdict: sat\n{}", print_model(m)),
        Verdict::Unsatisfiable(cert) => {
            let mut out = String::from("verdict: unsat\n");
            if let Some(w) = &cert.condition_c {
                out.push_str(&w.to_string());
            }
            out.push_str(&crate::calculus::print_derivation(&cert.refutation));
            out
        }
        Verdict::NoModelWithinBound(b) => {
            format!("verdict: unknown-bound\nbound: {b}\n")
        }
    }
}
