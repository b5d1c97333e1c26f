//! Saturation-based proof search: direct derivations, refutations, and
//! the single-final-reductio wrapper.
//!
//! Run with: cargo run --example proof_search

use syllog::calculus::{check_derivation, derive, refute, rule_set, RuleSetId};
use syllog::fixtures::gamma_star_fixture;
use syllog::surface::parse_formula;

fn main() {
    // reflexivity comes from the empty premise set
    let goal = parse_formula("all(p, p)").unwrap();
    let d = derive(&[], &goal, RuleSetId::S).expect("derivable by (T)");
    println!("from nothing:\n{d}");

    // the chain premises refute their negated conclusion
    let (mut premises, conclusion) = gamma_star_fixture(4);
    premises.push(conclusion.bar());
    let refutation = refute(&premises, RuleSetId::R).expect("refutable");
    println!("refutation of the chain premises plus the negated conclusion:\n{refutation}");

    // wrapping with one final reductio proves the conclusion itself
    let (premises, conclusion) = gamma_star_fixture(4);
    let mut with_bar = premises.clone();
    with_bar.push(conclusion.bar());
    let indirect = refute(&with_bar, RuleSetId::R)
        .expect("refutable")
        .into_raa(conclusion.clone());
    let checked = check_derivation(&indirect, rule_set(RuleSetId::R), &premises)
        .expect("must check");
    println!("indirect derivation of {checked}:\n{indirect}");

    // saturation is complete for plain derivability, so invalid sequents
    // simply fail
    let theta = [parse_formula("all(p, q)").unwrap()];
    assert!(derive(&theta, &parse_formula("some(p, q)").unwrap(), RuleSetId::S).is_none());
    println!("all(p, q) does not derive some(p, q): not derivable confirmed");
}
