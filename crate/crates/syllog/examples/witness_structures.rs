//! Tour of the bundled witness structures: the chain family on which no
//! fixed finite rule set can be complete, and the twin-chain structures
//! whose theories differ in exactly two formulas.
//!
//! Run with: cargo run --example witness_structures

use syllog::calculus::{derive, RuleSetId};
use syllog::fixtures::{
    gamma_fixture, gamma_premises, twin_chain_delta, twin_chain_fixture, twin_chain_gamma,
};
use syllog::semantics::oracle_valid;
use syllog::surface::parse_formula;
use syllog::syntax::Fragment;

fn main() {
    let n = 4;

    // the chain premises entail the long link semantically, yet direct
    // search in the relational system cannot reach it
    let premises = gamma_premises(n);
    let conclusion = parse_formula("all(p1, some(p4, r))").unwrap();
    assert!(oracle_valid(&premises, &conclusion, 5).is_valid_within_bound());
    assert!(derive(&premises, &conclusion, RuleSetId::R).is_none());
    println!("chain family at n={n}: semantically valid, not directly derivable");

    let bundle = gamma_fixture(n);
    println!(
        "gamma fixture: {} structures, {} checked facts",
        bundle.structures.len(),
        bundle.expected_facts.len()
    );

    // the twin-chain structures: same theory except gamma and delta_1
    let twin = twin_chain_fixture(2, Some(1));
    let a = &twin.structures["A"];
    let b = &twin.structures["B1"];
    let gamma = twin_chain_gamma();
    let delta = twin_chain_delta(1);
    println!(
        "twin chains at n=2: |A| = {}, |B1| = {}",
        a.size(),
        b.size()
    );
    println!("  {gamma}: A {} / B1 {}", a.holds(&gamma), b.holds(&gamma));
    println!("  {delta}: A {} / B1 {}", a.holds(&delta), b.holds(&delta));
    let sig = syllog::fixtures::twin_chain_signature(2);
    let th_a = a.theory(Fragment::RStarDagger, &sig);
    let th_b = b.theory(Fragment::RStarDagger, &sig);
    let diff = th_a.iter().filter(|phi| !th_b.contains(phi)).count()
        + th_b.iter().filter(|phi| !th_a.contains(phi)).count();
    println!("  symmetric theory difference over {} formulas: {diff}", th_a.len());
}
