//! Decide sequents: derivations for valid ones, countermodels otherwise.
//!
//! Run with: cargo run --example validity

use syllog::deciders::{decide_valid, ValidityOutcome, DEFAULT_BOUND_CAP};
use syllog::semantics::print_model;
use syllog::surface::parse_formula;

fn show(name: &str, premises: &[&str], conclusion: &str) {
    let theta: Vec<_> = premises
        .iter()
        .map(|t| parse_formula(t).expect("well-formed input"))
        .collect();
    let goal = parse_formula(conclusion).expect("well-formed input");
    let (fragment, outcome) = decide_valid(&theta, &goal, DEFAULT_BOUND_CAP);
    println!("== {name} (routed to {fragment})");
    match outcome {
        ValidityOutcome::Valid(d) => {
            println!("valid; {} derivation:", if d.is_direct() { "direct" } else { "indirect" });
            print!("{d}");
        }
        ValidityOutcome::Invalid(m) => {
            println!("invalid; countermodel:");
            print!("{}", print_model(&m));
        }
        ValidityOutcome::NoCounterModelWithinBound(b) => {
            println!("no countermodel up to size {b} (fragment has no exact decider)");
        }
    }
    println!();
}

fn main() {
    show(
        "a classical syllogism chain",
        &[
            "some(artist, beekeeper)",
            "all(artist, carpenter)",
            "all(beekeeper, ~dentist)",
        ],
        "some(carpenter, ~dentist)",
    );
    show(
        "relational reasoning",
        &[
            "some(artist, some(artist, hate))",
            "all(beekeeper, all(beekeeper, ~hate))",
        ],
        "some(artist, ~beekeeper)",
    );
    show(
        "no existential commitment",
        &["all(p, q)"],
        "some(p, q)",
    );
    show(
        "relative-clause conclusion (bounded check)",
        &["all(man, animal)"],
        "all(some(man, kill), some(animal, kill))",
    );
}
