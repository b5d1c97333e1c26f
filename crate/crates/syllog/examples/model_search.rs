//! The brute-force model finder: smallest models and bounded validity.
//!
//! Run with: cargo run --example model_search

use syllog::semantics::{find_model, oracle_valid, print_model, ModelSearch, OracleOutcome};
use syllog::surface::parse_formula;

fn main() {
    let theta: Vec<_> = [
        "all(p, some(q, r))",
        "some(p, p)",
        "all(q, all(q, ~r))",
    ]
    .iter()
    .map(|t| parse_formula(t).unwrap())
    .collect();
    match find_model(&theta, 6) {
        ModelSearch::Found(m) => {
            println!("smallest model found:");
            print!("{}", print_model(&m));
        }
        ModelSearch::NoModelWithinBound(b) => println!("no model up to {b}"),
    }

    let premises = [parse_formula("all(p, q)").unwrap()];
    let conclusion = parse_formula("some(p, q)").unwrap();
    match oracle_valid(&premises, &conclusion, 4) {
        OracleOutcome::CounterModel(m) => {
            println!("\nuniversal premises carry no existential commitment; countermodel:");
            print!("{}", print_model(&m));
        }
        OracleOutcome::ValidWithinBound(b) => println!("valid up to {b}"),
    }
}
