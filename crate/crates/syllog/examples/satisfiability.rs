//! Decide satisfiability with certificates: exact deciders for S/Sd and
//! R, bounded search for the rest.
//!
//! Run with: cargo run --example satisfiability

use syllog::deciders::{decide_sat, print_verdict, Verdict, DEFAULT_BOUND_CAP};
use syllog::surface::parse_formula;

fn show(name: &str, premises: &[&str]) {
    let theta: Vec<_> = premises
        .iter()
        .map(|t| parse_formula(t).expect("well-formed input"))
        .collect();
    let (fragment, verdict) = decide_sat(&theta, DEFAULT_BOUND_CAP);
    println!("== {name} (routed to {fragment})");
    match &verdict {
        Verdict::Satisfiable(m) => println!("satisfiable with {} elements", m.size()),
        Verdict::Unsatisfiable(_) => println!("unsatisfiable, refutation checked"),
        Verdict::NoModelWithinBound(b) => println!("no model up to size {b}"),
    }
    print!("{}", print_verdict(&verdict));
    println!();
}

fn main() {
    show(
        "classical premises",
        &[
            "some(artist, beekeeper)",
            "all(artist, carpenter)",
            "all(beekeeper, ~dentist)",
        ],
    );
    show("contradictory nouns", &["all(p, ~p)", "all(~p, p)"]);
    show(
        "relational conflict",
        &["some(p, all(q, ~r))", "all(p, all(q, r))", "some(q, q)"],
    );
    show(
        "relative-clause premises (bounded)",
        &[
            "all(some(man, kill), some(animal, kill))",
            "some(some(man, kill), some(man, kill))",
        ],
    );
}
