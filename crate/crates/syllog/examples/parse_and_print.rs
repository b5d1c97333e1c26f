//! Parse formulas, canonicalize them, and classify them into fragments.
//!
//! Run with: cargo run --example parse_and_print

use syllog::surface::{parse_formula, print_formula};

fn main() {
    let inputs = [
        "some(p, ~q)",
        "all(~q, ~p)",
        "some(q, p)",
        "all(p, some(q, r))",
        "some(~p, all(~q, r))",
        "all(some(man, kill), some(animal, kill))",
    ];
    for text in inputs {
        let phi = parse_formula(text).expect("well-formed input");
        let canon = phi.canonicalize();
        let tags: Vec<&str> = canon.classify().iter().map(|f| f.tag()).collect();
        println!(
            "{text:-45} canonical: {:-30} fragments: {}",
            print_formula(&canon),
            tags.join(" ")
        );
        // the printer is bit-exact: parsing its output gives the same tree
        assert_eq!(parse_formula(&print_formula(&phi)).unwrap(), phi);
    }
    // negation is the bar operation, an involution
    let phi = parse_formula("all(p, some(q, r))").unwrap();
    println!("\nbar({}) = {}", print_formula(&phi), print_formula(&phi.bar()));
    assert_eq!(phi.bar().bar(), phi);
}
