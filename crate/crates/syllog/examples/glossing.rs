//! Render formulas as English sentences.
//!
//! Run with: cargo run --example glossing

use syllog::surface::{gloss, parse_formula};

fn main() {
    let inputs = [
        "all(p, q)",
        "all(p, ~q)",
        "some(p, q)",
        "some(p, ~q)",
        "all(~p, q)",
        "some(~p, ~q)",
        "all(p, some(q, r))",
        "all(p, some(q, ~r))",
        "some(p, all(q, ~r))",
        "all(p, all(q, ~r))",
        "some(artist, some(artist, hate))",
        "all(some(man, kill), some(animal, kill))",
        "some(c, p)",
        "all(all(p, r), ~q)",
    ];
    for text in inputs {
        let phi = parse_formula(text).expect("well-formed input");
        println!("{text:-45} {}", gloss(&phi));
    }
}
