//! Enumerate everything true in a finite structure, per fragment.
//!
//! Run with: cargo run --example theories

use syllog::semantics::{parse_model, print_model};
use syllog::syntax::Fragment;

fn main() {
    let text = "\
domain: w1 w2
unary man: w1
unary animal: w1 w2
binary kill: (w1,w2)
";
    let structure = parse_model(text).expect("well-formed model");
    print!("{}", print_model(&structure));
    let sig = structure.signature();
    for fragment in [Fragment::S, Fragment::R] {
        let theory = structure.theory(fragment, &sig);
        println!("\n{} true {fragment}-formulas:", theory.len());
        for phi in theory.iter().take(12) {
            println!("  {phi}");
        }
        if theory.len() > 12 {
            println!("  ... and {} more", theory.len() - 12);
        }
    }
}
