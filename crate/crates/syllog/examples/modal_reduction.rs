//! Reduce modal-logic satisfiability (K with a universal modality) to
//! satisfiability of noun-negation relational formulas, and cross-check
//! both sides with brute force.
//!
//! Run with: cargo run --example modal_reduction

use syllog::fixtures::{kripke_satisfiable, ku_translate, KuFormula};
use syllog::semantics::find_model;

fn show(name: &str, phi: &KuFormula) {
    let translated = ku_translate(phi);
    println!("== {name}: {} first-order formulas", translated.len());
    for formula in translated.iter().take(6) {
        println!("  {formula}");
    }
    if translated.len() > 6 {
        println!("  ...");
    }
    let kripke = kripke_satisfiable(phi, 3);
    let first_order = find_model(&translated, 8).model().is_some();
    println!("kripke satisfiable (<=3 worlds): {kripke}");
    println!("translation satisfiable (<=8 elements): {first_order}\n");
    assert_eq!(kripke, first_order);
}

fn main() {
    let p = || KuFormula::prop("p");
    show("p", &p());
    show("box p", &KuFormula::nec(p()));
    show("p and not p", &KuFormula::and(p(), KuFormula::not(p())));
    show(
        "not box p, universally p",
        &KuFormula::and(KuFormula::not(KuFormula::nec(p())), KuFormula::univ(p())),
    );
}
