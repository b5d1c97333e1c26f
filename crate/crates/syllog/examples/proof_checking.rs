//! Build a derivation by hand, print it in the file format, parse it
//! back, and check it independently.
//!
//! Run with: cargo run --example proof_checking

use syllog::calculus::{
    check_derivation, parse_derivation, print_derivation, rule_set, RuleSetId,
};
use syllog::surface::parse_formula;

fn main() {
    // the indirect derivation for the relational sequent, as a file
    let text = "\
raa #1 -> all(artist, ~beekeeper)
  rule D3 {c=some(beekeeper, hate), p=beekeeper, q=beekeeper} -> some(beekeeper, ~beekeeper)
    premise all(beekeeper, all(beekeeper, ~hate))
    rule D1 {c=some(beekeeper, hate), p=beekeeper, q=artist} -> some(beekeeper, some(beekeeper, hate))
      rule AA {o=artist, p=artist, q=beekeeper, t=hate} -> all(artist, some(beekeeper, hate))
        premise all(artist, all(artist, hate))
        premise some(artist, beekeeper) #1
      premise some(artist, beekeeper) #1
";
    let rules = rule_set(RuleSetId::R);
    let derivation = parse_derivation(text, rules).expect("parses");
    assert_eq!(print_derivation(&derivation), text, "printer is bit-exact");

    let premises = [
        parse_formula("all(artist, all(artist, hate))").unwrap(),
        parse_formula("all(beekeeper, all(beekeeper, ~hate))").unwrap(),
    ];
    let conclusion = check_derivation(&derivation, rules, &premises).expect("checks");
    println!("accepted; conclusion: {conclusion}");
    println!("direct: {}", derivation.is_direct());

    // tampering with a discharge label is caught
    let bad = text.replace("some(artist, beekeeper) #1\n      premise", "some(artist, beekeeper) #2\n      premise");
    let broken = parse_derivation(&bad, rules).expect("still parses");
    let err = check_derivation(&broken, rules, &premises).unwrap_err();
    println!("tampered proof rejected: {err}");
}
