//! Laws of the rule machinery: soundness of accepted derivations, the
//! redundancy of the first Darii form, one-step agreement between the
//! plain and the noun-negation systems, and the single-final-reductio
//! property.

mod common;

use std::collections::BTreeSet;

use rand::Rng;

use syllog::calculus::{
    check_derivation, match_rule, refute, rule_set, saturate, Derivation, RuleSetId,
};
use syllog::deciders::{build_witness_set, decide_r_sat, Verdict};
use syllog::semantics::find_model;
use syllog::surface::print_formula;
use syllog::syntax::{Formula, Fragment, Signature};

use common::*;

/// Grow random direct derivations by forward chaining and check that
/// every accepted derivation is sound over all small models of its
/// premises.
#[test]
fn accepted_direct_derivations_are_sound() {
    let unaries = ["a", "b", "c"];
    let binaries = ["r"];
    let mut rng = rng(0xfa57);
    let systems = [RuleSetId::S, RuleSetId::SDagger, RuleSetId::R];
    let mut checked = 0usize;
    for case in 0..1000 {
        let system = systems[case % systems.len()];
        let rules = rule_set(system);
        let len = rng.gen_range(1..=4);
        let theta: Vec<Formula> = (0..len)
            .map(|_| match system {
                RuleSetId::S => random_s_formula(&mut rng, &unaries),
                RuleSetId::SDagger => random_sd_formula(&mut rng, &unaries),
                _ => random_r_formula(&mut rng, &unaries, &binaries),
            })
            .collect();
        let sat = saturate(&theta, system);
        // pick a random derivable fact and rebuild its derivation
        let facts: Vec<Formula> = sat.formulas().cloned().collect();
        let target = &facts[rng.gen_range(0..facts.len())];
        let derivation = sat.derivation_of(target).expect("fact is derivable");
        let conclusion = check_derivation(&derivation, rules, &theta)
            .unwrap_or_else(|e| panic!("case {case}: rebuilt derivation rejected: {e}"));
        assert!(derivation.is_direct());
        if let syllog::semantics::ModelSearch::Found(m) = find_model(&theta, 4) {
            assert!(
                m.holds(&conclusion),
                "case {case}: model of premises fails conclusion {}",
                print_formula(&conclusion)
            );
            checked += 1;
        }
    }
    assert!(checked > 400, "most random premise sets should be satisfiable");
}

/// Every instance of the first Darii form is already derivable from its
/// antecedents with the other two Darii forms alone.
#[test]
fn first_darii_form_is_redundant() {
    let sig = Signature::new([unary("a"), unary("b"), unary("o")], []);
    let s = rule_set(RuleSetId::S);
    let d1 = s.rule("D1").unwrap();
    let reduced = syllog::calculus::RuleSet {
        id: RuleSetId::S,
        rules: vec![s.rule("D2").unwrap().clone(), s.rule("D3").unwrap().clone()],
    };
    // every instance over the signature, reached by matching D1 against
    // all S-formulas
    let all: BTreeSet<Formula> = sig.all_formulas(Fragment::S).into_iter().collect();
    let results = match_rule(d1, &all, &sig);
    assert!(!results.is_empty());
    for (g, consequent) in results {
        let (ants, _) = syllog::calculus::instantiate(d1, &g).unwrap();
        let premises: Vec<Formula> = ants.into_iter().collect();
        let closure = saturate_with(&premises, &reduced);
        assert!(
            closure.contains(&consequent),
            "D2/D3 miss {} from {:?}",
            print_formula(&consequent),
            premises.iter().map(print_formula).collect::<Vec<_>>()
        );
    }
}

fn saturate_with(theta: &[Formula], rules: &syllog::calculus::RuleSet) -> BTreeSet<Formula> {
    // small fixpoint over the premise atoms, identification-aware
    let mut sig = Signature::default();
    for phi in theta {
        sig.extend_with(&phi.atoms());
    }
    let mut facts: BTreeSet<Formula> = theta.iter().map(Formula::canonicalize).collect();
    loop {
        let mut new = Vec::new();
        for rule in &rules.rules {
            for (_, cons) in match_rule(rule, &facts, &sig) {
                if !facts.contains(&cons) {
                    new.push(cons);
                }
            }
        }
        if new.is_empty() {
            return facts;
        }
        facts.extend(new);
    }
}

/// One-step consequences of the noun-negation rules restricted to plain
/// syllogistic formulas coincide with one-step consequences of the plain
/// rules, over a small signature.
#[test]
fn dagger_rules_conservative_over_plain_formulas() {
    let sig = Signature::new([unary("a"), unary("b")], []);
    let s_formulas: Vec<Formula> = sig.all_formulas(Fragment::S);
    let one_step = |facts: &BTreeSet<Formula>, system: RuleSetId| -> BTreeSet<Formula> {
        let rules = rule_set(system);
        let mut out = BTreeSet::new();
        for rule in &rules.rules {
            if rule.id == "X" {
                continue; // ex falso consequences range over the fragment
            }
            for (_, cons) in match_rule(rule, facts, &sig) {
                if cons.classify().contains(Fragment::S) {
                    out.insert(cons);
                }
            }
        }
        out
    };
    // all fact sets of size <= 2 drawn from the plain fragment
    for (i, f1) in s_formulas.iter().enumerate() {
        for f2 in &s_formulas[i..] {
            let facts: BTreeSet<Formula> =
                [f1.clone(), f2.clone()].map(|f| f.canonicalize()).into_iter().collect();
            let via_plain = one_step(&facts, RuleSetId::S);
            let via_dagger = one_step(&facts, RuleSetId::SDagger);
            assert_eq!(
                via_plain, via_dagger,
                "one-step sets differ on {{{}, {}}}",
                print_formula(f1),
                print_formula(f2)
            );
        }
    }
}

/// Whenever a premise set with the negated conclusion refutes, wrapping
/// the refutation in one final reductio yields an accepted indirect
/// derivation of the conclusion.
#[test]
fn refutations_close_with_one_reductio() {
    let unaries = ["a", "b", "c"];
    let binaries = ["r"];
    let mut rng = rng(0x1aa5);
    let mut wrapped = 0usize;
    for _ in 0..300 {
        let len = rng.gen_range(1..=4);
        let theta: Vec<Formula> = (0..len)
            .map(|_| random_r_formula(&mut rng, &unaries, &binaries))
            .collect();
        let goal = random_r_formula(&mut rng, &unaries, &binaries);
        let mut with_bar = theta.clone();
        with_bar.push(goal.bar());
        if let Some(refutation) = refute(&with_bar, RuleSetId::R) {
            let indirect = refutation.into_raa(goal.clone());
            let conclusion =
                check_derivation(&indirect, rule_set(RuleSetId::R), &theta).unwrap();
            assert_eq!(conclusion.canonicalize(), goal.canonicalize());
            wrapped += 1;
        }
    }
    assert!(wrapped > 10, "suite should hit refutable sequents, got {wrapped}");
}

/// The refutation cross-check: whenever the witness-set decider reports
/// unsatisfiable, forward search also refutes, and both certificates
/// pass the checker.
#[test]
fn unsat_verdicts_are_reproduced_by_search() {
    let unaries = ["a", "b"];
    let binaries = ["r"];
    let mut rng = rng(0xc5c5);
    let mut hits = 0usize;
    for _ in 0..200 {
        let len = rng.gen_range(1..=4);
        let gamma: Vec<Formula> = (0..len)
            .map(|_| random_r_formula(&mut rng, &unaries, &binaries))
            .collect();
        if let Verdict::Unsatisfiable(cert) = decide_r_sat(&gamma).unwrap() {
            hits += 1;
            let c1 = check_derivation(&cert.refutation, rule_set(RuleSetId::R), &gamma)
                .expect("decider certificate checks");
            assert!(c1.is_absurdity());
            let searched = refute(&gamma, RuleSetId::R).expect("search also refutes");
            let c2 = check_derivation(&searched, rule_set(RuleSetId::R), &gamma)
                .expect("search certificate checks");
            assert!(c2.is_absurdity());
        }
    }
    assert!(hits > 10, "suite should hit unsatisfiable sets, got {hits}");
}

/// Bounded verdicts are monotone: enlarging the bound can only move
/// from no-model to a model.
#[test]
fn bounded_verdicts_monotone() {
    let unaries = ["a", "b"];
    let binaries = ["r"];
    let mut rng = rng(0x0b0b);
    for _ in 0..50 {
        let len = rng.gen_range(1..=3);
        let gamma: Vec<Formula> = (0..len)
            .map(|_| random_formula(&mut rng, &unaries, &binaries))
            .collect();
        let small = find_model(&gamma, 2).model().is_some();
        let large = find_model(&gamma, 4).model().is_some();
        assert!(!small || large);
    }
}

/// Witness sets stay linear in the premise count.
#[test]
fn witness_sets_stay_small() {
    let unaries = ["a", "b", "c"];
    let binaries = ["r"];
    let mut rng = rng(0x3333);
    for _ in 0..100 {
        let len = rng.gen_range(1..=6);
        let gamma: Vec<Formula> = (0..len)
            .map(|_| random_r_formula(&mut rng, &unaries, &binaries))
            .collect();
        let ws = build_witness_set(&gamma).unwrap();
        assert!(ws.elements.len() <= 2 + 3 * gamma.len());
    }
}

/// Derivations never outgrow the checker: a rebuilt derivation for every
/// saturated fact round-trips through the file format.
#[test]
fn derivation_files_round_trip() {
    let theta = [
        syllog::surface::parse_formula("some(a, b)").unwrap(),
        syllog::surface::parse_formula("all(b, some(c, r))").unwrap(),
        syllog::surface::parse_formula("all(c, ~a)").unwrap(),
    ];
    let sat = saturate(&theta, RuleSetId::R);
    let rules = rule_set(RuleSetId::R);
    for fact in sat.formulas() {
        let d: Derivation = sat.derivation_of(fact).unwrap();
        let text = syllog::calculus::print_derivation(&d);
        let reparsed = syllog::calculus::parse_derivation(&text, rules).unwrap();
        assert_eq!(reparsed, d);
        check_derivation(&reparsed, rules, &theta).unwrap();
    }
}
