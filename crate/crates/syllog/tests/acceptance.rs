//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Run with: cargo test --test acceptance -- --nocapture

mod common;

use std::collections::BTreeSet;

use syllog::calculus::{
    check_derivation, derive, parse_derivation, rule_set, Derivation, RuleSetId,
    Substitution, Value,
};
use syllog::deciders::{
    build_witness_set, decide_r_sat, decide_r_valid, decide_sdagger_valid, RValidity,
    SdValidity, Verdict,
};
use syllog::fixtures::{
    enumerate_depth2, gamma_fixture, gamma_premises, gamma_star_fixture,
    kripke_satisfiable, ku_translate, twin_chain_a, twin_chain_b, twin_chain_core,
    twin_chain_delta, twin_chain_gamma, twin_chain_gamma_set, twin_chain_signature,
    KuFormula,
};
use syllog::semantics::{find_model, oracle_valid, OracleOutcome};
use syllog::surface::{parse_formula, parse_sequent, print_formula};
use syllog::syntax::{
    BinaryLiteral, ETerm, Formula, Fragment, Quantifier, Signature, UnaryLiteral,
};

use common::*;
use rand::Rng;

fn phi(t: &str) -> Formula {
    parse_formula(t).unwrap()
}

fn phis(ts: &[&str]) -> Vec<Formula> {
    ts.iter().map(|t| phi(t)).collect()
}

fn pass(n: usize, title: &str) {
    println!("acceptance {n} ({title}): PASS");
}

/// Criterion 1: the two motivating sequents are valid; universal
/// premises carry no existential commitment.
#[test]
fn c1_motivating_sequents() {
    let seq1 = phis(&[
        "some(artist, beekeeper)",
        "all(artist, carpenter)",
        "all(beekeeper, ~dentist)",
    ]);
    match decide_sdagger_valid(&seq1, &phi("some(carpenter, ~dentist)")).unwrap() {
        SdValidity::Valid(d) => {
            check_derivation(&d, rule_set(RuleSetId::S), &seq1).unwrap();
        }
        other => panic!("seq1 should be valid, got {other:?}"),
    }

    let seq2 = phis(&[
        "some(artist, some(artist, hate))",
        "all(beekeeper, all(beekeeper, ~hate))",
    ]);
    match decide_r_valid(&seq2, &phi("some(artist, ~beekeeper)")).unwrap() {
        RValidity::Valid(d) => {
            check_derivation(&d, rule_set(RuleSetId::R), &seq2).unwrap();
        }
        other => panic!("seq2 should be valid, got {other:?}"),
    }

    let premises = [phi("all(p, q)")];
    match decide_sdagger_valid(&premises, &phi("some(p, q)")).unwrap() {
        SdValidity::Invalid(m) => {
            assert_eq!(m.size(), 1, "countermodel should have one element");
            assert!(m.models(premises.iter()));
            assert!(!m.holds(&phi("some(p, q)")));
        }
        other => panic!("expected countermodel, got {other:?}"),
    }
    pass(1, "motivating sequents");
}

/// Criterion 2: the chain premises plus the negated conclusion are
/// unsatisfiable through the witness-set condition, with a checked
/// refutation, for n = 2..8.
#[test]
fn c2_chain_refutations() {
    for n in 2..=8 {
        let (set, gamma) = gamma_star_fixture(n);
        let mut with_bar = set.clone();
        with_bar.push(gamma.bar());
        match decide_r_sat(&with_bar).unwrap() {
            Verdict::Unsatisfiable(cert) => {
                assert!(cert.condition_c.is_some(), "n={n}: condition must fire");
                let conclusion =
                    check_derivation(&cert.refutation, rule_set(RuleSetId::R), &with_bar)
                        .unwrap_or_else(|e| panic!("n={n}: refutation rejected: {e}"));
                assert!(conclusion.is_absurdity(), "n={n}: must conclude an absurdity");
            }
            other => panic!("n={n}: expected unsat, got {other:?}"),
        }
        match decide_r_valid(&set, &gamma).unwrap() {
            RValidity::Valid(d) => {
                check_derivation(&d, rule_set(RuleSetId::R), &set).unwrap();
            }
            other => panic!("n={n}: conclusion should be valid, got {other:?}"),
        }
    }
    pass(2, "chain refutations for n in 2..=8");
}

/// Criterion 3: at n=4 the widened chain premises entail the long link
/// semantically while direct search in the relational system fails, and
/// the witness structures check all their encoded facts.
#[test]
fn c3_direct_incompleteness_witnessed() {
    let premises = gamma_premises(4);
    let conclusion = phi("all(p1, some(p4, r))");
    assert!(
        oracle_valid(&premises, &conclusion, 5).is_valid_within_bound(),
        "no countermodel up to size 5"
    );
    assert!(
        derive(&premises, &conclusion, RuleSetId::R).is_none(),
        "direct derivation must not exist"
    );
    // the exact decider still certifies validity, indirectly
    match decide_r_valid(&premises, &conclusion).unwrap() {
        RValidity::Valid(d) => assert!(!d.is_direct()),
        other => panic!("expected valid, got {other:?}"),
    }
    // each reduced premise set has a model (the broken chain is one)
    for i in 1..4 {
        let delta = syllog::fixtures::delta_premises(4, i);
        match decide_r_sat(&delta).unwrap() {
            Verdict::Satisfiable(m) => assert!(m.models(delta.iter())),
            other => panic!("reduced set {i} should be satisfiable, got {other:?}"),
        }
        assert!(find_model(&delta, 5).model().is_some());
    }
    // constructing the bundle re-checks every encoded proof-case fact
    let bundle = gamma_fixture(4);
    assert!(bundle.expected_facts.len() > 200);
    pass(3, "semantic validity without direct derivability");
}

/// Criterion 4: on 1000 random sequents over three unary atoms the
/// closure decider, the model-search oracle, and saturation membership
/// agree; valid all-S sequents get derivations in the S system alone.
#[test]
fn c4_sd_completeness_cross_check() {
    let atoms = ["a", "b", "c"];
    let mut rng = rng(0x5d01);
    let mut s_only_valid = 0usize;
    for case in 0..1000 {
        let plain_s = case % 2 == 0;
        let len = rng.gen_range(0..=6);
        let theta: Vec<Formula> = (0..len)
            .map(|_| {
                if plain_s {
                    random_s_formula(&mut rng, &atoms)
                } else {
                    random_sd_formula(&mut rng, &atoms)
                }
            })
            .collect();
        let goal = if plain_s {
            random_s_formula(&mut rng, &atoms)
        } else {
            random_sd_formula(&mut rng, &atoms)
        };
        let result = decide_sdagger_valid(&theta, &goal).unwrap();
        let valid = matches!(result, SdValidity::Valid(_));

        let mut with_bar = theta.clone();
        with_bar.push(goal.bar());
        let existentials = with_bar
            .iter()
            .filter(|f| f.quantifier == Quantifier::Some)
            .count();
        let oracle_says = find_model(&with_bar, existentials + 1).model().is_none();
        assert_eq!(valid, oracle_says, "case {case}: oracle disagrees on {theta:?} / {goal}");

        // saturation membership over the joint signature is exactly
        // what the direct search decides
        let member = derive(&theta, &goal, RuleSetId::SDagger).is_some();
        assert_eq!(valid, member, "case {case}: saturation disagrees");

        if plain_s && valid {
            let d = derive(&theta, &goal, RuleSetId::S)
                .expect("valid S sequents derive in the S system");
            check_derivation(&d, rule_set(RuleSetId::S), &theta).unwrap();
            s_only_valid += 1;
        }
    }
    assert!(s_only_valid > 20, "suite should hit valid all-S sequents");
    pass(4, "1000-sequent closure/oracle/saturation agreement");
}

/// Criterion 5: on 500 random relational sets the witness-set decider
/// agrees with model search at the witness-set bound, models
/// model-check, and refutations proof-check.
#[test]
fn c5_r_oracle_agreement() {
    let unaries = ["a", "b", "c"];
    let binaries = ["r"];
    let mut rng = rng(0x0500);
    let mut unsat_count = 0usize;
    for case in 0..500 {
        let len = rng.gen_range(1..=5);
        let gamma: Vec<Formula> = (0..len)
            .map(|_| random_r_formula(&mut rng, &unaries, &binaries))
            .collect();
        let ws = build_witness_set(&gamma).unwrap();
        let bound = ws.elements.len().max(1);
        let verdict = decide_r_sat(&gamma).unwrap();
        let oracle = find_model(&gamma, bound);
        match &verdict {
            Verdict::Satisfiable(m) => {
                assert!(m.models(gamma.iter()), "case {case}: model fails");
                assert!(
                    oracle.model().is_some(),
                    "case {case}: oracle finds no model for sat set {gamma:?}"
                );
            }
            Verdict::Unsatisfiable(cert) => {
                unsat_count += 1;
                assert!(
                    oracle.model().is_none(),
                    "case {case}: oracle finds a model for unsat set {gamma:?}"
                );
                let conclusion =
                    check_derivation(&cert.refutation, rule_set(RuleSetId::R), &gamma)
                        .unwrap_or_else(|e| panic!("case {case}: refutation rejected: {e}"));
                assert!(conclusion.is_absurdity());
            }
            Verdict::NoModelWithinBound(_) => panic!("exact decider returned a bound"),
        }
    }
    assert!(unsat_count > 30, "suite should hit unsatisfiable sets");
    pass(5, "500-set witness-set/oracle agreement");
}

/// Criterion 6: the twin-chain theories differ in exactly the separating
/// formula and the dropped link (exact set equality at n=2,3); the core
/// facts hold up to n=6; the two-variant facts hold at n=4.
#[test]
fn c6_twin_chain_theories() {
    for n in [2usize, 3] {
        let sig = twin_chain_signature(n);
        let a = twin_chain_a(n);
        let b = twin_chain_b(n, 1);
        let th_a: BTreeSet<Formula> =
            a.theory(Fragment::RStarDagger, &sig).into_iter().collect();
        let th_b: BTreeSet<Formula> =
            b.theory(Fragment::RStarDagger, &sig).into_iter().collect();
        let gamma = twin_chain_gamma().canonicalize();
        let delta = twin_chain_delta(1).canonicalize();
        let expected: BTreeSet<Formula> = th_a
            .iter()
            .filter(|f| **f != gamma && **f != delta)
            .cloned()
            .chain([gamma.bar().canonicalize(), delta.bar().canonicalize()])
            .collect();
        assert_eq!(th_b, expected, "n={n}: exact theory equality");
    }
    for n in 2..=6 {
        let a = twin_chain_a(n);
        for f in twin_chain_core(n) {
            assert!(a.holds(&f), "core fact {f} fails at n={n}");
        }
        assert!(a.holds(&twin_chain_gamma()));
    }
    // two-variant separation at n=4, (i,j) = (2,3)
    let n = 4;
    let (i, j) = (2usize, 3usize);
    let gamma_n = twin_chain_gamma_set(n, Fragment::RDagger);
    let di = twin_chain_delta(i).canonicalize();
    let dj = twin_chain_delta(j).canonicalize();
    let delta_ij: Vec<Formula> = gamma_n
        .iter()
        .filter(|f| f.canonicalize() != di && f.canonicalize() != dj)
        .cloned()
        .collect();
    let bi = twin_chain_b(n, i);
    let bj = twin_chain_b(n, j);
    assert!(bi.models(delta_ij.iter()), "B{i} must satisfy the two-variant set");
    assert!(bi.holds(&di.bar()) && bi.holds(&dj));
    assert!(bj.models(delta_ij.iter()), "B{j} must satisfy the two-variant set");
    assert!(bj.holds(&di) && bj.holds(&dj.bar()));
    pass(6, "twin-chain theory equalities");
}

/// Criterion 7: the vacuous-subject rule is derivable indirectly for
/// every instance over a two-atom signature, and the recorded indirect
/// derivation file checks verbatim.
#[test]
fn c7_indirect_system_exercised() {
    // for every instance of (A): all(p, d) from all(p, ~p), build
    // reductio [some(p, ~d)] ... (I) ... (D1) ... some(p, ~p), and check
    // it in the relative-clause system
    let sig = Signature::new([unary("p"), unary("q")], [binary("r")]);
    let rules = rule_set(RuleSetId::RStar);
    let mut instances = 0usize;
    for p in &sig.unaries {
        let p_term = ETerm::atom(p.clone());
        let premise = Formula::forall(p_term.clone(), p_term.complement());
        for d in sig.all_cterms() {
            let conclusion = Formula::forall(p_term.clone(), d.clone());
            let mut gi = Substitution::new();
            gi.bind("c", Value::Term(p_term.clone()));
            gi.bind("d", Value::Term(d.complement()));
            let refl = Derivation::RuleApp {
                rule: "I".into(),
                subst: gi,
                children: vec![Derivation::Premise {
                    formula: Formula::exists(p_term.clone(), d.complement()),
                    discharge: Some(1),
                }],
                conclusion: Formula::exists(p_term.clone(), p_term.clone()),
            };
            let mut gd = Substitution::new();
            gd.bind("b", Value::Term(p_term.clone()));
            gd.bind("c", Value::Term(p_term.clone()));
            gd.bind("d", Value::Term(p_term.complement()));
            let absurd = Derivation::RuleApp {
                rule: "D1".into(),
                subst: gd,
                children: vec![refl, Derivation::premise(premise.clone())],
                conclusion: Formula::exists(p_term.clone(), p_term.complement()),
            };
            let indirect =
                Derivation::Raa { label: 1, body: Box::new(absurd), conclusion };
            let got = check_derivation(&indirect, rules, &[premise.clone()])
                .unwrap_or_else(|e| panic!("derived rule fails for d={d}: {e}"));
            assert_eq!(got.canonicalize(), Formula::forall(p_term.clone(), d.clone()).canonicalize());
            instances += 1;
        }
    }
    assert_eq!(instances, 2 * 12, "every instance over the signature");

    // the recorded indirect derivation checks verbatim
    let text = include_str!("data/indirect.proof");
    let derivation = parse_derivation(text, rule_set(RuleSetId::R)).unwrap();
    assert_eq!(syllog::calculus::print_derivation(&derivation), text);
    let file = parse_sequent(include_str!("data/indirect_premises.syl")).unwrap();
    let conclusion =
        check_derivation(&derivation, rule_set(RuleSetId::R), &file.premises).unwrap();
    assert_eq!(
        conclusion.canonicalize(),
        file.conclusion.unwrap().canonicalize()
    );
    assert!(!derivation.is_direct());
    pass(7, "indirect derivations check");
}

/// Criterion 8: Kripke satisfiability matches satisfiability of the
/// translation on the depth-two family over one letter.
#[test]
fn c8_modal_translation() {
    let contradiction =
        KuFormula::and(KuFormula::prop("p"), KuFormula::not(KuFormula::prop("p")));
    assert!(!kripke_satisfiable(&contradiction, 3));
    assert!(find_model(&ku_translate(&contradiction), 6).model().is_none());

    let necessity = KuFormula::nec(KuFormula::prop("p"));
    assert!(kripke_satisfiable(&necessity, 3));
    assert!(find_model(&ku_translate(&necessity), 8).model().is_some());

    for f in enumerate_depth2("p") {
        let kripke = kripke_satisfiable(&f, 3);
        let first_order = find_model(&ku_translate(&f), 8).model().is_some();
        assert_eq!(kripke, first_order, "disagreement on {f:?}");
    }
    pass(8, "modal translation equisatisfiability");
}

/// Criterion 9: syntax laws over ten thousand random inputs each.
#[test]
fn c9_syntax_laws() {
    let unaries = ["p", "q", "o"];
    let binaries = ["r", "s"];
    let mut rng = rng(0x0900);
    for _ in 0..10_000 {
        let e = random_eterm(&mut rng, &unaries, &binaries);
        assert_eq!(e.complement().complement(), e, "complement involution");
        let f = random_formula(&mut rng, &unaries, &binaries);
        assert_eq!(f.bar().bar(), f, "bar involution");
        let canon = f.canonicalize();
        assert_eq!(canon.canonicalize(), canon, "canonicalize idempotent");
        assert_eq!(f.flipped().canonicalize(), canon, "representatives collapse");
        assert_eq!(f.classify(), f.bar().classify(), "fragments closed under bar");
        // inclusion lattice
        let set = f.classify();
        for frag in Fragment::ALL {
            if set.contains(frag) {
                for wider in Fragment::ALL {
                    if wider.includes(frag) {
                        assert!(set.contains(wider), "{frag} in set but not {wider}");
                    }
                }
            }
        }
        let text = print_formula(&f);
        assert_eq!(parse_formula(&text).unwrap(), f, "round trip of {text}");
    }
    pass(9, "syntax laws over 10000 random inputs");
}

/// The negated universal quantifier keeps its witnesses: spot checks of
/// the bounded fragments' star examples from the decider contract.
#[test]
fn star_contract_spot_checks() {
    // the motivating relative-clause argument, conclusion negated
    let premises = phis(&["all(man, animal)"]);
    let conclusion = phi("all(some(man, kill), some(animal, kill))");
    match oracle_valid(&premises, &conclusion, 8) {
        OracleOutcome::ValidWithinBound(_) => {}
        OracleOutcome::CounterModel(m) => panic!("valid argument got countermodel {m:?}"),
    }

    // a vacuous-subject existential is satisfiable in one point
    let set = [
        phi("some(all(p, r), all(p, r))"),
        phi("all(p, ~p)"),
    ];
    match syllog::deciders::decide_star_sat(&set, 4) {
        Verdict::Satisfiable(m) => assert_eq!(m.size(), 1),
        other => panic!("expected size-1 model, got {other:?}"),
    }

    // the twin-chain core at n=2 plus the negated separating formula has
    // no model within the default bound
    let mut core = twin_chain_core(2);
    core.push(twin_chain_gamma().bar());
    match syllog::deciders::decide_star_sat(&core, 12) {
        Verdict::NoModelWithinBound(12) => {}
        other => panic!("expected open verdict at bound 12, got {other:?}"),
    }
}

/// The literal complement of a binary literal round-trips through the
/// canonical formula order (regression guard for the term order).
#[test]
fn canonical_order_spot_checks() {
    let f = phi("some(q, p)");
    assert_eq!(print_formula(&f.canonicalize()), "some(p, q)");
    let f = phi("all(~q, ~p)");
    assert_eq!(print_formula(&f.canonicalize()), "all(p, q)");
    let f = Formula::forall(
        ETerm::Exists(UnaryLiteral::positive(unary("q")), BinaryLiteral::positive(binary("r"))),
        ETerm::atom(unary("p")),
    );
    // all(some(q, r), p) is identified with all(~p, all(q, ~r))
    let canon = f.canonicalize();
    assert!(canon == f || canon == f.flipped());
}
