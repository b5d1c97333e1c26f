//! Generators for the structure and formula families used by the test
//! suites: the chain fixtures witnessing direct-system incompleteness,
//! and the twin-chain structures whose theories differ in exactly two
//! formulas. Every bundle verifies its expected facts at construction
//! and panics on any mismatch.

mod ku;

pub use ku::{enumerate_depth2, kripke_satisfiable, ku_translate, KuFormula};

use std::collections::BTreeMap;

use crate::semantics::Structure;
use crate::surface::print_formula;
use crate::syntax::{
    BinaryAtom, BinaryLiteral, ETerm, Formula, Fragment, Signature, UnaryAtom,
    UnaryLiteral,
};

/// Named structures and formula sets with construction-time fact checks.
#[derive(Debug, Clone)]
pub struct FixtureBundle {
    pub name: String,
    pub structures: BTreeMap<String, Structure>,
    pub formula_sets: BTreeMap<String, Vec<Formula>>,
    pub expected_facts: Vec<(String, Formula, bool)>,
}

impl FixtureBundle {
    fn verify(&self) {
        for (structure, formula, expected) in &self.expected_facts {
            let s = self
                .structures
                .get(structure)
                .unwrap_or_else(|| panic!("fixture {}: no structure {structure}", self.name));
            let got = s.holds(formula);
            assert_eq!(
                got,
                *expected,
                "fixture {}: {} should be {} in {structure}",
                self.name,
                print_formula(formula),
                expected
            );
        }
    }
}

fn p_atom(i: usize) -> UnaryAtom {
    UnaryAtom::new(format!("p{i}"))
}

fn pterm(i: usize) -> ETerm {
    ETerm::atom(p_atom(i))
}

fn r_atom() -> BinaryAtom {
    BinaryAtom::new("r")
}

fn exists_next(i: usize, j: usize) -> Formula {
    // all(p_i, some(p_j, r))
    Formula::forall(
        pterm(i),
        ETerm::Exists(UnaryLiteral::positive(p_atom(j)), BinaryLiteral::positive(r_atom())),
    )
}

fn forall_r(i: usize, j: usize) -> Formula {
    // all(p_i, all(p_j, r))
    Formula::forall(
        pterm(i),
        ETerm::Forall(UnaryLiteral::positive(p_atom(j)), BinaryLiteral::positive(r_atom())),
    )
}

/// The chain premises: all(p_i, some(p_{i+1}, r)) for i < n, plus
/// all(p_1, all(p_n, r)), and the conclusion all(p_1, some(p_n, r)).
pub fn gamma_star_fixture(n: usize) -> (Vec<Formula>, Formula) {
    assert!(n >= 2);
    let mut set: Vec<Formula> = (1..n).map(|i| exists_next(i, i + 1)).collect();
    set.push(forall_r(1, n));
    (set, exists_next(1, n))
}

/// The widened premise set: the chain premises together with the
/// reflexivity instances over p_1..p_n and pairwise disjointness.
pub fn gamma_premises(n: usize) -> Vec<Formula> {
    assert!(n >= 2);
    let (mut set, _) = gamma_star_fixture(n);
    for i in 1..=n {
        set.push(Formula::forall(pterm(i), pterm(i)));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            set.push(Formula::forall(pterm(i), pterm(j).complement()));
        }
    }
    set
}

/// The i-th reduced premise set: the chain premises minus the i-th link.
pub fn delta_premises(n: usize, i: usize) -> Vec<Formula> {
    assert!((1..n).contains(&i));
    let dropped = exists_next(i, i + 1).canonicalize();
    gamma_premises(n)
        .into_iter()
        .filter(|phi| phi.canonicalize() != dropped)
        .collect()
}

/// Chain structure with one broken link: elements x1..xn, one per
/// p-atom, r-edges along the chain except from x_i, plus the long edge
/// x1 -> xn. All other atoms are empty.
fn chain_structure(n: usize, broken: usize) -> Structure {
    let names: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    let mut s = Structure::new(names);
    for j in 1..=n {
        s.insert_unary(p_atom(j), &format!("x{j}"));
    }
    s.declare_binary(r_atom());
    for j in 1..n {
        if j != broken {
            s.insert_pair(r_atom(), &format!("x{j}"), &format!("x{}", j + 1));
        }
    }
    s.insert_pair(r_atom(), "x1", &format!("x{n}"));
    s
}

/// Chain structure with a doubled point: like [`chain_structure`] with an
/// extra element b in p_{j+1}, unreached from p_j, with its own onward
/// edge where the reduced premise set demands one.
fn doubled_chain_structure(n: usize, broken: usize, j: usize) -> Structure {
    let mut names: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    names.push("b".to_string());
    let mut s = Structure::new(names);
    for k in 1..=n {
        s.insert_unary(p_atom(k), &format!("x{k}"));
    }
    s.insert_unary(p_atom(j + 1), "b");
    s.declare_binary(r_atom());
    for k in 1..n {
        if k != broken {
            s.insert_pair(r_atom(), &format!("x{k}"), &format!("x{}", k + 1));
        }
    }
    s.insert_pair(r_atom(), "x1", &format!("x{n}"));
    if j + 1 < n && j + 1 != broken {
        s.insert_pair(r_atom(), "b", &format!("x{}", j + 2));
    }
    if j + 1 == n {
        // the long edge covers every p_n point
        s.insert_pair(r_atom(), "x1", "b");
    }
    s
}

/// Truncated chain: elements x1..xi only, edges along the chain.
fn truncated_chain_structure(n: usize, i: usize) -> Structure {
    let names: Vec<String> = (1..=i).map(|j| format!("x{j}")).collect();
    let mut s = Structure::new(names);
    for j in 1..=i {
        s.insert_unary(p_atom(j), &format!("x{j}"));
    }
    for j in i + 1..=n {
        s.declare_unary(p_atom(j));
    }
    s.declare_binary(r_atom());
    for j in 1..i {
        s.insert_pair(r_atom(), &format!("x{j}"), &format!("x{}", j + 1));
    }
    s
}

/// Witness structures for the failure of any fixed finite rule set on
/// the chain family: for each i, a model of the reduced set that
/// falsifies the dropped link, models separating the remaining
/// universal shapes, and a truncated chain falsifying the conclusion.
pub fn gamma_fixture(n: usize) -> FixtureBundle {
    assert!(n >= 2);
    let gamma = gamma_premises(n);
    let conclusion = exists_next(1, n);
    let mut structures = BTreeMap::new();
    let mut expected: Vec<(String, Formula, bool)> = Vec::new();
    let mut formula_sets = BTreeMap::new();
    formula_sets.insert("Gamma".to_string(), gamma.clone());
    formula_sets.insert("gamma".to_string(), vec![conclusion.clone()]);

    for i in 1..n {
        let delta = delta_premises(n, i);
        formula_sets.insert(format!("Delta{i}"), delta.clone());

        let a_name = format!("A{i}");
        structures.insert(a_name.clone(), chain_structure(n, i));
        for phi in &delta {
            expected.push((a_name.clone(), phi.clone(), true));
        }
        expected.push((a_name.clone(), exists_next(i, i + 1), false));
        // distinct p-atoms are not included in one another
        for j in 1..=n {
            for k in 1..=n {
                if j != k {
                    expected.push((
                        a_name.clone(),
                        Formula::forall(pterm(j), pterm(k)),
                        false,
                    ));
                }
            }
            expected.push((
                a_name.clone(),
                Formula::forall(pterm(j), pterm(j).complement()),
                false,
            ));
        }

        for j in 1..n {
            let b_name = format!("B{i}_{j}");
            structures.insert(b_name.clone(), doubled_chain_structure(n, i, j));
            for phi in &delta {
                expected.push((b_name.clone(), phi.clone(), true));
            }
            expected.push((b_name.clone(), forall_r(j, j + 1), false));
        }

        let c_name = format!("C{i}");
        structures.insert(c_name.clone(), truncated_chain_structure(n, i));
        for phi in &delta {
            expected.push((c_name.clone(), phi.clone(), true));
        }
        expected.push((c_name.clone(), conclusion.clone(), false));
    }

    // the all-empty structure satisfies every reduced set and no
    // existential formula
    let mut empty = Structure::new(["x1"]);
    for j in 1..=n {
        empty.declare_unary(p_atom(j));
    }
    empty.declare_binary(r_atom());
    structures.insert("A0".to_string(), empty);
    for i in 1..n {
        for phi in delta_premises(n, i) {
            expected.push(("A0".to_string(), phi, true));
        }
    }
    expected.push((
        "A0".to_string(),
        Formula::exists(pterm(1), pterm(1)),
        false,
    ));

    let bundle = FixtureBundle {
        name: format!("gamma(n={n})"),
        structures,
        formula_sets,
        expected_facts: expected,
    };
    bundle.verify();
    bundle
}

// ---------------------------------------------------------------------------
// Twin-chain structures

fn named(prefix: &str, i: usize) -> String {
    format!("{prefix}{i}")
}

fn ua(n: &str) -> UnaryAtom {
    UnaryAtom::new(n)
}

/// Signature of the twin-chain structures: o1, o2, o3, q1, q2, p1..pn
/// over the binary atoms r and s.
pub fn twin_chain_signature(n: usize) -> Signature {
    let mut unaries = vec![ua("o1"), ua("o2"), ua("o3"), ua("q1"), ua("q2")];
    for i in 1..=n {
        unaries.push(p_atom(i));
    }
    Signature::new(unaries, [BinaryAtom::new("r"), BinaryAtom::new("s")])
}

/// The base twin-chain structure: two r-chains through p_1..p_n (one
/// marked q1, one q2) feeding the separator elements, with the out-lier
/// elements that pin down its theory.
pub fn twin_chain_a(n: usize) -> Structure {
    assert!(n >= 2);
    let mut names: Vec<String> = Vec::new();
    for i in 1..=n {
        names.push(named("a", i));
    }
    for i in 1..=n {
        names.push(named("c", i));
    }
    names.extend(["u0", "u1", "u2", "u3", "u4", "v1", "v2"].map(String::from));
    let mut s = Structure::new(names);
    for atom in twin_chain_signature(n).unaries {
        s.declare_unary(atom);
    }
    let r = BinaryAtom::new("r");
    let sb = BinaryAtom::new("s");
    s.declare_binary(r.clone());
    s.declare_binary(sb.clone());
    for i in 1..=n {
        s.insert_unary(p_atom(i), &named("a", i));
        s.insert_unary(p_atom(i), &named("c", i));
        s.insert_unary(ua("q1"), &named("a", i));
        s.insert_unary(ua("q2"), &named("c", i));
    }
    s.insert_unary(ua("o1"), "u0");
    s.insert_unary(p_atom(1), "u1");
    s.insert_unary(ua("q1"), "u2");
    s.insert_unary(ua("q2"), "u2");
    s.insert_unary(ua("q1"), "u4");
    s.insert_unary(ua("o2"), "v1");
    s.insert_unary(ua("o2"), "v2");
    s.insert_unary(ua("o3"), "v2");
    for i in 1..n {
        s.insert_pair(r.clone(), &named("a", i), &named("a", i + 1));
        s.insert_pair(r.clone(), &named("c", i), &named("c", i + 1));
    }
    // every element inside the dotted box, u2 included, is r-related
    // to u2
    for i in 1..=n {
        s.insert_pair(r.clone(), &named("a", i), "u2");
        s.insert_pair(r.clone(), &named("c", i), "u2");
    }
    s.insert_pair(r.clone(), "u2", "u2");
    s.insert_pair(r.clone(), "u0", &named("a", 1));
    s.insert_pair(r.clone(), "u0", &named("c", 1));
    s.insert_pair(r.clone(), "u1", &named("a", 2));
    s.insert_pair(r.clone(), "u3", &named("c", 1));
    s.insert_pair(sb.clone(), &named("a", n), "v1");
    s.insert_pair(sb, &named("c", n), "v2");
    s
}

/// The i-th variant: the base structure plus a third r-chain b_1..b_i
/// marked with both q1 and q2, and the extra element u5 witnessing the
/// negation of the separating formula.
pub fn twin_chain_b(n: usize, i: usize) -> Structure {
    assert!(n >= 2 && (1..n).contains(&i));
    let a = twin_chain_a(n);
    let mut names: Vec<String> = a.domain().to_vec();
    for k in 1..=i {
        names.push(named("b", k));
    }
    names.push("u5".to_string());
    let mut s = Structure::new(names);
    for atom in twin_chain_signature(n).unaries {
        s.declare_unary(atom.clone());
        for (idx, elem) in a.domain().iter().enumerate() {
            if a.extension_bits(&ETerm::atom(atom.clone())) & (1 << idx) != 0 {
                s.insert_unary(atom.clone(), elem);
            }
        }
    }
    let r = BinaryAtom::new("r");
    let sb = BinaryAtom::new("s");
    s.declare_binary(r.clone());
    s.declare_binary(sb.clone());
    for (x, xe) in a.domain().iter().enumerate() {
        for (y, ye) in a.domain().iter().enumerate() {
            for atom in [&r, &sb] {
                if a.has_pair(atom, x, y) {
                    s.insert_pair(atom.clone(), xe, ye);
                }
            }
        }
    }
    for k in 1..=i {
        s.insert_unary(p_atom(k), &named("b", k));
        s.insert_unary(ua("q1"), &named("b", k));
        s.insert_unary(ua("q2"), &named("b", k));
        s.insert_pair(r.clone(), &named("b", k), "u2");
        if k < i {
            s.insert_pair(r.clone(), &named("b", k), &named("b", k + 1));
        }
    }
    s.insert_unary(ua("o1"), "u5");
    s.insert_pair(r.clone(), "u5", &named("b", 1));
    s.insert_pair(r, "u5", &named("c", 1));
    s
}

/// The separating formula: all(o1, some(~q2, r)).
pub fn twin_chain_gamma() -> Formula {
    Formula::forall(
        ETerm::atom(ua("o1")),
        ETerm::Exists(UnaryLiteral::negative(ua("q2")), BinaryLiteral::positive(r_atom())),
    )
}

/// The i-th chain-step formula: all(p_i, some(p_{i+1}, r)).
pub fn twin_chain_delta(i: usize) -> Formula {
    exists_next(i, i + 1)
}

/// The eight core facts of the base structure.
pub fn twin_chain_core(n: usize) -> Vec<Formula> {
    let q = |name: &str| UnaryLiteral::positive(ua(name));
    let nq = |name: &str| UnaryLiteral::negative(ua(name));
    let rp = || BinaryLiteral::positive(r_atom());
    let rn = || BinaryLiteral::negative(r_atom());
    let sp = || BinaryLiteral::positive(BinaryAtom::new("s"));
    let sn = || BinaryLiteral::negative(BinaryAtom::new("s"));
    let mut out = vec![
        // all(o1, some(q1, r))
        Formula::forall(ETerm::atom(ua("o1")), ETerm::Exists(q("q1"), rp())),
        // all(o1, all(~p1, ~r))
        Formula::forall(ETerm::atom(ua("o1")), ETerm::Forall(nq("p1"), rn())),
        // all(q1, all(~q1, ~r))
        Formula::forall(ETerm::atom(ua("q1")), ETerm::Forall(nq("q1"), rn())),
        // all(q2, all(~q2, ~r))
        Formula::forall(ETerm::atom(ua("q2")), ETerm::Forall(nq("q2"), rn())),
    ];
    for i in 1..n {
        out.push(twin_chain_delta(i));
    }
    out.extend([
        // all(q1, all(o3, ~s))
        Formula::forall(ETerm::atom(ua("q1")), ETerm::Forall(q("o3"), sn())),
        // all(q2, all(~o3, ~s))
        Formula::forall(ETerm::atom(ua("q2")), ETerm::Forall(nq("o3"), sn())),
        // all(pn, some(o2, s))
        Formula::forall(pterm(n), ETerm::Exists(q("o2"), sp())),
    ]);
    out
}

/// The complete true formula set of the base structure over the fixture
/// signature, with the separating formula replaced by its negation.
pub fn twin_chain_gamma_set(n: usize, fragment: Fragment) -> Vec<Formula> {
    let a = twin_chain_a(n);
    let gamma = twin_chain_gamma().canonicalize();
    let mut out: Vec<Formula> = a
        .theory(fragment, &twin_chain_signature(n))
        .into_iter()
        .filter(|phi| *phi != gamma)
        .collect();
    out.push(gamma.bar().canonicalize());
    out
}

/// Bundle of the twin-chain structures: the base structure `A` and the
/// variant `B<i>` (all variants when `i` is not given), with the core
/// facts and the theory-difference facts verified at construction.
pub fn twin_chain_fixture(n: usize, i: Option<usize>) -> FixtureBundle {
    assert!(n >= 2);
    if let Some(i) = i {
        assert!((1..n).contains(&i), "variant index must satisfy 1 <= i < n");
    }
    let mut structures = BTreeMap::new();
    let mut expected = Vec::new();
    let gamma = twin_chain_gamma();
    structures.insert("A".to_string(), twin_chain_a(n));
    for phi in twin_chain_core(n) {
        expected.push(("A".to_string(), phi, true));
    }
    expected.push(("A".to_string(), gamma.clone(), true));
    let variants: Vec<usize> = match i {
        Some(i) => vec![i],
        None => (1..n).collect(),
    };
    for &i in &variants {
        let name = format!("B{i}");
        structures.insert(name.clone(), twin_chain_b(n, i));
        expected.push((name.clone(), gamma.clone(), false));
        expected.push((name.clone(), gamma.bar(), true));
        expected.push((name.clone(), twin_chain_delta(i), false));
        expected.push((name.clone(), twin_chain_delta(i).bar(), true));
        for j in 1..n {
            if j != i {
                expected.push((name.clone(), twin_chain_delta(j), true));
            }
        }
        for phi in twin_chain_core(n) {
            if phi.canonicalize() != twin_chain_delta(i).canonicalize() {
                expected.push((name.clone(), phi, true));
            }
        }
    }
    let mut formula_sets = BTreeMap::new();
    formula_sets.insert("core".to_string(), twin_chain_core(n));
    formula_sets.insert("gamma".to_string(), vec![gamma]);
    for &i in &variants {
        formula_sets.insert(format!("delta{i}"), vec![twin_chain_delta(i)]);
    }
    let bundle = FixtureBundle {
        name: format!("twin-chain(n={n})"),
        structures,
        formula_sets,
        expected_facts: expected,
    };
    bundle.verify();
    bundle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_derivation, refute, rule_set, RuleSetId};
    use crate::semantics::oracle_valid;
    use crate::syntax::Fragment;

    #[test]
    fn gamma_star_shape() {
        let (set, gamma) = gamma_star_fixture(2);
        assert_eq!(set.len(), 2);
        assert_eq!(gamma, exists_next(1, 2));
        let (set, _) = gamma_star_fixture(4);
        assert_eq!(set.len(), 4);
    }

    #[test]
    fn gamma_star_refutable_with_negated_conclusion() {
        let (mut set, gamma) = gamma_star_fixture(5);
        set.push(gamma.bar());
        let refutation = refute(&set, RuleSetId::R).expect("refutable");
        assert!(refutation.conclusion().is_absurdity());
        check_derivation(&refutation, rule_set(RuleSetId::R), &set).unwrap();
    }

    #[test]
    fn gamma_fixture_constructs_at_n4() {
        let bundle = gamma_fixture(4);
        assert!(bundle.structures.contains_key("A2"));
        assert!(bundle.structures.contains_key("B2_3"));
        assert!(bundle.structures.contains_key("C2"));
    }

    #[test]
    fn gamma_entails_conclusion_semantically() {
        let bundle = gamma_fixture(4);
        let gamma = &bundle.formula_sets["Gamma"];
        let conclusion = exists_next(1, 4);
        assert!(oracle_valid(gamma, &conclusion, 5).is_valid_within_bound());
    }

    #[test]
    fn twin_chain_constructs() {
        let bundle = twin_chain_fixture(2, Some(1));
        let a = &bundle.structures["A"];
        // the first chain head satisfies some(q1, r) (spec example)
        let e = ETerm::Exists(
            UnaryLiteral::positive(ua("q1")),
            BinaryLiteral::positive(r_atom()),
        );
        let u0 = a.element("u0").unwrap();
        assert!(a.extension(&e).contains(&u0));
        // u5 is the witness for the negated separating formula
        let b = &bundle.structures["B1"];
        let verdict = b.satisfies(&twin_chain_gamma().bar());
        assert!(verdict.holds);
        assert_eq!(verdict.witness, Some(b.element("u5").unwrap()));
    }

    #[test]
    fn twin_chain_core_holds_up_to_n6() {
        for n in 2..=6 {
            let a = twin_chain_a(n);
            for phi in twin_chain_core(n) {
                assert!(a.holds(&phi), "core fact {phi} fails at n={n}");
            }
        }
    }

    #[test]
    fn theories_differ_in_exactly_two_formulas() {
        for n in [2usize, 3] {
            let sig = twin_chain_signature(n);
            let a = twin_chain_a(n);
            let b = twin_chain_b(n, 1);
            let th_a = a.theory(Fragment::RStarDagger, &sig);
            let th_b = b.theory(Fragment::RStarDagger, &sig);
            let gamma = twin_chain_gamma().canonicalize();
            let delta = twin_chain_delta(1).canonicalize();
            let expected: std::collections::BTreeSet<Formula> = th_a
                .iter()
                .filter(|phi| **phi != gamma && **phi != delta)
                .cloned()
                .chain([gamma.bar().canonicalize(), delta.bar().canonicalize()])
                .collect();
            let got: std::collections::BTreeSet<Formula> = th_b.into_iter().collect();
            let missing: Vec<_> = expected.difference(&got).take(5).collect();
            let extra: Vec<_> = got.difference(&expected).take(5).collect();
            assert!(
                missing.is_empty() && extra.is_empty(),
                "n={n}: missing {missing:?}, extra {extra:?}"
            );
        }
    }
}
