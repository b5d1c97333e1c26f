//! Exact decision for `S` and `Sd` sequents via literal closures.
//!
//! The rules (B), (T), (A) alone derive `all(a, b)` exactly when the
//! pair (a, b) lies in the least relation over literals that contains
//! the universal premises (read modulo the identifications), is
//! reflexive and transitive, and, whenever it relates a literal to its
//! own complement, relates that literal to everything. Satisfiability
//! reduces to consistency of the closures seeded by the existential
//! premises, and one-point models arise from complete consistent
//! extensions.

use std::collections::{BTreeMap, BTreeSet};

use crate::calculus::{
    check_derivation, derive, rule_set, Derivation, RuleSetId, Substitution, Value,
};
use crate::semantics::{disjoint_union, Structure};
use crate::syntax::{ETerm, Formula, Fragment, Quantifier, Signature, UnaryLiteral};

use super::{FragmentError, UnsatCertificate, Verdict};

/// The closure of a seed set of literals under the universal premises.
#[derive(Debug, Clone)]
pub struct LiteralClosure {
    pub base: BTreeSet<UnaryLiteral>,
    pub closure: BTreeSet<UnaryLiteral>,
    relation: BtaRelation,
}

impl LiteralClosure {
    pub fn is_consistent(&self) -> bool {
        self.closure.iter().all(|l| !self.closure.contains(&l.complement()))
    }

    /// A derivation of `all(l, m)` using only (B), (T) and (A), for some
    /// base literal l, when one exists.
    pub fn derivation_to(&self, m: &UnaryLiteral) -> Option<Derivation> {
        self.base.iter().find_map(|l| self.relation.derivation(l, m))
    }
}

/// Justification of one derivable pair, for proof reconstruction.
#[derive(Debug, Clone)]
enum Just {
    /// (T)
    Refl,
    /// A premise read as all(a, b), possibly through the identification.
    Premise(Formula),
    /// (B) through the middle literal.
    Trans(UnaryLiteral),
    /// (A) on a derivation of all(a, ~a).
    ViaA,
    /// The identified pair (~b, ~a) carries the justification.
    Mirror,
}

/// The (B),(T),(A)-derivability relation over the literals of a
/// signature, with back-pointers.
#[derive(Debug, Clone, Default)]
struct BtaRelation {
    literals: Vec<UnaryLiteral>,
    pairs: BTreeMap<(UnaryLiteral, UnaryLiteral), Just>,
}

impl BtaRelation {
    fn new(universals: &[Formula], sig: &Signature) -> BtaRelation {
        let mut rel = BtaRelation {
            literals: sig.all_unary_literals(),
            pairs: BTreeMap::new(),
        };
        for l in &rel.literals.clone() {
            rel.insert(l.clone(), l.clone(), Just::Refl);
        }
        for phi in universals {
            for rep in phi.representatives() {
                if let (Some(from), Some(to)) = (rep.left.as_literal(), rep.right.as_literal())
                {
                    rel.insert(from.clone(), to.clone(), Just::Premise(phi.canonicalize()));
                }
            }
        }
        rel.close();
        rel
    }

    fn insert(&mut self, a: UnaryLiteral, b: UnaryLiteral, just: Just) -> bool {
        if self.pairs.contains_key(&(a.clone(), b.clone())) {
            return false;
        }
        let mirror = (b.complement(), a.complement());
        self.pairs.insert((a, b), just);
        if !self.pairs.contains_key(&mirror) {
            self.pairs.insert(mirror, Just::Mirror);
        }
        true
    }

    fn holds(&self, a: &UnaryLiteral, b: &UnaryLiteral) -> bool {
        self.pairs.contains_key(&(a.clone(), b.clone()))
    }

    /// Close under transitivity and the vacuous-subject rule.
    fn close(&mut self) {
        loop {
            let mut additions: Vec<(UnaryLiteral, UnaryLiteral, Just)> = Vec::new();
            let keys: Vec<(UnaryLiteral, UnaryLiteral)> = self.pairs.keys().cloned().collect();
            for (a, c) in &keys {
                for (c2, b) in &keys {
                    if c == c2 && !self.holds(a, b) {
                        additions.push((a.clone(), b.clone(), Just::Trans(c.clone())));
                    }
                }
            }
            for lit in &self.literals {
                if self.holds(lit, &lit.complement()) {
                    for m in &self.literals {
                        if !self.holds(lit, m) {
                            additions.push((lit.clone(), m.clone(), Just::ViaA));
                        }
                    }
                }
            }
            let mut changed = false;
            for (a, b, just) in additions {
                changed |= self.insert(a, b, just);
            }
            if !changed {
                return;
            }
        }
    }

    /// Everything derivable from some seed literal.
    fn reach(&self, seeds: &BTreeSet<UnaryLiteral>) -> BTreeSet<UnaryLiteral> {
        let mut out = BTreeSet::new();
        for l in seeds {
            for m in &self.literals {
                if self.holds(l, m) {
                    out.insert(m.clone());
                }
            }
        }
        out
    }

    /// Rebuild a derivation of all(a, b) from the back-pointers.
    fn derivation(&self, a: &UnaryLiteral, b: &UnaryLiteral) -> Option<Derivation> {
        let just = self.pairs.get(&(a.clone(), b.clone()))?;
        let conclusion =
            Formula::forall(ETerm::Literal(a.clone()), ETerm::Literal(b.clone()));
        Some(match just {
            Just::Refl => {
                let mut g = Substitution::new();
                g.bind("l", Value::Unary(a.clone()));
                Derivation::RuleApp {
                    rule: "T".into(),
                    subst: g,
                    children: vec![],
                    conclusion,
                }
            }
            Just::Premise(phi) => Derivation::premise(phi.clone()),
            Just::Trans(mid) => {
                let left = self.derivation(a, mid).expect("closed relation");
                let right = self.derivation(mid, b).expect("closed relation");
                let mut g = Substitution::new();
                g.bind("l", Value::Unary(a.clone()));
                g.bind("m", Value::Unary(mid.clone()));
                g.bind("n", Value::Unary(b.clone()));
                Derivation::RuleApp {
                    rule: "B".into(),
                    subst: g,
                    children: vec![left, right],
                    conclusion,
                }
            }
            Just::ViaA => {
                let body = self.derivation(a, &a.complement()).expect("closed relation");
                let mut g = Substitution::new();
                g.bind("l", Value::Unary(a.clone()));
                g.bind("m", Value::Unary(b.clone()));
                Derivation::RuleApp {
                    rule: "A".into(),
                    subst: g,
                    children: vec![body],
                    conclusion,
                }
            }
            Just::Mirror => {
                return self.derivation(&b.complement(), &a.complement());
            }
        })
    }
}

/// Close a set of literals under the universal formulas.
pub fn closure(universals: &[Formula], seeds: &BTreeSet<UnaryLiteral>) -> LiteralClosure {
    let mut sig = Signature::default();
    for phi in universals {
        sig.extend_with(&phi.atoms());
    }
    for l in seeds {
        sig.unaries.insert(l.atom.clone());
    }
    let relation = BtaRelation::new(universals, &sig);
    let closure = relation.reach(seeds);
    LiteralClosure { base: seeds.clone(), closure, relation }
}

fn split(theta: &[Formula]) -> (Vec<Formula>, Vec<Formula>) {
    let canon: BTreeSet<Formula> = theta.iter().map(Formula::canonicalize).collect();
    let mut universal = Vec::new();
    let mut existential = Vec::new();
    for phi in canon {
        match phi.quantifier {
            Quantifier::All => universal.push(phi),
            Quantifier::Some => existential.push(phi),
        }
    }
    (universal, existential)
}

fn literal_pair(phi: &Formula) -> (UnaryLiteral, UnaryLiteral) {
    let l = phi.left.as_literal().expect("Sd formula").clone();
    let m = phi.right.as_literal().expect("Sd formula").clone();
    (l, m)
}

/// One-point structure realizing a complete consistent literal set.
fn one_point_model(lits: &BTreeSet<UnaryLiteral>) -> Structure {
    let mut s = Structure::new(["w"]);
    for l in lits {
        s.declare_unary(l.atom.clone());
        if l.positive {
            s.insert_unary(l.atom.clone(), "w");
        }
    }
    s
}

/// Extend a closed consistent seed to a complete consistent closed set
/// over the signature, following the construction of the completeness
/// proof (add the complement of each missing literal and re-close).
fn complete_extension(
    universals: &[Formula],
    start: &LiteralClosure,
    sig: &Signature,
) -> BTreeSet<UnaryLiteral> {
    let mut current = start.closure.clone();
    for lit in sig.all_unary_literals() {
        if current.contains(&lit) {
            continue;
        }
        let extended = closure(
            universals,
            &current.iter().cloned().chain([lit.complement()]).collect(),
        );
        current = extended.closure;
        assert!(
            current.contains(&lit) || current.contains(&lit.complement()),
            "closure extension must decide every literal"
        );
    }
    assert!(
        current.iter().all(|l| !current.contains(&l.complement())),
        "complete extension of a consistent closed set stays consistent"
    );
    current
}

/// Refutation of {exists(l, m)} ∪ universals given a (B),(T),(A)
/// derivation of all(l1, ~l2) with l1, l2 drawn from {l, m}.
fn refutation_from_pair(
    existential: &Formula,
    l: &UnaryLiteral,
    m: &UnaryLiteral,
    l1: &UnaryLiteral,
    l2: &UnaryLiteral,
    univ_derivation: Derivation,
) -> Derivation {
    let lit = |x: &UnaryLiteral| crate::syntax::ETerm::Literal(x.clone());
    let premise = Derivation::premise(existential.clone());
    if l1 != l2 {
        // all(l1, ~l2) with {l1, l2} = {l, m}: one (D) step suffices
        let (subj, other) = if l1 == l { (l, m) } else { (m, l) };
        debug_assert_eq!(l2, other);
        let mut g = Substitution::new();
        g.bind("l", Value::Unary(subj.clone()));
        g.bind("n", Value::Unary(other.clone()));
        g.bind("m", Value::Unary(other.complement()));
        Derivation::RuleApp {
            rule: "D".into(),
            subst: g,
            children: vec![premise, univ_derivation],
            conclusion: Formula::exists(lit(&other.complement()), lit(other)),
        }
    } else {
        // all(x, ~x) for x in {l, m}: (I) then (D)
        let x = l1;
        let mut gi = Substitution::new();
        gi.bind("l", Value::Unary(x.clone()));
        gi.bind("m", Value::Unary(if x == l { m.clone() } else { l.clone() }));
        let refl = Derivation::RuleApp {
            rule: "I".into(),
            subst: gi,
            children: vec![premise],
            conclusion: Formula::exists(lit(x), lit(x)),
        };
        let mut g = Substitution::new();
        g.bind("l", Value::Unary(x.clone()));
        g.bind("n", Value::Unary(x.clone()));
        g.bind("m", Value::Unary(x.complement()));
        Derivation::RuleApp {
            rule: "D".into(),
            subst: g,
            children: vec![refl, univ_derivation],
            conclusion: Formula::exists(lit(&x.complement()), lit(x)),
        }
    }
}

/// Decide satisfiability of a set of `Sd`-formulas.
///
/// Satisfiable sets get a verified model (a disjoint union of one-point
/// models); unsatisfiable ones a refutation in the `Sd` system extracted
/// from the closure edges and re-checked before return.
pub fn decide_sdagger_sat(theta: &[Formula]) -> Result<Verdict, FragmentError> {
    super::require_fragment(theta, Fragment::SDagger)?;
    let mut sig = Signature::default();
    for phi in theta {
        sig.extend_with(&phi.atoms());
    }
    let (universals, existentials) = split(theta);

    for psi in &existentials {
        let (l, m) = literal_pair(psi);
        let seeds: BTreeSet<UnaryLiteral> = [l.clone(), m.clone()].into_iter().collect();
        let cl = closure(&universals, &seeds);
        if cl.is_consistent() {
            continue;
        }
        // find base literals l1, l2 with all(l1, ~l2) derivable by (B),(T),(A)
        let pair = seeds
            .iter()
            .flat_map(|l1| seeds.iter().map(move |l2| (l1.clone(), l2.clone())))
            .find_map(|(l1, l2)| {
                cl.relation
                    .derivation(&l1, &l2.complement())
                    .map(|d| (l1, l2, d))
            });
        let (l1, l2, univ_derivation) =
            pair.expect("inconsistent closure yields a derivable pair");
        let refutation = refutation_from_pair(psi, &l, &m, &l1, &l2, univ_derivation);
        let checked = check_derivation(&refutation, rule_set(RuleSetId::SDagger), theta)
            .expect("extracted refutation must check");
        assert!(checked.is_absurdity());
        return Ok(Verdict::Unsatisfiable(UnsatCertificate {
            refutation,
            condition_c: None,
        }));
    }

    if existentials.is_empty() {
        if sig.unaries.is_empty() {
            return Ok(Verdict::Satisfiable(Structure::new(["w"])));
        }
        for lit in sig.all_unary_literals() {
            let cl = closure(&universals, &[lit.clone()].into_iter().collect());
            if cl.is_consistent() {
                let complete = complete_extension(&universals, &cl, &sig);
                let model = one_point_model(&complete);
                assert!(model.models(theta.iter()), "one-point model must satisfy theta");
                return Ok(Verdict::Satisfiable(model));
            }
        }
        // every literal is self-contradictory: derive an absurdity via (N)
        let p = sig.unaries.iter().next().expect("non-empty signature").clone();
        let pos = UnaryLiteral::positive(p);
        let neg = pos.complement();
        let bar_chain = closure(&universals, &[neg.clone()].into_iter().collect())
            .relation
            .derivation(&neg, &pos)
            .expect("all(~p, p) derivable when no literal is consistent");
        let lit = |x: &UnaryLiteral| crate::syntax::ETerm::Literal(x.clone());
        let mut gn = Substitution::new();
        gn.bind("l", Value::Unary(pos.clone()));
        let some_pp = Derivation::RuleApp {
            rule: "N".into(),
            subst: gn,
            children: vec![bar_chain],
            conclusion: Formula::exists(lit(&pos), lit(&pos)),
        };
        let pos_chain = closure(&universals, &[pos.clone()].into_iter().collect())
            .relation
            .derivation(&pos, &neg)
            .expect("all(p, ~p) derivable when no literal is consistent");
        let mut gd = Substitution::new();
        gd.bind("l", Value::Unary(pos.clone()));
        gd.bind("n", Value::Unary(pos.clone()));
        gd.bind("m", Value::Unary(neg.clone()));
        let refutation = Derivation::RuleApp {
            rule: "D".into(),
            subst: gd,
            children: vec![some_pp, pos_chain],
            conclusion: Formula::exists(lit(&neg), lit(&pos)),
        };
        let checked = check_derivation(&refutation, rule_set(RuleSetId::SDagger), theta)
            .expect("extracted refutation must check");
        assert!(checked.is_absurdity());
        return Ok(Verdict::Unsatisfiable(UnsatCertificate {
            refutation,
            condition_c: None,
        }));
    }

    // one point per existential premise, glued by disjoint union
    let mut model: Option<Structure> = None;
    for psi in &existentials {
        let (l, m) = literal_pair(psi);
        let cl = closure(&universals, &[l, m].into_iter().collect());
        let complete = complete_extension(&universals, &cl, &sig);
        let point = one_point_model(&complete);
        model = Some(match model {
            None => point,
            Some(acc) => disjoint_union(&acc, &point),
        });
    }
    let model = model.expect("at least one existential");
    assert!(model.models(theta.iter()), "union model must satisfy theta");
    Ok(Verdict::Satisfiable(model))
}

/// Certificate-bearing validity result for `S`/`Sd` sequents.
#[derive(Debug, Clone)]
pub enum SdValidity {
    /// A direct derivation in `Sd` (in `S` when every formula is in `S`).
    Valid(Derivation),
    Invalid(Structure),
}

/// Decide a sequent of `Sd`-formulas, synthesizing a direct derivation
/// via saturation on the valid side, or a countermodel otherwise. When
/// every formula lies in `S`, the search runs in the `S` system.
pub fn decide_sdagger_valid(
    theta: &[Formula],
    conclusion: &Formula,
) -> Result<SdValidity, FragmentError> {
    let mut all = theta.to_vec();
    all.push(conclusion.clone());
    super::require_fragment(&all, Fragment::SDagger)?;
    let mut with_bar = theta.to_vec();
    with_bar.push(conclusion.bar());
    match decide_sdagger_sat(&with_bar)? {
        Verdict::Satisfiable(m) => {
            assert!(m.models(theta.iter()) && !m.holds(conclusion));
            Ok(SdValidity::Invalid(m))
        }
        Verdict::Unsatisfiable(_) => {
            let system = if all.iter().all(|phi| phi.classify().contains(Fragment::S)) {
                RuleSetId::S
            } else {
                RuleSetId::SDagger
            };
            let d = derive(theta, conclusion, system)
                .expect("completeness: valid sequents have direct derivations");
            check_derivation(&d, rule_set(system), theta)
                .expect("synthesized derivation must check");
            Ok(SdValidity::Valid(d))
        }
        Verdict::NoModelWithinBound(_) => unreachable!("sd decider is exact"),
    }
}
