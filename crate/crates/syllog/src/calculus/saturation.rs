//! Forward-chaining saturation and direct proof search.
//!
//! The saturation signature is the atoms of the input plus one extra
//! binary atom named apart from them; closing over that signature decides
//! plain derivability. Each derived fact keeps a back-pointer (rule,
//! substitution, antecedents) sufficient to rebuild a derivation, with
//! first-derivation-wins and deterministic tie-breaking.
//!
//! Ex falso (X) is handled lazily: saturation records a contradiction
//! pair instead of materializing every formula, and [`derive`] adds the
//! single (X) step on demand.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Formula, Signature};

use super::{
    match_rule_against, rule_set, Derivation, RuleSet, RuleSetId, Substitution, Value,
};

#[derive(Debug, Clone)]
enum Justification {
    Premise,
    Rule { rule: &'static str, subst: Substitution, antecedents: Vec<Formula> },
}

/// The closure of a premise set under a rule set, over a fixed signature.
#[derive(Debug, Clone)]
pub struct Saturation {
    ruleset: RuleSetId,
    signature: Signature,
    facts: BTreeMap<Formula, Justification>,
    /// Some canonical fact whose bar is also a fact.
    contradiction: Option<Formula>,
}

impl Saturation {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rule_set_id(&self) -> RuleSetId {
        self.ruleset
    }

    /// The materialized facts (everything derivable without ex falso).
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.facts.keys()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn contradiction(&self) -> Option<&Formula> {
        self.contradiction.as_ref()
    }

    /// A contradiction pair usable by ex falso: both sides must lie in
    /// the rule set's fragment.
    fn usable_contradiction(&self) -> Option<&Formula> {
        let psi = self.contradiction.as_ref()?;
        if rule_set(self.ruleset).has_ex_falso()
            && psi.classify().contains(self.ruleset.fragment())
            && psi.bar().classify().contains(self.ruleset.fragment())
        {
            Some(psi)
        } else {
            None
        }
    }

    /// Derivability of a formula, including lazy ex falso consequences.
    pub fn contains(&self, phi: &Formula) -> bool {
        let canon = phi.canonicalize();
        if self.facts.contains_key(&canon) {
            return true;
        }
        self.usable_contradiction().is_some()
            && canon.classify().contains(self.ruleset.fragment())
    }

    /// Rebuild a direct derivation of a formula from the back-pointers,
    /// synthesizing a final (X) step for ex falso consequences.
    pub fn derivation_of(&self, phi: &Formula) -> Option<Derivation> {
        let canon = phi.canonicalize();
        if self.facts.contains_key(&canon) {
            return Some(self.rebuild(&canon));
        }
        let psi = self.usable_contradiction()?;
        if !canon.classify().contains(self.ruleset.fragment()) {
            return None;
        }
        let mut subst = Substitution::new();
        subst.bind("psi", Value::Formula(psi.clone()));
        subst.bind("phi", Value::Formula(canon.clone()));
        Some(Derivation::RuleApp {
            rule: "X".into(),
            subst,
            children: vec![self.rebuild(psi), self.rebuild(&psi.bar().canonicalize())],
            conclusion: canon,
        })
    }

    fn rebuild(&self, phi: &Formula) -> Derivation {
        match self.facts.get(phi).expect("fact present") {
            Justification::Premise => Derivation::premise(phi.clone()),
            Justification::Rule { rule, subst, antecedents } => Derivation::RuleApp {
                rule: (*rule).to_string(),
                subst: subst.clone(),
                children: antecedents.iter().map(|a| self.rebuild(a)).collect(),
                conclusion: phi.clone(),
            },
        }
    }
}

fn saturate_over(theta: &[Formula], rules: &RuleSet, extra: &Signature) -> Saturation {
    let mut signature = extra.clone();
    for phi in theta {
        signature.extend_with(&phi.atoms());
    }
    signature.binaries.insert(signature.fresh_binary());

    let mut facts: BTreeMap<Formula, Justification> = BTreeMap::new();
    for phi in theta {
        facts.entry(phi.canonicalize()).or_insert(Justification::Premise);
    }
    let mut contradiction = facts
        .keys()
        .find(|phi| facts.contains_key(&phi.bar().canonicalize()))
        .cloned();

    let mut delta: Vec<Formula> = facts.keys().cloned().collect();
    let mut first_round = true;
    loop {
        let all: Vec<Formula> = facts.keys().cloned().collect();
        // (consequent, rule index, antecedents, substitution)
        let mut candidates: Vec<(Formula, usize, Vec<Formula>, Substitution)> = Vec::new();
        for (ridx, rule) in rules.rules.iter().enumerate() {
            if rule.id == "X" {
                continue;
            }
            let n = rule.antecedents.len();
            if n == 0 {
                if !first_round {
                    continue;
                }
                for (g, cons) in match_rule_against(rule, &[], &signature) {
                    if !facts.contains_key(&cons) {
                        candidates.push((cons, ridx, Vec::new(), g));
                    }
                }
                continue;
            }
            // semi-naive: at least one antecedent must come from the last round
            for focus in 0..n {
                let lists: Vec<&[Formula]> = (0..n)
                    .map(|i| if i == focus { delta.as_slice() } else { all.as_slice() })
                    .collect();
                for (g, cons) in match_rule_against(rule, &lists, &signature) {
                    if facts.contains_key(&cons) {
                        continue;
                    }
                    let (ants, _) = super::instantiate(rule, &g).expect("match is sort-correct");
                    candidates.push((cons, ridx, ants.into_iter().collect(), g));
                }
            }
        }
        first_round = false;
        candidates.sort();
        candidates.dedup();
        let mut new_delta = Vec::new();
        for (cons, ridx, ants, g) in candidates {
            if facts.contains_key(&cons) {
                continue;
            }
            facts.insert(
                cons.clone(),
                Justification::Rule {
                    rule: rules.rules[ridx].id,
                    subst: g,
                    antecedents: ants,
                },
            );
            if contradiction.is_none() && facts.contains_key(&cons.bar().canonicalize()) {
                contradiction = Some(cons.clone());
            }
            new_delta.push(cons);
        }
        if new_delta.is_empty() {
            break;
        }
        delta = new_delta;
    }
    Saturation {
        ruleset: rules.id,
        signature,
        facts,
        contradiction,
    }
}

/// Close a premise set under a rule set over the atoms of the premises
/// plus one extra binary atom.
pub fn saturate(theta: &[Formula], ruleset: RuleSetId) -> Saturation {
    saturate_over(theta, rule_set(ruleset), &Signature::default())
}

/// Search for a direct derivation of `goal` from `theta` in the given
/// rule set. Complete for plain derivability: the search signature is the
/// atoms of premises and goal plus one extra binary atom.
pub fn derive(theta: &[Formula], goal: &Formula, ruleset: RuleSetId) -> Option<Derivation> {
    let sat = saturate_over(theta, rule_set(ruleset), &goal.atoms());
    sat.derivation_of(goal)
}

/// Search for a direct derivation of some absurdity from `theta`.
pub fn refute(theta: &[Formula], ruleset: RuleSetId) -> Option<Derivation> {
    let sat = saturate(theta, ruleset);
    let fragment = ruleset.fragment();
    let mut absurdities = BTreeSet::new();
    for e in sat.signature().all_eterms() {
        let phi = Formula::exists(e.clone(), e.complement()).canonicalize();
        if phi.classify().contains(fragment) {
            absurdities.insert(phi);
        }
    }
    absurdities.into_iter().find_map(|phi| {
        if sat.facts.contains_key(&phi) {
            sat.derivation_of(&phi)
        } else {
            None
        }
    })
}
