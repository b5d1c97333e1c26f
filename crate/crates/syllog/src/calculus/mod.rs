//! Syllogistic rules as data: typed metavariables, formula patterns,
//! the four rule sets, instantiation and matching.
//!
//! A rule is a finite set of antecedent patterns over metavariables plus
//! a consequent pattern. Matching works modulo the two identifications,
//! by expanding every fact to its representatives before pattern
//! matching; consequents come back canonicalized.

mod derivation;
mod saturation;

pub use derivation::{
    check_derivation, parse_derivation, print_derivation, CheckError, Derivation,
};
pub use saturation::{derive, refute, saturate, Saturation};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use crate::syntax::{
    BinaryLiteral, ETerm, Formula, Fragment, Quantifier, Signature, UnaryLiteral,
};

/// Sorts restrict what a metavariable may be bound to. `Formula`-sorted
/// variables appear only in rule (X).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    UnaryAtom,
    UnaryLiteral,
    BinaryAtom,
    BinaryLiteral,
    CTerm,
    PositiveCTerm,
    /// A whole formula of the given fragment.
    Formula(Fragment),
}

/// A typed metavariable of a rule schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetaVar {
    pub name: &'static str,
    pub sort: Sort,
}

/// A concrete value bound to a metavariable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Unary(UnaryLiteral),
    Binary(BinaryLiteral),
    Term(ETerm),
    Formula(Formula),
}

impl Value {
    fn fits(&self, sort: Sort) -> bool {
        match (sort, self) {
            (Sort::UnaryAtom, Value::Unary(l)) => l.positive,
            (Sort::UnaryLiteral, Value::Unary(_)) => true,
            (Sort::BinaryAtom, Value::Binary(t)) => t.positive,
            (Sort::BinaryLiteral, Value::Binary(_)) => true,
            (Sort::CTerm, Value::Term(e)) => e.is_cterm(),
            (Sort::PositiveCTerm, Value::Term(e)) => e.is_cterm() && e.is_positive_cterm(),
            (Sort::Formula(f), Value::Formula(phi)) => phi.classify().contains(f),
            _ => false,
        }
    }

    /// The bound value as an e-term, where that makes sense.
    fn as_term(&self) -> Option<ETerm> {
        match self {
            Value::Unary(l) => Some(ETerm::Literal(l.clone())),
            Value::Term(e) => Some(e.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unary(l) => write!(f, "{l}"),
            Value::Binary(t) => write!(f, "{t}"),
            Value::Term(e) => write!(f, "{e}"),
            Value::Formula(phi) => write!(f, "{phi}"),
        }
    }
}

/// A sort-correct assignment of values to metavariables.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Substitution(pub BTreeMap<&'static str, Value>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: &'static str, value: Value) {
        self.0.insert(var, value);
    }

    pub fn get(&self, var: &str) -> Option<&Value> {
        self.0.iter().find(|(k, _)| **k == var).map(|(_, v)| v)
    }

    /// Extend with a binding, failing on a conflicting existing binding.
    fn try_bind(&self, var: &'static str, value: Value) -> Option<Substitution> {
        match self.get(var) {
            Some(existing) if *existing == value => Some(self.clone()),
            Some(_) => None,
            None => {
                let mut next = self.clone();
                next.bind(var, value);
                Some(next)
            }
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, "}}")
    }
}

/// Term-level pattern of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermPat {
    /// A metavariable, optionally under the bar.
    Var { var: &'static str, complemented: bool },
    /// A quantified term built from an atom variable and a verb variable.
    Compound { quant: Quantifier, subj: &'static str, verb: &'static str },
}

/// Formula-level pattern of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaPat {
    Plain { quant: Quantifier, left: TermPat, right: TermPat },
    /// A whole-formula variable, optionally under the bar (rule (X)).
    FVar { var: &'static str, complemented: bool },
}

/// A named rule: antecedent patterns over typed metavariables and a
/// consequent pattern.
#[derive(Debug, Clone)]
pub struct RuleSchema {
    pub id: &'static str,
    pub vars: Vec<MetaVar>,
    pub antecedents: Vec<FormulaPat>,
    pub consequent: FormulaPat,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("value for {var} violates its sort: {detail}")]
pub struct SortError {
    pub var: String,
    pub detail: String,
}

impl RuleSchema {
    pub fn var(&self, name: &str) -> Option<&MetaVar> {
        self.vars.iter().find(|v| v.name == name)
    }

    fn vars_of_pat(pat: &FormulaPat, out: &mut BTreeSet<&'static str>) {
        match pat {
            FormulaPat::Plain { left, right, .. } => {
                for t in [left, right] {
                    match t {
                        TermPat::Var { var, .. } => {
                            out.insert(var);
                        }
                        TermPat::Compound { subj, verb, .. } => {
                            out.insert(subj);
                            out.insert(verb);
                        }
                    }
                }
            }
            FormulaPat::FVar { var, .. } => {
                out.insert(var);
            }
        }
    }

    /// Variables of the consequent not occurring in any antecedent.
    pub fn free_consequent_vars(&self) -> Vec<&MetaVar> {
        let mut in_ants = BTreeSet::new();
        for a in &self.antecedents {
            Self::vars_of_pat(a, &mut in_ants);
        }
        let mut in_cons = BTreeSet::new();
        Self::vars_of_pat(&self.consequent, &mut in_cons);
        in_cons
            .into_iter()
            .filter(|v| !in_ants.contains(v))
            .map(|v| self.var(v).expect("declared var"))
            .collect()
    }
}

fn instantiate_term(rule: &RuleSchema, pat: &TermPat, g: &Substitution) -> Result<ETerm, SortError> {
    let value_of = |var: &'static str| -> Result<&Value, SortError> {
        g.get(var).ok_or_else(|| SortError {
            var: var.to_string(),
            detail: "missing binding".to_string(),
        })
    };
    let check = |var: &'static str, value: &Value| -> Result<(), SortError> {
        let sort = rule.var(var).expect("declared var").sort;
        if value.fits(sort) {
            Ok(())
        } else {
            Err(SortError { var: var.to_string(), detail: format!("{value} is not a {sort:?}") })
        }
    };
    match pat {
        TermPat::Var { var, complemented } => {
            let value = value_of(var)?;
            check(var, value)?;
            let term = value.as_term().ok_or_else(|| SortError {
                var: var.to_string(),
                detail: "not a term value".to_string(),
            })?;
            Ok(if *complemented { term.complement() } else { term })
        }
        TermPat::Compound { quant, subj, verb } => {
            let sv = value_of(subj)?;
            check(subj, sv)?;
            let vv = value_of(verb)?;
            check(verb, vv)?;
            let (Value::Unary(l), Value::Binary(t)) = (sv, vv) else {
                return Err(SortError {
                    var: subj.to_string(),
                    detail: "compound pattern needs an atom and a verb".to_string(),
                });
            };
            Ok(match quant {
                Quantifier::Some => ETerm::Exists(l.clone(), t.clone()),
                Quantifier::All => ETerm::Forall(l.clone(), t.clone()),
            })
        }
    }
}

fn instantiate_pat(
    rule: &RuleSchema,
    pat: &FormulaPat,
    g: &Substitution,
) -> Result<Formula, SortError> {
    match pat {
        FormulaPat::Plain { quant, left, right } => Ok(Formula {
            quantifier: *quant,
            left: instantiate_term(rule, left, g)?,
            right: instantiate_term(rule, right, g)?,
        }),
        FormulaPat::FVar { var, complemented } => {
            let value = g.get(var).ok_or_else(|| SortError {
                var: var.to_string(),
                detail: "missing binding".to_string(),
            })?;
            if !value.fits(rule.var(var).expect("declared var").sort) {
                return Err(SortError {
                    var: var.to_string(),
                    detail: format!("{value} is not a formula"),
                });
            }
            let Value::Formula(phi) = value else { unreachable!() };
            Ok(if *complemented { phi.bar() } else { phi.clone() })
        }
    }
}

/// Replace the rule's metavariables by the values of a total,
/// sort-correct substitution. Antecedents and consequent come back
/// canonicalized; the antecedents as a set (duplicates collapse).
pub fn instantiate(
    rule: &RuleSchema,
    g: &Substitution,
) -> Result<(BTreeSet<Formula>, Formula), SortError> {
    for mv in &rule.vars {
        match g.get(mv.name) {
            None => {
                return Err(SortError {
                    var: mv.name.to_string(),
                    detail: "missing binding".to_string(),
                })
            }
            Some(v) if !v.fits(mv.sort) => {
                return Err(SortError {
                    var: mv.name.to_string(),
                    detail: format!("{v} is not a {:?}", mv.sort),
                })
            }
            _ => {}
        }
    }
    let mut ants = BTreeSet::new();
    for a in &rule.antecedents {
        ants.insert(instantiate_pat(rule, a, g)?.canonicalize());
    }
    let consequent = instantiate_pat(rule, &rule.consequent, g)?.canonicalize();
    Ok((ants, consequent))
}

fn match_term(
    rule: &RuleSchema,
    pat: &TermPat,
    term: &ETerm,
    g: &Substitution,
) -> Option<Substitution> {
    match pat {
        TermPat::Var { var, complemented } => {
            let target = if *complemented { term.complement() } else { term.clone() };
            let sort = rule.var(var)?.sort;
            let value = match sort {
                Sort::UnaryAtom | Sort::UnaryLiteral => {
                    Value::Unary(target.as_literal()?.clone())
                }
                Sort::CTerm | Sort::PositiveCTerm => Value::Term(target),
                _ => return None,
            };
            if !value.fits(sort) {
                return None;
            }
            g.try_bind(var, value)
        }
        TermPat::Compound { quant, subj, verb } => {
            let (l, t) = match (quant, term) {
                (Quantifier::Some, ETerm::Exists(l, t)) => (l, t),
                (Quantifier::All, ETerm::Forall(l, t)) => (l, t),
                _ => return None,
            };
            let sv = Value::Unary(l.clone());
            if !sv.fits(rule.var(subj)?.sort) {
                return None;
            }
            let vv = Value::Binary(t.clone());
            if !vv.fits(rule.var(verb)?.sort) {
                return None;
            }
            let g = g.try_bind(subj, sv)?;
            g.try_bind(verb, vv)
        }
    }
}

fn match_formula(
    rule: &RuleSchema,
    pat: &FormulaPat,
    fact: &Formula,
    g: &Substitution,
) -> Vec<Substitution> {
    let mut out = Vec::new();
    for rep in fact.representatives() {
        match pat {
            FormulaPat::Plain { quant, left, right } => {
                if rep.quantifier != *quant {
                    continue;
                }
                if let Some(g1) = match_term(rule, left, &rep.left, g) {
                    if let Some(g2) = match_term(rule, right, &rep.right, &g1) {
                        out.push(g2);
                    }
                }
            }
            FormulaPat::FVar { var, complemented } => {
                let bound = if *complemented { rep.bar() } else { rep.clone() };
                if let Some(g1) = g.try_bind(var, Value::Formula(bound.canonicalize())) {
                    out.push(g1);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn enumerate_sort(sort: Sort, sig: &Signature) -> Vec<Value> {
    match sort {
        Sort::UnaryAtom => sig
            .unaries
            .iter()
            .map(|a| Value::Unary(UnaryLiteral::positive(a.clone())))
            .collect(),
        Sort::UnaryLiteral => {
            sig.all_unary_literals().into_iter().map(Value::Unary).collect()
        }
        Sort::BinaryAtom => sig
            .binaries
            .iter()
            .map(|a| Value::Binary(BinaryLiteral::positive(a.clone())))
            .collect(),
        Sort::BinaryLiteral => {
            sig.all_binary_literals().into_iter().map(Value::Binary).collect()
        }
        Sort::CTerm => sig.all_cterms().into_iter().map(Value::Term).collect(),
        Sort::PositiveCTerm => {
            sig.all_positive_cterms().into_iter().map(Value::Term).collect()
        }
        Sort::Formula(f) => {
            sig.all_formulas(f).into_iter().map(Value::Formula).collect()
        }
    }
}

pub(crate) fn match_rule_against(
    rule: &RuleSchema,
    fact_lists: &[&[Formula]],
    sig: &Signature,
) -> Vec<(Substitution, Formula)> {
    let mut partial: Vec<Substitution> = vec![Substitution::new()];
    for (i, ant) in rule.antecedents.iter().enumerate() {
        let facts = fact_lists[i];
        let mut next = Vec::new();
        for g in &partial {
            for fact in facts {
                next.extend(match_formula(rule, ant, fact, g));
            }
        }
        next.sort();
        next.dedup();
        partial = next;
        if partial.is_empty() {
            return Vec::new();
        }
    }
    // fill consequent variables not fixed by the antecedents
    let free = rule.free_consequent_vars();
    let mut complete = partial;
    for mv in &free {
        let values = enumerate_sort(mv.sort, sig);
        let mut next = Vec::with_capacity(complete.len() * values.len());
        for g in &complete {
            for v in &values {
                if let Some(g1) = g.try_bind(mv.name, v.clone()) {
                    next.push(g1);
                }
            }
        }
        complete = next;
    }
    let mut out = Vec::new();
    for g in complete {
        if let Ok(phi) = instantiate_pat(rule, &rule.consequent, &g) {
            out.push((g, phi.canonicalize()));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All one-step consequences of a rule from a set of canonical facts,
/// over the given working signature. Matching tries every identification
/// representative of each fact; consequent variables not bound by the
/// antecedents range over the signature.
pub fn match_rule(
    rule: &RuleSchema,
    facts: &BTreeSet<Formula>,
    sig: &Signature,
) -> Vec<(Substitution, Formula)> {
    let list: Vec<Formula> = facts.iter().cloned().collect();
    let lists: Vec<&[Formula]> = rule.antecedents.iter().map(|_| list.as_slice()).collect();
    match_rule_against(rule, &lists, sig)
}

// ---------------------------------------------------------------------------
// The four rule sets

/// Identifier of one of the four rule sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleSetId {
    S,
    SDagger,
    R,
    RStar,
}

impl RuleSetId {
    pub fn tag(self) -> &'static str {
        match self {
            RuleSetId::S => "S",
            RuleSetId::SDagger => "Sd",
            RuleSetId::R => "R",
            RuleSetId::RStar => "Rs",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [RuleSetId::S, RuleSetId::SDagger, RuleSetId::R, RuleSetId::RStar]
            .into_iter()
            .find(|r| r.tag() == tag)
    }

    /// The fragment the rule set speaks about.
    pub fn fragment(self) -> Fragment {
        match self {
            RuleSetId::S => Fragment::S,
            RuleSetId::SDagger => Fragment::SDagger,
            RuleSetId::R => Fragment::R,
            RuleSetId::RStar => Fragment::RStar,
        }
    }
}

impl fmt::Display for RuleSetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A rule set: its identifier and its rules, exactly as in the source
/// calculi.
#[derive(Debug, Clone)]
pub struct RuleSet {
    pub id: RuleSetId,
    pub rules: Vec<RuleSchema>,
}

impl RuleSet {
    pub fn rule(&self, id: &str) -> Option<&RuleSchema> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn fragment(&self) -> Fragment {
        self.id.fragment()
    }

    pub fn has_ex_falso(&self) -> bool {
        self.rule("X").is_some()
    }
}

fn mv(name: &'static str, sort: Sort) -> MetaVar {
    MetaVar { name, sort }
}

fn v(var: &'static str) -> TermPat {
    TermPat::Var { var, complemented: false }
}

fn vb(var: &'static str) -> TermPat {
    TermPat::Var { var, complemented: true }
}

fn fa(left: TermPat, right: TermPat) -> FormulaPat {
    FormulaPat::Plain { quant: Quantifier::All, left, right }
}

fn fe(left: TermPat, right: TermPat) -> FormulaPat {
    FormulaPat::Plain { quant: Quantifier::Some, left, right }
}

fn ce(subj: &'static str, verb: &'static str) -> TermPat {
    TermPat::Compound { quant: Quantifier::Some, subj, verb }
}

fn ca(subj: &'static str, verb: &'static str) -> TermPat {
    TermPat::Compound { quant: Quantifier::All, subj, verb }
}

fn rule(
    id: &'static str,
    vars: Vec<MetaVar>,
    antecedents: Vec<FormulaPat>,
    consequent: FormulaPat,
) -> RuleSchema {
    RuleSchema { id, vars, antecedents, consequent }
}

fn build_s() -> RuleSet {
    let ua = Sort::UnaryAtom;
    let ul = Sort::UnaryLiteral;
    RuleSet {
        id: RuleSetId::S,
        rules: vec![
            rule(
                "D1",
                vec![mv("p", ua), mv("q", ua), mv("l", ul)],
                vec![fa(v("q"), v("l")), fe(v("p"), v("q"))],
                fe(v("p"), v("l")),
            ),
            rule(
                "D2",
                vec![mv("p", ua), mv("q", ua), mv("l", ul)],
                vec![fe(v("p"), v("l")), fa(v("p"), v("q"))],
                fe(v("q"), v("l")),
            ),
            rule(
                "D3",
                vec![mv("p", ua), mv("q", ua), mv("l", ul)],
                vec![fa(v("q"), vb("l")), fe(v("p"), v("l"))],
                fe(v("p"), vb("q")),
            ),
            rule(
                "B",
                vec![mv("p", ua), mv("q", ua), mv("l", ul)],
                vec![fa(v("p"), v("q")), fa(v("q"), v("l"))],
                fa(v("p"), v("l")),
            ),
            rule(
                "A",
                vec![mv("p", ua), mv("l", ul)],
                vec![fa(v("p"), vb("p"))],
                fa(v("p"), v("l")),
            ),
            rule("T", vec![mv("p", ua)], vec![], fa(v("p"), v("p"))),
            rule(
                "I",
                vec![mv("p", ua), mv("l", ul)],
                vec![fe(v("p"), v("l"))],
                fe(v("p"), v("p")),
            ),
            rule(
                "X",
                vec![
                    mv("psi", Sort::Formula(Fragment::S)),
                    mv("phi", Sort::Formula(Fragment::S)),
                ],
                vec![
                    FormulaPat::FVar { var: "psi", complemented: false },
                    FormulaPat::FVar { var: "psi", complemented: true },
                ],
                FormulaPat::FVar { var: "phi", complemented: false },
            ),
        ],
    }
}

fn build_s_dagger() -> RuleSet {
    let ul = Sort::UnaryLiteral;
    RuleSet {
        id: RuleSetId::SDagger,
        rules: vec![
            rule(
                "D",
                vec![mv("l", ul), mv("m", ul), mv("n", ul)],
                vec![fe(v("l"), v("n")), fa(v("l"), v("m"))],
                fe(v("m"), v("n")),
            ),
            rule(
                "B",
                vec![mv("l", ul), mv("m", ul), mv("n", ul)],
                vec![fa(v("l"), v("m")), fa(v("m"), v("n"))],
                fa(v("l"), v("n")),
            ),
            rule(
                "A",
                vec![mv("l", ul), mv("m", ul)],
                vec![fa(v("l"), vb("l"))],
                fa(v("l"), v("m")),
            ),
            rule("T", vec![mv("l", ul)], vec![], fa(v("l"), v("l"))),
            rule(
                "I",
                vec![mv("l", ul), mv("m", ul)],
                vec![fe(v("l"), v("m"))],
                fe(v("l"), v("l")),
            ),
            rule(
                "X",
                vec![
                    mv("psi", Sort::Formula(Fragment::SDagger)),
                    mv("phi", Sort::Formula(Fragment::SDagger)),
                ],
                vec![
                    FormulaPat::FVar { var: "psi", complemented: false },
                    FormulaPat::FVar { var: "psi", complemented: true },
                ],
                FormulaPat::FVar { var: "phi", complemented: false },
            ),
            rule(
                "N",
                vec![mv("l", ul)],
                vec![fa(vb("l"), v("l"))],
                fe(v("l"), v("l")),
            ),
        ],
    }
}

fn build_r() -> RuleSet {
    let ua = Sort::UnaryAtom;
    let ct = Sort::CTerm;
    let bl = Sort::BinaryLiteral;
    RuleSet {
        id: RuleSetId::R,
        rules: vec![
            rule(
                "D1",
                vec![mv("p", ua), mv("q", ua), mv("c", ct)],
                vec![fe(v("p"), v("q")), fa(v("q"), v("c"))],
                fe(v("p"), v("c")),
            ),
            rule(
                "D2",
                vec![mv("p", ua), mv("q", ua), mv("c", ct)],
                vec![fa(v("p"), v("q")), fe(v("p"), v("c"))],
                fe(v("q"), v("c")),
            ),
            rule(
                "D3",
                vec![mv("p", ua), mv("q", ua), mv("c", ct)],
                vec![fa(v("q"), vb("c")), fe(v("p"), v("c"))],
                fe(v("p"), vb("q")),
            ),
            rule(
                "B",
                vec![mv("p", ua), mv("q", ua), mv("c", ct)],
                vec![fa(v("p"), v("q")), fa(v("q"), v("c"))],
                fa(v("p"), v("c")),
            ),
            rule("T", vec![mv("p", ua)], vec![], fa(v("p"), v("p"))),
            rule(
                "I",
                vec![mv("p", ua), mv("c", ct)],
                vec![fe(v("p"), v("c"))],
                fe(v("p"), v("p")),
            ),
            rule(
                "A",
                vec![mv("p", ua), mv("c", ct)],
                vec![fa(v("p"), vb("p"))],
                fa(v("p"), v("c")),
            ),
            rule(
                "II",
                vec![mv("p", ua), mv("q", ua), mv("t", bl)],
                vec![fe(v("p"), ce("q", "t"))],
                fe(v("q"), v("q")),
            ),
            rule(
                "AA",
                vec![mv("p", ua), mv("q", ua), mv("o", ua), mv("t", bl)],
                vec![fa(v("p"), ca("o", "t")), fe(v("q"), v("o"))],
                fa(v("p"), ce("q", "t")),
            ),
            rule(
                "EE",
                vec![mv("p", ua), mv("q", ua), mv("o", ua), mv("t", bl)],
                vec![fe(v("p"), ce("q", "t")), fa(v("q"), v("o"))],
                fe(v("p"), ce("o", "t")),
            ),
            rule(
                "AE",
                vec![mv("p", ua), mv("q", ua), mv("o", ua), mv("t", bl)],
                vec![fa(v("p"), ce("q", "t")), fa(v("q"), v("o"))],
                fa(v("p"), ce("o", "t")),
            ),
        ],
    }
}

fn build_r_star() -> RuleSet {
    let ua = Sort::UnaryAtom;
    let ba = Sort::BinaryAtom;
    let pc = Sort::PositiveCTerm;
    let ct = Sort::CTerm;
    RuleSet {
        id: RuleSetId::RStar,
        rules: vec![
            rule("T", vec![mv("c", pc)], vec![], fa(v("c"), v("c"))),
            rule(
                "I",
                vec![mv("c", pc), mv("d", ct)],
                vec![fe(v("c"), v("d"))],
                fe(v("c"), v("c")),
            ),
            rule(
                "B",
                vec![mv("b", pc), mv("c", pc), mv("d", ct)],
                vec![fa(v("b"), v("c")), fa(v("c"), v("d"))],
                fa(v("b"), v("d")),
            ),
            rule(
                "D1",
                vec![mv("b", pc), mv("c", pc), mv("d", ct)],
                vec![fe(v("b"), v("c")), fa(v("c"), v("d"))],
                fe(v("b"), v("d")),
            ),
            rule(
                "D2",
                vec![mv("b", pc), mv("c", pc), mv("d", ct)],
                vec![fa(v("b"), v("c")), fe(v("b"), v("d"))],
                fe(v("c"), v("d")),
            ),
            rule(
                "J",
                vec![mv("p", ua), mv("q", ua), mv("r", ba)],
                vec![fa(v("p"), v("q"))],
                fa(ca("q", "r"), ca("p", "r")),
            ),
            rule(
                "K",
                vec![mv("p", ua), mv("q", ua), mv("r", ba)],
                vec![fa(v("p"), v("q"))],
                fa(ce("p", "r"), ce("q", "r")),
            ),
            rule(
                "L",
                vec![mv("p", ua), mv("q", ua), mv("r", ba)],
                vec![fe(v("p"), v("q"))],
                fa(ca("p", "r"), ce("q", "r")),
            ),
            rule(
                "II",
                vec![mv("p", ua), mv("q", ua), mv("r", ba)],
                vec![fe(v("q"), ce("p", "r"))],
                fe(v("p"), v("p")),
            ),
            rule(
                "Z",
                vec![mv("p", ua), mv("c", pc), mv("r", ba)],
                vec![fa(v("p"), vb("p"))],
                fa(v("c"), ca("p", "r")),
            ),
            rule(
                "W",
                vec![mv("p", ua), mv("r", ba)],
                vec![fa(v("p"), vb("p"))],
                fe(ca("p", "r"), ca("p", "r")),
            ),
        ],
    }
}

/// The rule set with the given identifier.
pub fn rule_set(id: RuleSetId) -> &'static RuleSet {
    static S: OnceLock<RuleSet> = OnceLock::new();
    static SD: OnceLock<RuleSet> = OnceLock::new();
    static R: OnceLock<RuleSet> = OnceLock::new();
    static RS: OnceLock<RuleSet> = OnceLock::new();
    match id {
        RuleSetId::S => S.get_or_init(build_s),
        RuleSetId::SDagger => SD.get_or_init(build_s_dagger),
        RuleSetId::R => R.get_or_init(build_r),
        RuleSetId::RStar => RS.get_or_init(build_r_star),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_formula;
    use crate::syntax::UnaryAtom;

    fn phi(t: &str) -> Formula {
        parse_formula(t).unwrap()
    }

    fn facts(ts: &[&str]) -> BTreeSet<Formula> {
        ts.iter().map(|t| phi(t).canonicalize()).collect()
    }

    #[test]
    fn rule_tables_have_expected_contents() {
        let ids = |r: RuleSetId| -> Vec<&str> {
            rule_set(r).rules.iter().map(|x| x.id).collect()
        };
        assert_eq!(ids(RuleSetId::S), ["D1", "D2", "D3", "B", "A", "T", "I", "X"]);
        assert_eq!(ids(RuleSetId::SDagger), ["D", "B", "A", "T", "I", "X", "N"]);
        assert_eq!(
            ids(RuleSetId::R),
            ["D1", "D2", "D3", "B", "T", "I", "A", "II", "AA", "EE", "AE"]
        );
        assert_eq!(
            ids(RuleSetId::RStar),
            ["T", "I", "B", "D1", "D2", "J", "K", "L", "II", "Z", "W"]
        );
    }

    #[test]
    fn instantiate_darii() {
        let s = rule_set(RuleSetId::S);
        let d1 = s.rule("D1").unwrap();
        let mut g = Substitution::new();
        g.bind("p", Value::Unary(UnaryLiteral::positive(UnaryAtom::new("artist"))));
        g.bind("q", Value::Unary(UnaryLiteral::positive(UnaryAtom::new("beekeeper"))));
        g.bind(
            "l",
            Value::Unary(UnaryLiteral::positive(UnaryAtom::new("carpenter"))),
        );
        let (ants, cons) = instantiate(d1, &g).unwrap();
        assert!(ants.contains(&phi("all(beekeeper, carpenter)").canonicalize()));
        assert!(ants.contains(&phi("some(artist, beekeeper)").canonicalize()));
        assert_eq!(cons, phi("some(artist, carpenter)").canonicalize());
    }

    #[test]
    fn instantiate_t_has_no_antecedents() {
        let s = rule_set(RuleSetId::S);
        let t = s.rule("T").unwrap();
        let mut g = Substitution::new();
        g.bind("p", Value::Unary(UnaryLiteral::positive(UnaryAtom::new("p"))));
        let (ants, cons) = instantiate(t, &g).unwrap();
        assert!(ants.is_empty());
        assert_eq!(cons, phi("all(p, p)").canonicalize());
    }

    #[test]
    fn instantiate_j() {
        let rs = rule_set(RuleSetId::RStar);
        let j = rs.rule("J").unwrap();
        let mut g = Substitution::new();
        g.bind("p", Value::Unary(UnaryLiteral::positive(UnaryAtom::new("p"))));
        g.bind("q", Value::Unary(UnaryLiteral::positive(UnaryAtom::new("q"))));
        g.bind(
            "r",
            Value::Binary(BinaryLiteral::positive(crate::syntax::BinaryAtom::new("r"))),
        );
        let (ants, cons) = instantiate(j, &g).unwrap();
        assert_eq!(ants.len(), 1);
        assert!(ants.contains(&phi("all(p, q)").canonicalize()));
        assert_eq!(cons, phi("all(all(q, r), all(p, r))").canonicalize());
    }

    #[test]
    fn sort_violation_is_rejected() {
        let rs = rule_set(RuleSetId::RStar);
        let t = rs.rule("T").unwrap();
        let mut g = Substitution::new();
        // negative c-term bound to a positive-c-term variable
        g.bind(
            "c",
            Value::Term(ETerm::Literal(UnaryLiteral::negative(UnaryAtom::new("p")))),
        );
        assert!(instantiate(t, &g).is_err());
    }

    #[test]
    fn match_uses_identification() {
        // facts {all(q, o), some(q, p)} against D1 yield some(p, o)
        let s = rule_set(RuleSetId::S);
        let d1 = s.rule("D1").unwrap();
        let fs = facts(&["all(q, o)", "some(q, p)"]);
        let sig = Signature::new(
            [UnaryAtom::new("o"), UnaryAtom::new("p"), UnaryAtom::new("q")],
            [],
        );
        let results = match_rule(d1, &fs, &sig);
        assert!(results
            .iter()
            .any(|(_, c)| *c == phi("some(p, o)").canonicalize()));
    }

    #[test]
    fn match_t_on_empty_facts() {
        let s = rule_set(RuleSetId::S);
        let t = s.rule("T").unwrap();
        let sig = Signature::new([UnaryAtom::new("a"), UnaryAtom::new("b")], []);
        let results = match_rule(t, &BTreeSet::new(), &sig);
        let consequents: BTreeSet<&Formula> = results.iter().map(|(_, c)| c).collect();
        assert_eq!(consequents.len(), 2);
        assert!(consequents.contains(&phi("all(a, a)").canonicalize()));
        assert!(consequents.contains(&phi("all(b, b)").canonicalize()));
    }

    #[test]
    fn match_a_enumerates_consequent_literals() {
        let s = rule_set(RuleSetId::S);
        let a = s.rule("A").unwrap();
        let fs = facts(&["all(p, ~p)"]);
        let sig = Signature::new([UnaryAtom::new("p"), UnaryAtom::new("q")], []);
        let results = match_rule(a, &fs, &sig);
        let consequents: BTreeSet<Formula> =
            results.into_iter().map(|(_, c)| c).collect();
        // all(p, l) for every literal l over {p, q}
        for l in ["p", "~p", "q", "~q"] {
            assert!(
                consequents.contains(&phi(&format!("all(p, {l})")).canonicalize()),
                "missing all(p, {l})"
            );
        }
    }

    #[test]
    fn rules_are_sound_on_random_instantiations() {
        use crate::semantics::Structure;
        // fixed tiny signature; enumerate every structure over 2 elements
        // and check each rule instance semantically
        let sig = Signature::new(
            [UnaryAtom::new("p"), UnaryAtom::new("q")],
            [crate::syntax::BinaryAtom::new("r")],
        );
        let mut structures = Vec::new();
        for pm in 0..4u64 {
            for qm in 0..4u64 {
                for r0 in 0..4u64 {
                    for r1 in 0..4u64 {
                        let mut s = Structure::new(["a", "b"]);
                        for (bits, atom) in [(pm, "p"), (qm, "q")] {
                            for i in 0..2 {
                                if bits & (1 << i) != 0 {
                                    s.insert_unary_idx(UnaryAtom::new(atom), i);
                                }
                            }
                        }
                        for (i, bits) in [(0, r0), (1, r1)] {
                            for j in 0..2 {
                                if bits & (1 << j) != 0 {
                                    s.insert_pair_idx(
                                        crate::syntax::BinaryAtom::new("r"),
                                        i,
                                        j,
                                    );
                                }
                            }
                        }
                        structures.push(s);
                    }
                }
            }
        }
        for rsid in [RuleSetId::S, RuleSetId::SDagger, RuleSetId::R, RuleSetId::RStar] {
            let rs = rule_set(rsid);
            for r in &rs.rules {
                if r.id == "X" {
                    continue; // vacuous: antecedents are jointly unsatisfiable
                }
                // sample instantiations by matching against all fragment formulas
                let all: BTreeSet<Formula> =
                    sig.all_formulas(rs.fragment()).into_iter().collect();
                let results = match_rule(r, &all, &sig);
                for (g, cons) in results.iter().take(200) {
                    let (ants, _) = instantiate(r, g).unwrap();
                    for s in &structures {
                        if ants.iter().all(|a| s.holds(a)) {
                            assert!(
                                s.holds(cons),
                                "unsound instance of ({}/{rsid}): {:?} / {cons}",
                                r.id,
                                ants
                            );
                        }
                    }
                }
            }
        }
    }
}
