//! Exact decision for `R`-formula sets via the witness-set criterion.
//!
//! The arrow relation c => d holds when c = d or c is an atom chained to
//! d through universal premises. Witnesses `b_{V,0}` are seeded by the
//! existential premises; `b_{{p},1}` and `b_{{p},2}` are added whenever
//! an existing witness reaches an existential term over p. The witness
//! set doubles as the domain of a canonical structure, and a four-case
//! condition over it characterizes unsatisfiability. On the unsat side a
//! refutation is assembled from constructive sub-derivations and
//! re-checked; on the sat side the canonical structure is model-checked.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::calculus::{
    check_derivation, rule_set, Derivation, RuleSetId, Substitution, Value,
};
use crate::semantics::Structure;
use crate::syntax::{
    BinaryAtom, BinaryLiteral, ETerm, Formula, Fragment, Quantifier, Signature,
    UnaryAtom, UnaryLiteral,
};

use super::{FragmentError, UnsatCertificate, Verdict};

/// A named point of the witness set: one or two c-terms and a tier.
///
/// Tier 0 points witness existential premises; tier 1 and 2 points
/// witness existential c-terms over a single atom (positive and negative
/// verb occurrences respectively).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WitnessId {
    pub terms: Vec<ETerm>,
    pub index: u8,
}

impl fmt::Display for WitnessId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}} / {}", self.index)
    }
}

/// The witness set of a formula set, together with the arrow relation
/// machinery needed for proof extraction.
#[derive(Debug, Clone)]
pub struct WitnessSet {
    gamma: Vec<Formula>,
    signature: Signature,
    pub elements: Vec<WitnessId>,
    /// all(q, d) premises, keyed by subject atom; values carry the
    /// canonical premise justifying the final arrow step.
    univ_from: BTreeMap<UnaryAtom, BTreeMap<ETerm, Formula>>,
    /// seed existential premise of each tier-0 witness
    origin: BTreeMap<Vec<ETerm>, Formula>,
    /// tier-1/2 witnesses: (spawning witness, atom, verb literal)
    spawn: BTreeMap<WitnessId, (WitnessId, UnaryAtom, BinaryLiteral)>,
}

fn atom_term(p: &UnaryAtom) -> ETerm {
    ETerm::atom(p.clone())
}

impl WitnessSet {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    fn atom_successors(&self, p: &UnaryAtom) -> Vec<UnaryAtom> {
        self.univ_from
            .get(p)
            .map(|targets| {
                targets
                    .keys()
                    .filter_map(|d| d.as_unary_atom().cloned())
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Atoms reachable from `p` through universal atom-to-atom premises,
    /// including `p` itself, with the premise chain recorded.
    fn reach(&self, p: &UnaryAtom) -> BTreeMap<UnaryAtom, Option<(UnaryAtom, Formula)>> {
        let mut parent: BTreeMap<UnaryAtom, Option<(UnaryAtom, Formula)>> =
            BTreeMap::from([(p.clone(), None)]);
        let mut queue = VecDeque::from([p.clone()]);
        while let Some(cur) = queue.pop_front() {
            for next in self.atom_successors(&cur) {
                if parent.contains_key(&next) {
                    continue;
                }
                let formula = self.univ_from[&cur][&atom_term(&next)].clone();
                parent.insert(next.clone(), Some((cur.clone(), formula)));
                queue.push_back(next);
            }
        }
        parent
    }

    /// The arrow relation c => d.
    pub fn arrow(&self, c: &ETerm, d: &ETerm) -> bool {
        if c == d {
            return true;
        }
        let Some(p) = c.as_unary_atom() else { return false };
        self.reach(p)
            .keys()
            .any(|q| self.univ_from.get(q).is_some_and(|t| t.contains_key(d)))
    }

    /// V => d: some member of V reaches d.
    pub fn set_arrow(&self, witness: &WitnessId, d: &ETerm) -> bool {
        witness.terms.iter().any(|c| self.arrow(c, d))
    }

    /// Derivation of all(p, d) from p => d, by chaining (B) through the
    /// atom graph (or (T) when d is p itself).
    fn chain(&self, p: &UnaryAtom, d: &ETerm) -> Derivation {
        if atom_term(p) == *d {
            let mut g = Substitution::new();
            g.bind("p", Value::Unary(UnaryLiteral::positive(p.clone())));
            return Derivation::RuleApp {
                rule: "T".into(),
                subst: g,
                children: vec![],
                conclusion: Formula::forall(atom_term(p), atom_term(p)),
            };
        }
        let parents = self.reach(p);
        let q = parents
            .keys()
            .find(|q| self.univ_from.get(*q).is_some_and(|t| t.contains_key(d)))
            .expect("chain exists when p => d")
            .clone();
        // atom path p -> ... -> q
        let mut path = vec![q.clone()];
        let mut cur = q.clone();
        while let Some(Some((prev, _))) = parents.get(&cur) {
            path.push(prev.clone());
            cur = prev.clone();
        }
        path.reverse();
        let mut derivation: Option<Derivation> = None;
        for window in path.windows(2) {
            let (src, dst) = (&window[0], &window[1]);
            let premise =
                Derivation::premise(self.univ_from[src][&atom_term(dst)].clone());
            derivation = Some(match derivation {
                None => premise,
                Some(prev) => {
                    let mut g = Substitution::new();
                    g.bind("p", Value::Unary(UnaryLiteral::positive(p.clone())));
                    g.bind("q", Value::Unary(UnaryLiteral::positive(src.clone())));
                    g.bind("c", Value::Term(atom_term(dst)));
                    Derivation::RuleApp {
                        rule: "B".into(),
                        subst: g,
                        children: vec![prev, premise],
                        conclusion: Formula::forall(atom_term(p), atom_term(dst)),
                    }
                }
            });
        }
        let final_premise = Derivation::premise(self.univ_from[&q][d].clone());
        match derivation {
            // p = q: the final premise alone proves all(p, d)
            None => final_premise,
            Some(prev) => {
                let mut g = Substitution::new();
                g.bind("p", Value::Unary(UnaryLiteral::positive(p.clone())));
                g.bind("q", Value::Unary(UnaryLiteral::positive(q.clone())));
                g.bind("c", Value::Term(d.clone()));
                Derivation::RuleApp {
                    rule: "B".into(),
                    subst: g,
                    children: vec![prev, final_premise],
                    conclusion: Formula::forall(atom_term(p), d.clone()),
                }
            }
        }
    }

    /// V => d and d not in V: some atom p in V has all(p, d).
    fn arrow_via_member(&self, witness: &WitnessId, d: &ETerm) -> (UnaryAtom, Derivation) {
        for c in &witness.terms {
            if let Some(p) = c.as_unary_atom() {
                if self.arrow(c, d) && atom_term(p) != *d {
                    return (p.clone(), self.chain(p, d));
                }
            }
        }
        panic!("arrow_via_member: no member chain to {d}");
    }

    /// V => p for an atom p: some p0 in V with all(p0, p).
    fn member_to_atom(&self, witness: &WitnessId, p: &UnaryAtom) -> (UnaryAtom, Derivation) {
        if witness.terms.contains(&atom_term(p)) {
            return (p.clone(), self.chain(p, &atom_term(p)));
        }
        self.arrow_via_member(witness, &atom_term(p))
    }

    /// For a tier-0 witness with p, c in V: derivation of some(p, c).
    fn seed_exists(&self, witness: &WitnessId, p: &UnaryAtom, c: &ETerm) -> Derivation {
        let origin = self.origin[&witness.terms].clone();
        let target = Formula::exists(atom_term(p), c.clone()).canonicalize();
        if origin == target {
            return Derivation::premise(origin);
        }
        // p = c and V = {p, d}: (I) from the seed premise
        let d = witness
            .terms
            .iter()
            .find(|t| **t != atom_term(p))
            .expect("two-element witness")
            .clone();
        let mut g = Substitution::new();
        g.bind("p", Value::Unary(UnaryLiteral::positive(p.clone())));
        g.bind("c", Value::Term(d));
        Derivation::RuleApp {
            rule: "I".into(),
            subst: g,
            children: vec![Derivation::premise(origin)],
            conclusion: target,
        }
    }

    /// V => p and V => c imply some(p, c) is derivable; build the
    /// derivation by recursion on the witness tier.
    fn exists_derivation(&self, witness: &WitnessId, p: &UnaryAtom, c: &ETerm) -> Derivation {
        match self.spawn.get(witness) {
            None => {
                let (q1, d_q1p) = self.member_to_atom(witness, p);
                let d_exists = if witness.terms.contains(c) {
                    self.seed_exists(witness, &q1, c)
                } else {
                    let (q2, d_q2c) = self.arrow_via_member(witness, c);
                    let seed = self.seed_exists(witness, &q1, &atom_term(&q2));
                    let mut g = Substitution::new();
                    g.bind("p", Value::Unary(UnaryLiteral::positive(q1.clone())));
                    g.bind("q", Value::Unary(UnaryLiteral::positive(q2.clone())));
                    g.bind("c", Value::Term(c.clone()));
                    Derivation::RuleApp {
                        rule: "D1".into(),
                        subst: g,
                        children: vec![seed, d_q2c],
                        conclusion: Formula::exists(atom_term(&q1), c.clone())
                            .canonicalize(),
                    }
                };
                let mut g = Substitution::new();
                g.bind("p", Value::Unary(UnaryLiteral::positive(q1.clone())));
                g.bind("q", Value::Unary(UnaryLiteral::positive(p.clone())));
                g.bind("c", Value::Term(c.clone()));
                Derivation::RuleApp {
                    rule: "D2".into(),
                    subst: g,
                    children: vec![d_q1p, d_exists],
                    conclusion: Formula::exists(atom_term(p), c.clone()).canonicalize(),
                }
            }
            Some((parent, pk, t)) => {
                let prev_atom = parent
                    .terms
                    .iter()
                    .find_map(|e| e.as_unary_atom())
                    .expect("witness contains an atom")
                    .clone();
                let spawn_term = ETerm::Exists(UnaryLiteral::positive(pk.clone()), t.clone());
                let d_prev = self.exists_derivation(parent, &prev_atom, &spawn_term);
                let mut g = Substitution::new();
                g.bind("p", Value::Unary(UnaryLiteral::positive(prev_atom.clone())));
                g.bind("q", Value::Unary(UnaryLiteral::positive(pk.clone())));
                g.bind("t", Value::Binary(t.clone()));
                let refl = Derivation::RuleApp {
                    rule: "II".into(),
                    subst: g,
                    children: vec![d_prev],
                    conclusion: Formula::exists(atom_term(pk), atom_term(pk)),
                };
                let d_p = self.chain(pk, &atom_term(p));
                let mut g1 = Substitution::new();
                g1.bind("p", Value::Unary(UnaryLiteral::positive(pk.clone())));
                g1.bind("q", Value::Unary(UnaryLiteral::positive(pk.clone())));
                g1.bind("c", Value::Term(atom_term(p)));
                let step = Derivation::RuleApp {
                    rule: "D1".into(),
                    subst: g1,
                    children: vec![refl, d_p],
                    conclusion: Formula::exists(atom_term(pk), atom_term(p)).canonicalize(),
                };
                let d_c = self.chain(pk, c);
                let mut g2 = Substitution::new();
                g2.bind("p", Value::Unary(UnaryLiteral::positive(p.clone())));
                g2.bind("q", Value::Unary(UnaryLiteral::positive(pk.clone())));
                g2.bind("c", Value::Term(c.clone()));
                Derivation::RuleApp {
                    rule: "D1".into(),
                    subst: g2,
                    children: vec![step, d_c],
                    conclusion: Formula::exists(atom_term(p), c.clone()).canonicalize(),
                }
            }
        }
    }

    /// V => c and V => d with c != d: an atom p with derivations of
    /// either (some(p,c), all(p,d)) or (some(p,d), all(p,c)).
    ///
    /// Returns (p, existential derivation, universal derivation, flag);
    /// the flag is true when the existential concludes some(p, c).
    fn split_pair(
        &self,
        witness: &WitnessId,
        c: &ETerm,
        d: &ETerm,
    ) -> (UnaryAtom, Derivation, Derivation, bool) {
        let reflexivity = |q: &UnaryAtom| {
            let mut g = Substitution::new();
            g.bind("p", Value::Unary(UnaryLiteral::positive(q.clone())));
            Derivation::RuleApp {
                rule: "T".into(),
                subst: g,
                children: vec![],
                conclusion: Formula::forall(atom_term(q), atom_term(q)),
            }
        };
        if let Some(q) = c.as_unary_atom() {
            let d_e = self.exists_derivation(witness, q, d);
            return (q.clone(), d_e, reflexivity(q), false);
        }
        if let Some(q) = d.as_unary_atom() {
            let d_e = self.exists_derivation(witness, q, c);
            return (q.clone(), d_e, reflexivity(q), true);
        }
        if !witness.terms.contains(d) {
            let (p, d_u) = self.arrow_via_member(witness, d);
            let d_e = self.exists_derivation(witness, &p, c);
            (p, d_e, d_u, true)
        } else {
            let (p, d_u) = self.arrow_via_member(witness, c);
            let d_e = self.exists_derivation(witness, &p, d);
            (p, d_e, d_u, false)
        }
    }

    /// The canonical structure over the witness set. Empty witness sets
    /// (no existential premises) yield a single point with every atom
    /// empty.
    pub fn structure(&self) -> Structure {
        if self.elements.is_empty() {
            let mut s = Structure::new(["w"]);
            for p in &self.signature.unaries {
                s.declare_unary(p.clone());
            }
            for r in &self.signature.binaries {
                s.declare_binary(r.clone());
            }
            return s;
        }
        let names: Vec<String> =
            (0..self.elements.len()).map(|i| format!("b{i}")).collect();
        let mut s = Structure::new(names);
        for p in &self.signature.unaries {
            s.declare_unary(p.clone());
            for (i, w) in self.elements.iter().enumerate() {
                if self.set_arrow(w, &atom_term(p)) {
                    s.insert_unary_idx(p.clone(), i);
                }
            }
        }
        for r in &self.signature.binaries {
            s.declare_binary(r.clone());
            let positive = BinaryLiteral::positive(r.clone());
            for (i, v) in self.elements.iter().enumerate() {
                for (j, w) in self.elements.iter().enumerate() {
                    let tier1 = w.index == 1
                        && w.terms.len() == 1
                        && w.terms[0].as_unary_atom().is_some_and(|p| {
                            self.set_arrow(
                                v,
                                &ETerm::Exists(
                                    UnaryLiteral::positive(p.clone()),
                                    positive.clone(),
                                ),
                            )
                        });
                    let via_universal = self.signature.unaries.iter().any(|q| {
                        self.set_arrow(
                            v,
                            &ETerm::Forall(
                                UnaryLiteral::positive(q.clone()),
                                positive.clone(),
                            ),
                        ) && self.set_arrow(w, &atom_term(q))
                    });
                    if tier1 || via_universal {
                        s.insert_pair_idx(r.clone(), i, j);
                    }
                }
            }
        }
        s
    }
}

/// Build the witness set of a set of `R`-formulas.
pub fn build_witness_set(gamma: &[Formula]) -> Result<WitnessSet, FragmentError> {
    super::require_fragment(gamma, Fragment::R)?;
    let canon: BTreeSet<Formula> = gamma.iter().map(Formula::canonicalize).collect();
    let mut signature = Signature::default();
    for phi in &canon {
        signature.extend_with(&phi.atoms());
    }
    let mut univ_from: BTreeMap<UnaryAtom, BTreeMap<ETerm, Formula>> = BTreeMap::new();
    let mut origin = BTreeMap::new();
    let mut elements: BTreeSet<WitnessId> = BTreeSet::new();
    for phi in &canon {
        match phi.quantifier {
            Quantifier::All => {
                for rep in phi.representatives() {
                    if let Some(p) = rep.left.as_unary_atom() {
                        univ_from
                            .entry(p.clone())
                            .or_default()
                            .entry(rep.right.clone())
                            .or_insert_with(|| phi.clone());
                    }
                }
            }
            Quantifier::Some => {
                let mut terms = vec![phi.left.clone(), phi.right.clone()];
                terms.sort();
                terms.dedup();
                origin.insert(terms.clone(), phi.clone());
                elements.insert(WitnessId { terms, index: 0 });
            }
        }
    }
    let mut ws = WitnessSet {
        gamma: canon.into_iter().collect(),
        signature,
        elements: elements.iter().cloned().collect(),
        univ_from,
        origin,
        spawn: BTreeMap::new(),
    };
    // existential c-terms that can appear on the right of an arrow
    let mut targets: BTreeSet<ETerm> = BTreeSet::new();
    for t in ws.univ_from.values().flat_map(|m| m.keys()) {
        if matches!(t, ETerm::Exists(_, _)) {
            targets.insert(t.clone());
        }
    }
    for w in &elements {
        for t in &w.terms {
            if matches!(t, ETerm::Exists(_, _)) {
                targets.insert(t.clone());
            }
        }
    }
    let mut frontier: Vec<WitnessId> = ws.elements.clone();
    while !frontier.is_empty() {
        let mut added = Vec::new();
        for w in &frontier {
            for target in &targets {
                let ETerm::Exists(subj, verb) = target else { unreachable!() };
                if !ws.set_arrow(w, target) {
                    continue;
                }
                for index in [1u8, 2u8] {
                    let candidate = WitnessId {
                        terms: vec![atom_term(&subj.atom)],
                        index,
                    };
                    if elements.contains(&candidate) {
                        continue;
                    }
                    elements.insert(candidate.clone());
                    ws.spawn.insert(
                        candidate.clone(),
                        (w.clone(), subj.atom.clone(), verb.clone()),
                    );
                    added.push(candidate);
                }
            }
        }
        ws.elements = elements.iter().cloned().collect();
        frontier = added;
    }
    Ok(ws)
}

/// Evidence that a formula set meets one of the four unsatisfiability
/// cases over its witness set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCWitness {
    pub case: u8,
    pub element: WitnessId,
    pub second_element: Option<WitnessId>,
    pub q: UnaryAtom,
    pub o: Option<UnaryAtom>,
    pub r: Option<BinaryAtom>,
}

impl fmt::Display for ConditionCWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "condition-c: case {}", self.case)?;
        writeln!(f, "  element: {}", self.element)?;
        if let Some(w) = &self.second_element {
            writeln!(f, "  element: {w}")?;
        }
        write!(f, "  atoms: q={}", self.q.name())?;
        if let Some(o) = &self.o {
            write!(f, " o={}", o.name())?;
        }
        if let Some(r) = &self.r {
            write!(f, " r={}", r.name())?;
        }
        writeln!(f)
    }
}

/// Exhaustively test the four cases over the witness set, in canonical
/// order; the first hit wins.
pub fn check_condition_c(ws: &WitnessSet) -> Option<ConditionCWitness> {
    let unaries: Vec<&UnaryAtom> = ws.signature.unaries.iter().collect();
    let binaries: Vec<&BinaryAtom> = ws.signature.binaries.iter().collect();
    // case 1: V => q and V => ~q
    for w in &ws.elements {
        for q in &unaries {
            let pos = atom_term(q);
            let neg = pos.complement();
            if ws.set_arrow(w, &pos) && ws.set_arrow(w, &neg) {
                return Some(ConditionCWitness {
                    case: 1,
                    element: w.clone(),
                    second_element: None,
                    q: (*q).clone(),
                    o: None,
                    r: None,
                });
            }
        }
    }
    let term = |quant: Quantifier, p: &UnaryAtom, t: BinaryLiteral| match quant {
        Quantifier::Some => ETerm::Exists(UnaryLiteral::positive(p.clone()), t),
        Quantifier::All => ETerm::Forall(UnaryLiteral::positive(p.clone()), t),
    };
    // case 2: V => some(q, ~r), V => all(o, r), q => o
    for w in &ws.elements {
        for q in &unaries {
            for o in &unaries {
                for r in &binaries {
                    let neg = BinaryLiteral::negative((*r).clone());
                    let pos = BinaryLiteral::positive((*r).clone());
                    if ws.set_arrow(w, &term(Quantifier::Some, q, neg))
                        && ws.set_arrow(w, &term(Quantifier::All, o, pos))
                        && ws.arrow(&atom_term(q), &atom_term(o))
                    {
                        return Some(ConditionCWitness {
                            case: 2,
                            element: w.clone(),
                            second_element: None,
                            q: (*q).clone(),
                            o: Some((*o).clone()),
                            r: Some((*r).clone()),
                        });
                    }
                }
            }
        }
    }
    // case 3: V => all(q, ~r), V => some(o, r), o => q
    for w in &ws.elements {
        for q in &unaries {
            for o in &unaries {
                for r in &binaries {
                    let neg = BinaryLiteral::negative((*r).clone());
                    let pos = BinaryLiteral::positive((*r).clone());
                    if ws.set_arrow(w, &term(Quantifier::All, q, neg))
                        && ws.set_arrow(w, &term(Quantifier::Some, o, pos))
                        && ws.arrow(&atom_term(o), &atom_term(q))
                    {
                        return Some(ConditionCWitness {
                            case: 3,
                            element: w.clone(),
                            second_element: None,
                            q: (*q).clone(),
                            o: Some((*o).clone()),
                            r: Some((*r).clone()),
                        });
                    }
                }
            }
        }
    }
    // case 4: V => all(q, ~r), V => all(o, r), W => q, W => o
    for w in &ws.elements {
        for w2 in &ws.elements {
            for q in &unaries {
                for o in &unaries {
                    for r in &binaries {
                        let neg = BinaryLiteral::negative((*r).clone());
                        let pos = BinaryLiteral::positive((*r).clone());
                        if ws.set_arrow(w, &term(Quantifier::All, q, neg))
                            && ws.set_arrow(w, &term(Quantifier::All, o, pos))
                            && ws.set_arrow(w2, &atom_term(q))
                            && ws.set_arrow(w2, &atom_term(o))
                        {
                            return Some(ConditionCWitness {
                                case: 4,
                                element: w.clone(),
                                second_element: Some(w2.clone()),
                                q: (*q).clone(),
                                o: Some((*o).clone()),
                                r: Some((*r).clone()),
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

fn rule_app(
    rule: &str,
    bindings: Vec<(&'static str, Value)>,
    children: Vec<Derivation>,
    conclusion: Formula,
) -> Derivation {
    let mut g = Substitution::new();
    for (k, v) in bindings {
        g.bind(k, v);
    }
    Derivation::RuleApp {
        rule: rule.to_string(),
        subst: g,
        children,
        conclusion: conclusion.canonicalize(),
    }
}

fn ua(p: &UnaryAtom) -> Value {
    Value::Unary(UnaryLiteral::positive(p.clone()))
}

impl WitnessSet {
    /// Assemble an `R`-refutation from a condition-C witness, following
    /// the four case derivations.
    pub fn refutation(&self, w: &ConditionCWitness) -> Derivation {
        let q = &w.q;
        match w.case {
            1 => {
                let neg = atom_term(q).complement();
                self.exists_derivation(&w.element, q, &neg)
            }
            2 | 3 => {
                let o = w.o.as_ref().expect("case 2/3 names o");
                let r = w.r.as_ref().expect("case 2/3 names r");
                let rneg = BinaryLiteral::negative(r.clone());
                let rpos = BinaryLiteral::positive(r.clone());
                // case 2: pair {some(q,~r), all(o,r)} with all(q, o);
                // case 3: pair {some(o,r), all(q,~r)} with all(o, q)
                let (ex_term, univ_term, src, dst, t) = if w.case == 2 {
                    (
                        ETerm::Exists(UnaryLiteral::positive(q.clone()), rneg.clone()),
                        ETerm::Forall(UnaryLiteral::positive(o.clone()), rpos.clone()),
                        q,
                        o,
                        rneg.clone(),
                    )
                } else {
                    (
                        ETerm::Exists(UnaryLiteral::positive(o.clone()), rpos.clone()),
                        ETerm::Forall(UnaryLiteral::positive(q.clone()), rneg.clone()),
                        o,
                        q,
                        rpos.clone(),
                    )
                };
                let d_chain = self.chain(src, &atom_term(dst));
                let (p, d_e, d_u, exists_is_first) =
                    self.split_pair(&w.element, &ex_term, &univ_term);
                let target = ETerm::Exists(UnaryLiteral::positive(dst.clone()), t.clone());
                if exists_is_first {
                    // some(p, some(src, t)) and all(p, all(dst, ~t))
                    let stepped = rule_app(
                        "EE",
                        vec![("p", ua(&p)), ("q", ua(src)), ("o", ua(dst)), ("t", Value::Binary(t.clone()))],
                        vec![d_e, d_chain],
                        Formula::exists(atom_term(&p), target.clone()),
                    );
                    rule_app(
                        "D3",
                        vec![("p", ua(&p)), ("q", ua(&p)), ("c", Value::Term(target.clone()))],
                        vec![d_u, stepped],
                        Formula::exists(atom_term(&p), atom_term(&p).complement()),
                    )
                } else {
                    // all(p, some(src, t)) and some(p, all(dst, ~t))
                    let stepped = rule_app(
                        "AE",
                        vec![("p", ua(&p)), ("q", ua(src)), ("o", ua(dst)), ("t", Value::Binary(t.clone()))],
                        vec![d_u, d_chain],
                        Formula::forall(atom_term(&p), target.clone()),
                    );
                    rule_app(
                        "D3",
                        vec![
                            ("p", ua(&p)),
                            ("q", ua(&p)),
                            ("c", Value::Term(target.complement())),
                        ],
                        vec![stepped, d_e],
                        Formula::exists(atom_term(&p), atom_term(&p).complement()),
                    )
                }
            }
            4 => {
                let o = w.o.as_ref().expect("case 4 names o");
                let r = w.r.as_ref().expect("case 4 names r");
                let second = w.second_element.as_ref().expect("case 4 names W");
                let rneg = BinaryLiteral::negative(r.clone());
                let rpos = BinaryLiteral::positive(r.clone());
                let all_q_nr = ETerm::Forall(UnaryLiteral::positive(q.clone()), rneg.clone());
                let all_o_r = ETerm::Forall(UnaryLiteral::positive(o.clone()), rpos.clone());
                let (p, d_e, d_u, exists_is_first) =
                    self.split_pair(&w.element, &all_q_nr, &all_o_r);
                if exists_is_first {
                    // some(p, all(q,~r)), all(p, all(o,r)); exists(q, o) from W
                    let d_qo = self.exists_derivation(second, q, &atom_term(o));
                    let target = ETerm::Exists(UnaryLiteral::positive(q.clone()), rpos.clone());
                    let stepped = rule_app(
                        "AA",
                        vec![("p", ua(&p)), ("q", ua(q)), ("o", ua(o)), ("t", Value::Binary(rpos))],
                        vec![d_u, d_qo],
                        Formula::forall(atom_term(&p), target),
                    );
                    rule_app(
                        "D3",
                        vec![("p", ua(&p)), ("q", ua(&p)), ("c", Value::Term(all_q_nr))],
                        vec![stepped, d_e],
                        Formula::exists(atom_term(&p), atom_term(&p).complement()),
                    )
                } else {
                    // some(p, all(o,r)), all(p, all(q,~r)); exists(o, q) from W
                    let d_oq = self.exists_derivation(second, o, &atom_term(q));
                    let target = ETerm::Exists(UnaryLiteral::positive(o.clone()), rneg.clone());
                    let stepped = rule_app(
                        "AA",
                        vec![("p", ua(&p)), ("q", ua(o)), ("o", ua(q)), ("t", Value::Binary(rneg))],
                        vec![d_u, d_oq],
                        Formula::forall(atom_term(&p), target),
                    );
                    rule_app(
                        "D3",
                        vec![("p", ua(&p)), ("q", ua(&p)), ("c", Value::Term(all_o_r))],
                        vec![stepped, d_e],
                        Formula::exists(atom_term(&p), atom_term(&p).complement()),
                    )
                }
            }
            other => panic!("no such condition-C case: {other}"),
        }
    }
}

/// Decide satisfiability of a set of `R`-formulas exactly, returning a
/// model-checked structure or a proof-checked refutation.
pub fn decide_r_sat(gamma: &[Formula]) -> Result<Verdict, FragmentError> {
    let ws = build_witness_set(gamma)?;
    match check_condition_c(&ws) {
        Some(witness) => {
            let refutation = ws.refutation(&witness);
            let conclusion = check_derivation(&refutation, rule_set(RuleSetId::R), &ws.gamma)
                .expect("assembled refutation must check");
            assert!(conclusion.is_absurdity());
            Ok(Verdict::Unsatisfiable(UnsatCertificate {
                refutation,
                condition_c: Some(witness),
            }))
        }
        None => {
            let model = ws.structure();
            assert!(
                model.models(ws.gamma.iter()),
                "canonical structure must satisfy the premises when no case fires"
            );
            Ok(Verdict::Satisfiable(model))
        }
    }
}

/// Certificate-bearing validity result for `R` sequents.
#[derive(Debug, Clone)]
pub enum RValidity {
    /// An indirect derivation: a refutation closed by one final reductio.
    Valid(Derivation),
    Invalid(Structure),
}

/// Decide an `R`-sequent; valid sequents get an indirect derivation
/// (refutation plus a single final reductio), invalid ones a
/// countermodel.
pub fn decide_r_valid(
    theta: &[Formula],
    conclusion: &Formula,
) -> Result<RValidity, FragmentError> {
    let mut all = theta.to_vec();
    all.push(conclusion.clone());
    super::require_fragment(&all, Fragment::R)?;
    let mut with_bar = theta.to_vec();
    with_bar.push(conclusion.bar());
    match decide_r_sat(&with_bar)? {
        Verdict::Satisfiable(m) => {
            assert!(m.models(theta.iter()) && !m.holds(conclusion));
            Ok(RValidity::Invalid(m))
        }
        Verdict::Unsatisfiable(cert) => {
            let indirect = cert.refutation.into_raa(conclusion.clone());
            let checked = check_derivation(&indirect, rule_set(RuleSetId::R), theta)
                .expect("indirect derivation must check");
            assert_eq!(checked.canonicalize(), conclusion.canonicalize());
            Ok(RValidity::Valid(indirect))
        }
        Verdict::NoModelWithinBound(_) => unreachable!("r decider is exact"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::find_model;
    use crate::surface::parse_formula;

    fn phi(t: &str) -> Formula {
        parse_formula(t).unwrap()
    }

    fn phis(ts: &[&str]) -> Vec<Formula> {
        ts.iter().map(|t| phi(t)).collect()
    }

    #[test]
    fn witness_set_of_single_existential() {
        let ws = build_witness_set(&phis(&["some(p, q)"])).unwrap();
        assert_eq!(ws.elements.len(), 1);
        assert_eq!(ws.elements[0].index, 0);
        assert_eq!(ws.elements[0].terms.len(), 2);
    }

    #[test]
    fn witness_set_spawns_for_existential_cterm() {
        // frozen expected value: B = {b_{p, some(q,r)},0, b_{q},1, b_{q},2}
        let ws = build_witness_set(&phis(&["some(p, some(q, r))"])).unwrap();
        assert_eq!(ws.elements.len(), 3);
        let tiers: Vec<u8> = ws.elements.iter().map(|w| w.index).collect();
        assert_eq!(tiers.iter().filter(|i| **i == 0).count(), 1);
        assert_eq!(tiers.iter().filter(|i| **i == 1).count(), 1);
        assert_eq!(tiers.iter().filter(|i| **i == 2).count(), 1);
        for w in &ws.elements {
            if w.index > 0 {
                assert_eq!(w.terms, vec![ETerm::atom(UnaryAtom::new("q"))]);
            }
        }
    }

    #[test]
    fn chain_premises_witness_set_frozen() {
        // hand-run expected value: one seed witness for the negated
        // conclusion, plus tier-1/2 witnesses for p2 and p3
        let theta = phis(&[
            "all(p1, some(p2, r))",
            "all(p2, some(p3, r))",
            "all(p1, all(p3, r))",
            "some(p1, all(p3, ~r))",
        ]);
        let ws = build_witness_set(&theta).unwrap();
        assert_eq!(ws.elements.len(), 5);
        let tier0: Vec<_> = ws.elements.iter().filter(|w| w.index == 0).collect();
        assert_eq!(tier0.len(), 1);
        assert_eq!(tier0[0].terms.len(), 2);
        for atom in ["p2", "p3"] {
            for tier in [1u8, 2u8] {
                assert!(
                    ws.elements.iter().any(|w| w.index == tier
                        && w.terms == vec![ETerm::atom(UnaryAtom::new(atom))]),
                    "missing tier-{tier} witness for {atom}"
                );
            }
        }
    }

    #[test]
    fn arrow_follows_universal_chains() {
        let ws = build_witness_set(&phis(&[
            "all(p, q)",
            "all(q, some(o, r))",
            "some(p, p)",
        ]))
        .unwrap();
        let p = ETerm::atom(UnaryAtom::new("p"));
        let target = phi("all(q, some(o, r))").right.clone();
        assert!(ws.arrow(&p, &target));
        assert!(!ws.arrow(&target, &p));
    }

    #[test]
    fn absurd_premise_fires_case_one() {
        let ws = build_witness_set(&phis(&["some(p, ~p)"])).unwrap();
        let w = check_condition_c(&ws).expect("case must fire");
        assert_eq!(w.case, 1);
    }

    #[test]
    fn satisfiable_set_has_no_case() {
        let theta = phis(&[
            "some(artist, beekeeper)",
            "all(artist, carpenter)",
            "all(beekeeper, ~dentist)",
        ]);
        let ws = build_witness_set(&theta).unwrap();
        assert!(check_condition_c(&ws).is_none());
        match decide_r_sat(&theta).unwrap() {
            Verdict::Satisfiable(m) => assert!(m.models(theta.iter())),
            other => panic!("expected satisfiable, got {other:?}"),
        }
    }

    #[test]
    fn spec_case4_example_unsat() {
        let theta = phis(&[
            "some(p, all(q, ~r))",
            "all(p, all(q, r))",
            "some(q, q)",
        ]);
        match decide_r_sat(&theta).unwrap() {
            Verdict::Unsatisfiable(cert) => {
                assert!(cert.refutation.conclusion().is_absurdity());
                assert_eq!(cert.condition_c.as_ref().unwrap().case, 4);
            }
            other => panic!("expected unsat, got {other:?}"),
        }
        assert!(find_model(&theta, 6).model().is_none());
    }

    #[test]
    fn relational_sequent_valid_with_indirect_certificate() {
        let theta = phis(&[
            "some(artist, some(artist, hate))",
            "all(beekeeper, all(beekeeper, ~hate))",
        ]);
        let goal = phi("some(artist, ~beekeeper)");
        match decide_r_valid(&theta, &goal).unwrap() {
            RValidity::Valid(d) => assert!(!d.is_direct()),
            other => panic!("expected valid, got {other:?}"),
        }
    }

    #[test]
    fn universal_only_premises_satisfiable() {
        let theta = phis(&["all(p, some(q, r))", "all(q, ~q)"]);
        match decide_r_sat(&theta).unwrap() {
            Verdict::Satisfiable(m) => assert!(m.models(theta.iter())),
            other => panic!("expected satisfiable, got {other:?}"),
        }
    }
}
