//! Translation from modal logic K with a universal modality into `Rd`,
//! and a small brute-force Kripke oracle for cross-checking it.

use std::collections::BTreeSet;

use crate::syntax::{
    BinaryAtom, BinaryLiteral, ETerm, Formula, UnaryAtom, UnaryLiteral,
};

/// A modal formula over conjunction, negation, the box, and the
/// universal modality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum KuFormula {
    Prop(String),
    And(Box<KuFormula>, Box<KuFormula>),
    Not(Box<KuFormula>),
    Box(Box<KuFormula>),
    Univ(Box<KuFormula>),
}

impl KuFormula {
    pub fn prop(name: impl Into<String>) -> Self {
        KuFormula::Prop(name.into())
    }

    pub fn and(l: KuFormula, r: KuFormula) -> Self {
        KuFormula::And(std::boxed::Box::new(l), std::boxed::Box::new(r))
    }

    pub fn not(f: KuFormula) -> Self {
        KuFormula::Not(std::boxed::Box::new(f))
    }

    pub fn nec(f: KuFormula) -> Self {
        KuFormula::Box(std::boxed::Box::new(f))
    }

    pub fn univ(f: KuFormula) -> Self {
        KuFormula::Univ(std::boxed::Box::new(f))
    }

    /// Deterministic subformula key, used to name the subformula atoms.
    fn key(&self) -> String {
        match self {
            KuFormula::Prop(p) => p.clone(),
            KuFormula::And(l, r) => format!("and_{}_{}", l.key(), r.key()),
            KuFormula::Not(f) => format!("not_{}", f.key()),
            KuFormula::Box(f) => format!("box_{}", f.key()),
            KuFormula::Univ(f) => format!("u_{}", f.key()),
        }
    }

    fn letters(&self, out: &mut BTreeSet<String>) {
        match self {
            KuFormula::Prop(p) => {
                out.insert(p.clone());
            }
            KuFormula::And(l, r) => {
                l.letters(out);
                r.letters(out);
            }
            KuFormula::Not(f) | KuFormula::Box(f) | KuFormula::Univ(f) => f.letters(out),
        }
    }
}

fn subformula_atom(f: &KuFormula) -> UnaryAtom {
    UnaryAtom::new(f.key())
}

struct Translator {
    output: Vec<Formula>,
    conjunction_count: usize,
}

fn lit(atom: &UnaryAtom, positive: bool) -> UnaryLiteral {
    UnaryLiteral { atom: atom.clone(), positive }
}

fn lterm(atom: &UnaryAtom, positive: bool) -> ETerm {
    ETerm::Literal(lit(atom, positive))
}

impl Translator {
    /// all(±a, ±b)
    fn unary_implication(&mut self, a: ETerm, b: ETerm) {
        self.output.push(Formula::forall(a, b));
    }

    /// all(±a, all(±b, ~t)) — "no ±a bears t to any ±b"
    fn guarded_universal(&mut self, a: ETerm, b: UnaryLiteral, t: BinaryLiteral) {
        self.output.push(Formula::forall(a, ETerm::Forall(b, t.complement())));
    }

    /// all(±a, some(±b, t))
    fn guarded_existential(&mut self, a: ETerm, b: UnaryLiteral, t: BinaryLiteral) {
        self.output.push(Formula::forall(a, ETerm::Exists(b, t)));
    }

    /// Replace `forall x (p(x) & q(x) -> o(x))` by the three formulas
    /// over a fresh binary atom and the shared carrier atom.
    fn conjunction_axiom(&mut self, p: &UnaryAtom, q: &UnaryAtom, o: &UnaryAtom) {
        let fresh = BinaryAtom::new(format!("rt{}", self.conjunction_count));
        self.conjunction_count += 1;
        let carrier = UnaryAtom::new("ostar");
        // all(~o, some(ostar, fresh))
        self.guarded_existential(
            lterm(o, false),
            lit(&carrier, true),
            BinaryLiteral::positive(fresh.clone()),
        );
        // all(p, all(~p, ~fresh))
        self.guarded_universal(
            lterm(p, true),
            lit(p, false),
            BinaryLiteral::positive(fresh.clone()),
        );
        // all(q, all(p, ~fresh))
        self.guarded_universal(
            lterm(q, true),
            lit(p, true),
            BinaryLiteral::positive(fresh),
        );
    }

    fn subformula_axioms(&mut self, f: &KuFormula) {
        match f {
            KuFormula::Prop(_) => {}
            KuFormula::And(l, r) => {
                self.subformula_axioms(l);
                self.subformula_axioms(r);
                let pl = subformula_atom(l);
                let pr = subformula_atom(r);
                let pf = subformula_atom(f);
                self.conjunction_axiom(&pl, &pr, &pf);
                self.unary_implication(lterm(&pf, true), lterm(&pl, true));
                self.unary_implication(lterm(&pf, true), lterm(&pr, true));
            }
            KuFormula::Not(inner) => {
                self.subformula_axioms(inner);
                let pi = subformula_atom(inner);
                let pf = subformula_atom(f);
                self.unary_implication(lterm(&pf, true), lterm(&pi, false));
                self.unary_implication(lterm(&pf, false), lterm(&pi, true));
            }
            KuFormula::Box(inner) | KuFormula::Univ(inner) => {
                self.subformula_axioms(inner);
                let relation = BinaryAtom::new(match f {
                    KuFormula::Box(_) => "r",
                    _ => "e",
                });
                let pi = subformula_atom(inner);
                let pf = subformula_atom(f);
                // all(pf, all(~pi, ~rel)); all(~pf, some(~pi, rel))
                self.guarded_universal(
                    lterm(&pf, true),
                    lit(&pi, false),
                    BinaryLiteral::positive(relation.clone()),
                );
                self.guarded_existential(
                    lterm(&pf, false),
                    lit(&pi, false),
                    BinaryLiteral::positive(relation),
                );
            }
        }
    }
}

/// Translate a modal formula into an equisatisfiable set of
/// `Rd`-formulas: the subformula axioms, with each conjunction axiom
/// replaced by its three-formula elimination, plus the root-forcing
/// formulas over the universal relation.
pub fn ku_translate(phi: &KuFormula) -> Vec<Formula> {
    let mut t = Translator { output: Vec::new(), conjunction_count: 0 };
    t.subformula_axioms(phi);
    let root = subformula_atom(phi);
    let e = BinaryAtom::new("e");
    // some root point exists
    t.output.push(Formula::exists(lterm(&root, true), lterm(&root, true)));
    // the universal relation really is universal over +/- root points
    for a in [true, false] {
        for b in [true, false] {
            t.output.push(Formula::forall(
                lterm(&root, a),
                ETerm::Forall(lit(&root, b), BinaryLiteral::positive(e.clone())),
            ));
        }
    }
    t.output
}

// ---------------------------------------------------------------------------
// Brute-force Kripke oracle

struct KripkeModel {
    worlds: usize,
    /// accessibility as adjacency bit rows
    relation: Vec<u32>,
    /// valuation per letter: bit i set when the letter holds at world i
    valuation: Vec<u32>,
}

impl KripkeModel {
    fn eval(&self, f: &KuFormula, letters: &[String]) -> u32 {
        let full = (1u32 << self.worlds) - 1;
        match f {
            KuFormula::Prop(p) => {
                let i = letters.iter().position(|l| l == p).expect("known letter");
                self.valuation[i]
            }
            KuFormula::And(l, r) => self.eval(l, letters) & self.eval(r, letters),
            KuFormula::Not(inner) => full & !self.eval(inner, letters),
            KuFormula::Box(inner) => {
                let inner_set = self.eval(inner, letters);
                let mut out = 0;
                for w in 0..self.worlds {
                    if self.relation[w] & !inner_set == 0 {
                        out |= 1 << w;
                    }
                }
                out
            }
            KuFormula::Univ(inner) => {
                if self.eval(inner, letters) == full {
                    full
                } else {
                    0
                }
            }
        }
    }
}

/// Brute-force Kripke satisfiability over frames with at most
/// `max_worlds` worlds (intended for tiny inputs only).
pub fn kripke_satisfiable(phi: &KuFormula, max_worlds: usize) -> bool {
    let mut letters = BTreeSet::new();
    phi.letters(&mut letters);
    let letters: Vec<String> = letters.into_iter().collect();
    for worlds in 1..=max_worlds {
        let edge_space = 1u64 << (worlds * worlds);
        let val_space = 1u64 << (worlds * letters.len());
        for edges in 0..edge_space {
            let relation: Vec<u32> = (0..worlds)
                .map(|w| ((edges >> (w * worlds)) as u32) & ((1 << worlds) - 1))
                .collect();
            for vals in 0..val_space {
                let valuation: Vec<u32> = (0..letters.len())
                    .map(|i| ((vals >> (i * worlds)) as u32) & ((1 << worlds) - 1))
                    .collect();
                let model = KripkeModel { worlds, relation: relation.clone(), valuation };
                if model.eval(phi, &letters) != 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// All modal formulas of syntactic depth at most two over one letter.
pub fn enumerate_depth2(letter: &str) -> Vec<KuFormula> {
    let base = KuFormula::prop(letter);
    let mut depth1 = vec![
        KuFormula::not(base.clone()),
        KuFormula::nec(base.clone()),
        KuFormula::univ(base.clone()),
        KuFormula::and(base.clone(), base.clone()),
    ];
    let mut shallow = vec![base.clone()];
    shallow.append(&mut depth1);
    let mut out = shallow.clone();
    for f in &shallow[1..] {
        // unary connectives over depth-1 formulas
        out.push(KuFormula::not(f.clone()));
        out.push(KuFormula::nec(f.clone()));
        out.push(KuFormula::univ(f.clone()));
    }
    for l in &shallow {
        for r in &shallow {
            if l.key() != letter || r.key() != letter {
                out.push(KuFormula::and(l.clone(), r.clone()));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
