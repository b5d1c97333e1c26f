//! Abstract syntax for the six syllogistic fragments.
//!
//! Terms and formulas are built from unary atoms (nouns) and binary atoms
//! (transitive verbs), which live in disjoint namespaces. The `bar`
//! operation plays the role of negation, and two pairs of formulas are
//! identified outright: `some(e, f)` with `some(f, e)`, and `all(e, f)`
//! with `all(~f, ~e)`. [`Formula::canonicalize`] picks a fixed
//! representative of each identification class.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// A noun symbol. Unary atoms are disjoint from binary atoms by type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnaryAtom(String);

/// A transitive-verb symbol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryAtom(String);

impl UnaryAtom {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "unary atom name must be non-empty");
        UnaryAtom(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl BinaryAtom {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "binary atom name must be non-empty");
        BinaryAtom(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

/// A unary atom or its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnaryLiteral {
    pub atom: UnaryAtom,
    pub positive: bool,
}

/// A binary atom or its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryLiteral {
    pub atom: BinaryAtom,
    pub positive: bool,
}

impl UnaryLiteral {
    pub fn positive(atom: UnaryAtom) -> Self {
        UnaryLiteral { atom, positive: true }
    }

    pub fn negative(atom: UnaryAtom) -> Self {
        UnaryLiteral { atom, positive: false }
    }

    /// The complementary literal (flips the sign, nothing else).
    pub fn complement(&self) -> Self {
        UnaryLiteral { atom: self.atom.clone(), positive: !self.positive }
    }
}

impl BinaryLiteral {
    pub fn positive(atom: BinaryAtom) -> Self {
        BinaryLiteral { atom, positive: true }
    }

    pub fn negative(atom: BinaryAtom) -> Self {
        BinaryLiteral { atom, positive: false }
    }

    pub fn complement(&self) -> Self {
        BinaryLiteral { atom: self.atom.clone(), positive: !self.positive }
    }
}

// Positive literals sort before negative ones, atoms alphabetically.
impl Ord for UnaryLiteral {
    fn cmp(&self, other: &Self) -> Ordering {
        self.atom
            .cmp(&other.atom)
            .then_with(|| (!self.positive).cmp(&!other.positive))
    }
}

impl PartialOrd for UnaryLiteral {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BinaryLiteral {
    fn cmp(&self, other: &Self) -> Ordering {
        self.atom
            .cmp(&other.atom)
            .then_with(|| (!self.positive).cmp(&!other.positive))
    }
}

impl PartialOrd for BinaryLiteral {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Quantifier of a formula or of a compound term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    All,
    Some,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::All => Quantifier::Some,
            Quantifier::Some => Quantifier::All,
        }
    }
}

/// An e-term: a unary literal, or a quantified verb phrase whose subject
/// may be any unary literal. C-terms are e-terms with a positive subject.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ETerm {
    Literal(UnaryLiteral),
    Exists(UnaryLiteral, BinaryLiteral),
    Forall(UnaryLiteral, BinaryLiteral),
}

impl ETerm {
    pub fn lit(l: UnaryLiteral) -> Self {
        ETerm::Literal(l)
    }

    pub fn atom(p: UnaryAtom) -> Self {
        ETerm::Literal(UnaryLiteral::positive(p))
    }

    /// The complementary e-term: `~e`. Involutive.
    pub fn complement(&self) -> ETerm {
        match self {
            ETerm::Literal(l) => ETerm::Literal(l.complement()),
            ETerm::Exists(l, t) => ETerm::Forall(l.clone(), t.complement()),
            ETerm::Forall(l, t) => ETerm::Exists(l.clone(), t.complement()),
        }
    }

    /// A c-term is an e-term whose subject literal (if any) is positive.
    pub fn is_cterm(&self) -> bool {
        match self {
            ETerm::Literal(_) => true,
            ETerm::Exists(l, _) | ETerm::Forall(l, _) => l.positive,
        }
    }

    /// A positive c-term: the literal component (the literal itself, or
    /// the verb literal of a compound) is positive.
    pub fn is_positive_cterm(&self) -> bool {
        match self {
            ETerm::Literal(l) => l.positive,
            ETerm::Exists(l, t) | ETerm::Forall(l, t) => l.positive && t.positive,
        }
    }

    /// True when the term is a single unary atom.
    pub fn as_unary_atom(&self) -> Option<&UnaryAtom> {
        match self {
            ETerm::Literal(l) if l.positive => Some(&l.atom),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&UnaryLiteral> {
        match self {
            ETerm::Literal(l) => Some(l),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            ETerm::Literal(_) => 0,
            ETerm::Exists(_, _) => 1,
            ETerm::Forall(_, _) => 2,
        }
    }
}

impl Ord for ETerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| match (self, other) {
            (ETerm::Literal(a), ETerm::Literal(b)) => a.cmp(b),
            (ETerm::Exists(l1, t1), ETerm::Exists(l2, t2))
            | (ETerm::Forall(l1, t1), ETerm::Forall(l2, t2)) => {
                l1.cmp(l2).then_with(|| t1.cmp(t2))
            }
            _ => unreachable!("ranks differ"),
        })
    }
}

impl PartialOrd for ETerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A formula: a quantifier applied to a pair of e-terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula {
    pub quantifier: Quantifier,
    pub left: ETerm,
    pub right: ETerm,
}

impl Formula {
    pub fn forall(left: ETerm, right: ETerm) -> Self {
        Formula { quantifier: Quantifier::All, left, right }
    }

    pub fn exists(left: ETerm, right: ETerm) -> Self {
        Formula { quantifier: Quantifier::Some, left, right }
    }

    /// The negation `~phi`: `all(e, f)` becomes `some(e, ~f)` and
    /// `some(e, f)` becomes `all(e, ~f)`. Involutive and
    /// fragment-preserving.
    pub fn bar(&self) -> Formula {
        Formula {
            quantifier: self.quantifier.dual(),
            left: self.left.clone(),
            right: self.right.complement(),
        }
    }

    /// The other representative of the identification class:
    /// `some(e, f) = some(f, e)` and `all(e, f) = all(~f, ~e)`.
    pub fn flipped(&self) -> Formula {
        match self.quantifier {
            Quantifier::Some => Formula::exists(self.right.clone(), self.left.clone()),
            Quantifier::All => {
                Formula::forall(self.right.complement(), self.left.complement())
            }
        }
    }

    /// Both representatives of the identification class (possibly equal).
    pub fn representatives(&self) -> [Formula; 2] {
        [self.clone(), self.flipped()]
    }

    /// The least representative of the identification class under the
    /// fixed term order. Idempotent and semantics-preserving.
    pub fn canonicalize(&self) -> Formula {
        let other = self.flipped();
        if key(&other) < key(self) {
            other
        } else {
            self.clone()
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// True for formulas of the shape `some(e, ~e)`, which are false in
    /// every structure.
    pub fn is_absurdity(&self) -> bool {
        self.quantifier == Quantifier::Some && self.right == self.left.complement()
    }

    /// The atoms occurring in the formula.
    pub fn atoms(&self) -> Signature {
        let mut sig = Signature::default();
        sig.add_term(&self.left);
        sig.add_term(&self.right);
        sig
    }

    /// All fragments containing the formula, modulo identifications.
    pub fn classify(&self) -> FragmentSet {
        let mut set = FragmentSet::empty();
        for rep in self.representatives() {
            for frag in Fragment::ALL {
                if matches_grammar(&rep, frag) {
                    set.insert(frag);
                }
            }
        }
        set
    }
}

fn key(phi: &Formula) -> (&ETerm, &ETerm) {
    (&phi.left, &phi.right)
}

/// The six fragments, ordered by rough expressiveness for display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    /// Traditional syllogistic.
    S,
    /// Syllogistic with noun-level negation.
    SDagger,
    /// Relational syllogistic.
    R,
    /// Relational syllogistic with relative-clause subjects.
    RStar,
    /// Relational syllogistic with noun-level negation.
    RDagger,
    /// Relative-clause subjects and noun-level negation.
    RStarDagger,
}

impl Fragment {
    pub const ALL: [Fragment; 6] = [
        Fragment::S,
        Fragment::SDagger,
        Fragment::R,
        Fragment::RStar,
        Fragment::RDagger,
        Fragment::RStarDagger,
    ];

    /// Short ASCII tag used in files and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            Fragment::S => "S",
            Fragment::SDagger => "Sd",
            Fragment::R => "R",
            Fragment::RStar => "Rs",
            Fragment::RDagger => "Rd",
            Fragment::RStarDagger => "Rsd",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Fragment> {
        Fragment::ALL.iter().copied().find(|f| f.tag() == tag)
    }

    /// Direct sub-fragments in the inclusion lattice.
    pub fn includes(self, other: Fragment) -> bool {
        use Fragment::*;
        if self == other {
            return true;
        }
        match (other, self) {
            (S, _) => true,
            (SDagger, RDagger | RStarDagger) => true,
            (R, RStar | RDagger | RStarDagger) => true,
            (RStar, RStarDagger) => true,
            (RDagger, RStarDagger) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A small set of fragment tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FragmentSet(u8);

impl FragmentSet {
    pub fn empty() -> Self {
        FragmentSet(0)
    }

    fn bit(f: Fragment) -> u8 {
        1 << (f as u8)
    }

    pub fn insert(&mut self, f: Fragment) {
        self.0 |= Self::bit(f);
    }

    pub fn contains(&self, f: Fragment) -> bool {
        self.0 & Self::bit(f) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Fragment> + '_ {
        Fragment::ALL.into_iter().filter(|f| self.contains(*f))
    }

    /// The tightest fragment in the set under inclusion, preferring the
    /// cheaper fragment when two are incomparable.
    pub fn tightest(&self) -> Option<Fragment> {
        self.iter().find(|f| {
            self.iter().all(|g| g == *f || !f.includes(g))
        })
    }
}

/// Grammar check for one representative against one fragment, per the
/// syntax reference table.
fn matches_grammar(phi: &Formula, frag: Fragment) -> bool {
    let l = &phi.left;
    let r = &phi.right;
    let is_lit = |e: &ETerm| e.as_literal().is_some();
    let is_atom = |e: &ETerm| e.as_unary_atom().is_some();
    let is_neg_atom =
        |e: &ETerm| matches!(e, ETerm::Literal(lit) if !lit.positive);
    // c-term with an atom subject; the literal case allows any literal.
    let is_cterm = |e: &ETerm| e.is_cterm();
    let is_pos_cterm = |e: &ETerm| e.is_cterm() && e.is_positive_cterm();
    let is_neg_cterm = |e: &ETerm| e.is_cterm() && !e.is_positive_cterm();
    match frag {
        Fragment::S => match phi.quantifier {
            // some(p, l) | some(l, p)
            Quantifier::Some => {
                is_lit(l) && is_lit(r) && (is_atom(l) || is_atom(r))
            }
            // all(p, l) | all(l, ~p)
            Quantifier::All => {
                is_lit(l) && is_lit(r) && (is_atom(l) || is_neg_atom(r))
            }
        },
        Fragment::SDagger => is_lit(l) && is_lit(r),
        Fragment::R => match phi.quantifier {
            // some(p, c) | some(c, p)
            Quantifier::Some => {
                is_cterm(l) && is_cterm(r) && (is_atom(l) || is_atom(r))
            }
            // all(p, c) | all(c, ~p)
            Quantifier::All => {
                is_cterm(l) && is_cterm(r) && (is_atom(l) || is_neg_atom(r))
            }
        },
        Fragment::RStar => match phi.quantifier {
            // some(c+, d) | some(d, c+)
            Quantifier::Some => {
                is_cterm(l) && is_cterm(r) && (is_pos_cterm(l) || is_pos_cterm(r))
            }
            // all(c+, d) | all(d, ~c+)
            Quantifier::All => {
                is_cterm(l) && is_cterm(r) && (is_pos_cterm(l) || is_neg_cterm(r))
            }
        },
        Fragment::RDagger => is_lit(l) || is_lit(r),
        Fragment::RStarDagger => true,
    }
}

/// A finite set of atoms that terms and formulas are drawn from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub unaries: BTreeSet<UnaryAtom>,
    pub binaries: BTreeSet<BinaryAtom>,
}

impl Signature {
    pub fn new(
        unaries: impl IntoIterator<Item = UnaryAtom>,
        binaries: impl IntoIterator<Item = BinaryAtom>,
    ) -> Self {
        Signature {
            unaries: unaries.into_iter().collect(),
            binaries: binaries.into_iter().collect(),
        }
    }

    pub fn add_term(&mut self, e: &ETerm) {
        match e {
            ETerm::Literal(l) => {
                self.unaries.insert(l.atom.clone());
            }
            ETerm::Exists(l, t) | ETerm::Forall(l, t) => {
                self.unaries.insert(l.atom.clone());
                self.binaries.insert(t.atom.clone());
            }
        }
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            unaries: self.unaries.union(&other.unaries).cloned().collect(),
            binaries: self.binaries.union(&other.binaries).cloned().collect(),
        }
    }

    pub fn extend_with(&mut self, other: &Signature) {
        self.unaries.extend(other.unaries.iter().cloned());
        self.binaries.extend(other.binaries.iter().cloned());
    }

    pub fn is_empty(&self) -> bool {
        self.unaries.is_empty() && self.binaries.is_empty()
    }

    /// A binary atom named apart from everything in the signature, for
    /// use as the extra saturation atom.
    pub fn fresh_binary(&self) -> BinaryAtom {
        for i in 0.. {
            let candidate = format!("r{i}");
            if !self.binaries.iter().any(|b| b.name() == candidate)
                && !self.unaries.iter().any(|u| u.name() == candidate)
            {
                return BinaryAtom::new(candidate);
            }
        }
        unreachable!()
    }

    pub fn all_unary_literals(&self) -> Vec<UnaryLiteral> {
        let mut out = Vec::new();
        for a in &self.unaries {
            out.push(UnaryLiteral::positive(a.clone()));
            out.push(UnaryLiteral::negative(a.clone()));
        }
        out.sort();
        out
    }

    pub fn all_binary_literals(&self) -> Vec<BinaryLiteral> {
        let mut out = Vec::new();
        for a in &self.binaries {
            out.push(BinaryLiteral::positive(a.clone()));
            out.push(BinaryLiteral::negative(a.clone()));
        }
        out.sort();
        out
    }

    /// Every e-term over the signature, in term order.
    pub fn all_eterms(&self) -> Vec<ETerm> {
        let mut out: Vec<ETerm> = Vec::new();
        for l in self.all_unary_literals() {
            out.push(ETerm::Literal(l));
        }
        for l in self.all_unary_literals() {
            for t in self.all_binary_literals() {
                out.push(ETerm::Exists(l.clone(), t.clone()));
                out.push(ETerm::Forall(l.clone(), t));
            }
        }
        out.sort();
        out
    }

    /// Every c-term over the signature.
    pub fn all_cterms(&self) -> Vec<ETerm> {
        self.all_eterms().into_iter().filter(ETerm::is_cterm).collect()
    }

    /// Every positive c-term over the signature.
    pub fn all_positive_cterms(&self) -> Vec<ETerm> {
        self.all_eterms()
            .into_iter()
            .filter(|e| e.is_cterm() && e.is_positive_cterm())
            .collect()
    }

    /// All canonical formulas of a fragment over the signature, sorted.
    pub fn all_formulas(&self, frag: Fragment) -> Vec<Formula> {
        let terms = self.all_eterms();
        let mut out = BTreeSet::new();
        for l in &terms {
            for r in &terms {
                for q in [Quantifier::All, Quantifier::Some] {
                    let phi = Formula { quantifier: q, left: l.clone(), right: r.clone() };
                    let canon = phi.canonicalize();
                    if canon.classify().contains(frag) {
                        out.insert(canon);
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}
