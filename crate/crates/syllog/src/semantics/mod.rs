//! Finite structures and truth evaluation.
//!
//! A [`Structure`] interprets unary atoms as subsets of a finite domain
//! and binary atoms as sets of ordered pairs. Domains are capped at 64
//! elements so extensions can be held in bit sets; everything in this
//! crate operates at desk scale.

mod search;

pub use search::{find_model, oracle_valid, ModelSearch, OracleOutcome};

use std::collections::{BTreeMap, HashMap};

use crate::surface::ParseError;
use crate::syntax::{BinaryAtom, ETerm, Formula, Fragment, Quantifier, Signature, UnaryAtom};

pub const MAX_DOMAIN: usize = 64;

/// A finite interpretation of the atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    elems: Vec<String>,
    unary: BTreeMap<UnaryAtom, u64>,
    /// One successor row per domain element.
    binary: BTreeMap<BinaryAtom, Vec<u64>>,
}

/// Result of evaluating one formula in one structure.
///
/// For a true existential the witness is an element of both extensions;
/// for a false universal it is a counter-element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthVerdict {
    pub holds: bool,
    pub witness: Option<usize>,
}

impl Structure {
    /// Create a structure with the given domain and empty extensions.
    ///
    /// Panics on an empty or oversized domain or duplicate element names;
    /// structures are required to be non-empty.
    pub fn new<S: Into<String>>(domain: impl IntoIterator<Item = S>) -> Structure {
        let elems: Vec<String> = domain.into_iter().map(Into::into).collect();
        assert!(!elems.is_empty(), "structure domain must be non-empty");
        assert!(elems.len() <= MAX_DOMAIN, "domain larger than {MAX_DOMAIN}");
        for (i, e) in elems.iter().enumerate() {
            assert!(
                !elems[..i].contains(e),
                "duplicate element name {e:?} in domain"
            );
        }
        Structure { elems, unary: BTreeMap::new(), binary: BTreeMap::new() }
    }

    pub fn domain(&self) -> &[String] {
        &self.elems
    }

    pub fn size(&self) -> usize {
        self.elems.len()
    }

    fn domain_mask(&self) -> u64 {
        if self.elems.len() == 64 { !0 } else { (1u64 << self.elems.len()) - 1 }
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.elems.iter().position(|e| e == name)
    }

    fn must_element(&self, name: &str) -> usize {
        self.element(name)
            .unwrap_or_else(|| panic!("element {name:?} not in domain"))
    }

    /// Put an element into a unary atom's extension.
    pub fn insert_unary(&mut self, atom: UnaryAtom, elem: &str) {
        let i = self.must_element(elem);
        *self.unary.entry(atom).or_insert(0) |= 1 << i;
    }

    /// Declare a unary atom, possibly with an empty extension.
    pub fn declare_unary(&mut self, atom: UnaryAtom) {
        self.unary.entry(atom).or_insert(0);
    }

    pub fn declare_binary(&mut self, atom: BinaryAtom) {
        let n = self.elems.len();
        self.binary.entry(atom).or_insert_with(|| vec![0; n]);
    }

    /// Put an ordered pair into a binary atom's extension.
    pub fn insert_pair(&mut self, atom: BinaryAtom, from: &str, to: &str) {
        let i = self.must_element(from);
        let j = self.must_element(to);
        let n = self.elems.len();
        self.binary.entry(atom).or_insert_with(|| vec![0; n])[i] |= 1 << j;
    }

    pub(crate) fn insert_unary_idx(&mut self, atom: UnaryAtom, idx: usize) {
        assert!(idx < self.elems.len());
        *self.unary.entry(atom).or_insert(0) |= 1 << idx;
    }

    pub(crate) fn insert_pair_idx(&mut self, atom: BinaryAtom, from: usize, to: usize) {
        assert!(from < self.elems.len() && to < self.elems.len());
        let n = self.elems.len();
        self.binary.entry(atom).or_insert_with(|| vec![0; n])[from] |= 1 << to;
    }

    pub fn unary_atoms(&self) -> impl Iterator<Item = &UnaryAtom> {
        self.unary.keys()
    }

    pub fn binary_atoms(&self) -> impl Iterator<Item = &BinaryAtom> {
        self.binary.keys()
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.unary.keys().cloned(), self.binary.keys().cloned())
    }

    fn unary_bits(&self, atom: &UnaryAtom) -> u64 {
        self.unary.get(atom).copied().unwrap_or(0)
    }

    fn row(&self, atom: &BinaryAtom, elem: usize) -> u64 {
        self.binary.get(atom).map_or(0, |rows| rows[elem])
    }

    pub fn has_pair(&self, atom: &BinaryAtom, from: usize, to: usize) -> bool {
        self.row(atom, from) & (1 << to) != 0
    }

    /// The extension of an e-term as a bit set over domain indices.
    ///
    /// Atoms missing from the structure's maps read as empty.
    pub fn extension_bits(&self, e: &ETerm) -> u64 {
        let dom = self.domain_mask();
        match e {
            ETerm::Literal(l) => {
                let base = self.unary_bits(&l.atom);
                if l.positive { base } else { dom & !base }
            }
            ETerm::Exists(l, t) => {
                let targets = self.extension_bits(&ETerm::Literal(l.clone()));
                let mut out = 0u64;
                for i in 0..self.elems.len() {
                    let edges = self.row(&t.atom, i);
                    let edges = if t.positive { edges } else { dom & !edges };
                    if edges & targets != 0 {
                        out |= 1 << i;
                    }
                }
                out
            }
            ETerm::Forall(l, t) => {
                let targets = self.extension_bits(&ETerm::Literal(l.clone()));
                let mut out = 0u64;
                for i in 0..self.elems.len() {
                    let edges = self.row(&t.atom, i);
                    let edges = if t.positive { edges } else { dom & !edges };
                    if targets & !edges == 0 {
                        out |= 1 << i;
                    }
                }
                out
            }
        }
    }

    /// The extension as a list of domain indices.
    pub fn extension(&self, e: &ETerm) -> Vec<usize> {
        bits_to_indices(self.extension_bits(e))
    }

    /// Evaluate a formula, returning a witness or counter-element when
    /// one exists.
    pub fn satisfies(&self, phi: &Formula) -> TruthVerdict {
        let l = self.extension_bits(&phi.left);
        let r = self.extension_bits(&phi.right);
        match phi.quantifier {
            Quantifier::Some => {
                let both = l & r;
                TruthVerdict {
                    holds: both != 0,
                    witness: lowest_bit(both),
                }
            }
            Quantifier::All => {
                let counter = l & !r & self.domain_mask();
                TruthVerdict {
                    holds: counter == 0,
                    witness: lowest_bit(counter),
                }
            }
        }
    }

    pub fn holds(&self, phi: &Formula) -> bool {
        self.satisfies(phi).holds
    }

    pub fn models<'a>(&self, theta: impl IntoIterator<Item = &'a Formula>) -> bool {
        theta.into_iter().all(|phi| self.holds(phi))
    }

    /// All canonical formulas of the fragment over the signature that are
    /// true in this structure.
    pub fn theory(&self, frag: Fragment, sig: &Signature) -> Vec<Formula> {
        let terms = sig.all_eterms();
        let ext: HashMap<ETerm, u64> =
            terms.iter().map(|e| (e.clone(), self.extension_bits(e))).collect();
        let dom = self.domain_mask();
        let mut out = std::collections::BTreeSet::new();
        for l in &terms {
            for r in &terms {
                for q in [Quantifier::All, Quantifier::Some] {
                    let phi = Formula { quantifier: q, left: l.clone(), right: r.clone() };
                    let canon = phi.canonicalize();
                    if out.contains(&canon) || !canon.classify().contains(frag) {
                        continue;
                    }
                    let lb = ext[&canon.left];
                    let rb = ext[&canon.right];
                    let holds = match canon.quantifier {
                        Quantifier::Some => lb & rb != 0,
                        Quantifier::All => lb & !rb & dom == 0,
                    };
                    if holds {
                        out.insert(canon);
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

fn lowest_bit(bits: u64) -> Option<usize> {
    if bits == 0 { None } else { Some(bits.trailing_zeros() as usize) }
}

pub(crate) fn bits_to_indices(bits: u64) -> Vec<usize> {
    (0..64).filter(|i| bits & (1 << i) != 0).collect()
}

/// Union of two structures with disjoint domains; colliding element names
/// from the right structure are primed until unique.
pub fn disjoint_union(a: &Structure, b: &Structure) -> Structure {
    let mut names = a.elems.clone();
    let mut b_names = Vec::with_capacity(b.elems.len());
    for name in &b.elems {
        let mut candidate = name.clone();
        while names.contains(&candidate) {
            candidate.push('\'');
        }
        names.push(candidate.clone());
        b_names.push(candidate);
    }
    let mut out = Structure::new(names);
    for (atom, bits) in &a.unary {
        out.declare_unary(atom.clone());
        for i in bits_to_indices(*bits) {
            let name = a.elems[i].clone();
            out.insert_unary(atom.clone(), &name);
        }
    }
    for (atom, bits) in &b.unary {
        out.declare_unary(atom.clone());
        for i in bits_to_indices(*bits) {
            out.insert_unary(atom.clone(), &b_names[i].clone());
        }
    }
    for (atom, rows) in &a.binary {
        out.declare_binary(atom.clone());
        for (i, row) in rows.iter().enumerate() {
            for j in bits_to_indices(*row) {
                out.insert_pair(atom.clone(), &a.elems[i].clone(), &a.elems[j].clone());
            }
        }
    }
    for (atom, rows) in &b.binary {
        out.declare_binary(atom.clone());
        for (i, row) in rows.iter().enumerate() {
            for j in bits_to_indices(*row) {
                out.insert_pair(atom.clone(), &b_names[i].clone(), &b_names[j].clone());
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Model file format

/// Render a structure in the model file format: a `domain:` line, then
/// one line per unary and binary atom. Elements appear in domain order
/// and pairs lexicographically.
pub fn print_model(s: &Structure) -> String {
    let mut out = String::new();
    out.push_str("domain:");
    for e in &s.elems {
        out.push(' ');
        out.push_str(e);
    }
    out.push('\n');
    for (atom, bits) in &s.unary {
        out.push_str(&format!("unary {}:", atom.name()));
        for i in bits_to_indices(*bits) {
            out.push(' ');
            out.push_str(&s.elems[i]);
        }
        out.push('\n');
    }
    for (atom, rows) in &s.binary {
        out.push_str(&format!("binary {}:", atom.name()));
        for (i, row) in rows.iter().enumerate() {
            for j in bits_to_indices(*row) {
                out.push_str(&format!(" ({},{})", s.elems[i], s.elems[j]));
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_model(text: &str) -> Result<Structure, ParseError> {
    let err = |line: usize, expected: &str, found: &str| ParseError {
        line,
        col: 1,
        expected: expected.to_string(),
        found: found.to_string(),
    };
    let mut structure: Option<Structure> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("domain:") {
            if structure.is_some() {
                return Err(err(line_no, "a single domain line", trimmed));
            }
            let elems: Vec<&str> = rest.split_whitespace().collect();
            if elems.is_empty() {
                return Err(err(line_no, "non-empty domain", trimmed));
            }
            if elems.len() > MAX_DOMAIN {
                return Err(err(line_no, "at most 64 elements", trimmed));
            }
            for (i, e) in elems.iter().enumerate() {
                if elems[..i].contains(e) {
                    return Err(err(line_no, "distinct element names", e));
                }
            }
            structure = Some(Structure::new(elems));
        } else if let Some(rest) = trimmed.strip_prefix("unary ") {
            let s = structure
                .as_mut()
                .ok_or_else(|| err(line_no, "domain line first", trimmed))?;
            let (name, elems) = rest
                .split_once(':')
                .ok_or_else(|| err(line_no, "\"unary <atom>: ...\"", trimmed))?;
            let atom = UnaryAtom::new(name.trim());
            s.declare_unary(atom.clone());
            for e in elems.split_whitespace() {
                if s.element(e).is_none() {
                    return Err(err(line_no, "element from the domain", e));
                }
                s.insert_unary(atom.clone(), e);
            }
        } else if let Some(rest) = trimmed.strip_prefix("binary ") {
            let s = structure
                .as_mut()
                .ok_or_else(|| err(line_no, "domain line first", trimmed))?;
            let (name, pairs) = rest
                .split_once(':')
                .ok_or_else(|| err(line_no, "\"binary <atom>: ...\"", trimmed))?;
            let atom = BinaryAtom::new(name.trim());
            s.declare_binary(atom.clone());
            for pair in pairs.split_whitespace() {
                let inner = pair
                    .strip_prefix('(')
                    .and_then(|p| p.strip_suffix(')'))
                    .ok_or_else(|| err(line_no, "pair of the form (a,b)", pair))?;
                let (from, to) = inner
                    .split_once(',')
                    .ok_or_else(|| err(line_no, "pair of the form (a,b)", pair))?;
                if s.element(from).is_none() || s.element(to).is_none() {
                    return Err(err(line_no, "elements from the domain", pair));
                }
                s.insert_pair(atom.clone(), from, to);
            }
        } else {
            return Err(err(line_no, "domain:, unary or binary line", trimmed));
        }
    }
    structure.ok_or_else(|| err(1, "a domain line", "end of input"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_formula;
    use crate::syntax::UnaryLiteral;

    fn ua(n: &str) -> UnaryAtom {
        UnaryAtom::new(n)
    }

    fn ba(n: &str) -> BinaryAtom {
        BinaryAtom::new(n)
    }

    #[test]
    fn complement_extension_is_set_complement() {
        let mut s = Structure::new(["a", "b", "c"]);
        s.insert_unary(ua("p"), "a");
        s.insert_unary(ua("p"), "c");
        let p = ETerm::atom(ua("p"));
        let not_p = p.complement();
        assert_eq!(s.extension(&p), vec![0, 2]);
        assert_eq!(s.extension(&not_p), vec![1]);
    }

    #[test]
    fn universal_quantification_without_existential_commitment() {
        // p empty: all(p, q) true, some(p, q) false
        let mut s = Structure::new(["a"]);
        s.insert_unary(ua("q"), "a");
        assert!(s.holds(&parse_formula("all(p, q)").unwrap()));
        assert!(!s.holds(&parse_formula("some(p, q)").unwrap()));
    }

    #[test]
    fn compound_extensions() {
        // a -r-> b, b in q
        let mut s = Structure::new(["a", "b"]);
        s.insert_unary(ua("q"), "b");
        s.insert_pair(ba("r"), "a", "b");
        let some_q_r = ETerm::Exists(UnaryLiteral::positive(ua("q")), crate::syntax::BinaryLiteral::positive(ba("r")));
        assert_eq!(s.extension(&some_q_r), vec![0]);
        // all(q, r): holds of a (its q-successors cover q) but not b
        let all_q_r = ETerm::Forall(UnaryLiteral::positive(ua("q")), crate::syntax::BinaryLiteral::positive(ba("r")));
        assert_eq!(s.extension(&all_q_r), vec![0]);
        // all(q, ~r): b r's no q
        let all_q_nr = ETerm::Forall(UnaryLiteral::positive(ua("q")), crate::syntax::BinaryLiteral::negative(ba("r")));
        assert_eq!(s.extension(&all_q_nr), vec![1]);
    }

    #[test]
    fn witness_reporting() {
        let mut s = Structure::new(["a", "b"]);
        s.insert_unary(ua("p"), "a");
        s.insert_unary(ua("p"), "b");
        s.insert_unary(ua("q"), "b");
        let v = s.satisfies(&parse_formula("some(p, q)").unwrap());
        assert!(v.holds);
        assert_eq!(v.witness, Some(1));
        let v = s.satisfies(&parse_formula("all(p, q)").unwrap());
        assert!(!v.holds);
        assert_eq!(v.witness, Some(0));
        let v = s.satisfies(&parse_formula("all(q, p)").unwrap());
        assert!(v.holds);
        assert_eq!(v.witness, None);
    }

    #[test]
    fn theory_over_singleton() {
        let mut s = Structure::new(["a"]);
        s.insert_unary(ua("p"), "a");
        let sig = Signature::new([ua("p")], []);
        let th = s.theory(Fragment::SDagger, &sig);
        let has = |t: &str| th.contains(&parse_formula(t).unwrap().canonicalize());
        assert!(has("all(p, p)"));
        assert!(has("some(p, p)"));
        assert!(has("all(~p, p)"));
        assert!(!has("some(~p, ~p)"));
        // excluded middle: theory plus barred theory covers all formulas
        let all = sig.all_formulas(Fragment::SDagger);
        let barred = all
            .iter()
            .filter(|phi| th.contains(&phi.bar().canonicalize()))
            .count();
        assert_eq!(th.len() + barred, all.len());
    }

    #[test]
    fn model_file_round_trip() {
        let mut s = Structure::new(["a", "b"]);
        s.insert_unary(ua("p"), "a");
        s.declare_unary(ua("q"));
        s.insert_pair(ba("r"), "a", "b");
        s.insert_pair(ba("r"), "a", "a");
        let text = print_model(&s);
        assert_eq!(
            text,
            "domain: a b\nunary p: a\nunary q:\nbinary r: (a,a) (a,b)\n"
        );
        assert_eq!(parse_model(&text).unwrap(), s);
    }

    #[test]
    fn disjoint_union_renames() {
        let mut a = Structure::new(["x"]);
        a.insert_unary(ua("p"), "x");
        let mut b = Structure::new(["x"]);
        b.insert_unary(ua("q"), "x");
        let u = disjoint_union(&a, &b);
        assert_eq!(u.domain(), ["x", "x'"]);
        assert!(u.holds(&parse_formula("some(p, ~q)").unwrap()));
        assert!(u.holds(&parse_formula("some(q, ~p)").unwrap()));
    }
}
