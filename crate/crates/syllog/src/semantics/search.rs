//! Bounded model search.
//!
//! [`find_model`] enumerates domain sizes 1..=max and, per size, assigns
//! unary extensions element by element followed by binary edge patterns,
//! pruning with the universal formulas as soon as an element's picture is
//! complete. Isomorphic duplicates are cut down by requiring the
//! per-element tuples of unary memberships to be non-decreasing, and edge
//! patterns are abstracted to none/all/mixed per target class, which is
//! exact for one-step quantified terms.

use std::collections::BTreeSet;

use crate::syntax::{
    BinaryAtom, BinaryLiteral, ETerm, Formula, Quantifier, Signature, UnaryAtom,
    UnaryLiteral,
};

use super::Structure;

/// Outcome of bounded satisfiability search.
#[derive(Debug, Clone)]
pub enum ModelSearch {
    Found(Structure),
    NoModelWithinBound(usize),
}

impl ModelSearch {
    pub fn model(&self) -> Option<&Structure> {
        match self {
            ModelSearch::Found(m) => Some(m),
            ModelSearch::NoModelWithinBound(_) => None,
        }
    }
}

/// Outcome of bounded validity checking.
#[derive(Debug, Clone)]
pub enum OracleOutcome {
    /// No countermodel with at most the given number of elements.
    ValidWithinBound(usize),
    CounterModel(Structure),
}

impl OracleOutcome {
    pub fn is_valid_within_bound(&self) -> bool {
        matches!(self, OracleOutcome::ValidWithinBound(_))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Lit {
    bit: u32,
    positive: bool,
}

impl Lit {
    fn test(self, mask: u32) -> bool {
        (mask & self.bit != 0) == self.positive
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Term {
    Lit(Lit),
    Compound { quant: Quantifier, subj: Lit, bin: usize, positive: bool },
}

impl Term {
    fn max_bin(self) -> Option<usize> {
        match self {
            Term::Lit(_) => None,
            Term::Compound { bin, .. } => Some(bin),
        }
    }
}

struct CompiledFormula {
    quant: Quantifier,
    left: Term,
    right: Term,
    /// Largest binary index mentioned; None for literal-only formulas.
    max_bin: Option<usize>,
}

const NONE: u8 = 0;
const ALL: u8 = 1;
const MIXED: u8 = 2;

struct Searcher {
    unaries: Vec<UnaryAtom>,
    binaries: Vec<BinaryAtom>,
    universals: Vec<CompiledFormula>,
    existentials: Vec<CompiledFormula>,
    /// Masks allowed by the literal-only universal formulas.
    allowed_masks: Vec<u32>,
    /// Some formula mentions two distinct binary atoms.
    coupled: bool,
    size: usize,
    masks: Vec<u32>,
    classes: Vec<(u32, usize)>,
    /// rows[elem][bin][class] in {NONE, ALL, MIXED}.
    rows: Vec<Vec<Vec<u8>>>,
    witnessed: Vec<bool>,
}

impl Searcher {
    fn compile_lit(&self, l: &UnaryLiteral) -> Lit {
        let idx = self.unaries.iter().position(|a| *a == l.atom).expect("unary in signature");
        Lit { bit: 1 << idx, positive: l.positive }
    }

    fn compile_blit(&self, t: &BinaryLiteral) -> (usize, bool) {
        let idx =
            self.binaries.iter().position(|a| *a == t.atom).expect("binary in signature");
        (idx, t.positive)
    }

    fn compile_term(&self, e: &ETerm) -> Term {
        match e {
            ETerm::Literal(l) => Term::Lit(self.compile_lit(l)),
            ETerm::Exists(l, t) => {
                let (bin, positive) = self.compile_blit(t);
                Term::Compound { quant: Quantifier::Some, subj: self.compile_lit(l), bin, positive }
            }
            ETerm::Forall(l, t) => {
                let (bin, positive) = self.compile_blit(t);
                Term::Compound { quant: Quantifier::All, subj: self.compile_lit(l), bin, positive }
            }
        }
    }

    fn eval_term(&self, t: Term, elem: usize) -> bool {
        match t {
            Term::Lit(l) => l.test(self.masks[elem]),
            Term::Compound { quant, subj, bin, positive } => {
                let row = &self.rows[elem][bin];
                match quant {
                    Quantifier::Some => self
                        .classes
                        .iter()
                        .enumerate()
                        .any(|(c, (mask, _))| {
                            subj.test(*mask)
                                && if positive { row[c] != NONE } else { row[c] != ALL }
                        }),
                    Quantifier::All => self
                        .classes
                        .iter()
                        .enumerate()
                        .all(|(c, (mask, _))| {
                            !subj.test(*mask)
                                || if positive { row[c] == ALL } else { row[c] == NONE }
                        }),
                }
            }
        }
    }

    /// Check the universal formulas whose last-mentioned binary is `bin`
    /// at one element (or the literal-only ones when `bin` is None).
    fn universals_hold_at(&self, elem: usize, bin: Option<usize>) -> bool {
        self.universals.iter().all(|f| {
            f.max_bin != bin
                || !self.eval_term(f.left, elem)
                || self.eval_term(f.right, elem)
        })
    }

    /// Edge states forced at one element for one binary atom by the
    /// universal formulas `all(L, all(l, t))` with a literal subject:
    /// every l-class must be ALL (t positive) or NONE (t negative).
    /// Returns None on a direct conflict.
    fn forced_states(&self, mask: u32, bin: usize) -> Option<Vec<Option<u8>>> {
        let mut forced: Vec<Option<u8>> = vec![None; self.classes.len()];
        for f in &self.universals {
            let Term::Lit(left) = f.left else { continue };
            let Term::Compound { quant: Quantifier::All, subj, bin: b, positive } = f.right
            else {
                continue;
            };
            if b != bin || !left.test(mask) {
                continue;
            }
            let want = if positive { ALL } else { NONE };
            for (c, (class_mask, _)) in self.classes.iter().enumerate() {
                if subj.test(*class_mask) {
                    match forced[c] {
                        Some(existing) if existing != want => return None,
                        _ => forced[c] = Some(want),
                    }
                }
            }
        }
        Some(forced)
    }

    /// Two masks that cannot live in the same structure: some forced
    /// edge state from one to the other conflicts.
    fn masks_compatible(&self, source: u32, target: u32) -> bool {
        for bin in 0..self.binaries.len() {
            let mut want: Option<u8> = None;
            for f in &self.universals {
                let Term::Lit(left) = f.left else { continue };
                let Term::Compound {
                    quant: Quantifier::All,
                    subj,
                    bin: b,
                    positive,
                } = f.right
                else {
                    continue;
                };
                if b != bin || !left.test(source) || !subj.test(target) {
                    continue;
                }
                let state = if positive { ALL } else { NONE };
                match want {
                    Some(existing) if existing != state => return false,
                    _ => want = Some(state),
                }
            }
        }
        true
    }

    fn search_masks(&mut self, elem: usize, min_idx: usize) -> Option<Structure> {
        if elem == self.size {
            // literal-only existentials must already have a witness
            for f in &self.existentials {
                if f.max_bin.is_none()
                    && !(0..self.size)
                        .any(|e| self.eval_term(f.left, e) && self.eval_term(f.right, e))
                {
                    return None;
                }
            }
            // universal formulas with an existential object need the
            // object class to be inhabited
            for f in &self.universals {
                let Term::Compound { quant: Quantifier::Some, subj, .. } = f.right else {
                    continue;
                };
                let applies = (0..self.size).any(|e| self.eval_is_lit(f.left, e));
                if applies && !self.masks.iter().any(|m| subj.test(*m)) {
                    return None;
                }
            }
            self.classes.clear();
            for &mask in &self.masks {
                match self.classes.last_mut() {
                    Some((m, count)) if *m == mask => *count += 1,
                    _ => self.classes.push((mask, 1)),
                }
            }
            let n_classes = self.classes.len();
            self.rows =
                vec![vec![vec![NONE; n_classes]; self.binaries.len()]; self.size];
            return self.search_rows(0);
        }
        for idx in min_idx..self.allowed_masks.len() {
            let mask = self.allowed_masks[idx];
            let fits = self.masks[..elem].iter().all(|&other| {
                self.masks_compatible(mask, other) && self.masks_compatible(other, mask)
            }) && self.masks_compatible(mask, mask);
            if !fits {
                continue;
            }
            self.masks[elem] = mask;
            if let Some(m) = self.search_masks(elem + 1, idx) {
                return Some(m);
            }
        }
        None
    }

    /// Literal-term evaluation used before rows exist.
    fn eval_is_lit(&self, t: Term, elem: usize) -> bool {
        match t {
            Term::Lit(l) => l.test(self.masks[elem]),
            Term::Compound { .. } => false,
        }
    }

    /// Edge state forced from a source mask to a target mask for one
    /// binary atom, by the universal formulas with literal subjects.
    /// None on conflict (the two masks cannot coexist), Some(None) when
    /// the edge pattern is unconstrained.
    fn forced_between(&self, source: u32, target: u32, bin: usize) -> Option<Option<u8>> {
        let mut want: Option<u8> = None;
        for f in &self.universals {
            let Term::Lit(left) = f.left else { continue };
            let Term::Compound { quant: Quantifier::All, subj, bin: b, positive } = f.right
            else {
                continue;
            };
            if b != bin || !left.test(source) || !subj.test(target) {
                continue;
            }
            let state = if positive { ALL } else { NONE };
            match want {
                Some(existing) if existing != state => return None,
                _ => want = Some(state),
            }
        }
        Some(want)
    }

    /// Can an edge (positive) or a non-edge (negative) from `source` to
    /// some element of `target` exist, given the forced states plus the
    /// extra constraints of a candidate witness?
    fn admits(
        &self,
        source: u32,
        target: u32,
        bin: usize,
        positive: bool,
        extra: &[(Lit, usize, u8)],
    ) -> bool {
        let Some(mut state) = self.forced_between(source, target, bin) else {
            return false;
        };
        for (subj, b, want) in extra {
            if *b == bin && subj.test(target) {
                match state {
                    Some(existing) if existing != *want => return false,
                    _ => state = Some(*want),
                }
            }
        }
        match state {
            None => true,
            Some(ALL) => positive,
            Some(NONE) => !positive,
            _ => unreachable!(),
        }
    }

    /// Drop masks whose guarded existential obligations cannot be met by
    /// any remaining mask, to a fixpoint. Sound for models of any size:
    /// an element with such a mask could never have a legal edge row.
    fn prune_masks(&mut self) {
        loop {
            let masks = self.allowed_masks.clone();
            let keep: Vec<u32> = masks
                .iter()
                .copied()
                .filter(|&m| {
                    self.universals.iter().all(|f| {
                        let Term::Lit(left) = f.left else { return true };
                        let Term::Compound {
                            quant: Quantifier::Some,
                            subj,
                            bin,
                            positive,
                        } = f.right
                        else {
                            return true;
                        };
                        if !left.test(m) {
                            return true;
                        }
                        masks
                            .iter()
                            .any(|&t| subj.test(t) && self.admits(m, t, bin, positive, &[]))
                    })
                })
                .collect();
            let stable = keep.len() == self.allowed_masks.len();
            self.allowed_masks = keep;
            if stable {
                return;
            }
        }
    }

    /// Necessary condition for an existential formula to have a witness
    /// in any model built from the allowed masks. The witness's own
    /// universal-object terms are taken as extra forced states when
    /// checking its guarded existential obligations.
    fn existential_viable(&self, f: &CompiledFormula) -> bool {
        self.allowed_masks.iter().any(|&m| {
            let mut extra: Vec<(Lit, usize, u8)> = Vec::new();
            for t in [f.left, f.right] {
                if let Term::Compound { quant: Quantifier::All, subj, bin, positive } = t {
                    extra.push((subj, bin, if positive { ALL } else { NONE }));
                }
            }
            let term_ok = |t: Term| match t {
                Term::Lit(l) => l.test(m),
                Term::Compound { quant: Quantifier::Some, subj, bin, positive } => self
                    .allowed_masks
                    .iter()
                    .any(|&t2| subj.test(t2) && self.admits(m, t2, bin, positive, &extra)),
                // universal terms can hold vacuously by leaving the
                // subject masks out of the model
                Term::Compound { quant: Quantifier::All, .. } => true,
            };
            if !term_ok(f.left) || !term_ok(f.right) {
                return false;
            }
            // the witness must still meet its guarded obligations under
            // the extra forced states
            self.universals.iter().all(|g| {
                let Term::Lit(left) = g.left else { return true };
                let Term::Compound { quant: Quantifier::Some, subj, bin, positive } =
                    g.right
                else {
                    return true;
                };
                if !left.test(m) {
                    return true;
                }
                self.allowed_masks
                    .iter()
                    .any(|&t| subj.test(t) && self.admits(m, t, bin, positive, &extra))
            })
        })
    }

    fn search_rows(&mut self, elem: usize) -> Option<Structure> {
        if elem == self.size {
            if self.witnessed.iter().all(|w| *w) {
                return Some(self.materialize());
            }
            return None;
        }
        self.search_bins(elem, 0)
    }

    /// Existentials newly witnessed by element `elem` among those whose
    /// last-mentioned binary is `bin` (or the coupled ones at element
    /// completion). Marks them and returns the marked indices.
    fn mark_witnessed(&mut self, elem: usize, bin: Option<usize>) -> Vec<usize> {
        let mut marked = Vec::new();
        for i in 0..self.existentials.len() {
            if self.witnessed[i] {
                continue;
            }
            let f = &self.existentials[i];
            let here = match bin {
                Some(b) => f.max_bin == Some(b),
                None => f.max_bin.is_some(),
            };
            if here && self.eval_term(f.left, elem) && self.eval_term(f.right, elem) {
                marked.push(i);
            }
        }
        for &i in &marked {
            self.witnessed[i] = true;
        }
        marked
    }

    fn unmark(&mut self, marked: &[usize]) {
        for &i in marked {
            self.witnessed[i] = false;
        }
    }

    fn search_bins(&mut self, elem: usize, bin: usize) -> Option<Structure> {
        if bin == self.binaries.len() {
            if self.coupled {
                let marked = self.mark_witnessed(elem, None);
                let found = self.search_rows(elem + 1);
                self.unmark(&marked);
                return found;
            }
            return self.search_rows(elem + 1);
        }
        let n_classes = self.classes.len();
        let Some(forced) = self.forced_states(self.masks[elem], bin) else {
            return None;
        };
        let free: Vec<usize> = (0..n_classes).filter(|c| forced[*c].is_none()).collect();
        let mut vector: Vec<u8> =
            (0..n_classes).map(|c| forced[c].unwrap_or(NONE)).collect();
        // edge patterns that pass the universal checks and witness the
        // same set of open existentials are interchangeable; explore one
        // representative per witness signature
        let mut seen_signatures: std::collections::BTreeSet<Vec<usize>> =
            std::collections::BTreeSet::new();
        loop {
            self.rows[elem][bin].copy_from_slice(&vector);
            if self.universals_hold_at(elem, Some(bin)) {
                if self.coupled {
                    if let Some(m) = self.search_bins(elem, bin + 1) {
                        return Some(m);
                    }
                } else {
                    let marked = self.mark_witnessed(elem, Some(bin));
                    if !seen_signatures.contains(&marked) {
                        seen_signatures.insert(marked.clone());
                        if let Some(m) = self.search_bins(elem, bin + 1) {
                            return Some(m);
                        }
                    }
                    self.unmark(&marked);
                }
            }
            // odometer over the unforced classes: NONE and ALL, plus
            // MIXED where the class has >= 2 members
            let mut pos = 0;
            loop {
                if pos == free.len() {
                    return None;
                }
                let c = free[pos];
                let limit = if self.classes[c].1 >= 2 { MIXED } else { ALL };
                if vector[c] < limit {
                    vector[c] += 1;
                    break;
                }
                vector[c] = NONE;
                pos += 1;
            }
        }
    }

    fn materialize(&self) -> Structure {
        let names: Vec<String> = (1..=self.size).map(|i| format!("e{i}")).collect();
        let mut out = Structure::new(names);
        for (u, atom) in self.unaries.iter().enumerate() {
            out.declare_unary(atom.clone());
            for e in 0..self.size {
                if self.masks[e] & (1 << u) != 0 {
                    out.insert_unary_idx(atom.clone(), e);
                }
            }
        }
        // first element of each class, for realizing MIXED patterns
        let mut class_start = Vec::with_capacity(self.classes.len());
        let mut acc = 0;
        for (_, count) in &self.classes {
            class_start.push(acc);
            acc += count;
        }
        for (b, atom) in self.binaries.iter().enumerate() {
            out.declare_binary(atom.clone());
            for e in 0..self.size {
                for (c, (_, count)) in self.classes.iter().enumerate() {
                    match self.rows[e][b][c] {
                        ALL => {
                            for j in class_start[c]..class_start[c] + count {
                                out.insert_pair_idx(atom.clone(), e, j);
                            }
                        }
                        MIXED => out.insert_pair_idx(atom.clone(), e, class_start[c]),
                        _ => {}
                    }
                }
            }
        }
        out
    }
}

/// Search for a model of the formula set with at most `max_size`
/// elements, smallest domain first. A returned structure is re-verified
/// against every input formula before being handed back.
pub fn find_model(theta: &[Formula], max_size: usize) -> ModelSearch {
    assert!(max_size >= 1, "bound must be positive");
    let formulas: Vec<Formula> = theta
        .iter()
        .map(Formula::canonicalize)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut sig = Signature::default();
    for phi in &formulas {
        sig.extend_with(&phi.atoms());
    }
    let unaries: Vec<UnaryAtom> = sig.unaries.iter().cloned().collect();
    let binaries: Vec<BinaryAtom> = sig.binaries.iter().cloned().collect();
    assert!(unaries.len() <= 32, "model search is limited to 32 unary atoms");

    let mut searcher = Searcher {
        unaries,
        binaries,
        universals: Vec::new(),
        existentials: Vec::new(),
        allowed_masks: Vec::new(),
        coupled: false,
        size: 0,
        masks: Vec::new(),
        classes: Vec::new(),
        rows: Vec::new(),
        witnessed: Vec::new(),
    };
    for phi in &formulas {
        let left = searcher.compile_term(&phi.left);
        let right = searcher.compile_term(&phi.right);
        let max_bin = left.max_bin().max(right.max_bin());
        if let (Some(a), Some(b)) = (left.max_bin(), right.max_bin()) {
            if a != b {
                searcher.coupled = true;
            }
        }
        let compiled = CompiledFormula { quant: phi.quantifier, left, right, max_bin };
        match compiled.quant {
            Quantifier::All => searcher.universals.push(compiled),
            Quantifier::Some => searcher.existentials.push(compiled),
        }
    }

    // a mask is usable only if it survives every literal-only universal
    let n_masks = 1u64 << searcher.unaries.len();
    for mask in 0..n_masks {
        let mask = mask as u32;
        let ok = searcher.universals.iter().all(|f| {
            f.max_bin.is_some()
                || match (f.left, f.right) {
                    (Term::Lit(l), Term::Lit(r)) => !l.test(mask) || r.test(mask),
                    _ => unreachable!("literal-only formula"),
                }
        });
        if ok {
            searcher.allowed_masks.push(mask);
        }
    }
    searcher.prune_masks();
    if searcher.allowed_masks.is_empty() {
        return ModelSearch::NoModelWithinBound(max_size);
    }
    for f in &searcher.existentials {
        if !searcher.existential_viable(f) {
            return ModelSearch::NoModelWithinBound(max_size);
        }
    }

    for size in 1..=max_size.min(super::MAX_DOMAIN) {
        searcher.size = size;
        searcher.masks = vec![0; size];
        searcher.witnessed = vec![false; searcher.existentials.len()];
        // literal-only existentials are handled at mask level
        for (i, f) in searcher.existentials.iter().enumerate() {
            searcher.witnessed[i] = f.max_bin.is_none();
        }
        if let Some(model) = searcher.search_masks(0, 0) {
            for phi in &formulas {
                assert!(
                    model.holds(phi),
                    "internal error: candidate model fails {phi}"
                );
            }
            return ModelSearch::Found(model);
        }
    }
    ModelSearch::NoModelWithinBound(max_size)
}

/// Bounded validity: search for a countermodel of the sequent. A
/// countermodel is re-verified (premises true, conclusion false) before
/// being returned.
pub fn oracle_valid(
    theta: &[Formula],
    conclusion: &Formula,
    max_size: usize,
) -> OracleOutcome {
    let mut set: Vec<Formula> = theta.to_vec();
    set.push(conclusion.bar());
    match find_model(&set, max_size) {
        ModelSearch::Found(m) => {
            assert!(m.models(theta.iter()), "internal error: bad countermodel");
            assert!(!m.holds(conclusion), "internal error: bad countermodel");
            OracleOutcome::CounterModel(m)
        }
        ModelSearch::NoModelWithinBound(b) => OracleOutcome::ValidWithinBound(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_formula;

    fn phi(t: &str) -> Formula {
        parse_formula(t).unwrap()
    }

    #[test]
    fn one_point_model_for_compatible_premises() {
        let theta = [
            phi("some(artist, beekeeper)"),
            phi("all(artist, carpenter)"),
            phi("all(beekeeper, ~dentist)"),
        ];
        match find_model(&theta, 4) {
            ModelSearch::Found(m) => assert_eq!(m.size(), 1),
            other => panic!("expected model, got {other:?}"),
        }
    }

    #[test]
    fn absurdity_has_no_model() {
        let theta = [phi("some(p, ~p)")];
        assert!(find_model(&theta, 5).model().is_none());
    }

    #[test]
    fn existential_forces_two_points() {
        let theta = [phi("some(p, ~q)"), phi("some(q, ~p)")];
        match find_model(&theta, 4) {
            ModelSearch::Found(m) => assert_eq!(m.size(), 2),
            other => panic!("expected model, got {other:?}"),
        }
    }

    #[test]
    fn relational_model() {
        let theta = [
            phi("all(p, some(q, r))"),
            phi("some(p, p)"),
            phi("all(q, all(q, ~r))"),
        ];
        match find_model(&theta, 4) {
            ModelSearch::Found(m) => assert!(m.models(theta.iter())),
            other => panic!("expected model, got {other:?}"),
        }
    }

    #[test]
    fn no_existential_commitment_countermodel() {
        let premises = [phi("all(p, q)")];
        match oracle_valid(&premises, &phi("some(p, q)"), 4) {
            OracleOutcome::CounterModel(m) => {
                assert_eq!(m.size(), 1);
                assert!(m.extension(&crate::syntax::ETerm::atom(
                    crate::syntax::UnaryAtom::new("p")
                ))
                .is_empty());
            }
            other => panic!("expected countermodel, got {other:?}"),
        }
    }

    #[test]
    fn valid_sequent_within_bound() {
        let premises = [
            phi("some(artist, beekeeper)"),
            phi("all(artist, carpenter)"),
            phi("all(beekeeper, ~dentist)"),
        ];
        assert!(oracle_valid(&premises, &phi("some(carpenter, ~dentist)"), 4)
            .is_valid_within_bound());
    }

    #[test]
    fn relational_sequent_within_bound() {
        let premises = [
            phi("some(artist, some(artist, hate))"),
            phi("all(beekeeper, all(beekeeper, ~hate))"),
        ];
        assert!(oracle_valid(&premises, &phi("some(artist, ~beekeeper)"), 4)
            .is_valid_within_bound());
    }
}
