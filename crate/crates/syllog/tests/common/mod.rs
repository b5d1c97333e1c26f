//! Seeded random generators shared by the integration suites.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use syllog::syntax::{
    BinaryAtom, BinaryLiteral, ETerm, Formula, Quantifier, UnaryAtom, UnaryLiteral,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unary(name: &str) -> UnaryAtom {
    UnaryAtom::new(name)
}

pub fn binary(name: &str) -> BinaryAtom {
    BinaryAtom::new(name)
}

pub fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

pub fn random_unary_literal(rng: &mut ChaCha8Rng, atoms: &[&str]) -> UnaryLiteral {
    UnaryLiteral { atom: unary(pick(rng, atoms)), positive: rng.gen_bool(0.5) }
}

pub fn random_binary_literal(rng: &mut ChaCha8Rng, atoms: &[&str]) -> BinaryLiteral {
    BinaryLiteral { atom: binary(pick(rng, atoms)), positive: rng.gen_bool(0.5) }
}

fn random_quantifier(rng: &mut ChaCha8Rng) -> Quantifier {
    if rng.gen_bool(0.5) { Quantifier::All } else { Quantifier::Some }
}

/// A formula with both sides unary literals.
pub fn random_sd_formula(rng: &mut ChaCha8Rng, atoms: &[&str]) -> Formula {
    Formula {
        quantifier: random_quantifier(rng),
        left: ETerm::Literal(random_unary_literal(rng, atoms)),
        right: ETerm::Literal(random_unary_literal(rng, atoms)),
    }
}

/// A formula in the plain syllogistic shapes (atom on the appropriate
/// side, no noun negation beyond the object).
pub fn random_s_formula(rng: &mut ChaCha8Rng, atoms: &[&str]) -> Formula {
    let p = ETerm::atom(unary(pick(rng, atoms)));
    let l = ETerm::Literal(random_unary_literal(rng, atoms));
    match rng.gen_range(0..4) {
        0 => Formula::exists(p, l),
        1 => Formula::exists(l, p),
        2 => Formula::forall(p, l),
        _ => {
            let neg = ETerm::Literal(UnaryLiteral::negative(unary(pick(rng, atoms))));
            Formula::forall(l, neg)
        }
    }
}

/// A c-term over the given atoms (subject always a positive atom).
pub fn random_cterm(
    rng: &mut ChaCha8Rng,
    unaries: &[&str],
    binaries: &[&str],
) -> ETerm {
    match rng.gen_range(0..3) {
        0 => ETerm::Literal(random_unary_literal(rng, unaries)),
        1 => ETerm::Exists(
            UnaryLiteral::positive(unary(pick(rng, unaries))),
            random_binary_literal(rng, binaries),
        ),
        _ => ETerm::Forall(
            UnaryLiteral::positive(unary(pick(rng, unaries))),
            random_binary_literal(rng, binaries),
        ),
    }
}

/// A relational-syllogistic formula: an atom on one side, a c-term on
/// the other, with the universal-negative shape included.
pub fn random_r_formula(
    rng: &mut ChaCha8Rng,
    unaries: &[&str],
    binaries: &[&str],
) -> Formula {
    let p = ETerm::atom(unary(pick(rng, unaries)));
    let c = random_cterm(rng, unaries, binaries);
    match rng.gen_range(0..4) {
        0 => Formula::exists(p, c),
        1 => Formula::exists(c, p),
        2 => Formula::forall(p, c),
        _ => {
            let neg = ETerm::Literal(UnaryLiteral::negative(unary(pick(rng, unaries))));
            Formula::forall(c, neg)
        }
    }
}

/// An arbitrary e-term (subject literal of either sign).
pub fn random_eterm(rng: &mut ChaCha8Rng, unaries: &[&str], binaries: &[&str]) -> ETerm {
    match rng.gen_range(0..3) {
        0 => ETerm::Literal(random_unary_literal(rng, unaries)),
        1 => ETerm::Exists(
            random_unary_literal(rng, unaries),
            random_binary_literal(rng, binaries),
        ),
        _ => ETerm::Forall(
            random_unary_literal(rng, unaries),
            random_binary_literal(rng, binaries),
        ),
    }
}

/// An arbitrary formula of the largest fragment.
pub fn random_formula(rng: &mut ChaCha8Rng, unaries: &[&str], binaries: &[&str]) -> Formula {
    Formula {
        quantifier: random_quantifier(rng),
        left: random_eterm(rng, unaries, binaries),
        right: random_eterm(rng, unaries, binaries),
    }
}
