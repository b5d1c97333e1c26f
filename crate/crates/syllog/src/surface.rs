//! Concrete text syntax: parsing, printing, English glosses, and the
//! sequent file format.
//!
//! The grammar mirrors the prefix notation of the fragments one-to-one:
//!
//! ```text
//! formula := ("all" | "some") "(" term "," term ")"
//! term    := lit | ("all" | "some") "(" lit "," blit ")"
//! lit     := ["~"] ident
//! blit    := ["~"] ident
//! ident   := [a-zA-Z_][a-zA-Z0-9_-]*
//! ```
//!
//! Whitespace is insignificant and `#` starts a line comment. An atom in
//! verb position is binary, in subject or literal position unary; using
//! one name in both positions anywhere in the same input is an error,
//! which keeps the two namespaces disjoint without declarations.
//!
//! The printer is bit-exact: lowercase keywords, a single space after
//! each comma, `~` attached to its atom.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{
    BinaryAtom, BinaryLiteral, ETerm, Formula, Fragment, Quantifier, UnaryAtom,
    UnaryLiteral,
};

/// Position-carrying parse error.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {line}:{col}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

/// Errors from reading a sequent file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequentError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("formula {formula} is outside the declared fragment {fragment}")]
    FragmentMismatch { formula: String, fragment: Fragment },
}

/// Keeps the unary/binary namespaces disjoint across several parses.
#[derive(Debug, Default, Clone)]
pub struct Namespaces {
    unaries: BTreeSet<String>,
    binaries: BTreeSet<String>,
}

impl Namespaces {
    pub fn new() -> Self {
        Self::default()
    }

    fn claim_unary(&mut self, name: &str) -> Result<(), String> {
        if self.binaries.contains(name) {
            return Err(format!("unary use of binary atom {name}"));
        }
        self.unaries.insert(name.to_string());
        Ok(())
    }

    fn claim_binary(&mut self, name: &str) -> Result<(), String> {
        if self.unaries.contains(name) {
            return Err(format!("binary use of unary atom {name}"));
        }
        self.binaries.insert(name.to_string());
        Ok(())
    }
}

struct Parser<'a, 'n> {
    src: &'a str,
    pos: usize,
    line: usize,
    line_start: usize,
    names: &'n mut Namespaces,
}

impl<'a, 'n> Parser<'a, 'n> {
    fn new(src: &'a str, base_line: usize, names: &'n mut Namespaces) -> Self {
        Parser { src, pos: 0, line: base_line, line_start: 0, names }
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(c) => {
                let rest = &self.src[self.pos..];
                let end = rest
                    .char_indices()
                    .take_while(|(_, c)| !c.is_whitespace() && !"(),".contains(*c))
                    .map(|(i, c)| i + c.len_utf8())
                    .last()
                    .unwrap_or(c.len_utf8());
                format!("{:?}", &rest[..end])
            }
        };
        ParseError {
            line: self.line,
            col: self.pos - self.line_start + 1,
            expected: expected.into(),
            found,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
            if c == '\n' {
                self.line += 1;
                self.line_start = self.pos;
            }
        }
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => self.bump(),
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("\"{c}\"")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.bump(),
            _ => return Err(self.error("identifier")),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                self.bump();
            } else {
                break;
            }
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn quantifier_or_ident(&mut self) -> Result<(Option<Quantifier>, String), ParseError> {
        let word = self.ident()?;
        let q = match word.as_str() {
            "all" => Some(Quantifier::All),
            "some" => Some(Quantifier::Some),
            _ => None,
        };
        Ok((q, word))
    }

    fn unary_literal(&mut self) -> Result<UnaryLiteral, ParseError> {
        self.skip_ws();
        let positive = if self.peek() == Some('~') {
            self.bump();
            false
        } else {
            true
        };
        let name = self.ident()?;
        if name == "all" || name == "some" {
            return Err(self.error("atom name (keywords are reserved)"));
        }
        self.names.claim_unary(&name).map_err(|e| self.error(e))?;
        Ok(UnaryLiteral { atom: UnaryAtom::new(name), positive })
    }

    fn binary_literal(&mut self) -> Result<BinaryLiteral, ParseError> {
        self.skip_ws();
        let positive = if self.peek() == Some('~') {
            self.bump();
            false
        } else {
            true
        };
        let name = self.ident()?;
        if name == "all" || name == "some" {
            return Err(self.error("atom name (keywords are reserved)"));
        }
        self.names.claim_binary(&name).map_err(|e| self.error(e))?;
        Ok(BinaryLiteral { atom: BinaryAtom::new(name), positive })
    }

    fn term(&mut self) -> Result<ETerm, ParseError> {
        self.skip_ws();
        if self.peek() == Some('~') {
            return Ok(ETerm::Literal(self.unary_literal()?));
        }
        let save = (self.pos, self.line, self.line_start);
        let (q, word) = self.quantifier_or_ident()?;
        match q {
            Some(q) => {
                self.skip_ws();
                if self.peek() == Some('(') {
                    self.bump();
                    let subject = self.unary_literal()?;
                    self.expect(',')?;
                    let verb = self.binary_literal()?;
                    self.expect(')')?;
                    Ok(match q {
                        Quantifier::All => ETerm::Forall(subject, verb),
                        Quantifier::Some => ETerm::Exists(subject, verb),
                    })
                } else {
                    (self.pos, self.line, self.line_start) = save;
                    Err(self.error("\"(\" after quantifier"))
                }
            }
            None => {
                self.names.claim_unary(&word).map_err(|e| self.error(e))?;
                Ok(ETerm::Literal(UnaryLiteral {
                    atom: UnaryAtom::new(word),
                    positive: true,
                }))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        let (q, _) = self.quantifier_or_ident().map_err(|mut e| {
            e.expected = "\"all\" or \"some\"".into();
            e
        })?;
        let q = match q {
            Some(q) => q,
            None => return Err(self.error("\"all\" or \"some\"")),
        };
        self.expect('(')?;
        let left = self.term()?;
        self.expect(',')?;
        let right = self.term()?;
        self.expect(')')?;
        Ok(Formula { quantifier: q, left, right })
    }

    fn end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek().is_none() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }
}

/// Parse a single formula, enforcing namespace disjointness within it.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut names = Namespaces::new();
    parse_formula_with(text, 1, &mut names)
}

/// Parse a formula sharing a namespace tracker with earlier parses.
pub fn parse_formula_with(
    text: &str,
    base_line: usize,
    names: &mut Namespaces,
) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, base_line, names);
    let phi = p.formula()?;
    p.end()?;
    Ok(phi)
}

/// Parse a bare term (used by the derivation file reader).
pub fn parse_term(text: &str) -> Result<ETerm, ParseError> {
    let mut names = Namespaces::new();
    let mut p = Parser::new(text, 1, &mut names);
    let e = p.term()?;
    p.end()?;
    Ok(e)
}

pub fn print_term(e: &ETerm) -> String {
    fn ulit(l: &UnaryLiteral) -> String {
        if l.positive { l.atom.name().to_string() } else { format!("~{}", l.atom.name()) }
    }
    fn blit(t: &BinaryLiteral) -> String {
        if t.positive { t.atom.name().to_string() } else { format!("~{}", t.atom.name()) }
    }
    match e {
        ETerm::Literal(l) => ulit(l),
        ETerm::Exists(l, t) => format!("some({}, {})", ulit(l), blit(t)),
        ETerm::Forall(l, t) => format!("all({}, {})", ulit(l), blit(t)),
    }
}

pub fn print_formula(phi: &Formula) -> String {
    let kw = match phi.quantifier {
        Quantifier::All => "all",
        Quantifier::Some => "some",
    };
    format!("{kw}({}, {})", print_term(&phi.left), print_term(&phi.right))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for ETerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for UnaryLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        f.write_str(self.atom.name())
    }
}

impl fmt::Display for BinaryLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        f.write_str(self.atom.name())
    }
}

// ---------------------------------------------------------------------------
// English glosses

fn noun(l: &UnaryLiteral) -> String {
    if l.positive {
        l.atom.name().to_string()
    } else {
        format!("non-{}", l.atom.name())
    }
}

fn article(noun: &str) -> &'static str {
    match noun.chars().next() {
        Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
        _ => "a",
    }
}

/// Verb phrase for a compound term used as a relative clause.
fn verb_phrase(e: &ETerm) -> Option<String> {
    let (q, obj, verb) = match e {
        ETerm::Exists(l, t) => (Quantifier::Some, l, t),
        ETerm::Forall(l, t) => (Quantifier::All, l, t),
        ETerm::Literal(_) => return None,
    };
    let v = verb.atom.name();
    let o = noun(obj);
    Some(match (q, verb.positive) {
        (Quantifier::Some, true) => format!("{v}s {} {o}", article(&o)),
        (Quantifier::Some, false) => format!("does not {v} every {o}"),
        (Quantifier::All, true) => format!("{v}s every {o}"),
        (Quantifier::All, false) => format!("{v}s no {o}"),
    })
}

fn gloss_literal_subject(phi: &Formula) -> Option<String> {
    let subj = phi.left.as_literal()?;
    let s = noun(subj);
    match &phi.right {
        ETerm::Literal(m) => {
            let o = m.atom.name();
            Some(match (phi.quantifier, m.positive) {
                (Quantifier::All, true) => format!("Every {s} is a {o}"),
                (Quantifier::All, false) => format!("No {s} is a {o}"),
                (Quantifier::Some, true) => format!("Some {s} is a {o}"),
                (Quantifier::Some, false) => format!("Some {s} is not a {o}"),
            })
        }
        e @ (ETerm::Exists(_, t) | ETerm::Forall(_, t)) => {
            let some_obj = matches!(e, ETerm::Exists(_, _));
            let v = t.atom.name();
            let o = noun(match e {
                ETerm::Exists(l, _) | ETerm::Forall(l, _) => l,
                ETerm::Literal(_) => unreachable!(),
            });
            Some(match (phi.quantifier, some_obj, t.positive) {
                (Quantifier::All, true, true) => format!("Every {s} {v}s some {o}"),
                (Quantifier::All, true, false) => format!("No {s} {v}s every {o}"),
                (Quantifier::Some, true, true) => format!("Some {s} {v}s some {o}"),
                (Quantifier::Some, true, false) => {
                    format!("Some {s} does not {v} every {o}")
                }
                (Quantifier::All, false, true) => format!("Every {s} {v}s every {o}"),
                (Quantifier::All, false, false) => format!("No {s} {v}s any {o}"),
                (Quantifier::Some, false, true) => format!("Some {s} {v}s every {o}"),
                (Quantifier::Some, false, false) => format!("Some {s} {v}s no {o}"),
            })
        }
    }
}

/// English rendering of a formula. Forms with no direct gloss are glossed
/// through an identified representative; formulas whose every
/// representative has a compound subject use a relative clause.
pub fn gloss(phi: &Formula) -> String {
    for rep in phi.representatives() {
        if let Some(s) = gloss_literal_subject(&rep) {
            return s;
        }
    }
    // Both sides compound in both representatives.
    let head = match phi.quantifier {
        Quantifier::All => "Everything which",
        Quantifier::Some => "Something which",
    };
    let subject_vp = verb_phrase(&phi.left).expect("compound subject");
    let predicate_vp = verb_phrase(&phi.right).expect("compound predicate");
    format!("{head} {subject_vp} {predicate_vp}")
}

// ---------------------------------------------------------------------------
// Sequent files

/// Premises, an optional conclusion, and an optional declared fragment.
///
/// The file format is one formula per line, the conclusion line prefixed
/// with `|- `, and an optional `fragment: <tag>` header. `#` starts a
/// comment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentFile {
    pub premises: Vec<Formula>,
    pub conclusion: Option<Formula>,
    pub declared_fragment: Option<Fragment>,
}

pub fn parse_sequent(text: &str) -> Result<SequentFile, SequentError> {
    let mut names = Namespaces::new();
    let mut premises: Vec<Formula> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut conclusion = None;
    let mut declared_fragment = None;
    let mut saw_content = false;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("fragment:") {
            if saw_content || declared_fragment.is_some() {
                return Err(ParseError {
                    line: line_no,
                    col: 1,
                    expected: "fragment header before any formula".into(),
                    found: trimmed.to_string(),
                }
                .into());
            }
            let tag = rest.trim();
            declared_fragment = Some(Fragment::from_tag(tag).ok_or(ParseError {
                line: line_no,
                col: 1,
                expected: "fragment tag S, Sd, R, Rd, Rs or Rsd".into(),
                found: tag.to_string(),
            })?);
            continue;
        }
        saw_content = true;
        if let Some(rest) = trimmed.strip_prefix("|-") {
            if conclusion.is_some() {
                return Err(ParseError {
                    line: line_no,
                    col: 1,
                    expected: "at most one conclusion line".into(),
                    found: trimmed.to_string(),
                }
                .into());
            }
            conclusion = Some(parse_formula_with(rest, line_no, &mut names)?);
        } else {
            let phi = parse_formula_with(line, line_no, &mut names)?;
            if seen.insert(phi.canonicalize()) {
                premises.push(phi);
            }
        }
    }
    if let Some(frag) = declared_fragment {
        for phi in premises.iter().chain(conclusion.iter()) {
            if !phi.classify().contains(frag) {
                return Err(SequentError::FragmentMismatch {
                    formula: print_formula(phi),
                    fragment: frag,
                });
            }
        }
    }
    Ok(SequentFile { premises, conclusion, declared_fragment })
}

pub fn print_sequent(file: &SequentFile) -> String {
    let mut out = String::new();
    if let Some(frag) = file.declared_fragment {
        out.push_str(&format!("fragment: {}\n", frag.tag()));
    }
    for phi in &file.premises {
        out.push_str(&print_formula(phi));
        out.push('\n');
    }
    if let Some(theta) = &file.conclusion {
        out.push_str("|- ");
        out.push_str(&print_formula(theta));
        out.push('\n');
    }
    out
}
