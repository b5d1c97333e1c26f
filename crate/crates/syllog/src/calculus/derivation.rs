//! Derivation trees, proof checking, and the derivation file format.
//!
//! A derivation is direct when it contains no reductio node. Reductio
//! concludes `phi` from a sub-derivation of an absurdity in which
//! premises carrying `~phi` may be discharged; discharge labels tie each
//! discharged premise to the reductio node that cancels it.

use std::collections::BTreeMap;
use std::fmt;

use crate::surface::{parse_formula_with, parse_term, print_formula, Namespaces, ParseError};
use crate::syntax::Formula;

use super::{instantiate, RuleSet, Sort, Substitution, Value};

/// A proof tree over a rule set, possibly using reductio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    Premise {
        formula: Formula,
        /// Label of the reductio node that discharges this premise, if any.
        discharge: Option<u32>,
    },
    RuleApp {
        rule: String,
        subst: Substitution,
        children: Vec<Derivation>,
        conclusion: Formula,
    },
    Raa {
        label: u32,
        body: Box<Derivation>,
        conclusion: Formula,
    },
}

impl Derivation {
    pub fn premise(formula: Formula) -> Self {
        Derivation::Premise { formula, discharge: None }
    }

    pub fn conclusion(&self) -> &Formula {
        match self {
            Derivation::Premise { formula, .. } => formula,
            Derivation::RuleApp { conclusion, .. } => conclusion,
            Derivation::Raa { conclusion, .. } => conclusion,
        }
    }

    /// A derivation is direct when it contains no reductio node.
    pub fn is_direct(&self) -> bool {
        match self {
            Derivation::Premise { .. } => true,
            Derivation::RuleApp { children, .. } => children.iter().all(Self::is_direct),
            Derivation::Raa { .. } => false,
        }
    }

    /// Undischarged premises, canonicalized.
    pub fn open_premises(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.collect_premises(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_premises(&self, out: &mut Vec<Formula>) {
        match self {
            Derivation::Premise { formula, discharge: None } => {
                out.push(formula.canonicalize())
            }
            Derivation::Premise { .. } => {}
            Derivation::RuleApp { children, .. } => {
                for c in children {
                    c.collect_premises(out);
                }
            }
            Derivation::Raa { body, .. } => body.collect_premises(out),
        }
    }

    /// Wrap a refutation into a single final reductio concluding `theta`,
    /// discharging every premise equal to `~theta`.
    pub fn into_raa(self, theta: Formula) -> Derivation {
        let barred = theta.bar().canonicalize();
        let label = self.max_label() + 1;
        let body = self.discharge_matching(&barred, label);
        Derivation::Raa { label, body: Box::new(body), conclusion: theta }
    }

    fn max_label(&self) -> u32 {
        match self {
            Derivation::Premise { discharge, .. } => discharge.unwrap_or(0),
            Derivation::RuleApp { children, .. } => {
                children.iter().map(Self::max_label).max().unwrap_or(0)
            }
            Derivation::Raa { label, body, .. } => (*label).max(body.max_label()),
        }
    }

    fn discharge_matching(self, target: &Formula, label: u32) -> Derivation {
        match self {
            Derivation::Premise { formula, discharge: None }
                if formula.canonicalize() == *target =>
            {
                Derivation::Premise { formula, discharge: Some(label) }
            }
            Derivation::Premise { .. } => self,
            Derivation::RuleApp { rule, subst, children, conclusion } => {
                Derivation::RuleApp {
                    rule,
                    subst,
                    children: children
                        .into_iter()
                        .map(|c| c.discharge_matching(target, label))
                        .collect(),
                    conclusion,
                }
            }
            Derivation::Raa { label: l, body, conclusion } => Derivation::Raa {
                label: l,
                body: Box::new(body.discharge_matching(target, label)),
                conclusion,
            },
        }
    }
}

/// Why a derivation was rejected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("unknown rule {rule}")]
    UnknownRule { rule: String },
    #[error("bad instance of rule {rule}: {detail}")]
    BadInstance { rule: String, detail: String },
    #[error("premise {formula} is neither among the premises nor discharged")]
    UndischargedPremise { formula: String },
    #[error("bad discharge of label #{label}: {detail}")]
    BadDischarge { label: u32, detail: String },
    #[error("reductio body concludes {formula}, which is not an absurdity")]
    NotAbsurdity { formula: String },
}

/// Check a derivation against a rule set and a premise set, returning its
/// conclusion. Direct derivations witness plain derivability, indirect
/// ones derivability with reductio.
pub fn check_derivation(
    d: &Derivation,
    rules: &RuleSet,
    premises: &[Formula],
) -> Result<Formula, CheckError> {
    let theta: Vec<Formula> = premises.iter().map(Formula::canonicalize).collect();
    let mut active: BTreeMap<u32, Formula> = BTreeMap::new();
    check_node(d, rules, &theta, &mut active)?;
    Ok(d.conclusion().clone())
}

fn check_node(
    d: &Derivation,
    rules: &RuleSet,
    theta: &[Formula],
    active: &mut BTreeMap<u32, Formula>,
) -> Result<(), CheckError> {
    match d {
        Derivation::Premise { formula, discharge } => {
            let canon = formula.canonicalize();
            match discharge {
                None => {
                    if theta.contains(&canon) {
                        Ok(())
                    } else {
                        Err(CheckError::UndischargedPremise {
                            formula: print_formula(formula),
                        })
                    }
                }
                Some(label) => match active.get(label) {
                    Some(expected) if *expected == canon => Ok(()),
                    Some(expected) => Err(CheckError::BadDischarge {
                        label: *label,
                        detail: format!(
                            "discharged premise {} does not match {}",
                            print_formula(formula),
                            print_formula(expected)
                        ),
                    }),
                    None => Err(CheckError::BadDischarge {
                        label: *label,
                        detail: "no enclosing reductio with this label".to_string(),
                    }),
                },
            }
        }
        Derivation::RuleApp { rule, subst, children, conclusion } => {
            let schema = rules
                .rule(rule)
                .ok_or_else(|| CheckError::UnknownRule { rule: rule.clone() })?;
            let (ants, cons) =
                instantiate(schema, subst).map_err(|e| CheckError::BadInstance {
                    rule: rule.clone(),
                    detail: e.to_string(),
                })?;
            if conclusion.canonicalize() != cons {
                return Err(CheckError::BadInstance {
                    rule: rule.clone(),
                    detail: format!(
                        "stated conclusion {} differs from instantiated {}",
                        print_formula(conclusion),
                        print_formula(&cons)
                    ),
                });
            }
            let mut got: Vec<Formula> =
                children.iter().map(|c| c.conclusion().canonicalize()).collect();
            got.sort();
            got.dedup();
            let want: Vec<Formula> = ants.iter().cloned().collect();
            if got != want {
                return Err(CheckError::BadInstance {
                    rule: rule.clone(),
                    detail: format!(
                        "children conclude {:?}, antecedents are {:?}",
                        got.iter().map(print_formula).collect::<Vec<_>>(),
                        want.iter().map(print_formula).collect::<Vec<_>>()
                    ),
                });
            }
            for c in children {
                check_node(c, rules, theta, active)?;
            }
            Ok(())
        }
        Derivation::Raa { label, body, conclusion } => {
            if active.contains_key(label) {
                return Err(CheckError::BadDischarge {
                    label: *label,
                    detail: "label already in scope".to_string(),
                });
            }
            if !body.conclusion().is_absurdity() {
                return Err(CheckError::NotAbsurdity {
                    formula: print_formula(body.conclusion()),
                });
            }
            active.insert(*label, conclusion.bar().canonicalize());
            let result = check_node(body, rules, theta, active);
            active.remove(label);
            result
        }
    }
}

// ---------------------------------------------------------------------------
// Derivation file format: one node per line, two-space indentation,
// children underneath their node.

fn print_node(d: &Derivation, depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    match d {
        Derivation::Premise { formula, discharge } => {
            out.push_str("premise ");
            out.push_str(&print_formula(formula));
            if let Some(label) = discharge {
                out.push_str(&format!(" #{label}"));
            }
            out.push('\n');
        }
        Derivation::RuleApp { rule, subst, children, conclusion } => {
            out.push_str(&format!("rule {rule} {subst} -> {}\n", print_formula(conclusion)));
            for c in children {
                print_node(c, depth + 1, out);
            }
        }
        Derivation::Raa { label, body, conclusion } => {
            out.push_str(&format!("raa #{label} -> {}\n", print_formula(conclusion)));
            print_node(body, depth + 1, out);
        }
    }
}

pub fn print_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    print_node(d, 0, &mut out);
    out
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_derivation(self))
    }
}

fn line_error(line: usize, expected: &str, found: &str) -> ParseError {
    ParseError { line, col: 1, expected: expected.to_string(), found: found.to_string() }
}

/// Split `a=b, c=d` at top-level commas (values may contain commas
/// inside parentheses).
fn split_bindings(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() {
        out.push(last);
    }
    out
}

struct Node {
    depth: usize,
    line: usize,
    kind: NodeKind,
    children: Vec<Node>,
}

enum NodeKind {
    Premise(Formula, Option<u32>),
    Rule(String, Substitution, Formula),
    Raa(u32, Formula),
}

fn finish(node: Node) -> Result<Derivation, ParseError> {
    match node.kind {
        NodeKind::Premise(formula, discharge) => {
            if !node.children.is_empty() {
                return Err(line_error(node.line, "premise without children", "children"));
            }
            Ok(Derivation::Premise { formula, discharge })
        }
        NodeKind::Rule(rule, subst, conclusion) => Ok(Derivation::RuleApp {
            rule,
            subst,
            children: node
                .children
                .into_iter()
                .map(finish)
                .collect::<Result<Vec<_>, _>>()?,
            conclusion,
        }),
        NodeKind::Raa(label, conclusion) => {
            let line = node.line;
            let mut children = node.children;
            if children.len() != 1 {
                return Err(line_error(line, "exactly one child under raa", "other"));
            }
            Ok(Derivation::Raa {
                label,
                body: Box::new(finish(children.remove(0))?),
                conclusion,
            })
        }
    }
}

/// Parse a derivation file. The rule set supplies the metavariable sorts
/// needed to read substitution values.
pub fn parse_derivation(text: &str, rules: &RuleSet) -> Result<Derivation, ParseError> {
    let mut names = Namespaces::new();
    let mut stack: Vec<Node> = Vec::new();
    let mut roots: Vec<Node> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let uncommented = match raw.find('#') {
            // `#` may introduce a discharge label; comments need a space before
            Some(i) if i > 0 && raw.as_bytes()[i - 1] != b' ' => raw,
            Some(i)
                if raw[i + 1..]
                    .chars()
                    .next()
                    .map(|c| c.is_ascii_digit())
                    .unwrap_or(false) =>
            {
                raw
            }
            Some(i) => &raw[..i],
            None => raw,
        };
        if uncommented.trim().is_empty() {
            continue;
        }
        let indent = uncommented.len() - uncommented.trim_start_matches(' ').len();
        if indent % 2 != 0 {
            return Err(line_error(line_no, "even indentation", uncommented.trim()));
        }
        let depth = indent / 2;
        let body = uncommented.trim();
        let kind = parse_node_line(body, line_no, rules, &mut names)?;
        let node = Node { depth, line: line_no, kind, children: Vec::new() };
        while let Some(top) = stack.last() {
            if top.depth >= depth {
                let done = stack.pop().unwrap();
                match stack.last_mut() {
                    Some(parent) => parent.children.push(done),
                    None => roots.push(done),
                }
            } else {
                break;
            }
        }
        if let Some(top) = stack.last() {
            if depth != top.depth + 1 {
                return Err(line_error(
                    line_no,
                    "indentation one level below the parent",
                    body,
                ));
            }
        } else if depth != 0 {
            return Err(line_error(line_no, "a root node at depth 0", body));
        }
        stack.push(node);
    }
    while let Some(done) = stack.pop() {
        match stack.last_mut() {
            Some(parent) => parent.children.push(done),
            None => roots.push(done),
        }
    }
    if roots.len() != 1 {
        return Err(line_error(1, "exactly one root node", &format!("{}", roots.len())));
    }
    finish(roots.remove(0))
}

fn parse_node_line(
    body: &str,
    line: usize,
    rules: &RuleSet,
    names: &mut Namespaces,
) -> Result<NodeKind, ParseError> {
    if let Some(rest) = body.strip_prefix("premise ") {
        let (formula_text, label) = match rest.rfind(" #") {
            Some(i) => {
                let label: u32 = rest[i + 2..]
                    .trim()
                    .parse()
                    .map_err(|_| line_error(line, "numeric label", &rest[i + 2..]))?;
                (&rest[..i], Some(label))
            }
            None => (rest, None),
        };
        let formula = parse_formula_with(formula_text, line, names)?;
        Ok(NodeKind::Premise(formula, label))
    } else if let Some(rest) = body.strip_prefix("rule ") {
        let (id, rest) = rest
            .split_once(' ')
            .ok_or_else(|| line_error(line, "rule id and substitution", rest))?;
        let schema = rules
            .rule(id)
            .ok_or_else(|| line_error(line, "a rule of the system", id))?;
        let rest = rest.trim();
        let open = rest
            .find('{')
            .ok_or_else(|| line_error(line, "substitution in braces", rest))?;
        let close = rest
            .find('}')
            .ok_or_else(|| line_error(line, "closing brace", rest))?;
        let mut subst = Substitution::new();
        for binding in split_bindings(&rest[open + 1..close]) {
            let (var, value_text) = binding
                .split_once('=')
                .ok_or_else(|| line_error(line, "var=value binding", binding))?;
            let var = var.trim();
            let mv = schema
                .var(var)
                .ok_or_else(|| line_error(line, "a variable of the rule", var))?;
            let value_text = value_text.trim();
            let value = parse_value(mv.sort, value_text, line, names)?;
            subst.bind(mv.name, value);
        }
        let arrow = rest[close..]
            .find("->")
            .ok_or_else(|| line_error(line, "\"->\" and conclusion", rest))?;
        let conclusion = parse_formula_with(&rest[close + arrow + 2..], line, names)?;
        Ok(NodeKind::Rule(id.to_string(), subst, conclusion))
    } else if let Some(rest) = body.strip_prefix("raa ") {
        let rest = rest.trim();
        let rest = rest
            .strip_prefix('#')
            .ok_or_else(|| line_error(line, "#<label>", rest))?;
        let (label_text, rest) = rest
            .split_once("->")
            .ok_or_else(|| line_error(line, "\"->\" and conclusion", rest))?;
        let label: u32 = label_text
            .trim()
            .parse()
            .map_err(|_| line_error(line, "numeric label", label_text))?;
        let conclusion = parse_formula_with(rest, line, names)?;
        Ok(NodeKind::Raa(label, conclusion))
    } else {
        Err(line_error(line, "premise, rule or raa", body))
    }
}

fn parse_value(
    sort: Sort,
    text: &str,
    line: usize,
    names: &mut Namespaces,
) -> Result<Value, ParseError> {
    let relocate = |mut e: ParseError| {
        e.line = line;
        e
    };
    match sort {
        Sort::UnaryAtom | Sort::UnaryLiteral => {
            let term = parse_term(text).map_err(relocate)?;
            let lit = term
                .as_literal()
                .ok_or_else(|| line_error(line, "unary literal", text))?;
            Ok(Value::Unary(lit.clone()))
        }
        Sort::BinaryAtom | Sort::BinaryLiteral => {
            let (positive, name) = match text.strip_prefix('~') {
                Some(rest) => (false, rest.trim()),
                None => (true, text),
            };
            if name.is_empty() || !name.chars().all(|c| {
                c.is_ascii_alphanumeric() || c == '_' || c == '-'
            }) {
                return Err(line_error(line, "binary literal", text));
            }
            Ok(Value::Binary(crate::syntax::BinaryLiteral {
                atom: crate::syntax::BinaryAtom::new(name),
                positive,
            }))
        }
        Sort::CTerm | Sort::PositiveCTerm => {
            Ok(Value::Term(parse_term(text).map_err(relocate)?))
        }
        Sort::Formula(_) => {
            Ok(Value::Formula(parse_formula_with(text, line, names).map_err(relocate)?))
        }
    }
}
