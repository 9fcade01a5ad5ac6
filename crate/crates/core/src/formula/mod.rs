//! Propositional formulas and their truth tables.
//!
//! Points of formula-backed spaces are formulas; a set of them is consistent
//! when the conjunction has a satisfying assignment, which is decided by
//! and-ing truth-table masks.

mod parser;
mod truth_table;

use std::collections::BTreeSet;
use std::fmt;

pub use parser::{parse, ParseError};
pub use truth_table::{conjunction_satisfiable, truth_table, TruthTable, MAX_VARS};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(self), Box::new(rhs))
    }

    /// Variable names, sorted.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Direct evaluation under one assignment.
    pub fn eval<F: Fn(&str) -> bool + Copy>(&self, value: F) -> bool {
        match self {
            Formula::Var(v) => value(v),
            Formula::Not(f) => !f.eval(value),
            Formula::And(a, b) => a.eval(value) && b.eval(value),
            Formula::Or(a, b) => a.eval(value) || b.eval(value),
            Formula::Implies(a, b) => !a.eval(value) || b.eval(value),
            Formula::Iff(a, b) => a.eval(value) == b.eval(value),
        }
    }

    /// Binding strength; lower binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            Formula::Var(_) | Formula::Not(_) => 0,
            Formula::And(..) => 1,
            Formula::Or(..) => 2,
            Formula::Implies(..) => 3,
            Formula::Iff(..) => 4,
        }
    }

    /// Every binary node wrapped in parentheses.
    pub fn fully_parenthesized(&self) -> String {
        match self {
            Formula::Var(v) => v.clone(),
            Formula::Not(f) => format!("!{}", f.fully_parenthesized()),
            Formula::And(a, b) => format!("({} & {})", a.fully_parenthesized(), b.fully_parenthesized()),
            Formula::Or(a, b) => format!("({} | {})", a.fully_parenthesized(), b.fully_parenthesized()),
            Formula::Implies(a, b) => {
                format!("({} -> {})", a.fully_parenthesized(), b.fully_parenthesized())
            }
            Formula::Iff(a, b) => {
                format!("({} <-> {})", a.fully_parenthesized(), b.fully_parenthesized())
            }
        }
    }
}

/// Minimal parentheses, no spaces: `!a&b`, `a->b|c`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Formula, wrap: bool) -> fmt::Result {
            if wrap {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        let p = self.precedence();
        let (op, a, b, right_assoc) = match self {
            Formula::Var(v) => return f.write_str(v),
            Formula::Not(g) => {
                f.write_str("!")?;
                return child(f, g, g.precedence() > 0);
            }
            Formula::And(a, b) => ("&", a, b, false),
            Formula::Or(a, b) => ("|", a, b, false),
            Formula::Implies(a, b) => ("->", a, b, true),
            Formula::Iff(a, b) => ("<->", a, b, false),
        };
        let (wrap_a, wrap_b) = if right_assoc {
            (a.precedence() >= p, b.precedence() > p)
        } else {
            (a.precedence() > p, b.precedence() >= p)
        };
        child(f, a, wrap_a)?;
        f.write_str(op)?;
        child(f, b, wrap_b)
    }
}

/// One entry of a formula list file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledFormula {
    pub label: String,
    pub formula: Formula,
}

impl LabeledFormula {
    pub fn parse(label: &str, text: &str) -> Result<LabeledFormula> {
        Ok(LabeledFormula {
            label: label.to_string(),
            formula: parse(text)?,
        })
    }
}

/// Parses the formula list format: one formula per line, `#` starts a comment,
/// blank lines are skipped, and `label: formula` names the point. Without a
/// label the trimmed source text is used.
pub fn parse_formula_list(text: &str) -> Result<Vec<LabeledFormula>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (label, body) = match line.split_once(':') {
            Some((l, b)) => (l.trim(), b.trim()),
            None => (line, line),
        };
        if label.is_empty() {
            return Err(Error::Malformed(format!("line {}: empty label", n + 1)));
        }
        let formula = parse(body).map_err(|e| Error::Malformed(format!("line {}: {e}", n + 1)))?;
        out.push(LabeledFormula {
            label: label.to_string(),
            formula,
        });
    }
    Ok(out)
}
