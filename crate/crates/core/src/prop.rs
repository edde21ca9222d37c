//! Propositional instantiation: valuations, variable flips, formulas.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::repair::{Endomorphism, Spec};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropFormula {
    Var(String),
    Const(bool),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn var(name: &str) -> Self {
        PropFormula::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        PropFormula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Self) -> Self {
        PropFormula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Self) -> Self {
        PropFormula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Self) -> Self {
        PropFormula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            PropFormula::Var(v) => {
                out.insert(v.clone());
            }
            PropFormula::Const(_) => {}
            PropFormula::Not(f) => f.collect_vars(out),
            PropFormula::And(a, b) | PropFormula::Or(a, b) | PropFormula::Implies(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropFormula::Var(v) => write!(f, "{v}"),
            PropFormula::Const(b) => write!(f, "{b}"),
            PropFormula::Not(x) => write!(f, "!{x}"),
            PropFormula::And(a, b) => write!(f, "({a} & {b})"),
            PropFormula::Or(a, b) => write!(f, "({a} | {b})"),
            PropFormula::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// Total map from variable names to truth values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Valuation(BTreeMap<String, bool>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<bool> {
        self.0.get(var).copied()
    }

    pub fn set(&mut self, var: &str, value: bool) {
        self.0.insert(var.to_string(), value);
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<S: Into<String>> FromIterator<(S, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (S, bool)>>(iter: I) -> Self {
        Valuation(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

pub fn eval_prop(formula: &PropFormula, valuation: &Valuation) -> Result<bool, PropError> {
    Ok(match formula {
        PropFormula::Var(v) => valuation
            .get(v)
            .ok_or_else(|| PropError::UnboundVariable(v.clone()))?,
        PropFormula::Const(b) => *b,
        PropFormula::Not(f) => !eval_prop(f, valuation)?,
        PropFormula::And(a, b) => eval_prop(a, valuation)? && eval_prop(b, valuation)?,
        PropFormula::Or(a, b) => eval_prop(a, valuation)? || eval_prop(b, valuation)?,
        PropFormula::Implies(a, b) => !eval_prop(a, valuation)? || eval_prop(b, valuation)?,
    })
}

impl Spec<Valuation> for PropFormula {
    type Error = PropError;

    fn holds(&self, valuation: &Valuation) -> Result<bool, PropError> {
        eval_prop(self, valuation)
    }
}

/// τ_{x ↦ b}: sets one variable, leaves the rest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarFlip {
    pub variable: String,
    pub value: bool,
}

impl VarFlip {
    pub fn new(variable: &str, value: bool) -> Self {
        VarFlip {
            variable: variable.to_string(),
            value,
        }
    }
}

impl fmt::Display for VarFlip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ↦ {}", self.variable, self.value)
    }
}

impl Endomorphism for VarFlip {
    type Structure = Valuation;
    type Key = (String, bool);
    type Cell = String;

    fn key(&self) -> (String, bool) {
        (self.variable.clone(), self.value)
    }

    fn footprint(&self) -> BTreeSet<String> {
        BTreeSet::from([self.variable.clone()])
    }

    fn apply_in_place(&self, valuation: &mut Valuation) {
        valuation.set(&self.variable, self.value);
    }
}

/// Both flips for every variable: 2·|X| endomorphisms.
pub fn prop_endo_pool<'a>(variables: impl IntoIterator<Item = &'a str>) -> Vec<VarFlip> {
    variables
        .into_iter()
        .flat_map(|v| [VarFlip::new(v, false), VarFlip::new(v, true)])
        .collect()
}

/// Parses `!`, `&`, `|`, right-associative `->`, parentheses, identifiers and
/// the literals `true`/`false`.
pub fn parse_prop(text: &str) -> Result<PropFormula, PropError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let formula = parser.implication()?;
    match parser.peek() {
        None => Ok(formula),
        Some((col, tok)) => Err(PropError::Parse {
            column: col,
            message: format!("unexpected `{tok}`"),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Not => write!(f, "!"),
            Tok::And => write!(f, "&"),
            Tok::Or => write!(f, "|"),
            Tok::Arrow => write!(f, "->"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, PropError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '!' => {
                out.push((col, Tok::Not));
                i += 1;
            }
            '&' => {
                out.push((col, Tok::And));
                i += 1;
            }
            '|' => {
                out.push((col, Tok::Or));
                i += 1;
            }
            '(' => {
                out.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((col, Tok::RParen));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((col, Tok::Arrow));
                i += 2;
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
            }
            other => {
                return Err(PropError::Parse {
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, &Tok)> {
        self.tokens.get(self.pos).map(|(c, t)| (*c, t))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|(_, t)| t) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map_or(1, |(c, _)| c + 1)
    }

    fn implication(&mut self) -> Result<PropFormula, PropError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            Ok(lhs.implies(self.implication()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<PropFormula, PropError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<PropFormula, PropError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PropFormula, PropError> {
        let Some((col, tok)) = self.peek() else {
            return Err(PropError::Parse {
                column: self.end_column(),
                message: "unexpected end of input".into(),
            });
        };
        let tok = tok.clone();
        self.pos += 1;
        match tok {
            Tok::Not => Ok(self.unary()?.not()),
            Tok::LParen => {
                let inner = self.implication()?;
                if !self.eat(&Tok::RParen) {
                    let column = self.peek().map_or(self.end_column(), |(c, _)| c);
                    return Err(PropError::Parse {
                        column,
                        message: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            Tok::Ident(name) => Ok(match name.as_str() {
                "true" => PropFormula::Const(true),
                "false" => PropFormula::Const(false),
                _ => PropFormula::Var(name),
            }),
            other => Err(PropError::Parse {
                column: col,
                message: format!("unexpected `{other}`"),
            }),
        }
    }
}

/// `{"variables": {"a": true, ...}, "formula": "a & b"}`
#[derive(Debug, Clone, PartialEq)]
pub struct PropInstance {
    pub valuation: Valuation,
    pub formula: PropFormula,
}

#[derive(Debug, Error)]
pub enum PropInstanceError {
    #[error("invalid instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("formula: {0}")]
    Formula(#[from] PropError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPropInstance {
    variables: BTreeMap<String, bool>,
    formula: String,
}

/// Every variable of the formula must be declared.
pub fn load_prop_instance(text: &str) -> Result<PropInstance, PropInstanceError> {
    let raw: RawPropInstance = serde_json::from_str(text)?;
    let formula = parse_prop(&raw.formula)?;
    let valuation = Valuation(raw.variables);
    if let Some(v) = formula.variables().into_iter().find(|v| valuation.get(v).is_none()) {
        return Err(PropError::UnboundVariable(v).into());
    }
    Ok(PropInstance { valuation, formula })
}
