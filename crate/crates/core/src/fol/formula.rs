use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::interp::{Atom, Interpretation};
use crate::repair::Spec;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(Atom),
    /// Bare identifier: a nullary function if one is declared, else a symbol.
    Symbol(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(function: &str, args: Vec<Term>) -> Term {
        Term::App(function.to_string(), args)
    }

    /// `x.f`
    pub fn dot(self, function: &str) -> Term {
        Term::App(function.to_string(), vec![self])
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Symbol(v) => write!(f, "{v}"),
            Term::Const(a) => write!(f, "{a}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    fn is_order(self) -> bool {
        !matches!(self, CmpOp::Eq | CmpOp::Ne)
    }

    fn accepts(self, ord: Ordering) -> bool {
        match self {
            CmpOp::Eq => ord == Ordering::Equal,
            CmpOp::Ne => ord != Ordering::Equal,
            CmpOp::Lt => ord == Ordering::Less,
            CmpOp::Le => ord != Ordering::Greater,
            CmpOp::Gt => ord == Ordering::Greater,
            CmpOp::Ge => ord != Ordering::Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FolFormula {
    /// A boolean-valued term, e.g. `p(x, y)`.
    Holds(Term),
    Cmp(CmpOp, Term, Term),
    Not(Box<FolFormula>),
    And(Box<FolFormula>, Box<FolFormula>),
    Or(Box<FolFormula>, Box<FolFormula>),
    Implies(Box<FolFormula>, Box<FolFormula>),
    Forall {
        var: String,
        sort: String,
        body: Box<FolFormula>,
    },
    Exists {
        var: String,
        sort: String,
        body: Box<FolFormula>,
    },
}

impl FolFormula {
    pub fn holds(term: Term) -> Self {
        FolFormula::Holds(term)
    }

    pub fn cmp(op: CmpOp, lhs: Term, rhs: Term) -> Self {
        FolFormula::Cmp(op, lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        FolFormula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Self) -> Self {
        FolFormula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Self) -> Self {
        FolFormula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Self) -> Self {
        FolFormula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn forall(var: &str, sort: &str, body: Self) -> Self {
        FolFormula::Forall {
            var: var.to_string(),
            sort: sort.to_string(),
            body: Box::new(body),
        }
    }

    pub fn exists(var: &str, sort: &str, body: Self) -> Self {
        FolFormula::Exists {
            var: var.to_string(),
            sort: sort.to_string(),
            body: Box::new(body),
        }
    }

    /// Conjunction of a non-empty list; `None` when empty.
    pub fn all(parts: impl IntoIterator<Item = FolFormula>) -> Option<Self> {
        parts.into_iter().reduce(FolFormula::and)
    }
}

impl fmt::Display for FolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FolFormula::Holds(t) => write!(f, "{t}"),
            FolFormula::Cmp(op, a, b) => write!(f, "{a} {} {b}", op.symbol()),
            FolFormula::Not(x) => write!(f, "!({x})"),
            FolFormula::And(a, b) => write!(f, "({a} & {b})"),
            FolFormula::Or(a, b) => write!(f, "({a} | {b})"),
            FolFormula::Implies(a, b) => write!(f, "({a} -> {b})"),
            FolFormula::Forall { var, sort, body } => write!(f, "forall {var} in {sort} ({body})"),
            FolFormula::Exists { var, sort, body } => write!(f, "exists {var} in {sort} ({body})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FolError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("sort mismatch: `{function}` is not defined on ({args})")]
    SortMismatch { function: String, args: String },
    #[error("`{0}` is not boolean-valued")]
    NotBoolean(String),
    #[error("`{0}` and `{1}` are not comparable by order")]
    NotOrdered(Atom, Atom),
}

/// Variable bindings for free variables.
pub type Env = BTreeMap<String, Atom>;

/// Evaluates `formula` in `interp`, with `env` binding its free variables.
/// Quantifiers range over the listed elements of their sort (∀ over an
/// empty sort is true, ∃ is false).
pub fn eval_fol(formula: &FolFormula, interp: &Interpretation, env: &Env) -> Result<bool, FolError> {
    let mut stack: Vec<(String, Atom)> = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    Evaluator { interp }.formula(formula, &mut stack)
}

struct Evaluator<'a> {
    interp: &'a Interpretation,
}

impl Evaluator<'_> {
    fn formula(&self, f: &FolFormula, env: &mut Vec<(String, Atom)>) -> Result<bool, FolError> {
        Ok(match f {
            FolFormula::Holds(t) => {
                let v = self.term(t, env)?;
                v.as_bool().ok_or_else(|| FolError::NotBoolean(t.to_string()))?
            }
            FolFormula::Cmp(op, a, b) => {
                let (a, b) = (self.term(a, env)?, self.term(b, env)?);
                let ord = if op.is_order() {
                    self.order(&a, &b)?
                } else if a == b {
                    Ordering::Equal
                } else {
                    Ordering::Less
                };
                op.accepts(ord)
            }
            FolFormula::Not(x) => !self.formula(x, env)?,
            FolFormula::And(a, b) => self.formula(a, env)? && self.formula(b, env)?,
            FolFormula::Or(a, b) => self.formula(a, env)? || self.formula(b, env)?,
            FolFormula::Implies(a, b) => !self.formula(a, env)? || self.formula(b, env)?,
            FolFormula::Forall { var, sort, body } => {
                let sort = self
                    .interp
                    .sort(sort)
                    .ok_or_else(|| FolError::UnknownSort(sort.clone()))?;
                for e in &sort.elements {
                    env.push((var.clone(), e.clone()));
                    let r = self.formula(body, env);
                    env.pop();
                    if !r? {
                        return Ok(false);
                    }
                }
                true
            }
            FolFormula::Exists { var, sort, body } => {
                let sort = self
                    .interp
                    .sort(sort)
                    .ok_or_else(|| FolError::UnknownSort(sort.clone()))?;
                for e in &sort.elements {
                    env.push((var.clone(), e.clone()));
                    let r = self.formula(body, env);
                    env.pop();
                    if r? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    fn term(&self, t: &Term, env: &[(String, Atom)]) -> Result<Atom, FolError> {
        match t {
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|(_, a)| a.clone())
                .ok_or_else(|| FolError::UnboundVariable(v.clone())),
            Term::Const(a) => Ok(a.clone()),
            Term::Symbol(s) => match self.interp.function(s) {
                Some(f) if f.arity() == 0 => Ok(f.table[&Vec::new()].clone()),
                _ => Ok(Atom::Sym(s.clone())),
            },
            Term::App(name, args) => {
                let table = self
                    .interp
                    .function(name)
                    .ok_or_else(|| FolError::UnknownFunction(name.clone()))?;
                let args = args
                    .iter()
                    .map(|a| self.term(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                table.table.get(&args).cloned().ok_or_else(|| FolError::SortMismatch {
                    function: name.clone(),
                    args: args.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                })
            }
        }
    }

    /// Integers compare numerically; other atoms by their position in a sort
    /// that lists both.
    fn order(&self, a: &Atom, b: &Atom) -> Result<Ordering, FolError> {
        if let (Atom::Int(x), Atom::Int(y)) = (a, b) {
            return Ok(x.cmp(y));
        }
        for sort in self.interp.sorts() {
            if let (Some(i), Some(j)) = (sort.position(a), sort.position(b)) {
                return Ok(i.cmp(&j));
            }
        }
        Err(FolError::NotOrdered(a.clone(), b.clone()))
    }
}

impl Spec<Interpretation> for FolFormula {
    type Error = FolError;

    fn holds(&self, interp: &Interpretation) -> Result<bool, FolError> {
        eval_fol(self, interp, &Env::new())
    }
}
