//! Text syntax for first-order formulas.
//!
//! ```text
//! formula := or ('->' formula)?
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '!' unary | quant | '(' formula ')' | term (cmp term)?
//! quant   := ('forall' | 'exists') ident 'in' ident '(' formula ')'
//! term    := primary ('.' ident)*
//! primary := ident ('(' term (',' term)* ')')? | int | 'true' | 'false'
//! ```
//!
//! Identifiers bound by an enclosing quantifier are variables; other bare
//! identifiers are symbols.

use thiserror::Error;

use super::formula::{CmpOp, FolFormula, Term};
use super::interp::Atom;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct FolParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Int(i) => write!(f, "{i}"),
            Tok::Sym(s) => write!(f, "{s}"),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

const SYMBOLS: &[&str] = &[
    "->", "!=", "<=", ">=", "!", "&", "|", "(", ")", ",", ".", "=", "<", ">",
];

fn tokenize(text: &str) -> Result<Vec<Lexed>, FolParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line_no, column) = (ln + 1, i + 1);
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let value = s.parse().map_err(|_| FolParseError {
                    line: line_no,
                    column,
                    message: format!("integer `{s}` out of range"),
                })?;
                out.push(Lexed { tok: Tok::Int(value), line: line_no, column });
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Lexed {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: line_no,
                    column,
                });
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(Lexed { tok: Tok::Sym(s), line: line_no, column });
                    i += s.len();
                }
                None => {
                    return Err(FolParseError {
                        line: line_no,
                        column,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        }
    }
    Ok(out)
}

pub fn parse_fol(text: &str) -> Result<FolFormula, FolParseError> {
    let tokens = tokenize(text)?;
    let end = tokens
        .last()
        .map_or((1, 1), |t| (t.line, t.column + t.tok.to_string().chars().count()));
    let mut p = Parser {
        tokens,
        pos: 0,
        bound: Vec::new(),
        end,
    };
    let f = p.formula()?;
    if p.pos < p.tokens.len() {
        return Err(p.error_here("expected end of formula"));
    }
    Ok(f)
}

struct Parser {
    tokens: Vec<Lexed>,
    pos: usize,
    bound: Vec<String>,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|l| &l.tok)
    }

    fn error_here(&self, what: &str) -> FolParseError {
        match self.tokens.get(self.pos) {
            Some(l) => FolParseError {
                line: l.line,
                column: l.column,
                message: format!("{what}, found `{}`", l.tok),
            },
            None => FolParseError {
                line: self.end.0,
                column: self.end.1,
                message: format!("{what}, found end of input"),
            },
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(t)) if *t == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), FolParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error_here(&format!("expected `{s}`")))
        }
    }

    fn ident(&mut self) -> Result<String, FolParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error_here("expected identifier")),
        }
    }

    fn formula(&mut self) -> Result<FolFormula, FolParseError> {
        let lhs = self.disjunction()?;
        if self.eat_sym("->") {
            Ok(lhs.implies(self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<FolFormula, FolParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat_sym("|") {
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<FolFormula, FolParseError> {
        let mut lhs = self.unary()?;
        while self.eat_sym("&") {
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<FolFormula, FolParseError> {
        if self.eat_sym("!") {
            return Ok(self.unary()?.not());
        }
        if self.eat_sym("(") {
            let f = self.formula()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        if let Some(Tok::Ident(kw)) = self.peek() {
            if kw == "forall" || kw == "exists" {
                let universal = kw == "forall";
                self.pos += 1;
                let var = self.ident()?;
                match self.peek() {
                    Some(Tok::Ident(k)) if k == "in" => self.pos += 1,
                    _ => return Err(self.error_here("expected `in`")),
                }
                let sort = self.ident()?;
                self.expect_sym("(")?;
                self.bound.push(var.clone());
                let body = self.formula();
                self.bound.pop();
                let body = body?;
                self.expect_sym(")")?;
                return Ok(if universal {
                    FolFormula::forall(&var, &sort, body)
                } else {
                    FolFormula::exists(&var, &sort, body)
                });
            }
        }
        let lhs = self.term()?;
        let op = match self.peek() {
            Some(Tok::Sym("=")) => Some(CmpOp::Eq),
            Some(Tok::Sym("!=")) => Some(CmpOp::Ne),
            Some(Tok::Sym("<")) => Some(CmpOp::Lt),
            Some(Tok::Sym("<=")) => Some(CmpOp::Le),
            Some(Tok::Sym(">")) => Some(CmpOp::Gt),
            Some(Tok::Sym(">=")) => Some(CmpOp::Ge),
            _ => None,
        };
        match op {
            Some(op) => {
                self.pos += 1;
                let rhs = self.term()?;
                Ok(FolFormula::cmp(op, lhs, rhs))
            }
            None => Ok(FolFormula::holds(lhs)),
        }
    }

    fn term(&mut self) -> Result<Term, FolParseError> {
        let mut t = match self.peek().cloned() {
            Some(Tok::Int(i)) => {
                self.pos += 1;
                Term::Const(Atom::Int(i))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat_sym("(") {
                    let mut args = vec![self.term()?];
                    while self.eat_sym(",") {
                        args.push(self.term()?);
                    }
                    self.expect_sym(")")?;
                    Term::App(name, args)
                } else if self.bound.contains(&name) {
                    Term::Var(name)
                } else {
                    match name.as_str() {
                        "true" => Term::Const(Atom::Bool(true)),
                        "false" => Term::Const(Atom::Bool(false)),
                        _ => Term::Symbol(name),
                    }
                }
            }
            _ => return Err(self.error_here("expected term")),
        };
        while self.eat_sym(".") {
            let f = self.ident()?;
            t = t.dot(&f);
        }
        Ok(t)
    }
}
