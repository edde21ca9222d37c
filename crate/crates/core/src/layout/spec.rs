//! Layout specification language.
//!
//! ```text
//! For each $x in $(#menu li) (
//!   For each $y in $(#menu li) (
//!     $x's left equals $y's left
//!   )
//! ).
//! ```
//!
//! Statements end with `.`; a file with several statements means their
//! conjunction. Connectives, loosest first: `If .. Then ..`, `Or`, `And`,
//! `Not`. Ground comparisons are `$x's <attr> <op> ($y's <attr> | <int>)`
//! with `<op>` one of `equals`, `[is] greater than`, `[is] less than`.

use std::fmt;

use thiserror::Error;

use super::selector::{parse_selector, Selector, SelectorError};
use super::snapshot::BoxPx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attr {
    Left,
    Right,
    Top,
    Bottom,
    Width,
    Height,
}

impl Attr {
    pub const ALL: [Attr; 6] = [
        Attr::Left,
        Attr::Right,
        Attr::Top,
        Attr::Bottom,
        Attr::Width,
        Attr::Height,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Attr::Left => "left",
            Attr::Right => "right",
            Attr::Top => "top",
            Attr::Bottom => "bottom",
            Attr::Width => "width",
            Attr::Height => "height",
        }
    }

    pub fn from_name(s: &str) -> Option<Attr> {
        Attr::ALL.into_iter().find(|a| a.name() == s)
    }

    pub fn of(self, b: &BoxPx) -> i64 {
        match self {
            Attr::Left => b.left,
            Attr::Right => b.right(),
            Attr::Top => b.top,
            Attr::Bottom => b.bottom(),
            Attr::Width => b.width,
            Attr::Height => b.height,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayoutCmp {
    Equals,
    GreaterThan,
    LessThan,
}

impl LayoutCmp {
    pub fn eval(self, a: i64, b: i64) -> bool {
        match self {
            LayoutCmp::Equals => a == b,
            LayoutCmp::GreaterThan => a > b,
            LayoutCmp::LessThan => a < b,
        }
    }

    fn text(self) -> &'static str {
        match self {
            LayoutCmp::Equals => "equals",
            LayoutCmp::GreaterThan => "is greater than",
            LayoutCmp::LessThan => "is less than",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    Attr(String, Attr),
    Const(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LayoutSpec {
    ForEach {
        var: String,
        selector: Selector,
        body: Box<LayoutSpec>,
    },
    Exists {
        var: String,
        selector: Selector,
        body: Box<LayoutSpec>,
    },
    And(Box<LayoutSpec>, Box<LayoutSpec>),
    Or(Box<LayoutSpec>, Box<LayoutSpec>),
    Not(Box<LayoutSpec>),
    IfThen(Box<LayoutSpec>, Box<LayoutSpec>),
    Compare {
        var: String,
        attr: Attr,
        op: LayoutCmp,
        rhs: Operand,
    },
}

impl LayoutSpec {
    /// Every selector the spec quantifies over, in first-use order.
    pub fn selectors(&self) -> Vec<&Selector> {
        let mut out: Vec<&Selector> = Vec::new();
        self.walk(&mut |s| {
            if let LayoutSpec::ForEach { selector, .. } | LayoutSpec::Exists { selector, .. } = s {
                if !out.contains(&selector) {
                    out.push(selector);
                }
            }
        });
        out
    }

    /// Integer constants appearing in comparisons.
    pub fn constants(&self) -> Vec<i64> {
        let mut out = Vec::new();
        self.walk(&mut |s| {
            if let LayoutSpec::Compare {
                rhs: Operand::Const(c),
                ..
            } = s
            {
                out.push(*c);
            }
        });
        out
    }

    fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a LayoutSpec)) {
        visit(self);
        match self {
            LayoutSpec::ForEach { body, .. } | LayoutSpec::Exists { body, .. } => body.walk(visit),
            LayoutSpec::And(a, b) | LayoutSpec::Or(a, b) | LayoutSpec::IfThen(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            LayoutSpec::Not(a) => a.walk(visit),
            LayoutSpec::Compare { .. } => {}
        }
    }
}

impl fmt::Display for LayoutSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayoutSpec::ForEach {
                var,
                selector,
                body,
            } => write!(f, "For each {var} in $({selector}) ({body})"),
            LayoutSpec::Exists {
                var,
                selector,
                body,
            } => write!(f, "There exists {var} in $({selector}) such that ({body})"),
            LayoutSpec::And(a, b) => write!(f, "({a}) And ({b})"),
            LayoutSpec::Or(a, b) => write!(f, "({a}) Or ({b})"),
            LayoutSpec::Not(a) => write!(f, "Not ({a})"),
            LayoutSpec::IfThen(a, b) => write!(f, "If ({a}) Then ({b})"),
            LayoutSpec::Compare { var, attr, op, rhs } => {
                write!(f, "{var}'s {} {} ", attr.name(), op.text())?;
                match rhs {
                    Operand::Attr(v, a) => write!(f, "{v}'s {}", a.name()),
                    Operand::Const(c) => write!(f, "{c}"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unbound variable `{var}`")]
    UnboundVariable {
        line: usize,
        column: usize,
        var: String,
    },
    #[error("{line}:{column}: {source}")]
    Selector {
        line: usize,
        column: usize,
        source: SelectorError,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Var(String),
    Sel(String),
    Possessive,
    Int(i64),
    LParen,
    RParen,
    Dot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "{w}"),
            Tok::Var(v) => write!(f, "{v}"),
            Tok::Sel(s) => write!(f, "$({s})"),
            Tok::Possessive => write!(f, "'s"),
            Tok::Int(i) => write!(f, "{i}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Dot => write!(f, "."),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> SpecError {
    SpecError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Lexed>, SpecError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let (l, co) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        let tok = match c {
            '(' => {
                advance(&mut i, &mut line, &mut col, 1);
                Tok::LParen
            }
            ')' => {
                advance(&mut i, &mut line, &mut col, 1);
                Tok::RParen
            }
            '.' => {
                advance(&mut i, &mut line, &mut col, 1);
                Tok::Dot
            }
            '\'' if chars.get(i + 1) == Some(&'s') => {
                advance(&mut i, &mut line, &mut col, 2);
                Tok::Possessive
            }
            '$' if chars.get(i + 1) == Some(&'(') => {
                let mut depth = 0;
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None => return Err(syntax(l, co, "unterminated selector")),
                        Some('(') => depth += 1,
                        Some(')') => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    j += 1;
                }
                let sel: String = chars[i + 2..j].iter().collect();
                let n = j + 1 - i;
                advance(&mut i, &mut line, &mut col, n);
                Tok::Sel(sel)
            }
            '$' => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(syntax(l, co, "expected a variable name after `$`"));
                }
                let name: String = chars[i..j].iter().collect();
                let n = j - i;
                advance(&mut i, &mut line, &mut col, n);
                Tok::Var(name)
            }
            c if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let v = s
                    .parse()
                    .map_err(|_| syntax(l, co, format!("integer `{s}` out of range")))?;
                let n = j - i;
                advance(&mut i, &mut line, &mut col, n);
                Tok::Int(v)
            }
            c if c.is_alphabetic() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_alphanumeric() {
                    j += 1;
                }
                let w: String = chars[i..j].iter().collect();
                let n = j - i;
                advance(&mut i, &mut line, &mut col, n);
                Tok::Word(w)
            }
            other => return Err(syntax(l, co, format!("unexpected character `{other}`"))),
        };
        out.push(Lexed {
            tok,
            line: l,
            column: co,
        });
    }
    Ok(out)
}

/// Parses one or more `.`-terminated statements.
pub fn parse_spec(text: &str) -> Result<LayoutSpec, SpecError> {
    let tokens = tokenize(text)?;
    let end = tokens.last().map_or((1, 1), |t| (t.line, t.column + 1));
    let mut p = Parser {
        tokens,
        pos: 0,
        bound: Vec::new(),
        end,
    };
    let mut statements = Vec::new();
    loop {
        statements.push(p.implication()?);
        if !p.eat(&Tok::Dot) {
            if p.pos < p.tokens.len() {
                return Err(p.error_here("expected `.`"));
            }
            break;
        }
        if p.pos == p.tokens.len() {
            break;
        }
    }
    Ok(statements
        .into_iter()
        .reduce(|a, b| LayoutSpec::And(Box::new(a), Box::new(b)))
        .expect("at least one statement"))
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

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map_or(self.end, |l| (l.line, l.column))
    }

    fn error_here(&self, what: &str) -> SpecError {
        let (line, column) = self.here();
        let found = self
            .peek()
            .map_or("end of input".to_string(), |t| format!("`{t}`"));
        syntax(line, column, format!("{what}, found {found}"))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), SpecError> {
        if self.eat_word(w) {
            Ok(())
        } else {
            Err(self.error_here(&format!("expected `{w}`")))
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SpecError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error_here(&format!("expected `{tok}`")))
        }
    }

    fn implication(&mut self) -> Result<LayoutSpec, SpecError> {
        if self.eat_word("If") {
            let cond = self.disjunction()?;
            self.expect_word("Then")?;
            let then = self.implication()?;
            return Ok(LayoutSpec::IfThen(Box::new(cond), Box::new(then)));
        }
        self.disjunction()
    }

    fn disjunction(&mut self) -> Result<LayoutSpec, SpecError> {
        let mut lhs = self.conjunction()?;
        while self.eat_word("Or") {
            lhs = LayoutSpec::Or(Box::new(lhs), Box::new(self.conjunction()?));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<LayoutSpec, SpecError> {
        let mut lhs = self.unary()?;
        while self.eat_word("And") {
            lhs = LayoutSpec::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<LayoutSpec, SpecError> {
        if self.eat_word("Not") {
            return Ok(LayoutSpec::Not(Box::new(self.unary()?)));
        }
        if self.eat(&Tok::LParen) {
            let inner = self.implication()?;
            self.expect(Tok::RParen)?;
            return Ok(inner);
        }
        if self.eat_word("For") {
            self.expect_word("each")?;
            let (var, selector) = self.binder()?;
            self.expect(Tok::LParen)?;
            let body = self.scoped(&var)?;
            self.expect(Tok::RParen)?;
            return Ok(LayoutSpec::ForEach {
                var,
                selector,
                body: Box::new(body),
            });
        }
        if self.eat_word("There") {
            self.expect_word("exists")?;
            let (var, selector) = self.binder()?;
            self.expect_word("such")?;
            self.expect_word("that")?;
            self.expect(Tok::LParen)?;
            let body = self.scoped(&var)?;
            self.expect(Tok::RParen)?;
            return Ok(LayoutSpec::Exists {
                var,
                selector,
                body: Box::new(body),
            });
        }
        self.comparison()
    }

    fn scoped(&mut self, var: &str) -> Result<LayoutSpec, SpecError> {
        self.bound.push(var.to_string());
        let body = self.implication();
        self.bound.pop();
        body
    }

    fn binder(&mut self) -> Result<(String, Selector), SpecError> {
        let var = match self.peek() {
            Some(Tok::Var(v)) => v.clone(),
            _ => return Err(self.error_here("expected a variable")),
        };
        self.pos += 1;
        self.expect_word("in")?;
        let (line, column) = self.here();
        let text = match self.peek() {
            Some(Tok::Sel(s)) => s.clone(),
            _ => return Err(self.error_here("expected a selector `$(...)`")),
        };
        self.pos += 1;
        let selector = parse_selector(&text).map_err(|source| SpecError::Selector {
            line,
            column,
            source,
        })?;
        Ok((var, selector))
    }

    fn attr_ref(&mut self) -> Result<(String, Attr), SpecError> {
        let (line, column) = self.here();
        let var = match self.peek() {
            Some(Tok::Var(v)) => v.clone(),
            _ => return Err(self.error_here("expected a variable")),
        };
        if !self.bound.contains(&var) {
            return Err(SpecError::UnboundVariable { line, column, var });
        }
        self.pos += 1;
        self.expect(Tok::Possessive)?;
        let attr = match self.peek() {
            Some(Tok::Word(w)) => Attr::from_name(w),
            _ => None,
        }
        .ok_or_else(|| self.error_here("expected an attribute (left, right, top, bottom, width, height)"))?;
        self.pos += 1;
        Ok((var, attr))
    }

    fn comparison(&mut self) -> Result<LayoutSpec, SpecError> {
        let (var, attr) = self.attr_ref()?;
        let op = if self.eat_word("equals") {
            LayoutCmp::Equals
        } else {
            self.eat_word("is");
            let op = if self.eat_word("greater") {
                LayoutCmp::GreaterThan
            } else if self.eat_word("less") {
                LayoutCmp::LessThan
            } else {
                return Err(self.error_here("expected `equals`, `greater than` or `less than`"));
            };
            self.expect_word("than")?;
            op
        };
        let rhs = match self.peek() {
            Some(Tok::Int(i)) => {
                let i = *i;
                self.pos += 1;
                Operand::Const(i)
            }
            Some(Tok::Var(_)) => {
                let (v, a) = self.attr_ref()?;
                Operand::Attr(v, a)
            }
            _ => return Err(self.error_here("expected a variable attribute or an integer")),
        };
        Ok(LayoutSpec::Compare { var, attr, op, rhs })
    }
}
