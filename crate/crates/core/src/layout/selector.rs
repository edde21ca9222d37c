//! CSS selector subset: type selectors, `*`, `#id`, `.class` and compounds
//! of them (`li.foo#bar`), joined by descendant (whitespace) or child (`>`)
//! combinators.

use std::fmt;

use thiserror::Error;

use super::snapshot::{DomSnapshot, ElementNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combinator {
    Descendant,
    Child,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Compound {
    /// `None` is the universal selector.
    pub tag: Option<String>,
    pub id: Option<String>,
    pub classes: Vec<String>,
}

impl Compound {
    pub fn matches(&self, node: &ElementNode) -> bool {
        self.tag.as_ref().map_or(true, |t| t.eq_ignore_ascii_case(&node.tag))
            && self.id.as_ref().map_or(true, |id| node.id.as_ref() == Some(id))
            && self.classes.iter().all(|c| node.classes.contains(c))
    }
}

impl fmt::Display for Compound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tag {
            Some(t) => write!(f, "{t}")?,
            None if self.id.is_none() && self.classes.is_empty() => write!(f, "*")?,
            None => {}
        }
        if let Some(id) = &self.id {
            write!(f, "#{id}")?;
        }
        for c in &self.classes {
            write!(f, ".{c}")?;
        }
        Ok(())
    }
}

/// Compounds left to right; `steps[i].0` joins compound `i` to compound `i-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selector {
    first: Compound,
    steps: Vec<(Combinator, Compound)>,
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.first)?;
        for (comb, c) in &self.steps {
            match comb {
                Combinator::Descendant => write!(f, " {c}")?,
                Combinator::Child => write!(f, " > {c}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectorError {
    #[error("selector position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("selector position {position}: unsupported combinator `{combinator}`")]
    UnknownCombinator { position: usize, combinator: char },
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '-' || c == '_'
}

pub fn parse_selector(text: &str) -> Result<Selector, SelectorError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut compounds: Vec<Compound> = Vec::new();
    let mut combinators: Vec<Combinator> = Vec::new();

    let skip_ws = |pos: &mut usize| {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
        *pos > start
    };

    skip_ws(&mut pos);
    loop {
        compounds.push(parse_compound(&chars, &mut pos)?);
        let had_ws = skip_ws(&mut pos);
        if pos >= chars.len() {
            break;
        }
        match chars[pos] {
            '>' => {
                pos += 1;
                skip_ws(&mut pos);
                combinators.push(Combinator::Child);
            }
            c @ ('+' | '~' | ',') => {
                return Err(SelectorError::UnknownCombinator {
                    position: pos,
                    combinator: c,
                })
            }
            _ if had_ws => combinators.push(Combinator::Descendant),
            c => {
                return Err(SelectorError::Parse {
                    position: pos,
                    message: format!("unexpected `{c}`"),
                })
            }
        }
    }

    let mut compounds = compounds.into_iter();
    let first = compounds.next().expect("at least one compound");
    Ok(Selector {
        first,
        steps: combinators.into_iter().zip(compounds).collect(),
    })
}

fn parse_compound(chars: &[char], pos: &mut usize) -> Result<Compound, SelectorError> {
    let start = *pos;
    let mut compound = Compound::default();
    let name = |pos: &mut usize| -> Result<String, SelectorError> {
        let s = *pos;
        while *pos < chars.len() && is_name_char(chars[*pos]) {
            *pos += 1;
        }
        if *pos == s {
            Err(SelectorError::Parse {
                position: s,
                message: "expected a name".into(),
            })
        } else {
            Ok(chars[s..*pos].iter().collect())
        }
    };
    if *pos < chars.len() && chars[*pos] == '*' {
        *pos += 1;
    } else if *pos < chars.len() && is_name_char(chars[*pos]) {
        compound.tag = Some(name(pos)?);
    }
    while *pos < chars.len() {
        match chars[*pos] {
            '#' => {
                *pos += 1;
                let id = name(pos)?;
                if compound.id.is_some() {
                    return Err(SelectorError::Parse {
                        position: *pos,
                        message: "compound has two ids".into(),
                    });
                }
                compound.id = Some(id);
            }
            '.' => {
                *pos += 1;
                compound.classes.push(name(pos)?);
            }
            '[' | ':' => {
                return Err(SelectorError::Parse {
                    position: *pos,
                    message: "attribute selectors and pseudo-classes are not supported".into(),
                })
            }
            _ => break,
        }
    }
    if *pos == start {
        return Err(SelectorError::Parse {
            position: start,
            message: match chars.get(start) {
                Some(c) => format!("expected a simple selector, found `{c}`"),
                None => "expected a simple selector".into(),
            },
        });
    }
    Ok(compound)
}

impl Selector {
    /// Whether the element at `index` matches.
    pub fn matches(&self, snap: &DomSnapshot, index: usize) -> bool {
        self.matches_from(snap, index, self.steps.len())
    }

    /// Compound `k` (0 = first) matches `index`, and the chain left of it
    /// matches suitably placed ancestors.
    fn matches_from(&self, snap: &DomSnapshot, index: usize, k: usize) -> bool {
        let compound = if k == 0 { &self.first } else { &self.steps[k - 1].1 };
        if !compound.matches(snap.node(index)) {
            return false;
        }
        if k == 0 {
            return true;
        }
        match self.steps[k - 1].0 {
            Combinator::Child => snap
                .node(index)
                .parent
                .is_some_and(|p| self.matches_from(snap, p, k - 1)),
            Combinator::Descendant => {
                let mut cur = snap.node(index).parent;
                while let Some(p) = cur {
                    if self.matches_from(snap, p, k - 1) {
                        return true;
                    }
                    cur = snap.node(p).parent;
                }
                false
            }
        }
    }
}

/// Matching elements as node indices, in document order.
pub fn select(snap: &DomSnapshot, selector: &Selector) -> Vec<usize> {
    (0..snap.len()).filter(|&i| selector.matches(snap, i)).collect()
}
