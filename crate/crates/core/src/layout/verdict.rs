//! Three-valued verdicts with truth and falsehood witnesses.

use std::fmt;

/// `?` arises only with temporal operators, which this crate does not model,
/// but the verdict algebra covers it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn negate(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        }
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "⊤",
            Truth::False => "⊥",
            Truth::Unknown => "?",
        })
    }
}

/// One tree of a witness forest; `element` indexes the snapshot's nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WitnessNode {
    pub element: usize,
    pub children: Vec<WitnessNode>,
}

impl WitnessNode {
    pub fn leaf(element: usize) -> Self {
        WitnessNode {
            element,
            children: Vec::new(),
        }
    }

    pub fn contains(&self, element: usize) -> bool {
        self.element == element || self.children.iter().any(|c| c.contains(element))
    }

    /// All element references in the tree, pre-order.
    pub fn elements(&self) -> Vec<usize> {
        let mut out = vec![self.element];
        for c in &self.children {
            out.extend(c.elements());
        }
        out
    }
}

pub type Witness = Vec<WitnessNode>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Verdict {
    pub value: Truth,
    pub w_true: Witness,
    pub w_false: Witness,
}

impl Verdict {
    pub fn new(value: Truth, w_true: Witness, w_false: Witness) -> Self {
        Verdict {
            value,
            w_true,
            w_false,
        }
    }

    /// ⟨⊤, ∅, ∅⟩
    pub fn top() -> Self {
        Verdict::new(Truth::True, Vec::new(), Vec::new())
    }

    /// ⟨⊥, ∅, ∅⟩
    pub fn bottom() -> Self {
        Verdict::new(Truth::False, Vec::new(), Vec::new())
    }
}

/// `(n, w)`: a tree rooted at `n` whose children are `w`. With the empty
/// root (`None`) the trees of `w` are contributed directly.
fn attach(target: &mut Witness, root: Option<usize>, w: Witness) {
    match root {
        None => target.extend(w),
        Some(element) => target.push(WitnessNode {
            element,
            children: w,
        }),
    }
}

/// Verdict conjunction ⊗.
pub fn verdict_and(v: Verdict, n: Option<usize>, other: Verdict) -> Verdict {
    let Verdict {
        value: b,
        mut w_true,
        mut w_false,
    } = v;
    match other.value {
        Truth::False => {
            attach(&mut w_false, n, other.w_false);
            Verdict::new(Truth::False, w_true, w_false)
        }
        Truth::Unknown if b != Truth::False => {
            attach(&mut w_true, n, other.w_true);
            Verdict::new(Truth::Unknown, w_true, w_false)
        }
        Truth::True if b != Truth::False => {
            attach(&mut w_true, n, other.w_true);
            Verdict::new(b, w_true, w_false)
        }
        _ => Verdict::new(b, w_true, w_false),
    }
}

/// Verdict disjunction ⊕: ⊗ with the roles of ⊤ and ⊥ exchanged.
pub fn verdict_or(v: Verdict, n: Option<usize>, other: Verdict) -> Verdict {
    let Verdict {
        value: b,
        mut w_true,
        mut w_false,
    } = v;
    match other.value {
        Truth::True => {
            attach(&mut w_true, n, other.w_true);
            Verdict::new(Truth::True, w_true, w_false)
        }
        Truth::Unknown if b != Truth::True => {
            attach(&mut w_false, n, other.w_false);
            Verdict::new(Truth::Unknown, w_true, w_false)
        }
        Truth::False if b != Truth::True => {
            attach(&mut w_false, n, other.w_false);
            Verdict::new(b, w_true, w_false)
        }
        _ => Verdict::new(b, w_true, w_false),
    }
}

/// Verdict negation ⊖: flips the value and exchanges the witnesses, each
/// re-rooted at `n`.
pub fn verdict_not(v: Verdict, n: Option<usize>) -> Verdict {
    let mut w_true = Vec::new();
    let mut w_false = Vec::new();
    attach(&mut w_true, n, v.w_false);
    attach(&mut w_false, n, v.w_true);
    Verdict::new(v.value.negate(), w_true, w_false)
}
