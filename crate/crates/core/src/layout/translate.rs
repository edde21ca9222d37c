use std::collections::BTreeSet;

use super::selector::select;
use super::snapshot::DomSnapshot;
use super::spec::{Attr, LayoutCmp, LayoutSpec, Operand};
use crate::fol::{Atom, CmpOp, FolFormula, Image, Interpretation, MacroEndomorphism, Term};

/// Sort holding every element matched by some selector of the spec.
pub const ELEMENT_SORT: &str = "E";
/// Sort of pixel values.
pub const PIXEL_SORT: &str = "P";

/// A layout check restated in first-order logic.
#[derive(Debug, Clone)]
pub struct LayoutModel {
    pub interp: Interpretation,
    pub formula: FolFormula,
    /// Node indices of the elements in [`ELEMENT_SORT`], document order.
    pub elements: Vec<usize>,
}

impl LayoutModel {
    /// Adds every value written by `pool` to the pixel sort, so repaired
    /// structures stay within their declared sorts.
    pub fn admit(&mut self, pool: &[MacroEndomorphism]) {
        let values = pool
            .iter()
            .flat_map(|m| m.members())
            .filter(|u| matches!(u.value, Atom::Int(_)))
            .map(|u| u.value.clone());
        self.interp.extend_sort(PIXEL_SORT, values);
    }
}

/// The atom naming a snapshot element.
pub fn element_atom(snap: &DomSnapshot, index: usize) -> Atom {
    Atom::Sym(snap.node(index).elem_id.clone())
}

pub fn selector_sort(selector: &super::selector::Selector) -> String {
    format!("$({selector})")
}

/// Builds the interpretation (one sub-sort of `E` per selector, a pixel sort
/// `P` of every observed attribute value and spec constant, and the six
/// geometry functions `E → P`) and the translated formula.
pub fn to_interpretation(snap: &DomSnapshot, spec: &LayoutSpec) -> LayoutModel {
    let selectors = spec.selectors();
    let mut matched: BTreeSet<usize> = BTreeSet::new();
    let mut sub_sorts = Vec::new();
    for sel in &selectors {
        let hits = select(snap, sel);
        matched.extend(hits.iter().copied());
        sub_sorts.push((selector_sort(sel), hits));
    }
    let elements: Vec<usize> = matched.into_iter().collect();

    let mut pixels: BTreeSet<i64> = spec.constants().into_iter().collect();
    for &e in &elements {
        for attr in Attr::ALL {
            pixels.insert(attr.of(&snap.node(e).bbox));
        }
    }

    let mut interp = Interpretation::new();
    interp
        .add_sort(ELEMENT_SORT, elements.iter().map(|&e| element_atom(snap, e)))
        .expect("fresh sort");
    interp
        .add_sort(PIXEL_SORT, pixels.into_iter().map(Atom::Int))
        .expect("fresh sort");
    for (name, hits) in sub_sorts {
        interp
            .add_sort(&name, hits.iter().map(|&e| element_atom(snap, e)))
            .expect("distinct selectors");
    }
    for attr in Attr::ALL {
        let rows = elements.iter().map(|&e| {
            (
                vec![element_atom(snap, e)],
                Atom::Int(attr.of(&snap.node(e).bbox)),
            )
        });
        interp
            .add_function(attr.name(), &[ELEMENT_SORT], Image::Sort(PIXEL_SORT.into()), rows)
            .expect("values drawn from the pixel sort");
    }

    LayoutModel {
        interp,
        formula: translate(spec),
        elements,
    }
}

fn translate(spec: &LayoutSpec) -> FolFormula {
    match spec {
        LayoutSpec::ForEach {
            var,
            selector,
            body,
        } => FolFormula::forall(var, &selector_sort(selector), translate(body)),
        LayoutSpec::Exists {
            var,
            selector,
            body,
        } => FolFormula::exists(var, &selector_sort(selector), translate(body)),
        LayoutSpec::And(a, b) => translate(a).and(translate(b)),
        LayoutSpec::Or(a, b) => translate(a).or(translate(b)),
        LayoutSpec::Not(a) => translate(a).not(),
        LayoutSpec::IfThen(a, b) => translate(a).implies(translate(b)),
        LayoutSpec::Compare { var, attr, op, rhs } => {
            let lhs = Term::var(var).dot(attr.name());
            let rhs = match rhs {
                Operand::Attr(v, a) => Term::var(v).dot(a.name()),
                Operand::Const(c) => Term::Const(Atom::Int(*c)),
            };
            let op = match op {
                LayoutCmp::Equals => CmpOp::Eq,
                LayoutCmp::GreaterThan => CmpOp::Gt,
                LayoutCmp::LessThan => CmpOp::Lt,
            };
            FolFormula::cmp(op, lhs, rhs)
        }
    }
}
