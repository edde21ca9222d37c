use thiserror::Error;

use super::selector::select;
use super::snapshot::DomSnapshot;
use super::spec::{LayoutSpec, Operand};
use super::verdict::{verdict_and, verdict_not, verdict_or, Verdict, WitnessNode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
}

/// Computes the verdict of `spec` on `snap`, with witnesses.
///
/// Quantifiers fold their body's verdicts with ⊗ (for each) or ⊕ (there
/// exists), rooting each sub-witness at the element bound in that step.
/// Connectives fold through the empty root.
pub fn omega(snap: &DomSnapshot, spec: &LayoutSpec) -> Result<Verdict, OmegaError> {
    let mut env = Vec::new();
    eval(snap, spec, &mut env)
}

fn lookup(env: &[(String, usize)], var: &str) -> Result<usize, OmegaError> {
    env.iter()
        .rev()
        .find(|(v, _)| v == var)
        .map(|(_, e)| *e)
        .ok_or_else(|| OmegaError::UnboundVariable(var.to_string()))
}

fn eval(
    snap: &DomSnapshot,
    spec: &LayoutSpec,
    env: &mut Vec<(String, usize)>,
) -> Result<Verdict, OmegaError> {
    Ok(match spec {
        LayoutSpec::Compare { var, attr, op, rhs } => {
            let x = lookup(env, var)?;
            let lhs = attr.of(&snap.node(x).bbox);
            let (value, mut elements) = match rhs {
                Operand::Attr(v, a) => {
                    let y = lookup(env, v)?;
                    (a.of(&snap.node(y).bbox), vec![x, y])
                }
                Operand::Const(c) => (*c, vec![x]),
            };
            elements.dedup();
            let witness: Vec<WitnessNode> = elements.into_iter().map(WitnessNode::leaf).collect();
            if op.eval(lhs, value) {
                Verdict::new(true.into(), witness, Vec::new())
            } else {
                Verdict::new(false.into(), Vec::new(), witness)
            }
        }
        LayoutSpec::Not(inner) => verdict_not(eval(snap, inner, env)?, None),
        LayoutSpec::And(a, b) => {
            let va = eval(snap, a, env)?;
            let vb = eval(snap, b, env)?;
            verdict_and(verdict_and(Verdict::top(), None, va), None, vb)
        }
        LayoutSpec::Or(a, b) => {
            let va = eval(snap, a, env)?;
            let vb = eval(snap, b, env)?;
            verdict_or(verdict_or(Verdict::bottom(), None, va), None, vb)
        }
        LayoutSpec::IfThen(a, b) => {
            let na = verdict_not(eval(snap, a, env)?, None);
            let vb = eval(snap, b, env)?;
            verdict_or(verdict_or(Verdict::bottom(), None, na), None, vb)
        }
        LayoutSpec::ForEach {
            var,
            selector,
            body,
        } => {
            let mut acc = Verdict::top();
            for e in select(snap, selector) {
                env.push((var.clone(), e));
                let v = eval(snap, body, env);
                env.pop();
                acc = verdict_and(acc, Some(e), v?);
            }
            acc
        }
        LayoutSpec::Exists {
            var,
            selector,
            body,
        } => {
            let mut acc = Verdict::bottom();
            for e in select(snap, selector) {
                env.push((var.clone(), e));
                let v = eval(snap, body, env);
                env.pop();
                acc = verdict_or(acc, Some(e), v?);
            }
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::snapshot::{BoxPx, NodeSpec};
    use crate::layout::spec::parse_spec;
    use crate::layout::verdict::Truth;

    fn menu(lefts: &[i64]) -> DomSnapshot {
        let mut ul = NodeSpec::new("ul", BoxPx::new(40, 20, 200, 130)).with_id("menu");
        for (i, &l) in lefts.iter().enumerate() {
            ul = ul.with_child(NodeSpec::new("li", BoxPx::new(l, 20 + 30 * i as i64, 100, 30)));
        }
        DomSnapshot::from_tree(ul)
    }

    const ALIGN: &str = "For each $x in $(#menu li) (For each $y in $(#menu li) ($x's left equals $y's left)).";

    #[test]
    fn misaligned_item_is_in_every_falsehood_witness() {
        let snap = menu(&[40, 64, 40, 40]);
        let v = omega(&snap, &parse_spec(ALIGN).unwrap()).unwrap();
        assert_eq!(v.value, Truth::False);
        assert_eq!(v.w_false.len(), 4);
        let item2 = snap.find("0.1").unwrap();
        assert!(v.w_false.iter().all(|t| t.contains(item2)));
        for tree in &v.w_false {
            for pair in &tree.children {
                let leaves: Vec<usize> = pair.children.iter().map(|c| c.element).collect();
                assert!(leaves.contains(&item2) && leaves.len() == 2);
            }
        }
    }

    #[test]
    fn aligned_list_holds() {
        let snap = menu(&[40, 40, 40, 40]);
        let v = omega(&snap, &parse_spec(ALIGN).unwrap()).unwrap();
        assert_eq!(v.value, Truth::True);
        assert!(v.w_false.is_empty());
        assert_eq!(v.w_true.len(), 4);
    }

    #[test]
    fn constant_comparison_witness() {
        let snap = menu(&[40]);
        let spec = parse_spec("For each $x in $(li) ($x's left equals 40).").unwrap();
        let v = omega(&snap, &spec).unwrap();
        assert_eq!(v.value, Truth::True);
        assert_eq!(
            v.w_true,
            vec![WitnessNode {
                element: 1,
                children: vec![WitnessNode::leaf(1)]
            }]
        );
        let LayoutSpec::ForEach { body, .. } = &spec else { panic!() };
        let mut env = vec![("$x".to_string(), 1)];
        let ground = eval(&snap, body, &mut env).unwrap();
        assert_eq!(ground, Verdict::new(Truth::True, vec![WitnessNode::leaf(1)], vec![]));
    }

    #[test]
    fn existential_and_implication() {
        let snap = menu(&[40, 64]);
        let some = parse_spec("There exists $x in $(li) such that ($x's left greater than 50).").unwrap();
        let v = omega(&snap, &some).unwrap();
        assert_eq!(v.value, Truth::True);
        assert_eq!(v.w_true[0].element, 2);

        let none = parse_spec("There exists $x in $(span) such that ($x's left equals 0).").unwrap();
        assert_eq!(omega(&snap, &none).unwrap(), Verdict::bottom());

        let imp = parse_spec("For each $x in $(li) (If $x's left equals 40 Then $x's top equals 20).").unwrap();
        assert_eq!(omega(&snap, &imp).unwrap().value, Truth::True);
    }
}
