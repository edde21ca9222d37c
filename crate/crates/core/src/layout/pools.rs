use std::collections::BTreeSet;

use thiserror::Error;

use super::snapshot::DomSnapshot;
use super::spec::Attr;
use super::translate::element_atom;
use crate::fol::{macro_endo, Atom, MacroEndomorphism, PointUpdate};

/// Geometry axis a pool acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// `left` (with `right` following).
    Horizontal,
    /// `top` (with `bottom` following).
    Vertical,
    /// `width` (with `right` following).
    Width,
    /// `height` (with `bottom` following).
    Height,
}

impl Axis {
    fn attr(self) -> Attr {
        match self {
            Axis::Horizontal => Attr::Left,
            Axis::Vertical => Attr::Top,
            Axis::Width => Attr::Width,
            Axis::Height => Attr::Height,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValuePolicy {
    Observed,
    /// Observed values plus every multiple of the step spanning the page.
    Grid(i64),
    /// Observed values plus the listed ones.
    Explicit(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoolError {
    #[error("grid step must be positive, got {0}")]
    NonPositiveStep(i64),
}

/// Candidate coordinates for `axis`, sorted and deduplicated.
pub fn candidate_values(
    snap: &DomSnapshot,
    axis: Axis,
    policy: &ValuePolicy,
) -> Result<Vec<i64>, PoolError> {
    let attr = axis.attr();
    let mut values: BTreeSet<i64> = snap.nodes().iter().map(|n| attr.of(&n.bbox)).collect();
    match policy {
        ValuePolicy::Observed => {}
        ValuePolicy::Explicit(extra) => values.extend(extra),
        ValuePolicy::Grid(step) => {
            if *step <= 0 {
                return Err(PoolError::NonPositiveStep(*step));
            }
            let (low_attr, high_attr) = match axis {
                Axis::Horizontal | Axis::Width => (Attr::Left, Attr::Right),
                Axis::Vertical | Axis::Height => (Attr::Top, Attr::Bottom),
            };
            let low = snap
                .nodes()
                .iter()
                .map(|n| low_attr.of(&n.bbox))
                .min()
                .unwrap_or(0)
                .min(0);
            let high = snap
                .nodes()
                .iter()
                .map(|n| high_attr.of(&n.bbox))
                .max()
                .unwrap_or(0);
            let mut v = low.div_euclid(*step) * step;
            while v <= high {
                if v >= 0 || matches!(axis, Axis::Horizontal | Axis::Vertical) {
                    values.insert(v);
                }
                v += step;
            }
        }
    }
    Ok(values.into_iter().collect())
}

/// Moves: per element and value, set the leading coordinate to the value and
/// shift the trailing edge by the same amount, so size is unchanged.
/// Values equal to the current coordinate are skipped. `axis` must be
/// horizontal or vertical; size axes give resize macros instead.
pub fn displacement_pool(
    snap: &DomSnapshot,
    elements: &[usize],
    axis: Axis,
    values: &[i64],
) -> Vec<MacroEndomorphism> {
    geometry_pool(snap, elements, axis, values)
}

/// Resizes: per element and size, set width (height) and move the right
/// (bottom) edge; left and top stay put.
pub fn resize_pool(
    snap: &DomSnapshot,
    elements: &[usize],
    axis: Axis,
    values: &[i64],
) -> Vec<MacroEndomorphism> {
    geometry_pool(snap, elements, axis, values)
}

fn geometry_pool(
    snap: &DomSnapshot,
    elements: &[usize],
    axis: Axis,
    values: &[i64],
) -> Vec<MacroEndomorphism> {
    let (name, set, follow) = match axis {
        Axis::Horizontal => ("displace-h", Attr::Left, Attr::Right),
        Axis::Vertical => ("displace-v", Attr::Top, Attr::Bottom),
        Axis::Width => ("resize-h", Attr::Width, Attr::Right),
        Axis::Height => ("resize-v", Attr::Height, Attr::Bottom),
    };
    let mut out = Vec::new();
    for &e in elements {
        let b = snap.node(e).bbox;
        let current = set.of(&b);
        let atom = element_atom(snap, e);
        for &v in values {
            if v == current || (matches!(axis, Axis::Width | Axis::Height) && v < 0) {
                continue;
            }
            let trailing = match axis {
                Axis::Horizontal => v + b.width,
                Axis::Vertical => v + b.height,
                Axis::Width => b.left + v,
                Axis::Height => b.top + v,
            };
            let updates = [
                PointUpdate::new(set.name(), vec![atom.clone()], Atom::Int(v)),
                PointUpdate::new(follow.name(), vec![atom.clone()], Atom::Int(trailing)),
            ];
            out.push(macro_endo(name, updates).expect("distinct attributes"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::snapshot::{BoxPx, NodeSpec};
    use crate::layout::spec::parse_spec;
    use crate::layout::translate::to_interpretation;
    use crate::repair::Endomorphism;

    fn menu(lefts: &[i64]) -> DomSnapshot {
        let mut ul = NodeSpec::new("ul", BoxPx::new(40, 20, 200, 130)).with_id("menu");
        for (i, &l) in lefts.iter().enumerate() {
            ul = ul.with_child(NodeSpec::new("li", BoxPx::new(l, 20 + 30 * i as i64, 100, 30)));
        }
        DomSnapshot::from_tree(ul)
    }

    #[test]
    fn observed_grid_and_explicit() {
        let snap = menu(&[40, 64, 40, 40]);
        assert_eq!(candidate_values(&snap, Axis::Horizontal, &ValuePolicy::Observed).unwrap(), vec![40, 64]);
        assert_eq!(
            candidate_values(&snap, Axis::Horizontal, &ValuePolicy::Explicit(vec![52])).unwrap(),
            vec![40, 52, 64]
        );
        let grid = candidate_values(&snap, Axis::Horizontal, &ValuePolicy::Grid(8)).unwrap();
        for v in (0..=64).step_by(8) {
            assert!(grid.contains(&v));
        }
        assert!(grid.contains(&40) && grid.contains(&64));
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            candidate_values(&snap, Axis::Horizontal, &ValuePolicy::Grid(0)),
            Err(PoolError::NonPositiveStep(0))
        );
    }

    #[test]
    fn displacement_skips_current_coordinate() {
        let snap = menu(&[40, 64, 40, 40]);
        let pool = displacement_pool(&snap, &[1, 2, 3, 4], Axis::Horizontal, &[40, 64]);
        assert_eq!(pool.len(), 4);
    }

    #[test]
    fn moves_preserve_size_and_resizes_preserve_origin() {
        let snap = menu(&[40, 64, 40, 40]);
        let spec = parse_spec("For each $x in $(li) ($x's left equals 40).").unwrap();
        let model = to_interpretation(&snap, &spec);
        let elements = model.elements.clone();
        let get = |i: &crate::fol::Interpretation, f: &str, e: usize| {
            i.lookup(f, &[element_atom(&snap, e)]).unwrap().as_int().unwrap()
        };
        let values = [0, 13, 40, 64, 200];
        for (axis, kept) in [
            (Axis::Horizontal, ["width", "height", "top", "bottom"]),
            (Axis::Vertical, ["width", "height", "left", "right"]),
            (Axis::Width, ["left", "top", "height", "bottom"]),
            (Axis::Height, ["left", "top", "width", "right"]),
        ] {
            for m in geometry_pool(&snap, &elements, axis, &values) {
                let after = m.apply(&model.interp);
                for &e in &elements {
                    for f in kept {
                        assert_eq!(get(&after, f, e), get(&model.interp, f, e), "{m} changed {f}");
                    }
                    assert_eq!(get(&after, "right", e), get(&after, "left", e) + get(&after, "width", e));
                    assert_eq!(get(&after, "bottom", e), get(&after, "top", e) + get(&after, "height", e));
                }
            }
        }
    }
}
