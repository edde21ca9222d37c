use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::interp::{Atom, Interpretation, Sort};
use crate::repair::Endomorphism;

/// `(function, argument tuple)`: one table cell.
pub type Cell = (String, Vec<Atom>);
/// `(function, argument tuple, new value)`.
pub type PointKey = (String, Vec<Atom>, Atom);

/// τ_{f(ā) ↦ b}: overwrites one table cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointUpdate {
    pub function: String,
    pub args: Vec<Atom>,
    pub value: Atom,
}

impl PointUpdate {
    pub fn new(function: &str, args: Vec<Atom>, value: impl Into<Atom>) -> Self {
        PointUpdate {
            function: function.to_string(),
            args,
            value: value.into(),
        }
    }

    pub fn cell(&self) -> Cell {
        (self.function.clone(), self.args.clone())
    }
}

impl fmt::Display for PointUpdate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(ToString::to_string).collect();
        write!(f, "{}({}) ↦ {}", self.function, args.join(","), self.value)
    }
}

impl Endomorphism for PointUpdate {
    type Structure = Interpretation;
    type Key = PointKey;
    type Cell = Cell;

    fn key(&self) -> PointKey {
        (self.function.clone(), self.args.clone(), self.value.clone())
    }

    fn footprint(&self) -> BTreeSet<Cell> {
        BTreeSet::from([self.cell()])
    }

    fn apply_in_place(&self, interp: &mut Interpretation) {
        interp.set(&self.function, &self.args, self.value.clone());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error("macro `{name}`: updates {first} and {second} write the same cell")]
    Overlap {
        name: String,
        first: String,
        second: String,
    },
}

/// A named group of footprint-disjoint point updates applied atomically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MacroEndomorphism {
    name: String,
    /// Sorted by key.
    members: Vec<PointUpdate>,
}

impl MacroEndomorphism {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &[PointUpdate] {
        &self.members
    }
}

impl fmt::Display for MacroEndomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(ToString::to_string).collect();
        write!(f, "{}[{}]", self.name, parts.join(", "))
    }
}

impl Endomorphism for MacroEndomorphism {
    type Structure = Interpretation;
    type Key = (String, Vec<PointKey>);
    type Cell = Cell;

    fn key(&self) -> Self::Key {
        (
            self.name.clone(),
            self.members.iter().map(Endomorphism::key).collect(),
        )
    }

    fn footprint(&self) -> BTreeSet<Cell> {
        self.members.iter().map(PointUpdate::cell).collect()
    }

    fn apply_in_place(&self, interp: &mut Interpretation) {
        for m in &self.members {
            m.apply_in_place(interp);
        }
    }
}

/// Builds a macro; rejects updates that write a common cell.
pub fn macro_endo(
    name: &str,
    updates: impl IntoIterator<Item = PointUpdate>,
) -> Result<MacroEndomorphism, EndoError> {
    let mut members: Vec<PointUpdate> = updates.into_iter().collect();
    members.sort_by_key(Endomorphism::key);
    members.dedup();
    for (i, a) in members.iter().enumerate() {
        if let Some(b) = members[i + 1..].iter().find(|b| b.cell() == a.cell()) {
            return Err(EndoError::Overlap {
                name: name.to_string(),
                first: a.to_string(),
                second: b.to_string(),
            });
        }
    }
    Ok(MacroEndomorphism {
        name: name.to_string(),
        members,
    })
}

/// Either kind of first-order endomorphism, so pools can mix granularities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FolEndo {
    Point(PointUpdate),
    Macro(MacroEndomorphism),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum FolKey {
    Point(PointKey),
    Macro(String, Vec<PointKey>),
}

impl FolEndo {
    /// The cell writes this endomorphism performs.
    pub fn updates(&self) -> &[PointUpdate] {
        match self {
            FolEndo::Point(p) => std::slice::from_ref(p),
            FolEndo::Macro(m) => m.members(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            FolEndo::Point(p) => p.to_string(),
            FolEndo::Macro(m) => m.to_string(),
        }
    }
}

impl From<PointUpdate> for FolEndo {
    fn from(p: PointUpdate) -> Self {
        FolEndo::Point(p)
    }
}

impl From<MacroEndomorphism> for FolEndo {
    fn from(m: MacroEndomorphism) -> Self {
        FolEndo::Macro(m)
    }
}

impl Endomorphism for FolEndo {
    type Structure = Interpretation;
    type Key = FolKey;
    type Cell = Cell;

    fn key(&self) -> FolKey {
        match self {
            FolEndo::Point(p) => FolKey::Point(p.key()),
            FolEndo::Macro(m) => {
                let (name, members) = m.key();
                FolKey::Macro(name, members)
            }
        }
    }

    fn footprint(&self) -> BTreeSet<Cell> {
        match self {
            FolEndo::Point(p) => p.footprint(),
            FolEndo::Macro(m) => m.footprint(),
        }
    }

    fn apply_in_place(&self, interp: &mut Interpretation) {
        match self {
            FolEndo::Point(p) => p.apply_in_place(interp),
            FolEndo::Macro(m) => m.apply_in_place(interp),
        }
    }
}

/// One point update per (function, argument tuple, image value). With
/// `functions = Some(..)` only the listed functions contribute.
pub fn fol_endo_pool(interp: &Interpretation, functions: Option<&[&str]>) -> Vec<PointUpdate> {
    let mut out = Vec::new();
    for f in interp.functions() {
        if functions.is_some_and(|names| !names.contains(&f.name.as_str())) {
            continue;
        }
        let image = interp.image_elements(&f.image);
        for args in interp.tuples(&f.args) {
            for value in &image {
                out.push(PointUpdate::new(&f.name, args.clone(), value.clone()));
            }
        }
    }
    out
}

/// Colour changes: per vertex and colour, set that colour predicate true and
/// every other one false.
pub fn colour_change_pool(vertices: &Sort, colour_preds: &[&str]) -> Vec<MacroEndomorphism> {
    let mut out = Vec::new();
    for x in &vertices.elements {
        for chosen in colour_preds {
            let updates = colour_preds
                .iter()
                .map(|q| PointUpdate::new(q, vec![x.clone()], q == chosen));
            out.push(macro_endo("colour", updates).expect("distinct predicates"));
        }
    }
    out
}

/// Edge changes: per unordered pair {x, y} and truth value b, set both
/// `p(x, y)` and `p(y, x)` to b. Loops give singleton macros.
pub fn edge_change_pool(vertices: &Sort, adjacency: &str) -> Vec<MacroEndomorphism> {
    let mut out = Vec::new();
    let elems = &vertices.elements;
    for (i, x) in elems.iter().enumerate() {
        for y in &elems[i..] {
            for b in [false, true] {
                let updates = [
                    PointUpdate::new(adjacency, vec![x.clone(), y.clone()], b),
                    PointUpdate::new(adjacency, vec![y.clone(), x.clone()], b),
                ];
                out.push(macro_endo("edge", updates).expect("mirrored cells"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repair::Transformation;

    fn ints(xs: &[i64]) -> Vec<Atom> {
        xs.iter().map(|&x| Atom::Int(x)).collect()
    }

    fn vertices(n: i64) -> Sort {
        Sort {
            name: "V".into(),
            elements: (1..=n).map(Atom::Int).collect(),
        }
    }

    #[test]
    fn pool_sizes() {
        let mut i = Interpretation::new();
        i.add_sort("A", ints(&[0, 1])).unwrap();
        i.add_predicate("q", &["A"], []).unwrap();
        assert_eq!(fol_endo_pool(&i, None).len(), 4);
        assert!(fol_endo_pool(&i, Some(&[])).is_empty());

        let mut j = Interpretation::new();
        j.add_sort("A", ints(&[0, 1, 2])).unwrap();
        j.add_predicate("p", &["A", "A"], []).unwrap();
        assert_eq!(fol_endo_pool(&j, None).len(), 18);

        assert_eq!(colour_change_pool(&vertices(5), &["q1", "q2", "q3"]).len(), 15);
        assert_eq!(edge_change_pool(&vertices(3), "p").len(), 12);
    }

    #[test]
    fn colour_macro_members() {
        let pool = colour_change_pool(&vertices(5), &["q1", "q2", "q3"]);
        let m = pool
            .iter()
            .find(|m| m.members().iter().any(|u| u.function == "q2" && u.args == ints(&[5]) && u.value == Atom::Bool(true)))
            .unwrap();
        let expected: BTreeSet<PointKey> = [
            ("q1", false),
            ("q2", true),
            ("q3", false),
        ]
        .iter()
        .map(|(q, b)| (q.to_string(), ints(&[5]), Atom::Bool(*b)))
        .collect();
        assert_eq!(m.members().iter().map(Endomorphism::key).collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn cut_edge_macro() {
        let pool = edge_change_pool(&vertices(5), "p");
        let cut = macro_endo(
            "edge",
            [
                PointUpdate::new("p", ints(&[4, 5]), false),
                PointUpdate::new("p", ints(&[5, 4]), false),
            ],
        )
        .unwrap();
        assert!(pool.contains(&cut));
        let diag: Vec<_> = pool.iter().filter(|m| m.members().len() == 1).collect();
        assert_eq!(diag.len(), 10);
    }

    #[test]
    fn overlapping_macro_rejected() {
        let err = macro_endo(
            "bad",
            [
                PointUpdate::new("p", ints(&[0]), true),
                PointUpdate::new("p", ints(&[0]), false),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, EndoError::Overlap { .. }));
    }

    #[test]
    fn macros_equal_their_member_sets() {
        let mut i = Interpretation::new();
        i.add_sort("A", ints(&[0, 1])).unwrap();
        i.add_predicate("p", &["A"], [ints(&[0])]).unwrap();
        i.add_predicate("q", &["A"], []).unwrap();
        let ups = [
            PointUpdate::new("p", ints(&[0]), false),
            PointUpdate::new("q", ints(&[1]), true),
        ];
        let m = macro_endo("m", ups.clone()).unwrap();
        let t: Transformation<PointUpdate> = ups.iter().cloned().collect();
        assert_eq!(m.apply(&i), t.apply(&i).unwrap());

        let single = macro_endo("s", [ups[0].clone()]).unwrap();
        assert_eq!(single.apply(&i), ups[0].apply(&i));
        let empty = macro_endo("id", []).unwrap();
        assert_eq!(empty.apply(&i), i);
    }

    #[test]
    fn point_updates_touch_one_cell_and_commute_iff_cells_differ() {
        let mut i = Interpretation::new();
        i.add_sort("A", ints(&[0, 1])).unwrap();
        i.add_predicate("p", &["A", "A"], [ints(&[0, 1])]).unwrap();
        i.add_predicate("q", &["A"], [ints(&[1])]).unwrap();
        let pool = fol_endo_pool(&i, None);
        for u in &pool {
            let after = u.apply(&i);
            for f in i.functions() {
                for (args, v) in &f.table {
                    let changed = after.lookup(&f.name, args) != Some(v);
                    if changed {
                        assert_eq!((f.name.clone(), args.clone()), u.cell());
                    }
                }
            }
            for w in &pool {
                let same_order = w.apply(&u.apply(&i)) == u.apply(&w.apply(&i));
                if u.cell() != w.cell() {
                    assert!(same_order && u.commutes_with(w));
                } else if u.value != w.value {
                    assert!(!same_order && !u.commutes_with(w));
                }
            }
        }
    }
}
