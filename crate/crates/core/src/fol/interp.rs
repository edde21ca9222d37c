use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A domain element. Booleans are the image of predicates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Atom {
    Bool(bool),
    Int(i64),
    Sym(String),
}

impl Atom {
    pub fn sym(s: &str) -> Atom {
        Atom::Sym(s.to_string())
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Atom::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Atom::Int(i) => Some(*i),
            _ => None,
        }
    }
}

impl From<bool> for Atom {
    fn from(b: bool) -> Self {
        Atom::Bool(b)
    }
}

impl From<i64> for Atom {
    fn from(i: i64) -> Self {
        Atom::Int(i)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::Sym(s.to_string())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Bool(b) => write!(f, "{b}"),
            Atom::Int(i) => write!(f, "{i}"),
            Atom::Sym(s) => write!(f, "{s}"),
        }
    }
}

/// Finite ordered set of atoms; list order is the sort's declared order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sort {
    pub name: String,
    pub elements: Vec<Atom>,
}

impl Sort {
    pub fn contains(&self, atom: &Atom) -> bool {
        self.elements.contains(atom)
    }

    pub fn position(&self, atom: &Atom) -> Option<usize> {
        self.elements.iter().position(|a| a == atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Image {
    Bool,
    Sort(String),
}

impl fmt::Display for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Image::Bool => write!(f, "bool"),
            Image::Sort(s) => write!(f, "{s}"),
        }
    }
}

/// A total function from the product of `args` sorts into `image`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub name: String,
    pub args: Vec<String>,
    pub image: Image,
    pub table: BTreeMap<Vec<Atom>, Atom>,
}

impl FunctionTable {
    pub fn is_predicate(&self) -> bool {
        self.image == Image::Bool
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("sort `{0}` declared twice")]
    DuplicateSort(String),
    #[error("sort `{sort}` lists `{element}` twice")]
    DuplicateElement { sort: String, element: Atom },
    #[error("`bool` is reserved and cannot name a sort")]
    ReservedSort,
    #[error("function `{0}` declared twice")]
    DuplicateFunction(String),
    #[error("function `{function}` refers to undeclared sort `{sort}`")]
    UnknownSort { function: String, sort: String },
    #[error("function `{function}`: row {row} has {found} arguments, expected {expected}")]
    RowArity {
        function: String,
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("function `{function}`: `{value}` is not an element of sort `{sort}`")]
    OutOfSort {
        function: String,
        value: Atom,
        sort: String,
    },
    #[error("function `{function}` defines ({args}) twice")]
    DuplicateRow { function: String, args: String },
    #[error("function `{function}` has no value for ({args})")]
    NotTotal { function: String, args: String },
}

/// Named sorts plus total function tables over them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Interpretation {
    sorts: BTreeMap<String, Sort>,
    functions: BTreeMap<String, FunctionTable>,
}

fn join(atoms: &[Atom]) -> String {
    atoms
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(
        &mut self,
        name: &str,
        elements: impl IntoIterator<Item = Atom>,
    ) -> Result<(), InterpError> {
        if name == "bool" {
            return Err(InterpError::ReservedSort);
        }
        if self.sorts.contains_key(name) {
            return Err(InterpError::DuplicateSort(name.to_string()));
        }
        let mut seen = Vec::new();
        for e in elements {
            if seen.contains(&e) {
                return Err(InterpError::DuplicateElement {
                    sort: name.to_string(),
                    element: e,
                });
            }
            seen.push(e);
        }
        self.sorts.insert(
            name.to_string(),
            Sort {
                name: name.to_string(),
                elements: seen,
            },
        );
        Ok(())
    }

    /// Adds a function from explicit rows. Predicates default missing rows to
    /// false; other functions must list every argument tuple.
    pub fn add_function(
        &mut self,
        name: &str,
        args: &[&str],
        image: Image,
        rows: impl IntoIterator<Item = (Vec<Atom>, Atom)>,
    ) -> Result<(), InterpError> {
        if self.functions.contains_key(name) {
            return Err(InterpError::DuplicateFunction(name.to_string()));
        }
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        for s in args.iter().chain(match &image {
            Image::Sort(s) => Some(s),
            Image::Bool => None,
        }) {
            if !self.sorts.contains_key(s) {
                return Err(InterpError::UnknownSort {
                    function: name.to_string(),
                    sort: s.clone(),
                });
            }
        }

        let mut table = BTreeMap::new();
        for (row, (tuple, value)) in rows.into_iter().enumerate() {
            if tuple.len() != args.len() {
                return Err(InterpError::RowArity {
                    function: name.to_string(),
                    row,
                    found: tuple.len(),
                    expected: args.len(),
                });
            }
            for (a, s) in tuple.iter().zip(&args) {
                self.check_member(name, a, s)?;
            }
            match &image {
                Image::Bool if value.as_bool().is_none() => {
                    return Err(InterpError::OutOfSort {
                        function: name.to_string(),
                        value,
                        sort: "bool".into(),
                    })
                }
                Image::Sort(s) => self.check_member(name, &value, s)?,
                Image::Bool => {}
            }
            if table.contains_key(&tuple) {
                return Err(InterpError::DuplicateRow {
                    function: name.to_string(),
                    args: join(&tuple),
                });
            }
            table.insert(tuple, value);
        }

        for tuple in self.tuples(&args) {
            if !table.contains_key(&tuple) {
                if image == Image::Bool {
                    table.insert(tuple, Atom::Bool(false));
                } else {
                    return Err(InterpError::NotTotal {
                        function: name.to_string(),
                        args: join(&tuple),
                    });
                }
            }
        }

        self.functions.insert(
            name.to_string(),
            FunctionTable {
                name: name.to_string(),
                args,
                image,
                table,
            },
        );
        Ok(())
    }

    /// Predicate whose true rows are `true_tuples`.
    pub fn add_predicate(
        &mut self,
        name: &str,
        args: &[&str],
        true_tuples: impl IntoIterator<Item = Vec<Atom>>,
    ) -> Result<(), InterpError> {
        self.add_function(
            name,
            args,
            Image::Bool,
            true_tuples.into_iter().map(|t| (t, Atom::Bool(true))),
        )
    }

    fn check_member(&self, function: &str, atom: &Atom, sort: &str) -> Result<(), InterpError> {
        if self.sorts[sort].contains(atom) {
            Ok(())
        } else {
            Err(InterpError::OutOfSort {
                function: function.to_string(),
                value: atom.clone(),
                sort: sort.to_string(),
            })
        }
    }

    /// Every tuple of the product of the named sorts, in lexicographic
    /// element-list order.
    pub fn tuples(&self, sorts: &[String]) -> Vec<Vec<Atom>> {
        let mut out = vec![Vec::new()];
        for s in sorts {
            let elems = self.sorts.get(s).map_or(&[][..], |s| &s.elements[..]);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    elems.iter().map(move |e| {
                        let mut t = prefix.clone();
                        t.push(e.clone());
                        t
                    })
                })
                .collect();
        }
        out
    }

    pub fn sort(&self, name: &str) -> Option<&Sort> {
        self.sorts.get(name)
    }

    pub fn sorts(&self) -> impl Iterator<Item = &Sort> {
        self.sorts.values()
    }

    pub fn function(&self, name: &str) -> Option<&FunctionTable> {
        self.functions.get(name)
    }

    pub fn functions(&self) -> impl Iterator<Item = &FunctionTable> {
        self.functions.values()
    }

    /// Elements of `image`; `[false, true]` for predicates.
    pub fn image_elements(&self, image: &Image) -> Vec<Atom> {
        match image {
            Image::Bool => vec![Atom::Bool(false), Atom::Bool(true)],
            Image::Sort(s) => self.sorts.get(s).map(|s| s.elements.clone()).unwrap_or_default(),
        }
    }

    pub fn lookup(&self, function: &str, args: &[Atom]) -> Option<&Atom> {
        self.functions.get(function)?.table.get(args)
    }

    /// Overwrites one cell. Unknown functions or argument tuples are ignored.
    pub fn set(&mut self, function: &str, args: &[Atom], value: Atom) {
        if let Some(cell) = self
            .functions
            .get_mut(function)
            .and_then(|f| f.table.get_mut(args))
        {
            *cell = value;
        }
    }

    /// Adds `atoms` not already present to the end of sort `name`.
    pub fn extend_sort(&mut self, name: &str, atoms: impl IntoIterator<Item = Atom>) {
        if let Some(sort) = self.sorts.get_mut(name) {
            for a in atoms {
                if !sort.elements.contains(&a) {
                    sort.elements.push(a);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<Atom> {
        xs.iter().map(|&x| Atom::Int(x)).collect()
    }

    #[test]
    fn predicate_rows_default_to_false() {
        let mut i = Interpretation::new();
        i.add_sort("A", ints(&[0, 1])).unwrap();
        i.add_predicate("q", &["A"], [ints(&[1])]).unwrap();
        assert_eq!(i.lookup("q", &ints(&[0])), Some(&Atom::Bool(false)));
        assert_eq!(i.lookup("q", &ints(&[1])), Some(&Atom::Bool(true)));
    }

    #[test]
    fn non_predicates_must_be_total() {
        let mut i = Interpretation::new();
        i.add_sort("A", ints(&[0, 1])).unwrap();
        let err = i
            .add_function("f", &["A"], Image::Sort("A".into()), [(ints(&[0]), Atom::Int(1))])
            .unwrap_err();
        assert!(matches!(err, InterpError::NotTotal { .. }));
    }

    #[test]
    fn values_must_lie_in_image() {
        let mut i = Interpretation::new();
        i.add_sort("A", ints(&[0, 1])).unwrap();
        let err = i
            .add_function(
                "f",
                &["A"],
                Image::Sort("A".into()),
                [(ints(&[0]), Atom::Int(7)), (ints(&[1]), Atom::Int(0))],
            )
            .unwrap_err();
        assert!(matches!(err, InterpError::OutOfSort { .. }));
    }

    #[test]
    fn undeclared_sort_rejected() {
        let mut i = Interpretation::new();
        let err = i.add_predicate("q", &["V"], []).unwrap_err();
        assert!(matches!(err, InterpError::UnknownSort { .. }));
        assert_eq!(i.add_sort("bool", []), Err(InterpError::ReservedSort));
    }

    #[test]
    fn product_enumeration() {
        let mut i = Interpretation::new();
        i.add_sort("A", ints(&[0, 1, 2])).unwrap();
        let t = i.tuples(&["A".into(), "A".into()]);
        assert_eq!(t.len(), 9);
        assert_eq!(t[1], ints(&[0, 1]));
        assert_eq!(i.tuples(&[]), vec![Vec::<Atom>::new()]);
    }
}
