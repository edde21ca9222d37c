//! Domain-agnostic repair machinery.
//!
//! A structure is modified by [`Endomorphism`]s, each of which writes a fixed
//! set of cells (its *footprint*). A set of endomorphisms whose footprints are
//! pairwise disjoint is a well-defined [`Transformation`]: its members commute,
//! so applying it is order-independent. A transformation that makes a violated
//! [`Spec`] hold again is a *repair*; one with no proper sub-repair is *prime*.

mod oracle;
mod stream;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use oracle::{oracle_prime_repairs, oracle_run, OracleError, ORACLE_POOL_LIMIT};
pub use stream::{enumerate_prime_repairs, Exhaustion, RepairRun, RepairStream, SearchConfig};

/// A total self-map on a structure that writes a fixed footprint.
pub trait Endomorphism: Clone {
    type Structure: Clone;
    /// Unique, totally ordered label.
    type Key: Ord + Clone + fmt::Debug;
    /// Identifier of one writable part of a structure.
    type Cell: Ord + Clone + fmt::Debug;

    fn key(&self) -> Self::Key;

    fn footprint(&self) -> BTreeSet<Self::Cell>;

    fn apply_in_place(&self, structure: &mut Self::Structure);

    fn apply(&self, structure: &Self::Structure) -> Self::Structure {
        let mut out = structure.clone();
        self.apply_in_place(&mut out);
        out
    }

    /// Two endomorphisms commute when they write disjoint cells.
    fn commutes_with(&self, other: &Self) -> bool {
        let (a, b) = (self.footprint(), other.footprint());
        a.is_disjoint(&b)
    }
}

/// Satisfaction relation between structures and one fixed expression.
pub trait Spec<S> {
    type Error;

    fn holds(&self, structure: &S) -> Result<bool, Self::Error>;
}

impl<S, F> Spec<S> for F
where
    F: Fn(&S) -> bool,
{
    type Error = std::convert::Infallible;

    fn holds(&self, structure: &S) -> Result<bool, Self::Error> {
        Ok(self(structure))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepairError {
    #[error("transformation is not well defined: {first} and {second} write overlapping cells")]
    IllDefined { first: String, second: String },
}

/// A finite set of endomorphisms, deduplicated and ordered by key.
#[derive(Clone)]
pub struct Transformation<E: Endomorphism> {
    members: BTreeMap<E::Key, E>,
}

impl<E: Endomorphism> Transformation<E> {
    pub fn empty() -> Self {
        Transformation {
            members: BTreeMap::new(),
        }
    }

    /// Adds `endo`, replacing any member with the same key.
    pub fn insert(&mut self, endo: E) {
        self.members.insert(endo.key(), endo);
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in ascending key order.
    pub fn iter(&self) -> impl Iterator<Item = &E> {
        self.members.values()
    }

    pub fn keys(&self) -> impl Iterator<Item = &E::Key> {
        self.members.keys()
    }

    pub fn contains_key(&self, key: &E::Key) -> bool {
        self.members.contains_key(key)
    }

    /// Key-set inclusion, proper or not.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.len() <= other.len() && self.keys().all(|k| other.contains_key(k))
    }

    pub fn is_well_defined(&self) -> bool {
        self.first_conflict().is_none()
    }

    fn first_conflict(&self) -> Option<(&E, &E)> {
        let members: Vec<&E> = self.iter().collect();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if !a.commutes_with(b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Composite application; `structure` is left untouched.
    pub fn apply(&self, structure: &E::Structure) -> Result<E::Structure, RepairError> {
        if let Some((a, b)) = self.first_conflict() {
            return Err(RepairError::IllDefined {
                first: format!("{:?}", a.key()),
                second: format!("{:?}", b.key()),
            });
        }
        let mut out = structure.clone();
        for endo in self.iter() {
            endo.apply_in_place(&mut out);
        }
        Ok(out)
    }
}

impl<E: Endomorphism> Default for Transformation<E> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<E: Endomorphism> FromIterator<E> for Transformation<E> {
    fn from_iter<I: IntoIterator<Item = E>>(iter: I) -> Self {
        let mut t = Transformation::empty();
        for endo in iter {
            t.insert(endo);
        }
        t
    }
}

impl<E: Endomorphism> PartialEq for Transformation<E> {
    fn eq(&self, other: &Self) -> bool {
        self.members.len() == other.members.len() && self.members.keys().eq(other.members.keys())
    }
}

impl<E: Endomorphism> Eq for Transformation<E> {}

/// Cardinality first, then the lexicographic sequence of sorted keys.
impl<E: Endomorphism> Ord for Transformation<E> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members.keys().cmp(other.members.keys()))
    }
}

impl<E: Endomorphism> PartialOrd for Transformation<E> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<E: Endomorphism> fmt::Debug for Transformation<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.keys()).finish()
    }
}

pub fn apply_transformation<E: Endomorphism>(
    transformation: &Transformation<E>,
    structure: &E::Structure,
) -> Result<E::Structure, RepairError> {
    transformation.apply(structure)
}

pub fn is_well_defined<E: Endomorphism>(transformation: &Transformation<E>) -> bool {
    transformation.is_well_defined()
}

/// True iff some stored transformation is contained in `candidate`.
pub fn is_subsumed<E: Endomorphism>(
    candidate: &Transformation<E>,
    stored: &[Transformation<E>],
) -> bool {
    stored.iter().any(|s| s.is_subset_of(candidate))
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Cell-write endomorphism over a plain vector of small integers.
    #[derive(Clone, Debug, PartialEq)]
    pub struct SetCell {
        pub cell: usize,
        pub value: u8,
    }

    impl Endomorphism for SetCell {
        type Structure = Vec<u8>;
        type Key = (usize, u8);
        type Cell = usize;

        fn key(&self) -> (usize, u8) {
            (self.cell, self.value)
        }

        fn footprint(&self) -> BTreeSet<usize> {
            BTreeSet::from([self.cell])
        }

        fn apply_in_place(&self, s: &mut Vec<u8>) {
            s[self.cell] = self.value;
        }
    }

    pub fn set(cell: usize, value: u8) -> SetCell {
        SetCell { cell, value }
    }
}
