use std::collections::HashMap;
use std::fmt;

use super::{Endomorphism, Spec, Transformation};

/// Limits and pool filtering for one enumeration run.
pub struct SearchConfig<E> {
    pub max_cardinality: Option<usize>,
    pub max_repairs: Option<usize>,
    /// Endomorphisms for which this returns `false` are dropped from the pool.
    pub endo_filter: Option<Box<dyn Fn(&E) -> bool>>,
}

impl<E> Default for SearchConfig<E> {
    fn default() -> Self {
        SearchConfig {
            max_cardinality: None,
            max_repairs: None,
            endo_filter: None,
        }
    }
}

impl<E> SearchConfig<E> {
    pub fn with_max_cardinality(mut self, n: usize) -> Self {
        self.max_cardinality = Some(n);
        self
    }

    pub fn with_max_repairs(mut self, n: usize) -> Self {
        self.max_repairs = Some(n);
        self
    }

    pub fn with_filter(mut self, keep: impl Fn(&E) -> bool + 'static) -> Self {
        self.endo_filter = Some(Box::new(keep));
        self
    }
}

impl<E> fmt::Debug for SearchConfig<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchConfig")
            .field("max_cardinality", &self.max_cardinality)
            .field("max_repairs", &self.max_repairs)
            .field("endo_filter", &self.endo_filter.is_some())
            .finish()
    }
}

/// Why a stream stopped yielding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exhaustion {
    /// Every subset of the pool was visited or pruned.
    Complete,
    /// Larger subsets exist but exceed `max_cardinality`.
    MaxCardinality,
    /// `max_repairs` repairs were yielded.
    MaxRepairs,
}

impl Exhaustion {
    pub fn as_str(self) -> &'static str {
        match self {
            Exhaustion::Complete => "complete",
            Exhaustion::MaxCardinality => "max_cardinality",
            Exhaustion::MaxRepairs => "max_repairs",
        }
    }
}

/// Fixed-width bit set over pool indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IndexSet(Vec<u64>);

impl IndexSet {
    fn new(n: usize) -> Self {
        IndexSet(vec![0; n.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersects(&self, other: &IndexSet) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Lazily enumerates prime repairs by increasing cardinality.
///
/// Subsets of the pool are visited in order of cardinality, then
/// lexicographically by the sorted key sequence. A candidate is skipped when
/// it is ill-defined, contains an already-yielded repair, or does not make the
/// spec hold. Prefixes that are already ill-defined or subsumed are skipped
/// wholesale, which preserves the visiting order of the surviving candidates.
pub struct RepairStream<'a, E: Endomorphism, P> {
    spec: &'a P,
    structure: &'a E::Structure,
    pool: Vec<E>,
    conflicts: Vec<IndexSet>,
    /// Yielded repairs as index sets, bucketed by their largest index.
    stored: HashMap<usize, Vec<IndexSet>>,
    stored_empty: bool,
    cardinality: usize,
    cursor: Option<Vec<usize>>,
    max_cardinality: Option<usize>,
    max_repairs: Option<usize>,
    yielded: usize,
    exhausted: Option<Exhaustion>,
}

impl<'a, E, P> RepairStream<'a, E, P>
where
    E: Endomorphism,
    P: Spec<E::Structure>,
{
    pub fn new(
        spec: &'a P,
        structure: &'a E::Structure,
        pool: impl IntoIterator<Item = E>,
        config: SearchConfig<E>,
    ) -> Self {
        let mut pool: Vec<E> = pool
            .into_iter()
            .filter(|e| config.endo_filter.as_ref().map_or(true, |keep| keep(e)))
            .collect();
        pool.sort_by_key(|e| e.key());
        pool.dedup_by(|a, b| a.key() == b.key());

        let n = pool.len();
        let footprints: Vec<_> = pool.iter().map(|e| e.footprint()).collect();
        let mut conflicts = vec![IndexSet::new(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if !footprints[i].is_disjoint(&footprints[j]) {
                    conflicts[i].insert(j);
                    conflicts[j].insert(i);
                }
            }
        }

        RepairStream {
            spec,
            structure,
            pool,
            conflicts,
            stored: HashMap::new(),
            stored_empty: false,
            cardinality: 0,
            cursor: None,
            max_cardinality: config.max_cardinality,
            max_repairs: config.max_repairs,
            yielded: 0,
            exhausted: None,
        }
    }

    /// The filtered, key-sorted endomorphism pool.
    pub fn pool(&self) -> &[E] {
        &self.pool
    }

    /// `None` while the stream may still yield.
    pub fn exhaustion(&self) -> Option<Exhaustion> {
        self.exhausted
    }

    pub fn next_prime_repair(&mut self) -> Result<Option<Transformation<E>>, P::Error> {
        if self.exhausted.is_some() {
            return Ok(None);
        }
        if self.max_repairs.is_some_and(|m| self.yielded >= m) {
            self.exhausted = Some(Exhaustion::MaxRepairs);
            return Ok(None);
        }
        while let Some(indices) = self.next_candidate() {
            let mut repaired = self.structure.clone();
            for &i in &indices {
                self.pool[i].apply_in_place(&mut repaired);
            }
            if !self.spec.holds(&repaired)? {
                continue;
            }
            let transformation: Transformation<E> =
                indices.iter().map(|&i| self.pool[i].clone()).collect();
            self.store(&indices);
            self.yielded += 1;
            if self.max_repairs.is_some_and(|m| self.yielded >= m) {
                self.exhausted = Some(Exhaustion::MaxRepairs);
            }
            return Ok(Some(transformation));
        }
        Ok(None)
    }

    fn store(&mut self, indices: &[usize]) {
        match indices.last() {
            None => self.stored_empty = true,
            Some(&last) => {
                let mut set = IndexSet::new(self.pool.len());
                for &i in indices {
                    set.insert(i);
                }
                self.stored.entry(last).or_default().push(set);
            }
        }
    }

    /// Next well-defined, unsubsumed index combination, or `None` once the
    /// cursor runs out (recording the reason).
    fn next_candidate(&mut self) -> Option<Vec<usize>> {
        let n = self.pool.len();
        loop {
            if self.cursor.is_none() {
                let k = self.cardinality;
                if self.stored_empty || k > n {
                    self.exhausted = Some(Exhaustion::Complete);
                    return None;
                }
                if self.max_cardinality.is_some_and(|m| k > m) {
                    self.exhausted = Some(Exhaustion::MaxCardinality);
                    return None;
                }
                self.cursor = Some((0..k).collect());
            }
            let mut indices = self.cursor.take().expect("cursor set above");
            let k = indices.len();
            match self.first_rejected_prefix(&indices) {
                Some(pos) => {
                    if advance(&mut indices, pos, n) {
                        self.cursor = Some(indices);
                    } else {
                        self.cardinality += 1;
                    }
                }
                None => {
                    let candidate = indices.clone();
                    if k > 0 && advance(&mut indices, k - 1, n) {
                        self.cursor = Some(indices);
                    } else {
                        self.cardinality += 1;
                    }
                    return Some(candidate);
                }
            }
        }
    }

    /// Length-1 of the shortest prefix that is ill-defined or contains a
    /// stored repair; every extension of such a prefix is rejected too.
    fn first_rejected_prefix(&self, indices: &[usize]) -> Option<usize> {
        let mut prefix = IndexSet::new(self.pool.len());
        for (pos, &i) in indices.iter().enumerate() {
            if self.conflicts[i].intersects(&prefix) {
                return Some(pos);
            }
            prefix.insert(i);
            if let Some(bucket) = self.stored.get(&i) {
                if bucket.iter().any(|s| s.is_subset_of(&prefix)) {
                    return Some(pos);
                }
            }
        }
        None
    }
}

/// Moves `indices` to the next k-combination of `0..n` that differs in
/// position `pos` or earlier. Returns false when none remains.
fn advance(indices: &mut [usize], pos: usize, n: usize) -> bool {
    let k = indices.len();
    let mut p = pos as isize;
    while p >= 0 {
        let i = p as usize;
        if indices[i] < n - k + i {
            indices[i] += 1;
            for j in i + 1..k {
                indices[j] = indices[j - 1] + 1;
            }
            return true;
        }
        p -= 1;
    }
    false
}

impl<E, P> Iterator for RepairStream<'_, E, P>
where
    E: Endomorphism,
    P: Spec<E::Structure>,
{
    type Item = Result<Transformation<E>, P::Error>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_prime_repair().transpose()
    }
}

/// Collected output of a full enumeration.
#[derive(Debug, Clone)]
pub struct RepairRun<E: Endomorphism> {
    pub repairs: Vec<Transformation<E>>,
    pub reason: Exhaustion,
    /// Size of the pool after filtering and key deduplication.
    pub pool_size: usize,
}

pub fn enumerate_prime_repairs<E, P>(
    spec: &P,
    structure: &E::Structure,
    pool: impl IntoIterator<Item = E>,
    config: SearchConfig<E>,
) -> Result<RepairRun<E>, P::Error>
where
    E: Endomorphism,
    P: Spec<E::Structure>,
{
    let mut stream = RepairStream::new(spec, structure, pool, config);
    let pool_size = stream.pool().len();
    let mut repairs = Vec::new();
    while let Some(t) = stream.next_prime_repair()? {
        repairs.push(t);
    }
    Ok(RepairRun {
        repairs,
        reason: stream.exhaustion().unwrap_or(Exhaustion::Complete),
        pool_size,
    })
}
