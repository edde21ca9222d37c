//! Layout checks over DOM snapshots: selector matching, the layout DSL,
//! witness-producing evaluation, and the translation into first-order logic
//! used for repair.

mod omega;
mod pools;
mod selector;
mod snapshot;
mod spec;
mod translate;
mod verdict;

pub use omega::{omega, OmegaError};
pub use pools::{candidate_values, displacement_pool, resize_pool, Axis, PoolError, ValuePolicy};
pub use selector::{parse_selector, select, Combinator, Compound, Selector, SelectorError};
pub use snapshot::{
    ingest_snapshot, BoxPx, DomSnapshot, ElementNode, NodeSpec, SnapshotError, SnapshotMeta,
    SNAPSHOT_SCHEMA,
};
pub use spec::{parse_spec, Attr, LayoutCmp, LayoutSpec, Operand, SpecError};
pub use translate::{
    element_atom, selector_sort, to_interpretation, LayoutModel, ELEMENT_SORT, PIXEL_SORT,
};
pub use verdict::{verdict_and, verdict_not, verdict_or, Truth, Verdict, Witness, WitnessNode};
