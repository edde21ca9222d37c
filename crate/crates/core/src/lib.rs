//! Fault localization by prime-repair enumeration.
//!
//! Given a structure that violates a declarative specification, a *repair* is
//! a well-defined set of endomorphisms whose application makes the
//! specification hold again. This crate enumerates the *prime* (subset-minimal)
//! repairs for three kinds of structures:
//!
//! * propositional valuations ([`prop`]),
//! * finite first-order interpretations with typed function tables ([`fol`]),
//! * web-page layout snapshots checked against a small layout DSL ([`layout`]).
//!
//! The enumeration engine itself ([`repair`]) is domain-agnostic.

pub mod fol;
pub mod layout;
pub mod prop;
pub mod repair;

pub use repair::{
    apply_transformation, enumerate_prime_repairs, is_subsumed, is_well_defined,
    oracle_prime_repairs, oracle_run, Endomorphism, Exhaustion, OracleError, RepairError, RepairRun,
    RepairStream, SearchConfig, Spec, Transformation, ORACLE_POOL_LIMIT,
};
