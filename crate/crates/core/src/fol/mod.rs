//! Finite-domain first-order logic over typed function tables.
//!
//! Predicates are functions into `bool`, so the predicate form and the typed
//! function form share one [`Interpretation`]. Endomorphisms are single cell
//! writes ([`PointUpdate`]) or atomic groups of them ([`MacroEndomorphism`]).

mod endo;
mod formula;
mod instance;
mod interp;
mod parse;

pub use endo::{
    colour_change_pool, edge_change_pool, fol_endo_pool, macro_endo, Cell, EndoError, FolEndo,
    FolKey, MacroEndomorphism, PointKey, PointUpdate,
};
pub use formula::{eval_fol, CmpOp, Env, FolError, FolFormula, Term};
pub use instance::{load_fol_instance, FolInstance, InstanceError};
pub use interp::{Atom, FunctionTable, Image, InterpError, Interpretation, Sort};
pub use parse::{parse_fol, FolParseError};
