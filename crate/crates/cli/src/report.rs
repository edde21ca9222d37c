use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use repairlab_core::fol::Atom;

/// One cell written by a repair: `function(arguments)` goes from `old` to `new`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Change {
    pub function: String,
    pub arguments: Vec<Atom>,
    pub old: Option<Atom>,
    pub new: Atom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportedEndo {
    pub label: String,
    pub changes: Vec<Change>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportedRepair {
    pub cardinality: usize,
    pub endomorphisms: Vec<ReportedEndo>,
}

/// Output of `repair` and `oracle`. Repairs are listed in yield order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairReport {
    pub kind: String,
    /// SHA-256 of the input files.
    pub digest: String,
    pub pool_size: usize,
    pub repairs: Vec<ReportedRepair>,
    /// Whether every candidate was examined.
    pub exhausted: bool,
    /// `complete`, `max_cardinality` or `max_repairs`.
    pub reason: String,
}

impl RepairReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let noun = if self.repairs.len() == 1 { "repair" } else { "repairs" };
        let _ = writeln!(
            out,
            "{}: {} prime {noun} from a pool of {} ({})",
            self.kind,
            self.repairs.len(),
            self.pool_size,
            self.reason
        );
        for (i, r) in self.repairs.iter().enumerate() {
            if r.endomorphisms.is_empty() {
                let _ = writeln!(out, "{}. {{}} (already satisfied)", i + 1);
                continue;
            }
            let labels: Vec<&str> = r.endomorphisms.iter().map(|e| e.label.as_str()).collect();
            let _ = writeln!(out, "{}. {{{}}}", i + 1, labels.join(", "));
            for c in r.endomorphisms.iter().flat_map(|e| &e.changes) {
                let args: Vec<String> = c.arguments.iter().map(ToString::to_string).collect();
                let cell = if args.is_empty() {
                    c.function.clone()
                } else {
                    format!("{}({})", c.function, args.join(","))
                };
                let old = c.old.as_ref().map_or("?".to_string(), ToString::to_string);
                let _ = writeln!(out, "     {cell}: {old} -> {}", c.new);
            }
        }
        out
    }
}

/// A witness tree with elements named by their `elem_id`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTree {
    pub element: String,
    pub tag: String,
    pub children: Vec<WitnessTree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub kind: String,
    pub digest: String,
    /// `true`, `false` or `unknown`.
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_true: Option<Vec<WitnessTree>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_false: Option<Vec<WitnessTree>>,
}

impl CheckReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.kind, self.value);
        for (name, forest) in [("true", &self.witness_true), ("false", &self.witness_false)] {
            let Some(forest) = forest else { continue };
            if forest.is_empty() {
                continue;
            }
            let _ = writeln!(out, "witness of {name}:");
            for tree in forest {
                tree_text(&mut out, tree, 1);
            }
        }
        out
    }
}

fn tree_text(out: &mut String, tree: &WitnessTree, depth: usize) {
    let _ = writeln!(out, "{}{} <{}>", "  ".repeat(depth), tree.element, tree.tag);
    for c in &tree.children {
        tree_text(out, c, depth + 1);
    }
}
