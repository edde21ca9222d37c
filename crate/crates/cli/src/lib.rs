//! `repairlab` command-line front end.
//!
//! Exit codes: `check` gives 0 when the specification holds and 1 when it
//! does not; `repair` and `oracle` give 0 when at least one prime repair was
//! found and 1 when none was. Errors give 2.

mod report;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use repairlab_core::fol::{
    colour_change_pool, edge_change_pool, eval_fol, fol_endo_pool, load_fol_instance, parse_fol,
    Atom, Env, FolEndo, FolFormula, Image, Interpretation, MacroEndomorphism, PointUpdate,
};
use repairlab_core::layout::{
    candidate_values, displacement_pool, ingest_snapshot, omega, parse_spec, resize_pool,
    to_interpretation, Axis, DomSnapshot, LayoutSpec, ValuePolicy, WitnessNode,
};
use repairlab_core::prop::{eval_prop, load_prop_instance, parse_prop, PropFormula, Valuation, VarFlip};
use repairlab_core::{
    enumerate_prime_repairs, oracle_run, Endomorphism, Exhaustion, RepairRun, SearchConfig, Spec,
    ORACLE_POOL_LIMIT,
};

pub use report::{Change, CheckReport, RepairReport, ReportedEndo, ReportedRepair, WitnessTree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "repairlab", version, about = "Enumerate prime repairs of violated specifications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the specification (with witnesses for layouts).
    Check(InputArgs),
    /// Enumerate prime repairs by increasing cardinality.
    Repair(RepairArgs),
    /// Brute-force the prime repairs; same report as `repair`.
    Oracle(RepairArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Prop,
    Fol,
    Layout,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Prop => "prop",
            Kind::Fol => "fol",
            Kind::Layout => "layout",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PoolKind {
    Point,
    Colour,
    Edge,
    DisplaceH,
    DisplaceV,
    Resize,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Specification file: layout DSL (`.cp`), or a formula overriding the
    /// instance's own.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Layout snapshot JSON.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    /// Propositional or first-order instance JSON.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Overrides kind inference.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct RepairArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Endomorphism pools to draw from (repeatable). Defaults to `point`, or
    /// `displace-h` for layouts.
    #[arg(long = "pool", value_enum)]
    pub pools: Vec<PoolKind>,
    /// Candidate pixel values: `observed`, `grid:<step>` or `list:<v1,v2,...>`.
    #[arg(long, default_value = "observed", value_parser = parse_values)]
    pub values: ValuePolicy,
    /// Stop after repairs of this cardinality.
    #[arg(long = "max-card")]
    pub max_card: Option<usize>,
    /// Stop after this many repairs.
    #[arg(long = "max-count")]
    pub max_count: Option<usize>,
    /// Drop endomorphisms that leave the structure unchanged.
    #[arg(long)]
    pub prune: bool,
    /// Colour predicates for `--pool colour`.
    #[arg(long = "colour-preds", value_delimiter = ',', default_value = "q1,q2,q3")]
    pub colour_preds: Vec<String>,
    /// Adjacency predicate for `--pool edge`.
    #[arg(long = "edge-pred", default_value = "p")]
    pub edge_pred: String,
    /// Largest pool `repair` accepts without `--force`.
    #[arg(long = "pool-cap", env = "REPAIRLAB_POOL_CAP", default_value_t = 64)]
    pub pool_cap: usize,
    /// Run even when the pool exceeds the cap.
    #[arg(long)]
    pub force: bool,
}

fn parse_values(s: &str) -> Result<ValuePolicy, String> {
    if s == "observed" {
        return Ok(ValuePolicy::Observed);
    }
    if let Some(step) = s.strip_prefix("grid:") {
        let step: i64 = step.trim().parse().map_err(|e| format!("grid step: {e}"))?;
        if step <= 0 {
            return Err(format!("grid step must be positive, got {step}"));
        }
        return Ok(ValuePolicy::Grid(step));
    }
    if let Some(list) = s.strip_prefix("list:") {
        let values = list
            .split(',')
            .map(|v| v.trim().parse::<i64>().map_err(|e| format!("list value `{v}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(ValuePolicy::Explicit(values));
    }
    Err(format!("expected observed, grid:<step> or list:<v1,...>, got `{s}`"))
}

/// Parses arguments, runs the command, prints its report and returns the
/// exit code.
pub fn run_cli(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Repair(args) => cmd_repair(args, Mode::Enumerate),
        Command::Oracle(args) => cmd_repair(args, Mode::Oracle),
    };
    match result {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

enum Loaded {
    Prop(Valuation, PropFormula),
    Fol(Interpretation, FolFormula),
    Layout(DomSnapshot, LayoutSpec),
}

struct Input {
    kind: Kind,
    digest: String,
    loaded: Loaded,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(args: &InputArgs) -> Result<Input> {
    let mut hasher = Sha256::new();
    let mut texts = Vec::new();
    for (role, path) in [("spec", &args.spec), ("instance", &args.instance), ("snapshot", &args.snapshot)] {
        if let Some(p) = path {
            let text = read(p)?;
            hasher.update(role.as_bytes());
            hasher.update((text.len() as u64).to_le_bytes());
            hasher.update(text.as_bytes());
            texts.push((role, p.clone(), text));
        }
    }
    let digest = format!("{:x}", hasher.finalize());
    let text_of = |role: &str| texts.iter().find(|(r, _, _)| *r == role).map(|(_, p, t)| (p, t.as_str()));

    let kind = match args.kind {
        Some(k) => k,
        None if args.snapshot.is_some() => Kind::Layout,
        None => {
            let (path, text) = text_of("instance").ok_or_else(|| anyhow!("need --instance or --snapshot"))?;
            let value: serde_json::Value =
                serde_json::from_str(text).with_context(|| format!("{}", path.display()))?;
            if value.get("sorts").is_some() {
                Kind::Fol
            } else if value.get("variables").is_some() {
                Kind::Prop
            } else {
                bail!("{}: cannot tell the instance kind; pass --kind", path.display());
            }
        }
    };

    let loaded = match kind {
        Kind::Layout => {
            let (sp, spec_text) = text_of("spec").ok_or_else(|| anyhow!("layout checks need --spec"))?;
            let (np, snap_text) = text_of("snapshot").ok_or_else(|| anyhow!("layout checks need --snapshot"))?;
            let spec = parse_spec(spec_text).with_context(|| format!("{}", sp.display()))?;
            let snap = ingest_snapshot(snap_text).with_context(|| format!("{}", np.display()))?;
            Loaded::Layout(snap, spec)
        }
        Kind::Prop => {
            let (ip, text) = text_of("instance").ok_or_else(|| anyhow!("need --instance"))?;
            let inst = load_prop_instance(text).with_context(|| format!("{}", ip.display()))?;
            let formula = match text_of("spec") {
                Some((sp, t)) => parse_prop(t.trim()).with_context(|| format!("{}", sp.display()))?,
                None => inst.formula,
            };
            if let Some(v) = formula.variables().into_iter().find(|v| inst.valuation.get(v).is_none()) {
                bail!("variable `{v}` is not declared by the instance");
            }
            Loaded::Prop(inst.valuation, formula)
        }
        Kind::Fol => {
            let (ip, text) = text_of("instance").ok_or_else(|| anyhow!("need --instance"))?;
            let inst = load_fol_instance(text).with_context(|| format!("{}", ip.display()))?;
            let formula = match (text_of("spec"), inst.formula) {
                (Some((sp, t)), _) => parse_fol(t).with_context(|| format!("{}", sp.display()))?,
                (None, Some(f)) => f,
                (None, None) => bail!("{}: no formula; pass --spec", ip.display()),
            };
            Loaded::Fol(inst.interp, formula)
        }
    };
    Ok(Input { kind, digest, loaded })
}

fn render<T: serde::Serialize>(format: Format, report: &T, text: impl FnOnce() -> String) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Text => text(),
    })
}

fn witness_trees(snap: &DomSnapshot, forest: &[WitnessNode]) -> Vec<WitnessTree> {
    forest
        .iter()
        .map(|n| WitnessTree {
            element: snap.node(n.element).elem_id.clone(),
            tag: snap.node(n.element).tag.clone(),
            children: witness_trees(snap, &n.children),
        })
        .collect()
}

pub fn cmd_check(args: &InputArgs) -> Result<(String, i32)> {
    let input = load(args)?;
    let (value, witness_true, witness_false) = match &input.loaded {
        Loaded::Prop(sigma, phi) => (eval_prop(phi, sigma)?.into(), None, None),
        Loaded::Fol(interp, phi) => (eval_fol(phi, interp, &Env::new())?.into(), None, None),
        Loaded::Layout(snap, spec) => {
            let v = omega(snap, spec)?;
            (
                v.value,
                Some(witness_trees(snap, &v.w_true)),
                Some(witness_trees(snap, &v.w_false)),
            )
        }
    };
    let report = CheckReport {
        kind: input.kind.name().into(),
        digest: input.digest,
        value: value.as_str().into(),
        witness_true,
        witness_false,
    };
    let code = if value == repairlab_core::layout::Truth::True {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    Ok((render(args.format, &report, || report.to_text())?, code))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Enumerate,
    Oracle,
}

pub fn cmd_repair(args: &RepairArgs, mode: Mode) -> Result<(String, i32)> {
    let input = load(&args.input)?;
    let pools: Vec<PoolKind> = if args.pools.is_empty() {
        vec![if input.kind == Kind::Layout { PoolKind::DisplaceH } else { PoolKind::Point }]
    } else {
        args.pools.clone()
    };
    let (pool_size, repairs, reason) = match &input.loaded {
        Loaded::Prop(sigma, phi) => {
            if let Some(p) = pools.iter().find(|p| **p != PoolKind::Point) {
                bail!("pool {p:?} does not apply to propositional instances");
            }
            let pool = repairlab_core::prop::prop_endo_pool(sigma.variables());
            let run = search(phi, sigma, pool, args, mode)?;
            let describe = |f: &VarFlip| ReportedEndo {
                label: f.to_string(),
                changes: vec![Change {
                    function: f.variable.clone(),
                    arguments: Vec::new(),
                    old: sigma.get(&f.variable).map(Atom::Bool),
                    new: Atom::Bool(f.value),
                }],
            };
            summarize(run, describe)
        }
        Loaded::Fol(interp, phi) => {
            let pool = fol_pool(interp, &pools, args)?;
            let run = search(phi, interp, pool, args, mode)?;
            summarize(run, |e: &FolEndo| describe_updates(interp, e.label(), e.updates()))
        }
        Loaded::Layout(snap, spec) => {
            let mut model = to_interpretation(snap, spec);
            let pool = layout_pool(snap, &model.elements, &pools, &args.values)?;
            model.admit(&pool);
            let run = search(&model.formula, &model.interp, pool, args, mode)?;
            summarize(run, |m: &MacroEndomorphism| {
                describe_updates(&model.interp, m.to_string(), m.members())
            })
        }
    };
    let found = !repairs.is_empty();
    let report = RepairReport {
        kind: input.kind.name().into(),
        digest: input.digest,
        pool_size,
        repairs,
        exhausted: reason == Exhaustion::Complete,
        reason: reason.as_str().into(),
    };
    let code = if found { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((render(args.input.format, &report, || report.to_text())?, code))
}

fn describe_updates(interp: &Interpretation, label: String, updates: &[PointUpdate]) -> ReportedEndo {
    ReportedEndo {
        label,
        changes: updates
            .iter()
            .map(|u| Change {
                function: u.function.clone(),
                arguments: u.args.clone(),
                old: interp.lookup(&u.function, &u.args).cloned(),
                new: u.value.clone(),
            })
            .collect(),
    }
}

fn summarize<E: Endomorphism>(
    run: RepairRun<E>,
    describe: impl Fn(&E) -> ReportedEndo,
) -> (usize, Vec<ReportedRepair>, Exhaustion) {
    let repairs = run
        .repairs
        .iter()
        .map(|t| ReportedRepair {
            cardinality: t.len(),
            endomorphisms: t.iter().map(&describe).collect(),
        })
        .collect();
    (run.pool_size, repairs, run.reason)
}

/// Prunes and deduplicates the pool, enforces the size guards, then runs the
/// enumerator or the oracle.
fn search<E, P>(spec: &P, structure: &E::Structure, pool: Vec<E>, args: &RepairArgs, mode: Mode) -> Result<RepairRun<E>>
where
    E: Endomorphism,
    E::Structure: PartialEq,
    P: Spec<E::Structure>,
    P::Error: std::error::Error + Send + Sync + 'static,
{
    let mut pool: Vec<E> = pool
        .into_iter()
        .filter(|e| !args.prune || e.apply(structure) != *structure)
        .collect();
    pool.sort_by_key(|e| e.key());
    pool.dedup_by(|a, b| a.key() == b.key());

    let mut config = SearchConfig::default();
    config.max_cardinality = args.max_card;
    config.max_repairs = args.max_count;
    match mode {
        Mode::Enumerate => {
            if pool.len() > args.pool_cap && !args.force {
                bail!(
                    "pool has {} endomorphisms, over the cap of {}; pass --force or raise REPAIRLAB_POOL_CAP",
                    pool.len(),
                    args.pool_cap
                );
            }
            Ok(enumerate_prime_repairs(spec, structure, pool, config)?)
        }
        Mode::Oracle => {
            if pool.len() > ORACLE_POOL_LIMIT {
                bail!(
                    "pool has {} endomorphisms; the oracle accepts at most {ORACLE_POOL_LIMIT}",
                    pool.len()
                );
            }
            Ok(oracle_run(spec, structure, pool, config)?)
        }
    }
}

fn unary_sort(interp: &Interpretation, pred: &str) -> Result<String> {
    let f = interp.function(pred).ok_or_else(|| anyhow!("no predicate `{pred}`"))?;
    if f.image != Image::Bool || f.args.len() != 1 {
        bail!("`{pred}` must be a unary predicate");
    }
    Ok(f.args[0].clone())
}

fn fol_pool(interp: &Interpretation, pools: &[PoolKind], args: &RepairArgs) -> Result<Vec<FolEndo>> {
    let mut out: Vec<FolEndo> = Vec::new();
    for kind in pools {
        match kind {
            PoolKind::Point => out.extend(fol_endo_pool(interp, None).into_iter().map(FolEndo::from)),
            PoolKind::Colour => {
                let sort = unary_sort(interp, &args.colour_preds[0])?;
                for q in &args.colour_preds[1..] {
                    if unary_sort(interp, q)? != sort {
                        bail!("colour predicates range over different sorts");
                    }
                }
                let preds: Vec<&str> = args.colour_preds.iter().map(String::as_str).collect();
                let vertices = interp.sort(&sort).expect("declared sort");
                out.extend(colour_change_pool(vertices, &preds).into_iter().map(FolEndo::from));
            }
            PoolKind::Edge => {
                let p = &args.edge_pred;
                let f = interp.function(p).ok_or_else(|| anyhow!("no predicate `{p}`"))?;
                if f.image != Image::Bool || f.args.len() != 2 || f.args[0] != f.args[1] {
                    bail!("`{p}` must be a binary predicate over one sort");
                }
                let vertices = interp.sort(&f.args[0]).expect("declared sort");
                out.extend(edge_change_pool(vertices, p).into_iter().map(FolEndo::from));
            }
            other => bail!("pool {other:?} does not apply to first-order instances"),
        }
    }
    Ok(out)
}

fn layout_pool(
    snap: &DomSnapshot,
    elements: &[usize],
    pools: &[PoolKind],
    values: &ValuePolicy,
) -> Result<Vec<MacroEndomorphism>> {
    let mut out = Vec::new();
    for kind in pools {
        let axes: &[Axis] = match kind {
            PoolKind::DisplaceH => &[Axis::Horizontal],
            PoolKind::DisplaceV => &[Axis::Vertical],
            PoolKind::Resize => &[Axis::Width, Axis::Height],
            other => bail!("pool {other:?} does not apply to layouts"),
        };
        for &axis in axes {
            let candidates = candidate_values(snap, axis, values)?;
            out.extend(match axis {
                Axis::Horizontal | Axis::Vertical => displacement_pool(snap, elements, axis, &candidates),
                Axis::Width | Axis::Height => resize_pool(snap, elements, axis, &candidates),
            });
        }
    }
    Ok(out)
}
