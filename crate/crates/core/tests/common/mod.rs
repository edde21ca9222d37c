#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use repairlab_core::fol::{
    fol_endo_pool, CmpOp, FolFormula, Interpretation, PointUpdate, Term,
};
use repairlab_core::layout::{parse_spec, BoxPx, DomSnapshot, LayoutSpec, NodeSpec};
use repairlab_core::prop::{PropFormula, Valuation, VarFlip};
use repairlab_core::{
    enumerate_prime_repairs, oracle_prime_repairs, Endomorphism, SearchConfig, Spec,
    Transformation,
};

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Sorted key sets, for order-insensitive comparison of repair lists.
pub fn key_sets<E: Endomorphism>(ts: &[Transformation<E>]) -> BTreeSet<Vec<E::Key>> {
    ts.iter().map(|t| t.keys().cloned().collect()).collect()
}

fn satisfies<E, P>(spec: &P, structure: &E::Structure, t: &Transformation<E>) -> bool
where
    E: Endomorphism,
    P: Spec<E::Structure>,
    P::Error: std::fmt::Debug,
{
    match t.apply(structure) {
        Ok(s) => spec.holds(&s).expect("spec evaluates"),
        Err(_) => false,
    }
}

/// Enumerator against oracle, plus the per-yield soundness and minimality
/// checks. Returns a description of the first discrepancy.
pub fn check_prime_repairs<E, P>(spec: &P, structure: &E::Structure, pool: &[E]) -> Result<usize, String>
where
    E: Endomorphism,
    P: Spec<E::Structure>,
    P::Error: std::fmt::Debug,
{
    let run = enumerate_prime_repairs(spec, structure, pool.to_vec(), SearchConfig::default())
        .map_err(|e| format!("enumerator: {e:?}"))?;
    let oracle = oracle_prime_repairs(spec, structure, pool).map_err(|e| format!("oracle: {e:?}"))?;
    if key_sets(&run.repairs) != key_sets(&oracle) {
        return Err(format!(
            "enumerator {:?} != oracle {:?}",
            key_sets(&run.repairs),
            key_sets(&oracle)
        ));
    }
    for (i, t) in run.repairs.iter().enumerate() {
        if !t.is_well_defined() {
            return Err(format!("{t:?} is ill-defined"));
        }
        if !satisfies(spec, structure, t) {
            return Err(format!("{t:?} does not repair"));
        }
        let members: Vec<E> = t.iter().cloned().collect();
        for mask in 0..(1u32 << members.len()) - 1 {
            let sub: Transformation<E> = members
                .iter()
                .enumerate()
                .filter(|(j, _)| mask & (1 << j) != 0)
                .map(|(_, e)| e.clone())
                .collect();
            if satisfies(spec, structure, &sub) {
                return Err(format!("{t:?} has a repairing proper subset {sub:?}"));
            }
        }
        for (j, u) in run.repairs.iter().enumerate() {
            if i != j && t.is_subset_of(u) {
                return Err(format!("{t:?} is contained in {u:?}"));
            }
        }
    }
    Ok(run.repairs.len())
}

const VARS: [&str; 3] = ["a", "b", "c"];

pub fn random_prop_formula(rng: &mut ChaCha8Rng, vars: &[&str], depth: u32) -> PropFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        return PropFormula::var(vars.choose(rng).unwrap());
    }
    let a = random_prop_formula(rng, vars, depth - 1);
    match rng.gen_range(0..4) {
        0 => a.not(),
        1 => a.and(random_prop_formula(rng, vars, depth - 1)),
        2 => a.or(random_prop_formula(rng, vars, depth - 1)),
        _ => a.implies(random_prop_formula(rng, vars, depth - 1)),
    }
}

pub fn random_prop_instance(rng: &mut ChaCha8Rng) -> (PropFormula, Valuation, Vec<VarFlip>) {
    let n = rng.gen_range(1..=3);
    let vars = &VARS[..n];
    let formula = random_prop_formula(rng, vars, 3);
    let valuation: Valuation = vars.iter().map(|v| (*v, rng.gen_bool(0.5))).collect();
    let mut pool = repairlab_core::prop::prop_endo_pool(vars.iter().copied());
    pool.shuffle(rng);
    pool.truncate(rng.gen_range(1..=pool.len()));
    (formula, valuation, pool)
}

/// Up to two predicates, unary or binary, over a sort of at most 3 elements.
pub fn random_interpretation(rng: &mut ChaCha8Rng) -> (Interpretation, Vec<(String, usize)>) {
    let size = rng.gen_range(1..=3);
    let mut interp = Interpretation::new();
    interp.add_sort("A", (0..size).map(repairlab_core::fol::Atom::Int)).unwrap();
    let mut preds = Vec::new();
    for name in ["p", "q"].iter().take(rng.gen_range(1..=2)) {
        let arity = rng.gen_range(1..=2);
        let args = vec!["A"; arity];
        let tuples = interp.tuples(&args.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        let rows: Vec<_> = tuples.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        interp.add_predicate(name, &args, rows).unwrap();
        preds.push((name.to_string(), arity));
    }
    (interp, preds)
}

fn random_fol_body(
    rng: &mut ChaCha8Rng,
    preds: &[(String, usize)],
    bound: &mut Vec<String>,
    depth: u32,
) -> FolFormula {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf && !bound.is_empty() {
        let term = |rng: &mut ChaCha8Rng, bound: &[String]| Term::var(bound.choose(rng).unwrap());
        if rng.gen_bool(0.2) {
            return FolFormula::cmp(CmpOp::Eq, term(rng, bound), term(rng, bound));
        }
        let (name, arity) = preds.choose(rng).unwrap();
        let args = (0..*arity).map(|_| term(rng, bound)).collect();
        return FolFormula::holds(Term::app(name, args));
    }
    if bound.len() < 2 && (bound.is_empty() || rng.gen_bool(0.4)) {
        let var = ["x", "y"][bound.len()].to_string();
        bound.push(var.clone());
        let body = random_fol_body(rng, preds, bound, depth.saturating_sub(1));
        bound.pop();
        return if rng.gen_bool(0.5) {
            FolFormula::forall(&var, "A", body)
        } else {
            FolFormula::exists(&var, "A", body)
        };
    }
    let a = random_fol_body(rng, preds, bound, depth.saturating_sub(1));
    match rng.gen_range(0..4) {
        0 => a.not(),
        1 => a.and(random_fol_body(rng, preds, bound, depth.saturating_sub(1))),
        2 => a.or(random_fol_body(rng, preds, bound, depth.saturating_sub(1))),
        _ => a.implies(random_fol_body(rng, preds, bound, depth.saturating_sub(1))),
    }
}

pub fn random_fol_formula(rng: &mut ChaCha8Rng, preds: &[(String, usize)]) -> FolFormula {
    random_fol_body(rng, preds, &mut Vec::new(), 4)
}

/// At most `cap` point updates drawn from the full pool.
pub fn random_fol_instance(
    rng: &mut ChaCha8Rng,
    cap: usize,
) -> (FolFormula, Interpretation, Vec<PointUpdate>) {
    let (interp, preds) = random_interpretation(rng);
    let formula = random_fol_formula(rng, &preds);
    let mut pool = fol_endo_pool(&interp, None);
    pool.shuffle(rng);
    pool.truncate(rng.gen_range(1..=cap.min(pool.len())));
    (formula, interp, pool)
}

/// A `#menu` list of one to four items, some with a class and a nested span.
pub fn random_snapshot(rng: &mut ChaCha8Rng) -> DomSnapshot {
    let coords = [0, 10, 20, 30];
    let pick = |rng: &mut ChaCha8Rng| *coords.choose(rng).unwrap();
    let mut root = NodeSpec::new("div", BoxPx::new(0, 0, 100, 100)).with_id("menu");
    for _ in 0..rng.gen_range(1..=4) {
        let mut li = NodeSpec::new("li", BoxPx::new(pick(rng), pick(rng), pick(rng), pick(rng)));
        if rng.gen_bool(0.5) {
            li = li.with_class(["a", "b"].choose(rng).unwrap());
        }
        if rng.gen_bool(0.3) {
            li = li.with_child(NodeSpec::new("span", BoxPx::new(pick(rng), pick(rng), 5, 5)));
        }
        root = root.with_child(li);
    }
    DomSnapshot::from_tree(root)
}

const SELECTORS: [&str; 6] = ["li", "#menu li", "#menu > li", ".a", "li.b", "span"];
const ATTRS: [&str; 6] = ["left", "right", "top", "bottom", "width", "height"];
const OPS: [&str; 3] = ["equals", "is greater than", "is less than"];

fn random_spec_text(rng: &mut ChaCha8Rng, bound: &mut Vec<String>, depth: u32) -> String {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf && !bound.is_empty() {
        let x = bound.choose(rng).unwrap().clone();
        let lhs = format!("{x}'s {}", ATTRS.choose(rng).unwrap());
        let op = OPS.choose(rng).unwrap();
        let rhs = if rng.gen_bool(0.5) {
            format!("{}'s {}", bound.choose(rng).unwrap(), ATTRS.choose(rng).unwrap())
        } else {
            [0, 10, 20, 30].choose(rng).unwrap().to_string()
        };
        return format!("{lhs} {op} {rhs}");
    }
    if bound.len() < 2 && (bound.is_empty() || rng.gen_bool(0.4)) {
        let var = ["$x", "$y"][bound.len()].to_string();
        let sel = SELECTORS.choose(rng).unwrap();
        bound.push(var.clone());
        let body = random_spec_text(rng, bound, depth.saturating_sub(1));
        bound.pop();
        return if rng.gen_bool(0.5) {
            format!("For each {var} in $({sel}) ({body})")
        } else {
            format!("There exists {var} in $({sel}) such that ({body})")
        };
    }
    let a = random_spec_text(rng, bound, depth.saturating_sub(1));
    let b = random_spec_text(rng, bound, depth.saturating_sub(1));
    match rng.gen_range(0..4) {
        0 => format!("Not ({a})"),
        1 => format!("({a}) And ({b})"),
        2 => format!("({a}) Or ({b})"),
        _ => format!("If ({a}) Then ({b})"),
    }
}

pub fn random_layout_spec(rng: &mut ChaCha8Rng) -> (String, LayoutSpec) {
    let text = format!("{}.", random_spec_text(rng, &mut Vec::new(), 4));
    let spec = parse_spec(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
    (text, spec)
}
