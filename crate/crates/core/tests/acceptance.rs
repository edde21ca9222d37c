//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p repairlab-core --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{check_prime_repairs, fixture, key_sets, random_fol_instance, random_layout_spec,
    random_prop_instance, random_snapshot};
use repairlab_core::fol::{
    colour_change_pool, edge_change_pool, eval_fol, fol_endo_pool, load_fol_instance, macro_endo,
    Atom, Env, FolEndo, Interpretation, MacroEndomorphism, PointUpdate,
};
use repairlab_core::layout::{
    candidate_values, displacement_pool, ingest_snapshot, omega, parse_spec,
    to_interpretation, verdict_and, verdict_not, verdict_or, Axis, Truth, ValuePolicy, Verdict,
    WitnessNode,
};
use repairlab_core::prop::{load_prop_instance, prop_endo_pool};
use repairlab_core::{
    enumerate_prime_repairs, oracle_prime_repairs, Endomorphism, SearchConfig, Transformation,
};

/// Criteria whose stated expectation contradicts the definitions they rest
/// on. They are reported as FAIL; the run only requires that they still fail
/// for the documented reason.
const KNOWN_UNATTAINABLE: &[u32] = &[3];

type Outcome = Result<String, String>;

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 8] = [
        (1, "a & b repaired by {b -> true}", Duration::from_secs(1), criterion_1),
        (2, "a -> b repaired by {b -> true} and {a -> false}", Duration::from_secs(1), criterion_2),
        (3, "partner example gives the two singleton repairs", Duration::from_secs(5), criterion_3),
        (4, "graph colouring: enumerator equals oracle", Duration::from_secs(60), criterion_4),
        (5, "misaligned list: move item 2, or items 1, 3 and 4", Duration::from_secs(5), criterion_5),
        (6, "100 random instances agree with the oracle", Duration::from_secs(120), criterion_6),
        (7, "member order does not matter", Duration::from_secs(60), criterion_7),
        (8, "verdict algebra and omega against eval_fol", Duration::from_secs(60), criterion_8),
    ];

    let mut unexpected = Vec::new();
    for (n, title, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match &outcome {
            Ok(detail) => println!("PASS criterion {n}: {title} ({detail}; {elapsed:.2?})"),
            Err(why) => println!("FAIL criterion {n}: {title} ({why}; {elapsed:.2?})"),
        }
        if outcome.is_ok() == KNOWN_UNATTAINABLE.contains(&n) {
            unexpected.push(n);
        }
    }
    println!("SKIP criterion 9: extractor capture (secondary component, not built here)");
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn prop_repairs(file: &str) -> Result<BTreeSet<Vec<(String, bool)>>, String> {
    let inst = load_prop_instance(&fixture(file)).map_err(|e| e.to_string())?;
    let pool = prop_endo_pool(inst.valuation.variables());
    let run = enumerate_prime_repairs(&inst.formula, &inst.valuation, pool, SearchConfig::default())
        .map_err(|e| e.to_string())?;
    Ok(key_sets(&run.repairs))
}

fn flips(sets: &[&[(&str, bool)]]) -> BTreeSet<Vec<(String, bool)>> {
    sets.iter()
        .map(|s| s.iter().map(|(v, b)| (v.to_string(), *b)).collect())
        .collect()
}

fn criterion_1() -> Outcome {
    let got = prop_repairs("prop-and.json")?;
    ensure(got == flips(&[&[("b", true)]]), || format!("got {got:?}"))?;
    Ok("exactly one".into())
}

fn criterion_2() -> Outcome {
    let got = prop_repairs("prop-implies.json")?;
    ensure(got == flips(&[&[("a", false)], &[("b", true)]]), || format!("got {got:?}"))?;
    Ok("exactly two".into())
}

fn point_sets(ts: &[Transformation<PointUpdate>]) -> Vec<String> {
    ts.iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
            format!("{{{}}}", parts.join(", "))
        })
        .collect()
}

fn partner_repairs(file: &str) -> Result<Vec<Transformation<PointUpdate>>, String> {
    let inst = load_fol_instance(&fixture(file)).map_err(|e| e.to_string())?;
    let phi = inst.formula.ok_or("no formula")?;
    let pool = fol_endo_pool(&inst.interp, None);
    ensure(pool.len() == 18, || format!("pool has {} endomorphisms", pool.len()))?;
    let run = enumerate_prime_repairs(&phi, &inst.interp, pool, SearchConfig::default())
        .map_err(|e| e.to_string())?;
    Ok(run.repairs)
}

fn criterion_3() -> Outcome {
    let expected = vec![
        "{p(2,0) ↦ true}".to_string(),
        "{p(2,1) ↦ true}".to_string(),
    ];
    let got = partner_repairs("partner.json")?;
    let got_text = point_sets(&got);
    if got_text == expected {
        return Ok("exactly two".into());
    }
    // With p(1,1) in the table, element 1 also lacks a partner, so every
    // repair needs two writes. Confirm the enumerator is not at fault.
    let inst = load_fol_instance(&fixture("partner.json")).unwrap();
    let phi = inst.formula.unwrap();
    let useful: Vec<PointUpdate> = fol_endo_pool(&inst.interp, None)
        .into_iter()
        .filter(|u| inst.interp.lookup(&u.function, &u.args) != Some(&u.value))
        .collect();
    let oracle = oracle_prime_repairs(&phi, &inst.interp, &useful).map_err(|e| e.to_string())?;
    let agrees = key_sets(&oracle) == key_sets(&got);
    let corrected = point_sets(&partner_repairs("partner-corrected.json")?);
    Err(format!(
        "stated table gives {} (oracle {}); with (1,0) in place of (1,1): {}",
        got_text.join(" "),
        if agrees { "agrees" } else { "DISAGREES" },
        corrected.join(" ")
    ))
}

fn graph_label(m: &MacroEndomorphism) -> String {
    match m.name() {
        "colour" => {
            let on = m.members().iter().find(|u| u.value == Atom::Bool(true)).unwrap();
            format!("colour {} {}", on.args[0], on.function)
        }
        _ => {
            let u = &m.members()[0];
            let (x, y) = (&u.args[0], &u.args[1]);
            let (x, y) = if x <= y { (x, y) } else { (y, x) };
            format!("edge {x}-{y} {}", u.value)
        }
    }
}

fn graph_labels(ts: &[Transformation<FolEndo>]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = ts
        .iter()
        .map(|t| {
            let mut v: Vec<String> = t
                .iter()
                .map(|e| match e {
                    FolEndo::Macro(m) => graph_label(m),
                    FolEndo::Point(p) => p.to_string(),
                })
                .collect();
            v.sort();
            v
        })
        .collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// Drops macros that change nothing or add a loop; neither can be part of a
/// prime repair of the colouring constraints.
fn useful_graph_macro(interp: &Interpretation) -> impl Fn(&FolEndo) -> bool + 'static {
    let interp = interp.clone();
    move |e| {
        let is_loop = e.updates().len() == 1 && e.updates()[0].value == Atom::Bool(true);
        !is_loop && e.apply(&interp) != interp
    }
}

fn criterion_4() -> Outcome {
    let inst = load_fol_instance(&fixture("graph-colouring.json")).map_err(|e| e.to_string())?;
    let phi = inst.formula.ok_or("no formula")?;
    let vertices = inst.interp.sort("A").unwrap().clone();
    let full: Vec<FolEndo> = colour_change_pool(&vertices, &["q1", "q2", "q3"])
        .into_iter()
        .chain(edge_change_pool(&vertices, "p"))
        .map(FolEndo::from)
        .collect();
    ensure(full.len() == 45, || format!("full pool has {}", full.len()))?;

    let keep = useful_graph_macro(&inst.interp);
    let pool: Vec<FolEndo> = full.iter().filter(|e| keep(e)).cloned().collect();
    let config = SearchConfig::default().with_filter(useful_graph_macro(&inst.interp));
    let run = enumerate_prime_repairs(&phi, &inst.interp, full.clone(), config)
        .map_err(|e| e.to_string())?;
    let oracle = oracle_prime_repairs(&phi, &inst.interp, &pool).map_err(|e| e.to_string())?;
    ensure(key_sets(&run.repairs) == key_sets(&oracle), || {
        format!("enumerator {} repairs, oracle {}", run.repairs.len(), oracle.len())
    })?;
    for t in &run.repairs {
        let after = t.apply(&inst.interp).map_err(|e| e.to_string())?;
        ensure(eval_fol(&phi, &after, &Env::new()).unwrap(), || format!("{t:?} does not repair"))?;
    }

    let labels = graph_labels(&run.repairs);
    let frozen: serde_json::Value =
        serde_json::from_str(&fixture("graph-colouring.expected.json")).unwrap();
    let frozen: Vec<Vec<String>> = serde_json::from_value(frozen["prime_repairs"].clone()).unwrap();
    ensure(labels == frozen, || format!("differs from the frozen list: {labels:?}"))?;
    let has = |set: &[&str]| labels.iter().any(|l| l == &set.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    ensure(has(&["colour 5 q2"]) && has(&["colour 5 q3"]), || "no recolouring of vertex 5".into())?;
    ensure(has(&["edge 4-5 false"]), || "no cut of edge 4-5".into())?;

    // The unfiltered pool finds the same repairs up to the largest size seen.
    let largest = run.repairs.iter().map(Transformation::len).max().unwrap_or(0);
    let unfiltered = enumerate_prime_repairs(
        &phi,
        &inst.interp,
        full,
        SearchConfig::default().with_max_cardinality(largest),
    )
    .map_err(|e| e.to_string())?;
    ensure(key_sets(&unfiltered.repairs) == key_sets(&run.repairs), || {
        "unfiltered pool disagrees".into()
    })?;
    Ok(format!("{} prime repairs over {} macros", run.repairs.len(), run.pool_size))
}

fn criterion_5() -> Outcome {
    let snap = ingest_snapshot(&fixture("misaligned-menu.json")).map_err(|e| e.to_string())?;
    let spec = parse_spec(&fixture("align.cp")).map_err(|e| e.to_string())?;

    let verdict = omega(&snap, &spec).map_err(|e| e.to_string())?;
    let item2 = snap.find("0.1").ok_or("no item 2")?;
    ensure(verdict.value == Truth::False, || format!("omega gave {}", verdict.value))?;
    ensure(
        !verdict.w_false.is_empty() && verdict.w_false.iter().all(|w| w.contains(item2)),
        || "a falsehood witness misses item 2".into(),
    )?;

    let mut model = to_interpretation(&snap, &spec);
    let values = candidate_values(&snap, Axis::Horizontal, &ValuePolicy::Observed).unwrap();
    let pool = displacement_pool(&snap, &model.elements, Axis::Horizontal, &values);
    model.admit(&pool);
    let run = enumerate_prime_repairs(&model.formula, &model.interp, pool.clone(), SearchConfig::default())
        .map_err(|e| e.to_string())?;
    let oracle = oracle_prime_repairs(&model.formula, &model.interp, &pool).map_err(|e| e.to_string())?;
    ensure(key_sets(&run.repairs) == key_sets(&oracle), || "enumerator and oracle differ".into())?;

    let moved: Vec<Vec<(String, i64)>> = run
        .repairs
        .iter()
        .map(|t| {
            t.iter()
                .map(|m| {
                    let left = m.members().iter().find(|u| u.function == "left").unwrap();
                    (left.args[0].to_string(), left.value.as_int().unwrap())
                })
                .collect()
        })
        .collect();
    let expected = vec![
        vec![("0.1".to_string(), 40)],
        vec![("0.0".to_string(), 64), ("0.2".to_string(), 64), ("0.3".to_string(), 64)],
    ];
    ensure(moved == expected, || format!("got {moved:?}"))?;
    Ok("two prime repairs, item 2 in every witness".into())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut repairs = 0;
    for i in 0..50 {
        let (phi, sigma, pool) = random_prop_instance(&mut rng);
        repairs += check_prime_repairs(&phi, &sigma, &pool).map_err(|e| format!("prop #{i} {phi}: {e}"))?;
    }
    for i in 0..50 {
        let (phi, interp, pool) = random_fol_instance(&mut rng, 10);
        repairs += check_prime_repairs(&phi, &interp, &pool).map_err(|e| format!("fol #{i}: {e}"))?;
    }
    Ok(format!("{repairs} repairs checked"))
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut orders = 0;
    for i in 0..50 {
        let (_, interp, _) = random_fol_instance(&mut rng, 1);
        let mut candidates = fol_endo_pool(&interp, None);
        candidates.shuffle(&mut rng);
        let mut chosen: Vec<FolEndo> = Vec::new();
        let size = rng.gen_range(1..=4);
        for u in candidates {
            if chosen.len() == size {
                break;
            }
            let endo: FolEndo = if rng.gen_bool(0.3) {
                macro_endo("single", [u]).unwrap().into()
            } else {
                u.into()
            };
            if chosen.iter().all(|c| c.commutes_with(&endo)) {
                chosen.push(endo);
            }
        }
        let t: Transformation<FolEndo> = chosen.iter().cloned().collect();
        ensure(t.is_well_defined(), || format!("#{i} not well defined"))?;
        let reference = t.apply(&interp).unwrap();
        for order in permutations(&chosen) {
            let mut s = interp.clone();
            for e in &order {
                e.apply_in_place(&mut s);
            }
            ensure(s == reference, || format!("#{i}: order {order:?} differs"))?;
            orders += 1;
        }
    }
    Ok(format!("{orders} orders compared"))
}

fn leaf(e: usize) -> WitnessNode {
    WitnessNode::leaf(e)
}

fn node(e: usize, children: Vec<WitnessNode>) -> WitnessNode {
    WitnessNode { element: e, children }
}

fn criterion_8() -> Outcome {
    const V: usize = 9;
    let w_t = vec![leaf(1)];
    let w_f = vec![leaf(2)];
    let w_t2 = vec![leaf(3)];
    let w_f2 = vec![leaf(4)];
    let all = [Truth::True, Truth::False, Truth::Unknown];

    for b in all {
        for b2 in all {
            let lhs = Verdict::new(b, w_t.clone(), w_f.clone());
            let rhs = Verdict::new(b2, w_t2.clone(), w_f2.clone());
            let add = |w: &[WitnessNode], sub: &[WitnessNode]| {
                let mut w = w.to_vec();
                w.push(node(V, sub.to_vec()));
                w
            };
            // The conjunction table, case by case.
            let and = if b2 == Truth::False {
                Verdict::new(Truth::False, w_t.clone(), add(&w_f, &w_f2))
            } else if b != Truth::False && b2 == Truth::Unknown {
                Verdict::new(Truth::Unknown, add(&w_t, &w_t2), w_f.clone())
            } else if b != Truth::False && b2 == Truth::True {
                Verdict::new(b, add(&w_t, &w_t2), w_f.clone())
            } else {
                Verdict::new(b, w_t.clone(), w_f.clone())
            };
            // Its dual, with the roles of true and false exchanged.
            let or = if b2 == Truth::True {
                Verdict::new(Truth::True, add(&w_t, &w_t2), w_f.clone())
            } else if b != Truth::True && b2 == Truth::Unknown {
                Verdict::new(Truth::Unknown, w_t.clone(), add(&w_f, &w_f2))
            } else if b != Truth::True && b2 == Truth::False {
                Verdict::new(b, w_t.clone(), add(&w_f, &w_f2))
            } else {
                Verdict::new(b, w_t.clone(), w_f.clone())
            };
            ensure(verdict_and(lhs.clone(), Some(V), rhs.clone()) == and, || {
                format!("conjunction of {b} and {b2}")
            })?;
            ensure(verdict_or(lhs.clone(), Some(V), rhs) == or, || format!("disjunction of {b} and {b2}"))?;
            ensure(verdict_not(verdict_not(lhs.clone(), None), None) == lhs, || {
                format!("double negation of {b}")
            })?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut falses = 0;
    for i in 0..100 {
        let snap = random_snapshot(&mut rng);
        let (text, spec) = random_layout_spec(&mut rng);
        let v = omega(&snap, &spec).map_err(|e| e.to_string())?;
        let model = to_interpretation(&snap, &spec);
        let expected = eval_fol(&model.formula, &model.interp, &Env::new()).map_err(|e| e.to_string())?;
        ensure(v.value == Truth::from(expected), || format!("#{i} `{text}`: omega {} vs {expected}", v.value))?;
        falses += usize::from(!expected);
    }
    Ok(format!("9 case pairs, 100 random pairs ({falses} false)"))
}
