//! The acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cuspres_core::divisor::{build_graph, check_special, leading_digit, DivisorGraph, Family, ReductionCase, TopologyLabel};
use cuspres_core::foliation::{build_omega, derive_params, hopf_pairing};
use cuspres_core::forms::is_integrable;
use cuspres_core::io::{from_json, replay, to_json, trace_document};
use cuspres_core::numeric::rat;
use cuspres_core::pi1::{abelianization, presentations, simplified_presentation};
use cuspres_core::resolution::{resolve_step_i, Stage};
use cuspres_core::{resolve, CuspidalInput, ResolutionTrace, ResolveOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

type Outcome = Result<String, String>;

const PAIRS: [(u32, u32); 3] = [(2, 3), (2, 5), (3, 4)];

fn multiplicities() -> Vec<Vec<u32>> {
    vec![vec![2], vec![2, 4], vec![3, 3]]
}

fn input(p: u32, q: u32, ds: &[u32]) -> CuspidalInput {
    let branches: Vec<(i64, u32)> = ds.iter().enumerate().map(|(i, &d)| (i as i64 + 1, d)).collect();
    CuspidalInput::from_integers(p, q, &branches, &[])
}

struct Instance {
    name: String,
    trace: ResolutionTrace,
    elapsed: Duration,
}

fn battery() -> Vec<Instance> {
    let mut out = Vec::new();
    for (p, q) in PAIRS {
        for ds in multiplicities() {
            let t0 = Instant::now();
            let trace = resolve(&input(p, q, &ds), &ResolveOptions::default()).expect("battery instance resolves");
            out.push(Instance {
                name: format!("({p},{q},{ds:?})"),
                trace,
                elapsed: t0.elapsed(),
            });
        }
    }
    out
}

fn random_inputs() -> Vec<CuspidalInput> {
    let mut rng = ChaCha8Rng::seed_from_u64(20240603);
    (0..25)
        .map(|_| {
            let p = rng.gen_range(2..=5);
            let q = rng.gen_range(2..=5);
            let l = rng.gen_range(1..=3);
            // distinct positive b give distinct a = b^δ
            let branches: Vec<(i64, u32)> = (0..l).map(|i| (i as i64 + 1, rng.gen_range(1..=3))).collect();
            let mut g = Vec::new();
            for _ in 0..rng.gen_range(0..=4) {
                let a = rng.gen_range(0..=4);
                let b = rng.gen_range(0..=4 - a);
                g.push((a, b, rng.gen_range(-3..=3)));
            }
            CuspidalInput::from_integers(p, q, &branches, &g)
        })
        .collect()
}

fn step_count_law() -> Outcome {
    let mut slowest = Duration::ZERO;
    for p in 2..=12u32 {
        for q in 2..=12u32 {
            let inp = input(p, q, &[2]);
            let t0 = Instant::now();
            let (steps, _) = resolve_step_i(&inp).map_err(|e| format!("({p},{q}): {e}"))?;
            let cf = derive_params(&inp).cf;
            slowest = slowest.max(t0.elapsed());
            if steps as u64 != cf.digits.iter().sum::<u64>() {
                return Err(format!("({p},{q}): {steps} blow-ups, digits {:?}", cf.digits));
            }
            if cf.evaluate() != rat(p as i64, q as i64) {
                return Err(format!("({p},{q}): digits {:?} do not evaluate to p/q", cf.digits));
            }
        }
    }
    if slowest > Duration::from_secs(1) {
        return Err(format!("slowest pair took {slowest:?}"));
    }
    Ok(format!("121 pairs, slowest {slowest:?}"))
}

fn integrability() -> Outcome {
    let t0 = Instant::now();
    for (n, inp) in random_inputs().iter().enumerate() {
        if !is_integrable(&build_omega(inp).omega) {
            return Err(format!("input {n} (p={}, q={}) is not integrable", inp.p, inp.q));
        }
    }
    let dt = t0.elapsed();
    if dt > Duration::from_secs(10) {
        return Err(format!("took {dt:?}"));
    }
    Ok(format!("25 random inputs in {dt:?}"))
}

fn hopf_identity() -> Outcome {
    for (n, inp) in random_inputs().iter().enumerate() {
        let h = hopf_pairing(inp);
        if !h.residual.is_zero() {
            return Err(format!("input {n}: residual {}", h.residual));
        }
    }
    Ok("25 random inputs, zero residual".into())
}

fn shape_conformance(b: &[Instance]) -> Outcome {
    for i in b {
        i.trace
            .shapes
            .verify(&i.trace.params)
            .map_err(|e| format!("{}: {e}", i.name))?;
        if i.elapsed > Duration::from_secs(120) {
            return Err(format!("{} took {:?}", i.name, i.elapsed));
        }
    }
    let slowest = b.iter().map(|i| i.elapsed).max().unwrap_or_default();
    Ok(format!("{} instances, slowest {slowest:?}", b.len()))
}

fn full_simplicity(b: &[Instance]) -> Outcome {
    let mut total = 0;
    for i in b {
        if let Some(s) = i.trace.singular.iter().find(|s| !s.is_simple()) {
            return Err(format!("{}: chart {} {:?} {:?}", i.name, s.chart, s.shape, s.simplicity));
        }
        total += i.trace.singular.len();
    }
    Ok(format!("{total} singular components, all simple"))
}

fn expected_alpha_label(alpha: usize, c0: usize) -> TopologyLabel {
    if alpha == 1 {
        TopologyLabel::CxC
    } else if alpha <= c0 + 1 {
        TopologyLabel::CxCstar
    } else {
        TopologyLabel::CstarxCstar
    }
}

fn check_catalog(name: &str, trace: &ResolutionTrace, g: &DivisorGraph) -> Result<(), String> {
    let p = &trace.params;
    let c0 = (p.p.max(p.q) / p.p.min(p.q)) as usize;
    assert_eq!(c0, leading_digit(p));
    for c in &trace.components {
        let node = &g.components[c.id];
        if c.stage == Stage::I {
            let want = expected_alpha_label(c.step + 1, c0);
            if node.label != Some(want) {
                return Err(format!("{name}: {} labelled {:?}, expected {want}", node.family, node.label));
            }
        }
    }
    let essential: Vec<usize> = g
        .components
        .iter()
        .filter(|n| n.label == Some(TopologyLabel::Essential))
        .map(|n| n.id)
        .collect();
    if essential != [g.essential] || trace.essential != Some(g.essential) {
        return Err(format!("{name}: essential labels on {essential:?}"));
    }
    if !matches!(g.components[g.essential].family, Family::AlphaJ { .. }) {
        return Err(format!("{name}: essential component is not from the monoidal step"));
    }
    check_special(g, p).map_err(|e| format!("{name}: {e}"))?;
    Ok(())
}

fn topology_catalog(b: &[Instance]) -> Outcome {
    let mut counts = Vec::new();
    for i in b {
        let g = build_graph(&i.trace).map_err(|e| format!("{}: {e}", i.name))?;
        check_catalog(&i.name, &i.trace, &g)?;
        if ReductionCase::of(&i.trace.params) != ReductionCase::I || g.special.len() != 2 {
            return Err(format!("{}: expected Case i with 2 special components", i.name));
        }
        counts.push(g.special.len());
    }
    // a Case ii.b instance: d odd, p even, q odd
    let trace = resolve(&input(2, 3, &[3]), &ResolveOptions::default()).map_err(|e| e.to_string())?;
    let g = build_graph(&trace).map_err(|e| format!("(2,3,[3]): {e}"))?;
    check_catalog("(2,3,[3])", &trace, &g)?;
    if ReductionCase::of(&trace.params) != ReductionCase::IIb || g.special.len() != 1 {
        return Err(format!("(2,3,[3]): special components {:?}", g.special));
    }
    Ok(format!("battery special counts {counts:?}, Case ii.b count 1"))
}

fn pi1_abelianization(b: &[Instance]) -> Outcome {
    let t0 = Instant::now();
    for r in 2..=8u32 {
        let ab = abelianization(&simplified_presentation(r));
        let ok = if r % 2 == 1 {
            ab.free_rank == 3 && ab.torsion.is_empty()
        } else {
            ab.free_rank == 2 && ab.torsion == [2]
        };
        if !ok {
            return Err(format!("r = {r}: {ab}"));
        }
    }
    for i in b {
        let (_, simplified) = presentations(&i.trace).map_err(|e| e.to_string())?;
        let want = if i.trace.params.r % 2 == 1 { "Z^3" } else { "Z^2 ⊕ Z/2" };
        if abelianization(&simplified).to_string() != want {
            return Err(format!("{}: {}", i.name, abelianization(&simplified)));
        }
    }
    let dt = t0.elapsed();
    if dt > Duration::from_secs(1) {
        return Err(format!("took {dt:?}"));
    }
    Ok(format!("r = 2..8 and the battery traces, {dt:?}"))
}

fn replay_oracle(b: &[Instance]) -> Outcome {
    let mut charts = 0;
    for i in b.iter().step_by(4).take(3) {
        let text = to_json(&trace_document(&i.trace));
        let doc = from_json(&text).map_err(|e| format!("{}: {e}", i.name))?;
        let rep = replay(&doc).map_err(|e| format!("{}: {e}", i.name))?;
        if !rep.is_exact() {
            return Err(format!("{}: {rep:?}", i.name));
        }
        charts += rep.charts;
    }
    Ok(format!("3 instances, {charts} chart forms reproduced"))
}

#[derive(Deserialize)]
struct FixtureNode {
    name: String,
    ray: Option<[i64; 3]>,
    label: Option<String>,
}

#[derive(Deserialize)]
struct Fixture {
    nodes: Vec<FixtureNode>,
    edges: Vec<(String, String)>,
    essential: String,
    special: Vec<String>,
}

fn oracle_equivalence(b: &[Instance]) -> Outcome {
    let fixture: Fixture = serde_json::from_str(include_str!("fixtures/cusp_2_3_2.json")).map_err(|e| e.to_string())?;
    let trace = &b[0].trace;
    let g = build_graph(trace).map_err(|e| e.to_string())?;
    let name = |id: usize| g.components[id].family.to_string();
    if g.components.len() != fixture.nodes.len() {
        return Err(format!("{} nodes, fixture has {}", g.components.len(), fixture.nodes.len()));
    }
    for f in &fixture.nodes {
        let node = g
            .components
            .iter()
            .find(|n| n.family.to_string() == f.name)
            .ok_or_else(|| format!("missing node {}", f.name))?;
        let ray = trace.components.get(node.id).and_then(|c| c.ray);
        let label = node.label.map(|l| l.to_string());
        if ray != f.ray || label != f.label {
            return Err(format!("{}: ray {ray:?} label {label:?}", f.name));
        }
    }
    let norm = |a: &str, b: &str| if a < b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
    let want: BTreeSet<(String, String)> = fixture.edges.iter().map(|(a, b)| norm(a, b)).collect();
    let got: BTreeSet<(String, String)> = g.edges.iter().map(|e| norm(&name(e.a), &name(e.b))).collect();
    if want != got {
        let missing: Vec<_> = want.difference(&got).collect();
        let extra: Vec<_> = got.difference(&want).collect();
        return Err(format!("edges differ: missing {missing:?}, extra {extra:?}"));
    }
    let special: Vec<String> = g.special.iter().map(|&s| name(s)).collect();
    if name(g.essential) != fixture.essential || special != fixture.special {
        return Err(format!("essential {}, special {special:?}", name(g.essential)));
    }
    Ok(format!("{} nodes, {} edges match", g.components.len(), got.len()))
}

fn run(n: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    match outcome {
        Ok(msg) => {
            println!("criterion {n} PASS  {title}: {msg}");
            true
        }
        Err(msg) => {
            println!("criterion {n} FAIL  {title}: {msg}");
            false
        }
    }
}

fn main() {
    let b = battery();
    let results = [
        run(1, "step-count law", step_count_law),
        run(2, "integrability", integrability),
        run(3, "Hopf identity", hopf_identity),
        run(4, "shape conformance", || shape_conformance(&b)),
        run(5, "full simplicity", || full_simplicity(&b)),
        run(6, "topology catalog", || topology_catalog(&b)),
        run(7, "π₁ abelianization", || pi1_abelianization(&b)),
        run(8, "replay oracle", || replay_oracle(&b)),
        run(9, "oracle equivalence", || oracle_equivalence(&b)),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
