use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cuspres_core::divisor::{build_graph, check_special, to_dot, DivisorGraph};
use cuspres_core::foliation::{admissibility_check, build_omega, generalized_surface_criterion, hopf_pairing};
use cuspres_core::forms::is_integrable;
use cuspres_core::io::input::{build_input, parse_document};
use cuspres_core::io::{to_json, trace_document, InputError};
use cuspres_core::pi1::{abelianization, presentations, PlaneCurveData};
use cuspres_core::resolution::Stage;
use cuspres_core::{resolve, CuspidalInput, ResolutionTrace, ResolveError, ResolveOptions};

#[derive(Parser)]
#[command(name = "cuspres", version, about = "Reduction of singularities of quasi-homogeneous cuspidal foliations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Admissibility, generalized-surface criterion, integrability and the Hopf identity.
    Check(Common),
    /// Resolve and write the JSON trace.
    Resolve(Common),
    /// Resolve and write the dual graph as DOT.
    Graph(Common),
    /// Fundamental-group presentations of the essential component.
    Pi1(Common),
    /// Everything, as a text report.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// Input document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Output file for the JSON artifact (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output file for the DOT graph.
    #[arg(long)]
    dot_out: Option<PathBuf>,
    /// Step limit for the blow-up driver.
    #[arg(long)]
    guard: Option<usize>,
    /// Order M of the coefficient field Q(ζ_M).
    #[arg(long)]
    field_order: Option<u32>,
    /// Truncate G above this total degree.
    #[arg(long)]
    g_degree: Option<u32>,
}

enum Failure {
    Validation(String),
    Invariant(String),
    Guard(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Invariant(_) => 2,
            Failure::Guard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Invariant(m) | Failure::Guard(m) => m,
        }
    }
}

impl From<ResolveError> for Failure {
    fn from(e: ResolveError) -> Failure {
        match e {
            ResolveError::Inadmissible(r) => Failure::Validation(format!("inadmissible input:\n{r}")),
            e @ ResolveError::GuardExhausted { .. } => Failure::Guard(e.to_string()),
            e => Failure::Invariant(e.to_string()),
        }
    }
}

fn load(c: &Common) -> Result<CuspidalInput, Failure> {
    let text = fs::read_to_string(&c.input)
        .map_err(|e| Failure::Validation(format!("{}: {e}", c.input.display())))?;
    let mut doc = parse_document(&text).map_err(|e| Failure::Validation(e.to_string()))?;
    if c.field_order.is_some() {
        doc.field_order = c.field_order;
    }
    if c.g_degree.is_some() {
        doc.g_truncation = c.g_degree;
    }
    build_input(&doc).map_err(|e: InputError| Failure::Validation(e.to_string()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Validation(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn resolved(c: &Common, input: &CuspidalInput) -> Result<ResolutionTrace, Failure> {
    Ok(resolve(input, &ResolveOptions { guard: c.guard })?)
}

fn verified(trace: &ResolutionTrace) -> Result<(), Failure> {
    trace
        .shapes
        .verify(&trace.params)
        .map_err(|e| Failure::Invariant(e.to_string()))?;
    if let Some(s) = trace.singular.iter().find(|s| !s.is_simple()) {
        return Err(Failure::Invariant(format!(
            "non-simple singular component in chart {}: {:?}",
            s.chart, s.simplicity
        )));
    }
    Ok(())
}

fn graph_of(trace: &ResolutionTrace) -> Result<DivisorGraph, Failure> {
    let g = build_graph(trace).map_err(|e| Failure::Invariant(e.to_string()))?;
    check_special(&g, &trace.params).map_err(|e| Failure::Invariant(e.to_string()))?;
    Ok(g)
}

fn check(c: &Common) -> Result<(), Failure> {
    let input = load(c)?;
    let report = admissibility_check(&input);
    let mut out = String::new();
    let verdict = if report.is_admissible() { "ok" } else { "rejected" };
    writeln!(out, "{:<22} {verdict}", "admissibility").unwrap();
    for v in &report.violations {
        writeln!(out, "{:<22} [{}] {}", "", v.clause, v.detail).unwrap();
    }
    for w in &report.warnings {
        writeln!(out, "{:<22} warning: {w}", "").unwrap();
    }
    if !report.is_admissible() {
        print!("{out}");
        return Err(Failure::Validation("input is not admissible".into()));
    }
    let params = cuspres_core::foliation::derive_params(&input);
    let surface = generalized_surface_criterion(&input.g, params.r);
    let integrable = is_integrable(&build_omega(&input).omega);
    let hopf = hopf_pairing(&input);
    writeln!(out, "{:<22} {:?}", "generalized surface", surface).unwrap();
    writeln!(out, "{:<22} {}", "Ω∧dΩ = 0", if integrable { "ok" } else { "FAILED" }).unwrap();
    writeln!(out, "{:<22} {}", "Hopf residual", hopf.residual).unwrap();
    print!("{out}");
    if !integrable || !hopf.residual.is_zero() {
        return Err(Failure::Invariant("pre-normal form failed an identity".into()));
    }
    Ok(())
}

fn pi1_text(trace: &ResolutionTrace) -> Result<(String, serde_json::Value), Failure> {
    let (raw, simplified) = presentations(trace).map_err(|e| Failure::Invariant(e.to_string()))?;
    let curve = PlaneCurveData::from_trace(trace);
    let (ab_raw, ab_simplified) = (abelianization(&raw), abelianization(&simplified));
    let mut out = String::new();
    writeln!(out, "curve: {} = 0", curve.equation).unwrap();
    writeln!(out, "\n[raw]\n{raw}abelianization (b-free relations): {ab_raw}").unwrap();
    writeln!(out, "\n[simplified]\n{simplified}abelianization: {ab_simplified}").unwrap();
    let json = serde_json::json!({
        "curve": curve.equation.to_string(),
        "r": curve.r,
        "raw": raw,
        "raw_abelianization": ab_raw,
        "simplified": simplified,
        "simplified_abelianization": ab_simplified,
    });
    Ok((out, json))
}

fn report(c: &Common) -> Result<(), Failure> {
    let input = load(c)?;
    let trace = resolved(c, &input)?;
    let p = &trace.params;
    let mut out = String::new();
    writeln!(out, "p = {}, q = {}, δ = {}, d = {}, r = {}", p.p, p.q, p.delta, p.d, p.r).unwrap();
    writeln!(out, "continued fraction {:?}, k = {}", p.cf.digits, p.cf.k).unwrap();
    writeln!(
        out,
        "blow-ups: step I {}, step II {}, step III {}",
        trace.steps_in(Stage::I),
        trace.steps_in(Stage::II),
        trace.steps_in(Stage::III)
    )
    .unwrap();
    let shapes = trace.shapes.verify(p);
    writeln!(out, "shapes: {}", shapes.as_ref().map_or_else(|e| e.to_string(), |_| "ok".into())).unwrap();
    let simple = trace.singular.iter().filter(|s| s.is_simple()).count();
    writeln!(out, "singular components: {} ({} simple)", trace.singular.len(), simple).unwrap();
    let graph = graph_of(&trace);
    if let Ok(g) = &graph {
        writeln!(out, "\ndivisor components:").unwrap();
        for n in &g.components {
            let label = n.label.map_or("-".to_string(), |l| l.to_string());
            let adj: Vec<String> = n.adjacency.iter().map(|a| g.components[a.other].family.to_string()).collect();
            writeln!(out, "  {:<10} {:<14} meets {}", n.family.to_string(), label, adj.join(", ")).unwrap();
        }
        writeln!(out, "essential: {}", g.components[g.essential].family).unwrap();
        let special: Vec<String> = g.special.iter().map(|&s| g.components[s].family.to_string()).collect();
        writeln!(out, "special: {}", special.join(", ")).unwrap();
        if let Some(path) = &c.dot_out {
            emit(Some(path), &to_dot(g))?;
        }
    }
    let (pi1, _) = pi1_text(&trace)?;
    writeln!(out, "\n{pi1}").unwrap();
    print!("{out}");
    if let Some(path) = &c.out {
        emit(Some(path), &to_json(&trace_document(&trace)))?;
    }
    verified(&trace)?;
    graph.map(|_| ())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check(c) => check(&c),
        Command::Resolve(c) => {
            let input = load(&c)?;
            let trace = resolved(&c, &input)?;
            emit(c.out.as_deref(), &to_json(&trace_document(&trace)))?;
            verified(&trace)
        }
        Command::Graph(c) => {
            let input = load(&c)?;
            let trace = resolved(&c, &input)?;
            let g = graph_of(&trace)?;
            emit(c.dot_out.as_deref().or(c.out.as_deref()), &to_dot(&g))
        }
        Command::Pi1(c) => {
            let input = load(&c)?;
            let trace = resolved(&c, &input)?;
            let (text, json) = pi1_text(&trace)?;
            print!("{text}");
            if let Some(path) = &c.out {
                emit(Some(path), &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))?;
            }
            Ok(())
        }
        Command::Report(c) => report(&c),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
