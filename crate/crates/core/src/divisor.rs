//! Dual graph of the exceptional divisor with the separatrix, and the
//! topology of each component once the singular locus is removed.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::foliation::DerivedParams;
use crate::resolution::chart::{ComponentId, Label};
use crate::resolution::singular::{Incidence, Shape, SingularComponent};
use crate::resolution::{ResolutionTrace, Stage};

/// Index of a node in a [`DivisorGraph`]: divisor components keep their
/// component id, the separatrix comes last.
pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Created by the `alpha`-th point blow-up.
    Alpha { alpha: usize },
    /// `j`-th monoidal blow-up of the chain over `D_alpha`; `alpha` is absent
    /// for the closing point blow-up of an odd case.
    AlphaJ { alpha: Option<usize>, j: usize },
    /// `j`-th line blow-up over the branch roots.
    Branch { j: usize },
    Separatrix,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Alpha { alpha } => write!(f, "D_{alpha}"),
            Family::AlphaJ { alpha: Some(a), j } => write!(f, "D_{a},{j}"),
            Family::AlphaJ { alpha: None, j } => write!(f, "D_*,{j}"),
            Family::Branch { j } => write!(f, "A_{j}×D"),
            Family::Separatrix => write!(f, "S̃"),
        }
    }
}

/// Homotopy type of a component minus the singular locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TopologyLabel {
    CxC,
    CxCstar,
    CstarxCstar,
    CxTwoPoints,
    CstarxTwoPoints,
    /// `(C*×C) ∖ 𝒞`
    Essential,
    P1xDisc,
}

impl fmt::Display for TopologyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyLabel::CxC => "C×C",
            TopologyLabel::CxCstar => "C×C*",
            TopologyLabel::CstarxCstar => "C*×C*",
            TopologyLabel::CxTwoPoints => "C×(C∖2pts)",
            TopologyLabel::CstarxTwoPoints => "C*×(C∖2pts)",
            TopologyLabel::Essential => "(C*×C)∖𝒞",
            TopologyLabel::P1xDisc => "P¹×D",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjacency {
    pub other: NodeId,
    pub curve: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorComponent {
    pub id: NodeId,
    /// Index of the creating blow-up (absent for the separatrix).
    pub step: Option<usize>,
    pub family: Family,
    /// Absent for the separatrix node.
    pub label: Option<TopologyLabel>,
    pub adjacency: Vec<Adjacency>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    /// First chart, in creation order, where the intersection curve was found.
    pub chart: usize,
    pub curve: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorGraph {
    pub components: Vec<DivisorComponent>,
    pub edges: Vec<Edge>,
    pub separatrix: NodeId,
    pub essential: NodeId,
    pub special: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("incomplete trace: {0}")]
    Incomplete(String),
    #[error("no catalog entry for {0}")]
    UnknownKey(String),
    #[error("essential component is not unique: {0:?}")]
    EssentialNotUnique(Vec<NodeId>),
    #[error("expected {expected} special components, found {found:?}")]
    SpecialMismatch { expected: usize, found: Vec<NodeId> },
    #[error("graph is disconnected; unreachable nodes {0:?}")]
    Disconnected(Vec<NodeId>),
}

/// The parity cases of the monoidal step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionCase {
    /// `d` even.
    I,
    /// `d` odd, one of `p`, `q` even.
    IIb,
    /// `d`, `p`, `q` odd.
    IIc,
}

impl ReductionCase {
    pub fn of(params: &DerivedParams) -> ReductionCase {
        if params.d % 2 == 0 {
            ReductionCase::I
        } else if (params.p % 2 == 0) != (params.q % 2 == 0) {
            ReductionCase::IIb
        } else {
            ReductionCase::IIc
        }
    }

    /// Number of special components this case produces, when it is known.
    pub fn special_count(self) -> Option<usize> {
        match self {
            ReductionCase::I => Some(2),
            ReductionCase::IIb => Some(1),
            ReductionCase::IIc => None,
        }
    }
}

/// Leading continued-fraction digit of `max(p, q)/min(p, q)`.
pub fn leading_digit(params: &DerivedParams) -> usize {
    (params.p.max(params.q) / params.p.min(params.q)) as usize
}

fn family_of(trace: &ResolutionTrace, id: ComponentId) -> Family {
    let c = &trace.components[id];
    match c.stage {
        Stage::I => Family::Alpha { alpha: c.step + 1 },
        Stage::II => {
            let j = trace.components[..=id]
                .iter()
                .filter(|o| o.stage == Stage::II && o.chain_root == c.chain_root)
                .count();
            Family::AlphaJ {
                alpha: c.chain_root.map(|r| r + 1),
                j,
            }
        }
        Stage::III => Family::Branch {
            j: trace.components[..=id].iter().filter(|o| o.stage == Stage::III).count(),
        },
    }
}

/// Human-readable equations of a singular component in its chart.
pub fn describe_component(trace: &ResolutionTrace, s: &SingularComponent) -> String {
    let ch = &trace.charts[s.chart];
    let name = |i: usize| ch.vars[i].clone();
    match &s.shape {
        Shape::CoordinateLine { i, j } => format!("{{{} = 0, {} = 0}}", name(*i), name(*j)),
        Shape::TranslatedLine { i, j, c } => format!("{{{} = 0, {} = {}}}", name(*i), name(*j), c),
        Shape::SeparatrixCurve { i, equation }
        | Shape::Crossing { i, equation, .. }
        | Shape::UnresolvedCurve { i, equation } => format!("{{{} = 0, {} = 0}}", name(*i), equation),
        Shape::Point { coords } => format!("{coords:?}"),
        Shape::UnresolvedPoints { i, eliminant } => format!("{{{} = 0, {} = 0}}", name(*i), eliminant),
    }
}

/// Assembles the dual graph from the final singular locus of `trace`.
pub fn build_graph(trace: &ResolutionTrace) -> Result<DivisorGraph, GraphError> {
    let n = trace.components.len();
    if n == 0 || trace.singular.is_empty() {
        return Err(GraphError::Incomplete("no blow-ups or no singular locus".into()));
    }
    let sep = n;
    let mut edges: BTreeMap<(NodeId, NodeId), Edge> = BTreeMap::new();
    let mut singular: Vec<&SingularComponent> = trace.singular.iter().filter(|s| s.dimension() == 1).collect();
    singular.sort_by_key(|s| s.chart);
    for s in singular {
        let nodes: BTreeSet<NodeId> = s
            .incidence
            .iter()
            .filter_map(|inc| match inc {
                Incidence::Hyper(Label::Divisor(d)) => Some(*d),
                Incidence::Separatrix => Some(sep),
                _ => None,
            })
            .collect();
        let nodes: Vec<NodeId> = nodes.into_iter().collect();
        for (x, &a) in nodes.iter().enumerate() {
            for &b in &nodes[x + 1..] {
                edges.entry((a, b)).or_insert_with(|| Edge {
                    a,
                    b,
                    chart: s.chart,
                    curve: describe_component(trace, s),
                });
            }
        }
    }
    let edges: Vec<Edge> = edges.into_values().collect();
    let mut components: Vec<DivisorComponent> = (0..n)
        .map(|id| DivisorComponent {
            id,
            step: Some(trace.components[id].step),
            family: family_of(trace, id),
            label: None,
            adjacency: Vec::new(),
        })
        .collect();
    components.push(DivisorComponent {
        id: sep,
        step: None,
        family: Family::Separatrix,
        label: None,
        adjacency: Vec::new(),
    });
    for e in &edges {
        components[e.a].adjacency.push(Adjacency {
            other: e.b,
            curve: e.curve.clone(),
        });
        components[e.b].adjacency.push(Adjacency {
            other: e.a,
            curve: e.curve.clone(),
        });
    }
    let meets_sep = |id: NodeId| edges.iter().any(|e| e.b == sep && e.a == id);

    // last Step-II component meeting the separatrix; odd cases add fix-up
    // blow-ups after the chain, so there the chain end is taken instead
    let last_step = trace
        .components
        .iter()
        .filter(|c| c.stage == Stage::II && meets_sep(c.id))
        .map(|c| c.step)
        .max();
    let candidates: Vec<NodeId> = trace
        .components
        .iter()
        .filter(|c| c.stage == Stage::II && Some(c.step) == last_step)
        .map(|c| c.id)
        .collect();
    let essential = match (trace.essential, candidates.as_slice()) {
        (Some(t), [e]) if t == *e => t,
        (Some(t), _) if ReductionCase::of(&trace.params) != ReductionCase::I => t,
        (None, [e]) => *e,
        (t, _) => {
            let mut all = candidates.clone();
            all.extend(t);
            return Err(GraphError::EssentialNotUnique(all));
        }
    };

    let c0 = leading_digit(&trace.params);
    let chain_end = |root: ComponentId| {
        trace
            .components
            .iter()
            .filter(|c| c.chain_link && c.chain_root == Some(root))
            .map(|c| c.id)
            .max()
    };
    let mut special: Vec<NodeId> = [0, c0]
        .into_iter()
        .filter(|&r| r < trace.params.cf.k as usize)
        .filter_map(chain_end)
        .filter(|&id| id != essential && meets_sep(id))
        .collect();
    special.sort();
    special.dedup();

    let mut graph = DivisorGraph {
        components,
        edges,
        separatrix: sep,
        essential,
        special,
    };
    for id in 0..n {
        let label = classify_component(&graph, &trace.params, id)?;
        graph.components[id].label = Some(label);
    }
    let unreachable = unreachable_nodes(&graph);
    if !unreachable.is_empty() {
        return Err(GraphError::Disconnected(unreachable));
    }
    Ok(graph)
}

fn unreachable_nodes(g: &DivisorGraph) -> Vec<NodeId> {
    let mut seen = vec![false; g.components.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for a in &g.components[v].adjacency {
            if !seen[a.other] {
                seen[a.other] = true;
                queue.push_back(a.other);
            }
        }
    }
    (0..seen.len()).filter(|&i| !seen[i]).collect()
}

/// Catalog lookup keyed by family, position of the chain root, and whether
/// the component meets the separatrix.
pub fn classify_component(g: &DivisorGraph, params: &DerivedParams, id: NodeId) -> Result<TopologyLabel, GraphError> {
    let node = g
        .components
        .get(id)
        .ok_or_else(|| GraphError::UnknownKey(format!("node {id}")))?;
    let c0 = leading_digit(params);
    let meets_sep = node.adjacency.iter().any(|a| a.other == g.separatrix);
    match node.family {
        Family::Alpha { alpha: 1 } => Ok(TopologyLabel::CxC),
        Family::Alpha { alpha } if alpha <= c0 + 1 => Ok(TopologyLabel::CxCstar),
        Family::Alpha { .. } => Ok(TopologyLabel::CstarxCstar),
        Family::AlphaJ { .. } if id == g.essential => Ok(TopologyLabel::Essential),
        Family::AlphaJ { alpha: Some(alpha), .. } => Ok(match (alpha <= c0 + 1, meets_sep) {
            (true, false) => TopologyLabel::CxCstar,
            (false, false) => TopologyLabel::CstarxCstar,
            (true, true) => TopologyLabel::CxTwoPoints,
            (false, true) => TopologyLabel::CstarxTwoPoints,
        }),
        Family::Branch { .. } => Ok(TopologyLabel::P1xDisc),
        ref f => Err(GraphError::UnknownKey(format!("{f} (separatrix meet: {meets_sep})"))),
    }
}

pub fn essential_component(g: &DivisorGraph) -> NodeId {
    g.essential
}

pub fn special_components(g: &DivisorGraph) -> &[NodeId] {
    &g.special
}

/// Checks the special-component count against the parity case.
pub fn check_special(g: &DivisorGraph, params: &DerivedParams) -> Result<(), GraphError> {
    match ReductionCase::of(params).special_count() {
        Some(expected) if expected != g.special.len() => Err(GraphError::SpecialMismatch {
            expected,
            found: g.special.clone(),
        }),
        _ => Ok(()),
    }
}

/// DOT rendering; nodes in creation order, separatrix last.
pub fn to_dot(g: &DivisorGraph) -> String {
    let mut out = String::from("graph divisor {\n  node [shape=box];\n");
    for c in &g.components {
        let mut text = c.family.to_string();
        if let Some(l) = c.label {
            text.push_str(&format!("\\n{l}"));
        }
        if let Some(s) = c.step {
            text.push_str(&format!("\\nstep {s}"));
        }
        let mut attrs = format!("label=\"{text}\"");
        if c.id == g.essential {
            attrs.push_str(", style=bold");
        }
        if c.id == g.separatrix {
            attrs.push_str(", shape=ellipse");
        }
        out.push_str(&format!("  n{} [{}];\n", c.id, attrs));
    }
    for e in &g.edges {
        out.push_str(&format!(
            "  n{} -- n{} [label=\"chart {}: {}\"];\n",
            e.a,
            e.b,
            e.chart,
            e.curve.replace('"', "'")
        ));
    }
    out.push_str("}\n");
    out
}
