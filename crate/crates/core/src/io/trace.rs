//! Versioned JSON encoding of a resolution trace and an independent replay.
//!
//! Scalars are lists of power-basis coefficients (rational strings), polynomials
//! are lists of `[exponents, scalar]` terms in the engine's term order, and
//! chart maps and 1-forms are lists of polynomials. Object keys are sorted.

use serde::{Deserialize, Serialize};

use crate::divisor::describe_component;
use crate::error::FormError;
use crate::foliation::{ambient_vars, build_omega, CuspidalInput, DerivedParams};
use crate::forms::{OneForm, PolyMap};
use crate::io::input::{build_input, GTermDoc, InputDocument, InputError, RationalDoc, ScalarDoc};
use crate::io::input::BranchDoc;
use crate::numeric::{Field, Rational};
use crate::poly::{Monomial, MultiPoly, Vars};
use crate::resolution::chart::{self, Center, ChartId, ComponentId, Label};
use crate::resolution::shapes::ShapeReport;
use crate::resolution::singular::{Incidence, Simplicity};
use crate::resolution::{BlowupStep, CenterKind, ComponentInfo, ResolutionTrace, Stage};
use crate::CycloScalar;

pub const SCHEMA: &str = "cuspres-trace";
pub const VERSION: u32 = 1;

pub type ScalarJson = Vec<String>;
pub type PolyJson = Vec<(Vec<u32>, ScalarJson)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartJson {
    pub id: ChartId,
    pub parent: Option<ChartId>,
    pub step: Option<usize>,
    pub labels: [Label; 3],
    pub rays: Option<[[i64; 3]; 3]>,
    pub to_parent: Vec<PolyJson>,
    pub to_origin: Vec<PolyJson>,
    pub form: Vec<PolyJson>,
    pub separatrix: PolyJson,
    pub extra: Vec<(Label, PolyJson)>,
    pub domain: Vec<Vec<PolyJson>>,
    pub leaf: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub id: ComponentId,
    pub step: usize,
    pub stage: Stage,
    pub kind: CenterKind,
    pub ray: Option<[i64; 3]>,
    pub center: Vec<Label>,
    pub chain_root: Option<ComponentId>,
    pub chain_link: bool,
    pub branch_root: Option<ScalarJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterJson {
    pub chart: ChartId,
    pub coords: Vec<usize>,
    pub shifts: Vec<Option<ScalarJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub index: usize,
    pub stage: Stage,
    pub kind: CenterKind,
    pub component: ComponentId,
    pub centers: Vec<CenterJson>,
    pub children: Vec<ChartId>,
    pub multiplicities: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularJson {
    pub chart: ChartId,
    pub dimension: u8,
    pub shape: String,
    pub incidence: Vec<Incidence>,
    pub simplicity: Option<Simplicity>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub schema: String,
    pub version: u32,
    pub input: InputDocument,
    pub params: DerivedParams,
    pub guard: usize,
    pub vars: Vec<String>,
    pub charts: Vec<ChartJson>,
    pub components: Vec<ComponentJson>,
    pub steps: Vec<StepJson>,
    pub step_i_chart: ChartId,
    pub step_ii_chart: Option<ChartId>,
    pub essential: Option<ComponentId>,
    pub singular: Vec<SingularJson>,
    pub shapes: ShapeReport,
}

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error("not a trace document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {schema:?} version {version}")]
    Schema { schema: String, version: u32 },
    #[error("embedded input: {0}")]
    Input(#[from] InputError),
    #[error("chart {chart}: {message}")]
    Malformed { chart: ChartId, message: String },
    #[error(transparent)]
    Form(#[from] FormError),
}

pub fn scalar_json(c: &CycloScalar) -> ScalarJson {
    c.coeffs().iter().map(|q| q.to_string()).collect()
}

pub fn scalar_from_json(s: &ScalarJson, field: &Field) -> Option<CycloScalar> {
    let coeffs = s.iter().map(|t| t.parse::<Rational>().ok()).collect::<Option<Vec<_>>>()?;
    Some(field.from_coeffs(coeffs))
}

pub fn poly_json(p: &MultiPoly) -> PolyJson {
    p.terms().map(|(m, c)| (m.0.clone(), scalar_json(c))).collect()
}

pub fn poly_from_json(p: &PolyJson, vars: &Vars, field: &Field) -> Option<MultiPoly> {
    let terms = p
        .iter()
        .map(|(e, c)| {
            if e.len() != vars.len() {
                return None;
            }
            Some((Monomial(e.clone()), scalar_from_json(c, field)?))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(MultiPoly::from_terms(vars, field, terms))
}

fn polys_json(ps: &[MultiPoly]) -> Vec<PolyJson> {
    ps.iter().map(poly_json).collect()
}

fn input_document(input: &CuspidalInput) -> InputDocument {
    let scalar = |c: &CycloScalar| ScalarDoc::Coeffs {
        coeffs: c.coeffs().iter().map(|q| RationalDoc::Text(q.to_string())).collect(),
    };
    InputDocument {
        p: input.p,
        q: input.q,
        branches: input
            .branches
            .iter()
            .map(|b| BranchDoc { b: scalar(&b.b), d: b.d })
            .collect(),
        g: input
            .g
            .terms()
            .map(|(m, c)| GTermDoc {
                psi: m.0[0],
                z: m.0[1],
                c: scalar(c),
            })
            .collect(),
        field_order: Some(input.field.order()),
        g_truncation: input.g_truncation,
    }
}

pub fn step_json(s: &BlowupStep) -> StepJson {
    StepJson {
        index: s.index,
        stage: s.stage,
        kind: s.kind,
        component: s.component,
        centers: s
            .centers
            .iter()
            .map(|(chart, c)| CenterJson {
                chart: *chart,
                coords: c.coords.clone(),
                shifts: c.shifts.iter().map(|x| x.as_ref().map(scalar_json)).collect(),
            })
            .collect(),
        children: s.children.clone(),
        multiplicities: s.multiplicities.clone(),
    }
}

pub fn step_from_json(s: &StepJson, field: &Field) -> Option<BlowupStep> {
    let centers = s
        .centers
        .iter()
        .map(|c| {
            let shifts = c
                .shifts
                .iter()
                .map(|x| match x {
                    Some(v) => scalar_from_json(v, field).map(Some),
                    None => Some(None),
                })
                .collect::<Option<Vec<_>>>()?;
            Some((
                c.chart,
                Center {
                    coords: c.coords.clone(),
                    shifts,
                },
            ))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(BlowupStep {
        index: s.index,
        stage: s.stage,
        kind: s.kind,
        component: s.component,
        centers,
        children: s.children.clone(),
        multiplicities: s.multiplicities.clone(),
    })
}

fn component_json(c: &ComponentInfo) -> ComponentJson {
    ComponentJson {
        id: c.id,
        step: c.step,
        stage: c.stage,
        kind: c.kind,
        ray: c.ray,
        center: c.center.clone(),
        chain_root: c.chain_root,
        chain_link: c.chain_link,
        branch_root: c.branch_root.as_ref().map(scalar_json),
    }
}

pub fn trace_document(trace: &ResolutionTrace) -> TraceDocument {
    TraceDocument {
        schema: SCHEMA.into(),
        version: VERSION,
        input: input_document(&trace.input),
        params: trace.params.clone(),
        guard: trace.guard,
        vars: ambient_vars().to_vec(),
        charts: trace
            .charts
            .iter()
            .map(|c| ChartJson {
                id: c.id,
                parent: c.parent,
                step: c.step,
                labels: c.labels,
                rays: c.rays,
                to_parent: polys_json(&c.to_parent.images),
                to_origin: polys_json(&c.to_origin.images),
                form: polys_json(&c.form.dense_components()),
                separatrix: poly_json(&c.separatrix),
                extra: c.extra.iter().map(|(l, f)| (*l, poly_json(f))).collect(),
                domain: c.domain.iter().map(|s| polys_json(s)).collect(),
                leaf: c.leaf,
            })
            .collect(),
        components: trace.components.iter().map(component_json).collect(),
        steps: trace.steps.iter().map(step_json).collect(),
        step_i_chart: trace.step_i_chart,
        step_ii_chart: trace.step_ii_chart,
        essential: trace.essential,
        singular: trace
            .singular
            .iter()
            .map(|s| SingularJson {
                chart: s.chart,
                dimension: s.dimension(),
                shape: describe_component(trace, s),
                incidence: s.incidence.clone(),
                simplicity: s.simplicity.clone(),
            })
            .collect(),
        shapes: trace.shapes.clone(),
    }
}

/// Pretty JSON with sorted keys; byte-identical for identical traces.
pub fn to_json(doc: &TraceDocument) -> String {
    let value = serde_json::to_value(doc).expect("trace documents serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<TraceDocument, TraceError> {
    let doc: TraceDocument = serde_json::from_str(text)?;
    if doc.schema != SCHEMA || doc.version != VERSION {
        return Err(TraceError::Schema {
            schema: doc.schema,
            version: doc.version,
        });
    }
    Ok(doc)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub charts: usize,
    /// Charts whose stored `to_origin` differs from the composed `to_parent` chain.
    pub map_mismatches: Vec<ChartId>,
    /// Charts whose stored form differs from the recomputed strict transform.
    pub form_mismatches: Vec<ChartId>,
}

impl ReplayReport {
    pub fn is_exact(&self) -> bool {
        self.map_mismatches.is_empty() && self.form_mismatches.is_empty()
    }
}

/// Rebuilds `Ω` from the embedded input and re-derives every chart's map and
/// form from its parent's, comparing against the stored values.
pub fn replay(doc: &TraceDocument) -> Result<ReplayReport, TraceError> {
    let input = build_input(&doc.input)?;
    let field = input.field.clone();
    let vars: Vars = std::sync::Arc::new(doc.vars.clone());
    let malformed = |chart: ChartId, message: &str| TraceError::Malformed {
        chart,
        message: message.to_string(),
    };
    let polys = |chart: ChartId, ps: &[PolyJson]| -> Result<Vec<MultiPoly>, TraceError> {
        ps.iter()
            .map(|p| poly_from_json(p, &vars, &field).ok_or_else(|| malformed(chart, "bad polynomial")))
            .collect()
    };
    let mut report = ReplayReport {
        charts: doc.charts.len(),
        ..ReplayReport::default()
    };
    let mut origins: Vec<PolyMap> = Vec::with_capacity(doc.charts.len());
    let mut forms: Vec<OneForm> = Vec::with_capacity(doc.charts.len());
    for (n, c) in doc.charts.iter().enumerate() {
        if c.id != n {
            return Err(malformed(c.id, "charts out of order"));
        }
        let stored_form = OneForm::one_form(polys(n, &c.form)?);
        let stored_origin = PolyMap::new(&vars, &vars, polys(n, &c.to_origin)?);
        let (origin, form) = match c.parent {
            None => (PolyMap::identity(&vars, &field), build_omega(&input).omega),
            Some(p) if p < n => {
                let to_parent = PolyMap::new(&vars, &vars, polys(n, &c.to_parent)?);
                let exceptional: Vec<usize> = (0..3).filter(|&i| matches!(c.labels[i], Label::Divisor(_))).collect();
                let pulled = forms[p].pullback(&to_parent)?;
                let (_, form) = chart::strict_transform_form(&pulled, &exceptional)?;
                (origins[p].compose(&to_parent)?, form)
            }
            Some(_) => return Err(malformed(n, "parent after child")),
        };
        if origin != stored_origin {
            report.map_mismatches.push(n);
        }
        if form != stored_form {
            report.form_mismatches.push(n);
        }
        origins.push(origin);
        forms.push(form);
    }
    Ok(report)
}
