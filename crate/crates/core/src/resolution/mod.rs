//! Reduction of singularities by blow-ups along coordinate centers.
//!
//! Steps I and II are toric: every chart is a cone of the fan generated by
//! the valuation rays of the divisors, and a center is named by the global
//! hypersurfaces it is the intersection of. Step III blows up the lines over
//! the branch roots, which starts with a translation.

pub mod chart;
pub mod corner;
pub mod shapes;
pub mod singular;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chart::{Center, Chart, ChartId, ComponentId, Label, Z_PLANE};
pub use shapes::{ShapeReport, StepIShape, StepIIShape};
pub use singular::{Incidence, LinearType, Shape, Simplicity, SingularComponent};

use crate::error::FormError;
use crate::foliation::{admissibility_check, ambient_vars, build_omega, derive_params, CuspidalInput, DerivedParams, ValidationReport};
use crate::forms::PolyMap;
use crate::numeric::cf::subtractive_walk;
use crate::numeric::CycloScalar;
use crate::poly::{Monomial, MultiPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stage {
    I,
    II,
    III,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CenterKind {
    Point,
    Line,
}

/// An irreducible component of the exceptional divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentInfo {
    pub id: ComponentId,
    pub step: usize,
    pub stage: Stage,
    pub kind: CenterKind,
    /// Valuation vector `(ord x, ord y, ord z)` for toric components.
    pub ray: Option<[i64; 3]>,
    /// Hypersurfaces whose intersection is the center (for toric centers).
    pub center: Vec<Label>,
    /// For monoidal chains: the Step-I component the chain grows from.
    pub chain_root: Option<ComponentId>,
    /// Created along a line where the separatrix has multiplicity at least 2.
    pub chain_link: bool,
    /// For Step III: the root of `h` in the chart where the chain starts.
    pub branch_root: Option<CycloScalar>,
}

#[derive(Clone, Debug)]
pub struct BlowupStep {
    pub index: usize,
    pub stage: Stage,
    pub kind: CenterKind,
    pub component: ComponentId,
    /// The center expressed in each chart where it was blown up.
    pub centers: Vec<(ChartId, Center)>,
    pub children: Vec<ChartId>,
    /// Power of the new divisor extracted from the pulled-back form, per child.
    pub multiplicities: Vec<u32>,
}

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("input rejected:\n{0}")]
    Inadmissible(ValidationReport),
    #[error("guard exhausted after {steps} blow-ups (limit {guard})")]
    GuardExhausted { guard: usize, steps: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Clone, Debug, Default)]
pub struct ResolveOptions {
    /// Overrides the default step limit.
    pub guard: Option<usize>,
}

/// Everything computed by [`resolve`].
#[derive(Clone, Debug)]
pub struct ResolutionTrace {
    pub input: CuspidalInput,
    pub params: DerivedParams,
    pub guard: usize,
    pub charts: Vec<Chart>,
    pub components: Vec<ComponentInfo>,
    pub steps: Vec<BlowupStep>,
    /// Distinguished chart at the end of Step I.
    pub step_i_chart: ChartId,
    /// Chart carrying the essential component at the end of Step II.
    pub step_ii_chart: Option<ChartId>,
    pub essential: Option<ComponentId>,
    pub singular: Vec<SingularComponent>,
    pub shapes: ShapeReport,
}

impl ResolutionTrace {
    pub fn leaves(&self) -> impl Iterator<Item = &Chart> {
        self.charts.iter().filter(|c| c.leaf)
    }

    pub fn steps_in(&self, stage: Stage) -> usize {
        self.steps.iter().filter(|s| s.stage == stage).count()
    }

    /// True when every singular component in the final charts is simple.
    pub fn all_simple(&self) -> bool {
        self.singular.iter().all(|c| c.is_simple())
    }
}

/// The default step limit `16·(k + d·l·δ + a + b)`.
pub fn default_guard(params: &DerivedParams, a: u32, b: u32) -> usize {
    16 * (params.cf.k as usize + (params.d as usize) * params.l * params.delta as usize + a as usize + b as usize)
}

/// The roots of `h(y) = ∏ (y^δ − a_i)`, together with their inverses.
pub fn root_constants(input: &CuspidalInput) -> Vec<CycloScalar> {
    let delta = input.delta() as i64;
    let m = input.field.order() as i64;
    let mut out: Vec<CycloScalar> = Vec::new();
    for branch in &input.branches {
        for t in 0..delta {
            let c = &branch.b * &input.field.zeta_pow(t * m / delta);
            let inv = c.inverse().expect("branch coefficients are nonzero");
            for v in [c.clone(), inv.clone(), -c.clone(), -inv] {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

struct Engine {
    input: CuspidalInput,
    charts: Vec<Chart>,
    components: Vec<ComponentInfo>,
    steps: Vec<BlowupStep>,
    guard: usize,
    constants: Vec<CycloScalar>,
}

/// Multiplicity of `f` along `{u_i = 0, u_j = 0}`.
fn line_multiplicity(f: &MultiPoly, i: usize, j: usize) -> u32 {
    f.terms().map(|(m, _)| m.0[i] + m.0[j]).min().unwrap_or(u32::MAX)
}

impl Engine {
    fn new(input: &CuspidalInput, guard: usize) -> Engine {
        let nf = build_omega(input);
        let v = ambient_vars();
        let k = input.field.clone();
        let root = Chart {
            id: 0,
            parent: None,
            step: None,
            vars: v.clone(),
            to_parent: PolyMap::identity(&v, &k),
            to_origin: PolyMap::identity(&v, &k),
            labels: [Label::Plane(0), Label::Plane(1), Label::Plane(2)],
            rays: Some([[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            form: nf.omega,
            separatrix: nf.separatrix,
            extra: Vec::new(),
            domain: Vec::new(),
            leaf: true,
        };
        Engine {
            input: input.clone(),
            charts: vec![root],
            components: Vec::new(),
            steps: Vec::new(),
            guard,
            constants: root_constants(input),
        }
    }

    fn leaf_ids(&self) -> Vec<ChartId> {
        self.charts.iter().filter(|c| c.leaf).map(|c| c.id).collect()
    }

    fn chain_root(&self, label: Label) -> Option<ComponentId> {
        match label {
            Label::Divisor(d) => Some(self.components[d].chain_root.unwrap_or(d)),
            _ => None,
        }
    }

    /// Charts containing the toric center named by `labels`, with the center's coordinates.
    fn toric_centers(&self, labels: &[Label]) -> Vec<(ChartId, Center)> {
        self.leaf_ids()
            .into_iter()
            .filter(|&c| self.charts[c].has_labels(labels))
            .map(|c| {
                let ch = &self.charts[c];
                let mut coords: Vec<usize> = labels.iter().map(|l| ch.position(*l).unwrap()).collect();
                coords.sort();
                (c, Center::coordinate(coords))
            })
            .collect()
    }

    fn apply(
        &mut self,
        stage: Stage,
        centers: Vec<(ChartId, Center)>,
        center_labels: Vec<Label>,
        chain_root: Option<ComponentId>,
        branch_root: Option<CycloScalar>,
        exclusions: &[Vec<Vec<MultiPoly>>],
    ) -> Result<Vec<ChartId>, ResolveError> {
        if self.steps.len() >= self.guard {
            return Err(ResolveError::GuardExhausted {
                guard: self.guard,
                steps: self.steps.len(),
            });
        }
        let index = self.steps.len();
        let comp = self.components.len();
        let label = Label::Divisor(comp);
        let kind = if centers[0].1.is_point() {
            CenterKind::Point
        } else {
            CenterKind::Line
        };
        let ray = centers.iter().find_map(|(c, center)| {
            let ch = &self.charts[*c];
            match (&ch.rays, center.is_toric()) {
                (Some(r), true) => {
                    let mut s = [0i64; 3];
                    for &i in &center.coords {
                        for t in 0..3 {
                            s[t] += r[i][t];
                        }
                    }
                    Some(s)
                }
                _ => None,
            }
        });
        let mut children = Vec::new();
        let mut multiplicities = Vec::new();
        for (n, (cid, center)) in centers.iter().enumerate() {
            let parent = self.charts[*cid].clone();
            let excluded: Vec<&Vec<MultiPoly>> = parent.domain.iter().chain(exclusions.get(n).into_iter().flatten()).collect();
            for raw in chart::blowup_chart(&parent, center, label)? {
                let excep: Vec<usize> = (0..3)
                    .filter(|&i| matches!(raw.labels[i], Label::Divisor(_)))
                    .collect();
                let (pows, form) = chart::strict_transform_form(&raw.raw_form, &excep)?;
                let (_, sep) = chart::strict_transform_poly(&raw.raw_separatrix, &excep)?;
                let mut extra = Vec::new();
                for (l, f) in &raw.raw_extra {
                    let (_, g) = chart::strict_transform_poly(f, &excep)?;
                    if !g.is_constant() {
                        extra.push((*l, g));
                    }
                }
                let mut domain = Vec::new();
                for set in &excluded {
                    let mut pulled = Vec::new();
                    for e in set.iter() {
                        let (_, g) = chart::strict_transform_poly(&raw.map.pull_function(e), &excep)?;
                        pulled.push(g);
                    }
                    if !pulled.iter().any(|g| g.is_constant()) {
                        domain.push(pulled);
                    }
                }
                let slot = excep.iter().position(|&i| i == raw.divisor_coord).unwrap();
                multiplicities.push(pows[slot]);
                let id = self.charts.len();
                self.charts.push(Chart {
                    id,
                    parent: Some(*cid),
                    step: Some(index),
                    vars: parent.vars.clone(),
                    to_origin: parent.to_origin.compose(&raw.map)?,
                    to_parent: raw.map,
                    labels: raw.labels,
                    rays: raw.rays,
                    form,
                    separatrix: sep,
                    extra,
                    domain,
                    leaf: true,
                });
                children.push(id);
            }
            self.charts[*cid].leaf = false;
        }
        self.components.push(ComponentInfo {
            id: comp,
            step: index,
            stage,
            kind,
            ray,
            center: center_labels,
            chain_root,
            chain_link: false,
            branch_root,
        });
        self.steps.push(BlowupStep {
            index,
            stage,
            kind,
            component: comp,
            centers,
            children: children.clone(),
            multiplicities,
        });
        Ok(children)
    }

    /// Step I: point blow-ups following the subtractive Euclid walk on `(p, q)`.
    fn step_i(&mut self) -> Result<ChartId, ResolveError> {
        let walk = subtractive_walk(self.input.p as u64, self.input.q as u64);
        let mut dist = 0;
        for s in 0..=walk.len() {
            let labels = self.charts[dist].labels.to_vec();
            let kids = self.apply(
                Stage::I,
                vec![(dist, Center::coordinate(vec![0, 1, 2]))],
                labels,
                None,
                None,
                &[],
            )?;
            // x-chart when the q side shrinks, and for the final blow-up
            let pick = if s < walk.len() && !walk[s] { 1 } else { 0 };
            dist = kids[pick];
        }
        Ok(dist)
    }

    /// Step II: monoidal blow-ups of the separatrix along its double lines in
    /// the divisor, chains grown in order of their Step-I root; then point
    /// blow-ups at remaining singular triple points.
    fn step_ii(&mut self) -> Result<(), ResolveError> {
        loop {
            let mut best: Option<((ComponentId, ChartId, usize), Label)> = None;
            for c in self.leaf_ids() {
                let ch = &self.charts[c];
                let Some(z) = ch.position(Z_PLANE) else { continue };
                for i in ch.exceptional() {
                    if line_multiplicity(&ch.separatrix, i, z) >= 2 {
                        let key = (self.chain_root(ch.labels[i]).unwrap(), c, i);
                        if best.as_ref().map_or(true, |(b, _)| key < *b) {
                            best = Some((key, ch.labels[i]));
                        }
                    }
                }
            }
            if let Some(((root, _, _), d)) = best {
                let labels = vec![d, Z_PLANE];
                let centers = self.toric_centers(&labels);
                self.apply(Stage::II, centers, labels, Some(root), None, &[])?;
                if let Some(c) = self.components.last_mut() {
                    c.chain_link = true;
                }
                continue;
            }
            // S̃ smooth along the remaining lines but possibly tangent to the divisor
            if let Some(labels) = self.non_simple_line(|l| matches!(l, Label::Divisor(_))) {
                let root = labels.iter().find_map(|&l| self.chain_root(l));
                let centers = self.toric_centers(&labels);
                self.apply(Stage::II, centers, labels, root, None, &[])?;
                continue;
            }
            let point = self.leaf_ids().into_iter().find(|&c| {
                let ch = &self.charts[c];
                ch.exceptional().len() == 2
                    && ch.position(Z_PLANE).is_some()
                    && ch.separatrix.order().unwrap_or(0) >= 2
            });
            match point {
                Some(c) => {
                    let labels = self.charts[c].labels.to_vec();
                    let centers = self.toric_centers(&labels);
                    self.apply(Stage::II, centers, labels, None, None, &[])?;
                }
                None => return Ok(()),
            }
        }
    }

    /// For the line `{u_j = c, u_z = 0}`: `None` when the form does not vanish
    /// along it, otherwise whether the transversal section `u_f = t` is simple.
    fn line_status(&self, ch: &Chart, j: usize, c: &CycloScalar, z: usize) -> Option<bool> {
        let k = &self.input.field;
        let on_line = ch
            .form
            .dense_components()
            .iter()
            .all(|a| a.eval_var(j, c).eval_var(z, &k.zero()).is_zero());
        if !on_line {
            return None;
        }
        let f = 3 - j - z;
        let eq = &MultiPoly::var(&ch.vars, k, j) - &MultiPoly::constant(&ch.vars, c.clone());
        let zero = k.zero();
        let verdict = singular::generic_values(k)
            .iter()
            .find_map(|t| singular::section_simplicity(&ch.form, (z, &zero), j, (f, t), &eq));
        Some(verdict.map_or(false, |s| s.simple))
    }

    /// Step III: blows up the non-simple lines over the branch roots, then the
    /// non-simple lines on the new divisors.
    ///
    /// The lines over distinct roots are disjoint, so each is blown up in the
    /// charts left by Step II; the charts over one root omit the others.
    fn step_iii(&mut self) -> Result<(), ResolveError> {
        let base: Vec<ChartId> = self.leaf_ids();
        let mut done: Vec<(ChartId, usize, CycloScalar)> = Vec::new();
        while let Some((centers, labels, root)) = self.next_root_center(&base, &done) {
            let mut exclusions = Vec::new();
            for (c, center) in &centers {
                let (j, cst) = center
                    .coords
                    .iter()
                    .zip(&center.shifts)
                    .find_map(|(&j, s)| s.clone().map(|s| (j, s)))
                    .expect("translated center");
                done.push((*c, j, cst.clone()));
                let ch = &self.charts[*c];
                let z = ch.position(Z_PLANE).expect("z plane");
                let k = &self.input.field;
                let others: Vec<Vec<MultiPoly>> = self
                    .constants
                    .iter()
                    .filter(|o| **o != cst && self.line_status(ch, j, o, z).is_some())
                    .map(|o| {
                        let line = &MultiPoly::var(&ch.vars, k, j) - &MultiPoly::constant(&ch.vars, o.clone());
                        vec![line, MultiPoly::var(&ch.vars, k, z)]
                    })
                    .collect();
                exclusions.push(others);
            }
            let (c0, center0) = &centers[0];
            let (c0, j0) = (*c0, center0.coords.iter().zip(&center0.shifts).find(|p| p.1.is_some()).map(|p| *p.0).unwrap());
            let involved: Vec<ChartId> = centers.iter().map(|p| p.0).collect();
            for &b in &base {
                if !involved.contains(&b) {
                    if let Some(set) = self.curve_in_chart(c0, j0, &root, b) {
                        self.charts[b].domain.push(set);
                    }
                }
            }
            self.apply(Stage::III, centers, labels, None, Some(root), &exclusions)?;
            while let Some((centers, labels)) = self.next_divisor_line() {
                self.apply(Stage::III, centers, labels, None, None, &[])?;
            }
        }
        Ok(())
    }

    /// The curve `{u_j = c, z = 0}` of toric chart `from` seen in toric chart `to`.
    fn curve_in_chart(&self, from: ChartId, j: usize, c: &CycloScalar, to: ChartId) -> Option<Vec<MultiPoly>> {
        let (a, b) = (&self.charts[from], &self.charts[to]);
        let z = b.position(Z_PLANE)?;
        let m = chart::toric_transition(b.rays.as_ref()?, a.rays.as_ref()?)?;
        let k = &self.input.field;
        let (mut pos, mut neg) = (vec![0u32; 3], vec![0u32; 3]);
        for (t, &e) in m[j].iter().enumerate() {
            if e > 0 {
                pos[t] = e as u32;
            } else {
                neg[t] = (-e) as u32;
            }
        }
        let f = &MultiPoly::monomial(&b.vars, Monomial(pos), k.one()) - &MultiPoly::monomial(&b.vars, Monomial(neg), c.clone());
        Some(vec![f, MultiPoly::var(&b.vars, k, z)])
    }

    /// A non-simple singular line `{u_i = 0, u_j = 0}` between divisors or `H_z`,
    /// one of them satisfying `pick`; leaf charts in creation order.
    fn non_simple_line(&self, pick: impl Fn(Label) -> bool) -> Option<Vec<Label>> {
        let k = &self.input.field;
        let usable = |l: Label| matches!(l, Label::Divisor(_)) || l == Z_PLANE;
        for c in self.leaf_ids() {
            let ch = &self.charts[c];
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let (li, lj) = (ch.labels[i], ch.labels[j]);
                if !(usable(li) && usable(lj) && (pick(li) || pick(lj))) {
                    continue;
                }
                if self.line_status(ch, i, &k.zero(), j) == Some(false) {
                    return Some(vec![li, lj]);
                }
            }
        }
        None
    }

    /// A non-simple singular line on a Step III divisor, possibly crossing `H_z`.
    fn next_divisor_line(&self) -> Option<(Vec<(ChartId, Center)>, Vec<Label>)> {
        let labels = self.non_simple_line(|l| matches!(l, Label::Divisor(d) if self.components[d].stage == Stage::III))?;
        Some((self.toric_centers(&labels), labels))
    }

    /// A non-simple line `{u_j = c, z = 0}` over a branch root in one of the `base`
    /// charts, together with its image in the adjacent toric charts.
    #[allow(clippy::type_complexity)]
    fn next_root_center(
        &self,
        base: &[ChartId],
        done: &[(ChartId, usize, CycloScalar)],
    ) -> Option<(Vec<(ChartId, Center)>, Vec<Label>, CycloScalar)> {
        for &c in base {
            let ch = &self.charts[c];
            let Some(z) = ch.position(Z_PLANE) else { continue };
            let Some(rays) = ch.rays else { continue };
            for f in ch.exceptional() {
                let j = 3 - f - z;
                for cst in &self.constants {
                    if done.iter().any(|(dc, dj, dv)| *dc == c && *dj == j && dv == cst) {
                        continue;
                    }
                    if self.line_status(ch, j, cst, z) != Some(false) {
                        continue;
                    }
                    let mut centers = vec![(c, translated_center(j, z, cst))];
                    for &other in base {
                        let oc = &self.charts[other];
                        if other == c || !oc.has_labels(&[ch.labels[f], Z_PLANE]) {
                            continue;
                        }
                        let Some(orays) = oc.rays else { continue };
                        let m = chart::toric_transition(&rays, &orays)?;
                        let (of, oz) = (oc.position(ch.labels[f])?, oc.position(Z_PLANE)?);
                        let oj = 3 - of - oz;
                        if m[oj][f] != 0 || m[oj][z] != 0 {
                            continue;
                        }
                        let oc_val = match m[oj][j] {
                            1 => cst.clone(),
                            -1 => cst.inverse().ok()?,
                            _ => continue,
                        };
                        centers.push((other, translated_center(oj, oz, &oc_val)));
                    }
                    return Some((centers, vec![ch.labels[f], Z_PLANE], cst.clone()));
                }
            }
        }
        None
    }
}

fn translated_center(j: usize, z: usize, c: &CycloScalar) -> Center {
    let mut pairs = vec![(j, Some(c.clone())), (z, None)];
    pairs.sort_by_key(|p| p.0);
    Center {
        coords: pairs.iter().map(|p| p.0).collect(),
        shifts: pairs.into_iter().map(|p| p.1).collect(),
    }
}

/// Runs Step I alone: the number of point blow-ups and the shape in the distinguished chart.
pub fn resolve_step_i(input: &CuspidalInput) -> Result<(usize, shapes::StepIShape), ResolveError> {
    let report = admissibility_check(input);
    if !report.is_admissible() {
        return Err(ResolveError::Inadmissible(report));
    }
    let params = derive_params(input);
    let mut engine = Engine::new(input, usize::MAX);
    let chart = engine.step_i()?;
    Ok((engine.steps.len(), shapes::step_i_shape(&engine.charts[chart], input, &params)))
}

/// Runs Steps I–III and computes the final singular set.
pub fn resolve(input: &CuspidalInput, opts: &ResolveOptions) -> Result<ResolutionTrace, ResolveError> {
    let report = admissibility_check(input);
    if !report.is_admissible() {
        return Err(ResolveError::Inadmissible(report));
    }
    let params = derive_params(input);
    let mut engine = Engine::new(input, opts.guard.unwrap_or(usize::MAX));
    let step_i_chart = engine.step_i()?;
    let step_i = shapes::step_i_shape(&engine.charts[step_i_chart], input, &params);
    if opts.guard.is_none() {
        engine.guard = default_guard(&params, step_i.a, step_i.b);
    }
    engine.step_ii()?;
    let essential = shapes::essential_component(&engine.components, &engine.charts, step_i_chart);
    let step_ii_chart = essential.and_then(|e| shapes::step_ii_chart(&engine.charts, e, step_i_chart));
    let step_ii = match (essential, step_ii_chart) {
        (Some(e), Some(c)) => Some(shapes::step_ii_shape(&engine.charts[c], e, input, &params, &step_i)),
        _ => None,
    };
    engine.step_iii()?;
    let mut singular = Vec::new();
    for c in engine.leaf_ids() {
        singular.extend(singular::singular_locus(&engine.charts[c], &engine.constants));
    }
    let invariants = shapes::separatrix_invariance(&engine.charts);
    Ok(ResolutionTrace {
        input: input.clone(),
        params,
        guard: engine.guard,
        charts: engine.charts,
        components: engine.components,
        steps: engine.steps,
        step_i_chart,
        step_ii_chart,
        essential,
        singular,
        shapes: ShapeReport {
            step_i,
            step_ii,
            separatrix_invariant: invariants,
        },
    })
}
