//! Singular set of a strict transform along the exceptional divisor, and
//! the simplicity test on transversal sections.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::chart::{Chart, ChartId, Label, Z_PLANE};
use crate::forms::OneForm;
use crate::numeric::{rat, CycloScalar, Field, Rational};
use crate::poly::{resultant, MultiPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearType {
    /// Both eigenvalues vanish.
    Nilpotent,
    /// Exactly one eigenvalue vanishes.
    SaddleNode,
    /// Eigenvalue quotient is a positive rational.
    Resonant { ratio: String },
    NonResonant,
    /// Logarithmic corner of three invariant surfaces, with its residues.
    Corner { residues: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Simplicity {
    pub simple: bool,
    pub linear: LinearType,
}

impl Simplicity {
    fn of(linear: LinearType) -> Simplicity {
        let simple = matches!(linear, LinearType::SaddleNode | LinearType::NonResonant);
        Simplicity { simple, linear }
    }
}

/// Linear part of the planar form `A du_i + B du_w` along the points
/// `u_i = a`, `u_v = b`, `f(u_w) = 0`, where `f` is univariate in `u_w`.
///
/// `σ = tr²/det` is computed in `K[u_w]/(f)`; when it is not a constant of
/// `K` the eigenvalue quotient varies along the points and is generic.
pub fn section_simplicity(
    form: &OneForm,
    (i, a): (usize, &CycloScalar),
    w: usize,
    (v, b): (usize, &CycloScalar),
    f: &MultiPoly,
) -> Option<Simplicity> {
    if f.is_constant() || f.involves(i) || f.involves(v) {
        return None;
    }
    if !f.gcd(&f.derivative(w)).is_constant() {
        return None;
    }
    let at = |p: &MultiPoly| p.eval_var(i, a).eval_var(v, b);
    let ca = form.component(&[i]);
    let cb = form.component(&[w]);
    // dual field X = B ∂_i − A ∂_w
    let bi = at(&cb.derivative(i));
    let bw = at(&cb.derivative(w));
    let ai = at(&ca.derivative(i));
    let aw = at(&ca.derivative(w));
    let tr = uni_rem(&(&bi - &aw), f, w);
    let det = uni_rem(&(&(&ai * &bw) - &(&bi * &aw)), f, w);
    let linear = if det.is_zero() {
        if tr.is_zero() {
            LinearType::Nilpotent
        } else {
            LinearType::SaddleNode
        }
    } else {
        let p = uni_rem(&(&tr * &tr), f, w);
        let (m, c) = det.leading().expect("nonzero");
        let s = &p.coeff(m) * &c.inverse().ok()?;
        if p != det.scale(&s) {
            LinearType::NonResonant
        } else {
            classify_sigma(&s)
        }
    };
    Some(Simplicity::of(linear))
}

/// Remainder of `a` modulo `f`, both univariate in `w`.
fn uni_rem(a: &MultiPoly, f: &MultiPoly, w: usize) -> MultiPoly {
    let fc: Vec<CycloScalar> = f.coefficients_in(w).iter().map(|c| c.constant_term()).collect();
    let n = fc.len() - 1;
    let lead_inv = fc[n].inverse().expect("nonzero leading coefficient");
    let mut ac: Vec<CycloScalar> = a.coefficients_in(w).iter().map(|c| c.constant_term()).collect();
    while ac.len() > n {
        let top = ac.len() - 1;
        let q = &ac[top] * &lead_inv;
        for (t, c) in fc.iter().enumerate() {
            let idx = top - n + t;
            ac[idx] = &ac[idx] - &(&q * c);
        }
        ac.pop();
    }
    let coeffs: Vec<MultiPoly> = ac.into_iter().map(|c| MultiPoly::constant(a.vars(), c)).collect();
    if coeffs.is_empty() {
        return MultiPoly::zero(a.vars(), a.field());
    }
    MultiPoly::from_coefficients_in(w, &coeffs)
}

fn classify_sigma(sigma: &CycloScalar) -> LinearType {
    let s = match sigma.as_rational() {
        Some(s) => s.clone(),
        None => return LinearType::NonResonant,
    };
    // λ₁/λ₂ + λ₂/λ₁ + 2 = σ
    let four = rat(4, 1);
    if s < four {
        return LinearType::NonResonant;
    }
    let disc = &s * &(&s - &four);
    match rational_sqrt(&disc) {
        Some(root) => {
            let ratio = (&s - &rat(2, 1) + root) / rat(2, 1);
            LinearType::Resonant {
                ratio: ratio.to_string(),
            }
        }
        None => LinearType::NonResonant,
    }
}

pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Global hypersurfaces containing a singular component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Incidence {
    Hyper(Label),
    Separatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `{u_i = 0, u_j = 0}`
    CoordinateLine { i: usize, j: usize },
    /// `{u_i = 0, u_j = c}`
    TranslatedLine { i: usize, j: usize, c: CycloScalar },
    /// `{u_i = 0, f = 0}` with `f` a factor of the restricted separatrix.
    SeparatrixCurve { i: usize, equation: MultiPoly },
    /// `{u_i = 0, f = 0}` with `f` a factor of a global hypersurface that is
    /// not a coordinate hyperplane of this chart.
    Crossing { i: usize, other: Label, equation: MultiPoly },
    Point { coords: Vec<CycloScalar> },
    /// A curve factor of the singular set that matched no known shape.
    UnresolvedCurve { i: usize, equation: MultiPoly },
    /// Isolated points that could not be located exactly.
    UnresolvedPoints { i: usize, eliminant: MultiPoly },
}

#[derive(Clone, Debug)]
pub struct SingularComponent {
    pub chart: ChartId,
    pub shape: Shape,
    pub incidence: Vec<Incidence>,
    pub simplicity: Option<Simplicity>,
}

impl SingularComponent {
    pub fn dimension(&self) -> u8 {
        match self.shape {
            Shape::Point { .. } | Shape::UnresolvedPoints { .. } => 0,
            _ => 1,
        }
    }

    pub fn is_simple(&self) -> bool {
        self.simplicity.as_ref().map_or(false, |s| s.simple)
    }
}

/// Sample values used to pick a generic point on a curve.
pub fn generic_values(k: &Field) -> Vec<CycloScalar> {
    [(1009, 13), (-577, 7), (211, 19)]
        .iter()
        .map(|&(n, d)| k.from_rational(rat(n, d)))
        .collect()
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn var_minus(chart: &Chart, j: usize, c: &CycloScalar) -> MultiPoly {
    let k = chart.form.field();
    &MultiPoly::var(&chart.vars, k, j) - &MultiPoly::constant(&chart.vars, c.clone())
}

/// Squarefree part of a polynomial on the plane `u_i = 0`.
fn radical(h: &MultiPoly, i: usize) -> MultiPoly {
    if h.is_constant() {
        return h.clone();
    }
    let (v, w) = others(i);
    let c = h.gcd(&h.derivative(v)).gcd(&h.derivative(w));
    if c.is_constant() {
        h.monic()
    } else {
        h.div_exact(&c).expect("gcd divides").monic()
    }
}

/// Rational roots of a univariate polynomial with rational coefficients.
fn rational_roots(p: &MultiPoly, var: usize) -> Vec<Rational> {
    use num_integer::Integer;
    use num_traits::{One, ToPrimitive, Zero};
    if (0..p.nvars()).any(|j| j != var && p.involves(j)) {
        return Vec::new();
    }
    let cs: Option<Vec<Rational>> = p
        .coefficients_in(var)
        .iter()
        .map(|c| c.constant_term().as_rational().cloned())
        .collect();
    let Some(cs) = cs else { return Vec::new() };
    let den = cs.iter().fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<num_bigint::BigInt> = cs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let low = ints.iter().position(|c| !c.is_zero());
    let (Some(low), Some(top)) = (low, ints.last()) else { return Vec::new() };
    let (a0, an) = (ints[low].abs().to_u64(), top.abs().to_u64());
    let (Some(a0), Some(an)) = (a0, an) else { return Vec::new() };
    if a0 > 10_000 || an > 10_000 {
        return Vec::new();
    }
    let divisors = |n: u64| (1..=n).filter(move |d| n % d == 0);
    let mut out = Vec::new();
    for a in divisors(a0) {
        for b in divisors(an) {
            for sign in [1i64, -1] {
                let r = Rational::new((sign * a as i64).into(), (b as i64).into());
                let val = cs.iter().rev().fold(Rational::zero(), |acc, c| acc * &r + c);
                if val.is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

fn strip(g: &mut MultiPoly, f: &MultiPoly) -> u32 {
    let mut n = 0;
    while !f.is_constant() {
        match g.div_exact(f) {
            Some(q) => {
                *g = q;
                n += 1;
            }
            None => break,
        }
    }
    n
}

/// Singular components of the chart's strict transform lying in its exceptional
/// hyperplanes or in the strict transform of `{z = 0}`.
pub fn singular_locus(chart: &Chart, constants: &[CycloScalar]) -> Vec<SingularComponent> {
    let mut out: Vec<SingularComponent> = Vec::new();
    let k = chart.form.field().clone();
    let coeffs = chart.form.dense_components();
    let scanned = (0..3).filter(|&i| matches!(chart.labels[i], Label::Divisor(_)) || chart.labels[i] == Z_PLANE);
    for i in scanned {
        let zero = k.zero();
        let r: Vec<MultiPoly> = coeffs.iter().map(|c| c.eval_var(i, &zero)).collect();
        let mut g = MultiPoly::zero(&chart.vars, &k);
        for c in &r {
            g = g.gcd(c);
        }
        if g.is_zero() {
            out.push(SingularComponent {
                chart: chart.id,
                shape: Shape::UnresolvedCurve {
                    i,
                    equation: MultiPoly::zero(&chart.vars, &k),
                },
                incidence: vec![Incidence::Hyper(chart.labels[i])],
                simplicity: None,
            });
            continue;
        }
        let g_full = g.clone();
        let (v, w) = others(i);
        for j in [v, w] {
            let e = g.min_degree_in(j).unwrap_or(0);
            if e > 0 {
                let mut m = vec![0; 3];
                m[j] = e;
                g = g.div_monomial(&crate::poly::Monomial(m));
                let dup = out.iter().any(|c| {
                    c.chart == chart.id
                        && matches!(c.shape, Shape::CoordinateLine { i: a, j: b } if (a, b) == (j, i))
                });
                if !dup {
                    out.push(line_component(chart, i, j, None));
                }
            }
        }
        let s = chart.separatrix.eval_var(i, &zero);
        if let Some((_, s_core)) = s.divide_by_monomial(&[v, w]) {
            if !s_core.is_constant() {
                let h = radical(&g.gcd(&s_core), i);
                if !h.is_constant() {
                    strip(&mut g, &h);
                    let h = chart.trim_curve(i, &h);
                    if !h.is_constant() {
                        let incidence = vec![Incidence::Hyper(chart.labels[i]), Incidence::Separatrix];
                        let shape = Shape::SeparatrixCurve { i, equation: h.clone() };
                        out.push(curve_component(chart, i, shape, &h, incidence));
                    }
                }
            }
        }
        for (label, eq) in &chart.extra {
            let e = eq.eval_var(i, &zero);
            if e.is_constant() {
                continue;
            }
            let h = radical(&g.gcd(&e), i);
            if !h.is_constant() {
                strip(&mut g, &h);
                let h = chart.trim_curve(i, &h);
                if h.is_constant() {
                    continue;
                }
                let mut incidence = vec![Incidence::Hyper(chart.labels[i]), Incidence::Hyper(*label)];
                if s.div_exact(&h).is_some() || s.is_zero() {
                    incidence.push(Incidence::Separatrix);
                }
                incidence.sort();
                out.push(curve_component(
                    chart,
                    i,
                    Shape::Crossing {
                        i,
                        other: *label,
                        equation: h.clone(),
                    },
                    &h,
                    incidence,
                ));
            }
        }
        for j in [v, w] {
            for c in constants {
                if strip(&mut g, &var_minus(chart, j, c)) > 0 {
                    out.push(line_component(chart, i, j, Some(c.clone())));
                }
            }
        }
        let rest = chart.trim_curve(i, &radical(&g, i));
        if !rest.is_constant() {
            let equation = rest;
            out.push(SingularComponent {
                chart: chart.id,
                shape: Shape::UnresolvedCurve { i, equation },
                incidence: vec![Incidence::Hyper(chart.labels[i])],
                simplicity: None,
            });
        }
        out.extend(isolated_points(chart, i, &r, &g_full, constants, &out));
    }
    out.retain(|c| !omitted(chart, &c.shape));
    out
}

fn omitted(chart: &Chart, shape: &Shape) -> bool {
    let k = chart.form.field();
    match shape {
        Shape::CoordinateLine { i, j } => chart.omits_curve(*i, &MultiPoly::var(&chart.vars, k, *j)),
        Shape::TranslatedLine { i, j, c } => chart.omits_curve(*i, &var_minus(chart, *j, c)),
        Shape::SeparatrixCurve { i, equation }
        | Shape::Crossing { i, equation, .. }
        | Shape::UnresolvedCurve { i, equation } => chart.omits_curve(*i, equation),
        Shape::Point { coords } => chart.omits_point(coords),
        Shape::UnresolvedPoints { .. } => false,
    }
}

fn line_component(chart: &Chart, i: usize, j: usize, c: Option<CycloScalar>) -> SingularComponent {
    let k = chart.form.field().clone();
    let third = 3 - i - j;
    let mut incidence = vec![Incidence::Hyper(chart.labels[i])];
    let mut on_sep = chart.separatrix.eval_var(i, &k.zero());
    match &c {
        None => {
            if chart.labels[j] != Label::Other {
                incidence.push(Incidence::Hyper(chart.labels[j]));
            }
            on_sep = on_sep.eval_var(j, &k.zero());
        }
        Some(c) => on_sep = on_sep.eval_var(j, c),
    }
    if on_sep.is_zero() {
        incidence.push(Incidence::Separatrix);
    }
    incidence.sort();
    let zero = k.zero();
    let f = var_minus(chart, j, c.as_ref().unwrap_or(&zero));
    let simplicity = generic_values(&k)
        .iter()
        .find_map(|t| section_simplicity(&chart.form, (i, &zero), j, (third, t), &f));
    let shape = match c {
        None => Shape::CoordinateLine { i, j },
        Some(c) => Shape::TranslatedLine { i, j, c },
    };
    SingularComponent {
        chart: chart.id,
        shape,
        incidence,
        simplicity,
    }
}

/// Tests the sections `v = v0` along `{u_i = 0, f = 0}` for generic `v0`,
/// with either of the two remaining coordinates as `v`.
fn curve_component(chart: &Chart, i: usize, shape: Shape, f: &MultiPoly, incidence: Vec<Incidence>) -> SingularComponent {
    let k = chart.form.field().clone();
    let zero = k.zero();
    let (v, w) = others(i);
    let mut simplicity = None;
    'outer: for (free, solved) in [(v, w), (w, v)] {
        if !f.involves(solved) {
            continue;
        }
        for t in generic_values(&k) {
            let f0 = f.eval_var(free, &t);
            if f0.degree_in(solved) != f.degree_in(solved) {
                continue;
            }
            if let Some(s) = section_simplicity(&chart.form, (i, &zero), solved, (free, &t), &f0) {
                simplicity = Some(s);
                break 'outer;
            }
        }
    }
    SingularComponent {
        chart: chart.id,
        shape,
        incidence,
        simplicity,
    }
}

fn univariate_roots(p: &MultiPoly, var: usize, constants: &[CycloScalar]) -> (Vec<CycloScalar>, MultiPoly) {
    let k = p.field().clone();
    let chart_vars = p.vars().clone();
    let mut rest = p.clone();
    let mut roots = Vec::new();
    let mut cands = vec![k.zero()];
    cands.extend(constants.iter().cloned());
    cands.extend(rational_roots(p, var).into_iter().map(|r| k.from_rational(r)));
    for c in cands {
        let f = &MultiPoly::var(&chart_vars, &k, var) - &MultiPoly::constant(&chart_vars, c.clone());
        if strip(&mut rest, &f) > 0 {
            roots.push(c);
        }
    }
    (roots, rest)
}

fn isolated_points(
    chart: &Chart,
    i: usize,
    r: &[MultiPoly],
    g: &MultiPoly,
    constants: &[CycloScalar],
    known: &[SingularComponent],
) -> Vec<SingularComponent> {
    let k = chart.form.field().clone();
    let (v, w) = others(i);
    let q: Vec<MultiPoly> = r
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.div_exact(g).expect("gcd divides"))
        .collect();
    if q.iter().any(|c| c.is_constant()) {
        return Vec::new();
    }
    let mut elim = MultiPoly::zero(&chart.vars, &k);
    for (a, qa) in q.iter().enumerate() {
        if !qa.involves(w) {
            elim = elim.gcd(qa);
        }
        for qb in &q[a + 1..] {
            let res = resultant(qa, qb, w);
            if !res.is_zero() {
                elim = elim.gcd(&res);
            }
        }
    }
    if elim.is_zero() || elim.is_constant() {
        return Vec::new();
    }
    let (vroots, rest) = univariate_roots(&elim, v, constants);
    let mut out = Vec::new();
    for v0 in vroots {
        let mut h = MultiPoly::zero(&chart.vars, &k);
        for qa in &q {
            h = h.gcd(&qa.eval_var(v, &v0));
        }
        let (wroots, _) = univariate_roots(&h, w, constants);
        for w0 in wroots {
            let mut coords = vec![k.zero(); 3];
            coords[v] = v0.clone();
            coords[w] = w0;
            if !g.eval(&coords).is_zero() {
                continue;
            }
            let dup = known.iter().chain(out.iter()).any(|c: &SingularComponent| {
                c.chart == chart.id && matches!(&c.shape, Shape::Point { coords: cc } if *cc == coords)
            });
            if !dup {
                out.push(point_component(chart, coords));
            }
        }
    }
    if !rest.is_constant() {
        out.push(SingularComponent {
            chart: chart.id,
            shape: Shape::UnresolvedPoints { i, eliminant: rest },
            incidence: vec![Incidence::Hyper(chart.labels[i])],
            simplicity: None,
        });
    }
    out
}

/// Isolated points: simple when some coordinate-plane section through the
/// point has a simple linear part.
fn point_component(chart: &Chart, coords: Vec<CycloScalar>) -> SingularComponent {
    let mut simplicity = None;
    for (i, w) in [(0, 1), (1, 0), (0, 2), (1, 2)] {
        let v = 3 - i - w;
        let f = var_minus(chart, w, &coords[w]);
        if let Some(s) = section_simplicity(&chart.form, (i, &coords[i]), w, (v, &coords[v]), &f) {
            let done = s.simple;
            simplicity = Some(s);
            if done {
                break;
            }
        }
    }
    if !simplicity.as_ref().map_or(false, |s| s.simple) {
        if let Some(s) = super::corner::corner_simplicity(chart, &coords) {
            simplicity = Some(s);
        }
    }
    let mut incidence: Vec<Incidence> = (0..3)
        .filter(|&a| coords[a].is_zero() && chart.labels[a] != Label::Other)
        .map(|a| Incidence::Hyper(chart.labels[a]))
        .collect();
    if chart.separatrix.eval(&coords).is_zero() {
        incidence.push(Incidence::Separatrix);
    }
    SingularComponent {
        chart: chart.id,
        shape: Shape::Point { coords },
        incidence,
        simplicity,
    }
}
