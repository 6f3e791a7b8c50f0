//! Exact checks of the local normal shapes at the end of Steps I and II.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::chart::{Chart, ChartId, ComponentId, Label, Z_PLANE};
use super::{CenterKind, ComponentInfo, Stage};
use crate::foliation::{ambient_vars, build_omega, CuspidalInput, DerivedParams};
use crate::forms::{Form, OneForm};
use crate::poly::MultiPoly;

/// `Ω̃ = (z² + xᵃyᵇU)·(A y dx + B x dy) + xy·η` in the distinguished chart of Step I.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepIShape {
    pub chart: ChartId,
    pub a: u32,
    pub b: u32,
    /// Coprime direction of `ω_α`.
    pub m: u32,
    pub n: u32,
    /// Exponents of the pulled-back separatrix; `ω_α` as it appears in `Ω̃`.
    pub m_raw: u32,
    pub n_raw: u32,
    /// `U(0, y) − h(y)^r`.
    pub unit_residual: String,
    pub unit_at_origin: bool,
    /// What is left after removing `S̃·ω_α`, `xy·dS̃` and the `Δ_α` term.
    pub factorization_residual: String,
    /// The coefficient `Δ_α` of `(a dx/x + b dy/y + dU/U − 2 dz/z)` in `η_α`.
    pub delta_alpha: String,
}

impl StepIShape {
    pub fn holds(&self) -> bool {
        self.unit_residual == "0" && self.unit_at_origin && self.factorization_residual == "0"
    }
}

/// `Ω_PQ = (t² + h^r)·ω_PQ + xy·η_PQ` in the chart of the essential component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepIIShape {
    pub chart: ChartId,
    pub component: ComponentId,
    /// `(x, y)` coefficients of `ω_PQ` read off the chart.
    pub omega_pq: (u32, u32),
    /// `((pq/δ)d, nqd)`.
    pub expected: (u32, u32),
    /// `S̃ − (t² + h^r)`.
    pub separatrix_residual: String,
    pub factorization_residual: String,
    pub big_g_term: String,
    pub p_exp: i64,
    pub q_exp: i64,
}

impl StepIIShape {
    pub fn holds(&self) -> bool {
        self.omega_pq == self.expected && self.separatrix_residual == "0" && self.factorization_residual == "0"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub step_i: StepIShape,
    pub step_ii: Option<StepIIShape>,
    /// Leaf charts where `S̃` fails to divide `Ω̃ ∧ dS̃`.
    pub separatrix_invariant: Vec<ChartId>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("shape mismatch in {what}: residual {residual}")]
pub struct ShapeMismatch {
    pub what: String,
    pub residual: String,
}

impl ShapeReport {
    pub fn verify(&self, params: &DerivedParams) -> Result<(), ShapeMismatch> {
        let s1 = &self.step_i;
        if !s1.unit_at_origin || s1.unit_residual != "0" {
            return Err(mismatch("U on the divisor", &s1.unit_residual));
        }
        if s1.factorization_residual != "0" {
            return Err(mismatch("end-of-Step-I factorization", &s1.factorization_residual));
        }
        if let Some(c) = self.separatrix_invariant.first() {
            return Err(mismatch("separatrix invariance", &format!("chart {c}")));
        }
        // the normal form Ω_PQ carries x^{(pq/δ)d/2}; it is stated for even d only
        if params.d % 2 == 1 {
            return Ok(());
        }
        let s2 = self
            .step_ii
            .as_ref()
            .ok_or_else(|| mismatch("end-of-Step-II chart", "not found"))?;
        if s2.omega_pq != s2.expected {
            return Err(mismatch(
                "ω_PQ coefficients",
                &format!("{:?} != {:?}", s2.omega_pq, s2.expected),
            ));
        }
        if s2.separatrix_residual != "0" {
            return Err(mismatch("t² + h^r", &s2.separatrix_residual));
        }
        if s2.factorization_residual != "0" {
            return Err(mismatch("Ω_PQ factorization", &s2.factorization_residual));
        }
        let (p_exp, q_exp) = pq_exponents(params, s1.m, s1.n);
        if (s2.p_exp, s2.q_exp) != (p_exp, q_exp) {
            return Err(mismatch("P, Q", &format!("{:?}", (s2.p_exp, s2.q_exp))));
        }
        Ok(())
    }
}

fn mismatch(what: &str, residual: &str) -> ShapeMismatch {
    ShapeMismatch {
        what: what.to_string(),
        residual: residual.to_string(),
    }
}

/// `P = (pq/δ)d − 2((p+q)/δ − 1)` and `Q = nqd − (m+n−1)`.
pub fn pq_exponents(params: &DerivedParams, m: u32, n: u32) -> (i64, i64) {
    let (p, q, delta, d) = (params.p as i64, params.q as i64, params.delta as i64, params.d as i64);
    let big_p = p * q / delta * d - 2 * ((p + q) / delta - 1);
    let big_q = n as i64 * q * d - (m as i64 + n as i64 - 1);
    (big_p, big_q)
}

/// `h(y)^r` written in chart coordinates, `y` being coordinate 1.
pub fn h_power(chart: &Chart, input: &CuspidalInput, params: &DerivedParams) -> MultiPoly {
    let k = &input.field;
    let y = MultiPoly::var(&chart.vars, k, 1);
    let mut h = MultiPoly::one(&chart.vars, k);
    for (a, dp) in input.coefficients().iter().zip(&params.d_prime) {
        let f = &y.pow(params.delta) - &MultiPoly::constant(&chart.vars, a.clone());
        h = &h * &f.pow(*dp);
    }
    h.pow(params.r)
}

struct Factorization {
    a: u32,
    b: u32,
    unit: MultiPoly,
    residual: String,
    delta: MultiPoly,
}

/// Splits `Ω̃ − S̃·(A y dx + B x dy) − xy dS̃` against the log form
/// `Λ = Uz(a y dx + b x dy) + xyz dU − 2xyU dz`, where `S̃ = z² + xᵃyᵇU`.
fn factor_form(form: &OneForm, sep: &MultiPoly, coef: (u32, u32)) -> Factorization {
    let v = form.vars().clone();
    let k = form.field().clone();
    let x = MultiPoly::var(&v, &k, 0);
    let y = MultiPoly::var(&v, &k, 1);
    let z = MultiPoly::var(&v, &k, 2);
    let rest = sep - &z.pow(2);
    let (ab, unit) = rest
        .divide_by_monomial(&[0, 1])
        .unwrap_or((vec![0, 0], MultiPoly::zero(&v, &k)));
    let (a, b) = (ab[0], ab[1]);
    let omega = Form::one_form(vec![
        y.scale_int(coef.0 as i64),
        x.scale_int(coef.1 as i64),
        MultiPoly::zero(&v, &k),
    ]);
    let xy = &x * &y;
    let base = omega
        .scale_poly(sep)
        .add(&Form::function(sep.clone()).d().scale_poly(&xy))
        .expect("same chart");
    let r = form.sub(&base).expect("same chart");
    let du = Form::function(unit.clone()).d();
    let lambda = Form::one_form(vec![
        (&unit * &z).scale_int(a as i64).mul_monomial(&crate::poly::Monomial(vec![0, 1, 0])),
        (&unit * &z).scale_int(b as i64).mul_monomial(&crate::poly::Monomial(vec![1, 0, 0])),
        (&xy * &unit).scale_int(-2),
    ])
    .add(&du.scale_poly(&(&xy * &z)))
    .expect("same chart");
    let rz = r.component(&[2]);
    let lz = lambda.component(&[2]);
    let delta = if rz.is_zero() {
        Some(MultiPoly::zero(&v, &k))
    } else {
        rz.div_exact(&lz)
    };
    match delta {
        Some(dl) => {
            let residual = r.sub(&lambda.scale_poly(&dl)).expect("same chart");
            Factorization {
                a,
                b,
                residual: if residual.is_zero() { "0".to_string() } else { residual.to_string() },
                delta: &(&dl * &unit) * &z,
                unit,
            }
        }
        None => Factorization {
            a,
            b,
            unit,
            residual: r.to_string(),
            delta: MultiPoly::zero(&v, &k),
        },
    }
}

/// Exponents `(A, B)` of `x, y` in the pulled-back separatrix.
fn pulled_exponents(chart: &Chart, input: &CuspidalInput) -> (u32, u32) {
    let s = build_omega(input).separatrix;
    debug_assert_eq!(s.vars(), &ambient_vars());
    let pulled = chart.to_origin.pull_function(&s);
    let (e, _) = pulled.divide_by_monomial(&[0, 1]).expect("nonzero separatrix");
    (e[0], e[1])
}

pub fn step_i_shape(chart: &Chart, input: &CuspidalInput, params: &DerivedParams) -> StepIShape {
    let (m_raw, n_raw) = pulled_exponents(chart, input);
    let g = m_raw.gcd(&n_raw).max(1);
    let f = factor_form(&chart.form, &chart.separatrix, (m_raw, n_raw));
    let k = &input.field;
    let u0 = f.unit.eval_var(0, &k.zero());
    let unit_residual = &u0 - &h_power(chart, input, params);
    StepIShape {
        chart: chart.id,
        a: f.a,
        b: f.b,
        m: m_raw / g,
        n: n_raw / g,
        m_raw,
        n_raw,
        unit_residual: unit_residual.to_string(),
        unit_at_origin: !f.unit.constant_term().is_zero(),
        factorization_residual: f.residual,
        delta_alpha: f.delta.to_string(),
    }
}

pub fn step_ii_shape(
    chart: &Chart,
    component: ComponentId,
    input: &CuspidalInput,
    params: &DerivedParams,
    step_i: &StepIShape,
) -> StepIIShape {
    let (cx, cy) = pulled_exponents(chart, input);
    let f = factor_form(&chart.form, &chart.separatrix, (cx, cy));
    let k = &input.field;
    let z = MultiPoly::var(&chart.vars, k, 2);
    let target = &z.pow(2) + &h_power(chart, input, params);
    let sep_res = &chart.separatrix - &target;
    let (p_exp, q_exp) = pq_exponents(params, step_i.m, step_i.n);
    let pq = params.p * params.q / params.delta * params.d;
    StepIIShape {
        chart: chart.id,
        component,
        omega_pq: (cx, cy),
        expected: (pq, step_i.n * params.q * params.d),
        separatrix_residual: sep_res.to_string(),
        factorization_residual: f.residual,
        big_g_term: f.delta.to_string(),
        p_exp,
        q_exp,
    }
}

/// The terminal component of the Step-II chain grown from the last Step-I
/// component; the Step-I component itself when that chain is empty.
pub fn essential_component(components: &[ComponentInfo], charts: &[Chart], step_i_chart: ChartId) -> Option<ComponentId> {
    let Label::Divisor(last) = charts[step_i_chart].labels[0] else {
        return None;
    };
    components
        .iter()
        .filter(|c| c.stage == Stage::II && c.kind == CenterKind::Line && c.chain_root == Some(last))
        .map(|c| c.id)
        .last()
        .or(Some(last))
}

/// The end-of-Step-II chart: the leaf descending from the Step-I chart where
/// the essential component is `{x = 0}` and `z` is the plane `{z = 0}`.
pub fn step_ii_chart(charts: &[Chart], essential: ComponentId, step_i_chart: ChartId) -> Option<ChartId> {
    let descends = |mut c: ChartId| loop {
        if c == step_i_chart {
            return true;
        }
        match charts[c].parent {
            Some(p) => c = p,
            None => return false,
        }
    };
    charts
        .iter()
        .find(|c| {
            c.leaf
                && c.labels[0] == Label::Divisor(essential)
                && c.labels[2] == Z_PLANE
                && descends(c.id)
        })
        .map(|c| c.id)
}

/// Leaf charts where `S̃` does not divide `Ω̃ ∧ dS̃`.
pub fn separatrix_invariance(charts: &[Chart]) -> Vec<ChartId> {
    charts
        .iter()
        .filter(|c| c.leaf)
        .filter(|c| {
            let w = c
                .form
                .wedge(&Form::function(c.separatrix.clone()).d())
                .expect("same chart");
            let ok = w.components().all(|(_, f)| f.div_exact(&c.separatrix).is_some());
            !ok
        })
        .map(|c| c.id)
        .collect()
}
