//! The pre-normal 1-form of a quasi-homogeneous cuspidal foliation.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::forms::{self, Form, OneForm, Valuation};
use crate::numeric::{cf_expand, rat, CfDigits, CycloScalar, Field};
use crate::poly::{vars, MultiPoly, Vars};

/// Ambient coordinates of the germ.
pub fn ambient_vars() -> Vars {
    vars(&["x", "y", "z"])
}

/// Formal variables of the function `G(Ψ, z)`.
pub fn g_vars() -> Vars {
    vars(&["Psi", "z"])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    /// A δ-th root of the branch coefficient: `a = b^δ`.
    pub b: CycloScalar,
    pub d: u32,
}

/// User data: `S = z² + ∏ (y^p − a_i x^q)^{d_i}` and the function `G(Ψ, z)`.
#[derive(Clone, Debug)]
pub struct CuspidalInput {
    pub p: u32,
    pub q: u32,
    pub branches: Vec<Branch>,
    pub g: MultiPoly,
    pub field: Field,
    /// Total degree at which `G` was truncated, if the user asked for it.
    pub g_truncation: Option<u32>,
}

impl CuspidalInput {
    /// Drops every term of `G` above total degree `deg`.
    pub fn truncate_g(&mut self, deg: u32) {
        let kept = self
            .g
            .terms()
            .filter(|(m, _)| m.degree() <= deg)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect::<Vec<_>>();
        self.g = MultiPoly::from_terms(self.g.vars(), &self.field, kept);
        self.g_truncation = Some(deg);
    }

    /// Builds an input from integer data: branches `(b_i, d_i)` and `G` terms `(α, β, coefficient)`.
    /// The field is `Q(ζ_M)` with `M = lcm(4, δ)`.
    pub fn from_integers(p: u32, q: u32, branches: &[(i64, u32)], g: &[(u32, u32, i64)]) -> CuspidalInput {
        let field = Field::new(4u32.lcm(&p.gcd(&q))).expect("positive order");
        let gv = g_vars();
        CuspidalInput {
            p,
            q,
            branches: branches
                .iter()
                .map(|&(b, d)| Branch { b: field.from_int(b), d })
                .collect(),
            g: MultiPoly::from_terms(
                &gv,
                &field,
                g.iter()
                    .map(|&(a, b, c)| (crate::poly::Monomial(vec![a, b]), field.from_int(c))),
            ),
            field,
            g_truncation: None,
        }
    }

    pub fn delta(&self) -> u32 {
        self.p.gcd(&self.q)
    }

    /// Branch coefficients `a_i = b_i^δ`.
    pub fn coefficients(&self) -> Vec<CycloScalar> {
        let delta = self.delta() as u64;
        self.branches.iter().map(|b| b.b.pow(delta)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub p: u32,
    pub q: u32,
    pub delta: u32,
    /// Σ d_i
    pub d: u32,
    /// gcd of the d_i
    pub r: u32,
    pub d_prime: Vec<u32>,
    pub l: usize,
    pub cf: CfDigits,
    pub first_integral_case: bool,
}

pub fn derive_params(input: &CuspidalInput) -> DerivedParams {
    let ds: Vec<u32> = input.branches.iter().map(|b| b.d).collect();
    let r = ds.iter().fold(0u32, |acc, &x| acc.gcd(&x));
    DerivedParams {
        p: input.p,
        q: input.q,
        delta: input.delta(),
        d: ds.iter().sum(),
        r,
        d_prime: ds.iter().map(|&x| x / r).collect(),
        l: ds.len(),
        cf: cf_expand(input.p as u64, input.q as u64),
        first_integral_case: ds.iter().all(|&x| x == 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }

    fn reject(&mut self, clause: &str, detail: String) {
        self.violations.push(Violation {
            clause: clause.to_string(),
            detail,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "rejected [{}]: {}", v.clause, v.detail)?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {}", w)?;
        }
        Ok(())
    }
}

pub const CLAUSE_PQ: &str = "p,q ≥ 2";
pub const CLAUSE_NONZERO: &str = "aᵢ ≠ 0";
pub const CLAUSE_DISTINCT: &str = "aᵢ ≠ a_j";
pub const CLAUSE_NONEMPTY: &str = "l ≥ 1";
pub const CLAUSE_MULTIPLICITY: &str = "dᵢ ≥ 1";
pub const CLAUSE_FIELD: &str = "M multiple of lcm(4, δ)";
pub const WARN_FIRST_INTEGRAL: &str = "holomorphic first integral case";

pub fn admissibility_check(input: &CuspidalInput) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if input.p < 2 || input.q < 2 {
        rep.reject(CLAUSE_PQ, format!("p = {}, q = {}", input.p, input.q));
    }
    if input.branches.is_empty() {
        rep.reject(CLAUSE_NONEMPTY, "no branches given".into());
        return rep;
    }
    if let Some(b) = input.branches.iter().position(|b| b.d == 0) {
        rep.reject(CLAUSE_MULTIPLICITY, format!("branch {} has d = 0", b));
    }
    let p = input.p.max(1);
    let q = input.q.max(1);
    let delta = p.gcd(&q);
    let needed = 4u32.lcm(&delta);
    if input.field.order() % needed != 0 {
        rep.reject(
            CLAUSE_FIELD,
            format!("M = {} is not a multiple of {}", input.field.order(), needed),
        );
    }
    if input.branches.iter().any(|b| b.b.order() != input.field.order())
        || input.g.field() != &input.field
    {
        rep.reject(CLAUSE_FIELD, "coefficients live in a different field".into());
        return rep;
    }
    let a: Vec<CycloScalar> = input.branches.iter().map(|b| b.b.pow(delta as u64)).collect();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            rep.reject(CLAUSE_NONZERO, format!("a_{} = 0", i + 1));
        }
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] == a[j] {
                rep.reject(
                    CLAUSE_DISTINCT,
                    format!("a_{} = a_{} = {}", i + 1, j + 1, a[i]),
                );
            }
        }
    }
    if input.branches.iter().all(|b| b.d == 1) {
        rep.warnings.push(WARN_FIRST_INTEGRAL.to_string());
    }
    rep
}

/// The separatrix equation, `Ψ`, and the 1-form `Ω` in ambient coordinates.
#[derive(Clone, Debug)]
pub struct PreNormalForm {
    pub separatrix: MultiPoly,
    pub psi: MultiPoly,
    pub phi: MultiPoly,
    pub omega: OneForm,
}

/// Builds `S = z² + φ` and `Ω = d(z² + φ) + G(Ψ, z)·(r z dΨ − 2 Ψ dz)`.
pub fn build_omega(input: &CuspidalInput) -> PreNormalForm {
    let params = derive_params(input);
    let v = ambient_vars();
    let k = &input.field;
    let x = MultiPoly::var(&v, k, 0);
    let y = MultiPoly::var(&v, k, 1);
    let z = MultiPoly::var(&v, k, 2);
    let mut psi = MultiPoly::one(&v, k);
    for (a, dp) in input.coefficients().iter().zip(&params.d_prime) {
        let factor = &y.pow(input.p) - &x.pow(input.q).scale(a);
        psi = &psi * &factor.pow(*dp);
    }
    let phi = psi.pow(params.r);
    let separatrix = &z.pow(2) + &phi;
    let mut omega = Form::function(separatrix.clone()).d();
    if !input.g.is_zero() {
        let g = input.g.substitute(&[psi.clone(), z.clone()]);
        let dpsi = Form::function(psi.clone()).d();
        let dz = Form::dx(&v, k, 2);
        let corr = dpsi
            .scale_poly(&z.scale_int(params.r as i64))
            .sub(&dz.scale_poly(&psi.scale_int(2)))
            .expect("same chart");
        omega = omega.add(&corr.scale_poly(&g)).expect("same chart");
    }
    PreNormalForm {
        separatrix,
        psi,
        phi,
        omega,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SurfaceVerdict {
    /// The weighted order of `G` meets the threshold: the foliation is a generalized surface.
    Satisfied,
    /// The sufficient condition fails; nothing is claimed either way.
    Inconclusive,
}

pub fn generalized_surface_criterion(g: &MultiPoly, r: u32) -> SurfaceVerdict {
    let den = 2u32.gcd(&r) as i64;
    let threshold = Valuation::Finite(rat(r as i64 - 2, den));
    if forms::weighted_valuation(g, r) >= threshold {
        SurfaceVerdict::Satisfied
    } else {
        SurfaceVerdict::Inconclusive
    }
}

/// The quasi-radial field paired with `Ω`.
#[derive(Clone, Debug)]
pub struct HopfPairing {
    /// Components of `scale · 𝒳`, where `𝒳 = p x ∂x + q y ∂y + (pqd/2) z ∂z`.
    pub components: Vec<MultiPoly>,
    /// 1, or 2 when `pqd` is odd.
    pub scale: u32,
    /// `Ω(scale·𝒳) − scale·pqd·(z² + φ)`; zero when the identity holds.
    pub residual: MultiPoly,
}

pub fn hopf_pairing(input: &CuspidalInput) -> HopfPairing {
    let params = derive_params(input);
    let nf = build_omega(input);
    let v = ambient_vars();
    let k = &input.field;
    let pqd = (input.p * input.q * params.d) as i64;
    let scale: i64 = if pqd % 2 == 0 { 1 } else { 2 };
    let components = vec![
        MultiPoly::var(&v, k, 0).scale_int(scale * input.p as i64),
        MultiPoly::var(&v, k, 1).scale_int(scale * input.q as i64),
        MultiPoly::var(&v, k, 2).scale_int(scale * pqd / 2),
    ];
    let paired = nf.omega.contract(&components).component(&[]);
    let residual = &paired - &nf.separatrix.scale_int(scale * pqd);
    HopfPairing {
        components,
        scale: scale as u32,
        residual,
    }
}
