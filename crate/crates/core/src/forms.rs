//! Exterior differential forms with polynomial coefficients, and polynomial
//! maps between charts.
//!
//! A k-form is stored as a map from strictly increasing index sets of length
//! k to coefficients, so the basis of 2-forms in three variables is
//! `dx1∧dx2, dx1∧dx3, dx2∧dx3` in that order.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::FormError;
use crate::numeric::Field;
use crate::poly::{Monomial, MultiPoly, Vars};

#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    vars: Vars,
    field: Field,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, MultiPoly>,
}

pub type OneForm = Form;
pub type TwoForm = Form;
pub type ThreeForm = Form;

/// Sorts an index list, returning the permutation sign, or `None` on a repeat.
fn sort_with_sign(mut idx: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            } else if idx[j] == idx[j + 1] {
                return None;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((idx, sign))
}

impl Form {
    pub fn zero(vars: &Vars, field: &Field, degree: usize) -> Form {
        Form {
            vars: vars.clone(),
            field: field.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn function(f: MultiPoly) -> Form {
        let mut out = Form::zero(f.vars(), f.field(), 0);
        out.add_component(vec![], f);
        out
    }

    /// `Σ coeffs[i] dx_i`.
    pub fn one_form(coeffs: Vec<MultiPoly>) -> Form {
        let first = &coeffs[0];
        assert_eq!(coeffs.len(), first.nvars(), "one coefficient per variable");
        let mut out = Form::zero(first.vars(), first.field(), 1);
        for (i, c) in coeffs.into_iter().enumerate() {
            out.add_component(vec![i], c);
        }
        out
    }

    /// The basis form `dx_i`.
    pub fn dx(vars: &Vars, field: &Field, i: usize) -> Form {
        let mut out = Form::zero(vars, field, 1);
        out.add_component(vec![i], MultiPoly::one(vars, field));
        out
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `dx_{idx[0]} ∧ …` (indices must be increasing).
    pub fn component(&self, idx: &[usize]) -> MultiPoly {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(&self.vars, &self.field))
    }

    /// The nonzero components in canonical basis order.
    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> {
        self.coeffs.iter()
    }

    /// All basis coefficients, including zeros, in canonical order.
    pub fn dense_components(&self) -> Vec<MultiPoly> {
        basis(self.vars.len(), self.degree)
            .iter()
            .map(|b| self.component(b))
            .collect()
    }

    fn add_component(&mut self, idx: Vec<usize>, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        let Some((idx, sign)) = sort_with_sign(idx) else {
            return;
        };
        let c = if sign < 0 { -&c } else { c };
        let sum = match self.coeffs.remove(&idx) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(idx, sum);
        }
    }

    fn check_chart(&self, other: &Form) -> Result<(), FormError> {
        if self.vars != other.vars {
            return Err(FormError::ChartMismatch {
                expected: self.vars.to_vec(),
                found: other.vars.to_vec(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form, FormError> {
        self.check_chart(other)?;
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_component(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form, FormError> {
        self.add(&other.scale_poly(&MultiPoly::int(&self.vars, &self.field, -1)))
    }

    /// Multiplies every coefficient by a function.
    pub fn scale_poly(&self, f: &MultiPoly) -> Form {
        let mut out = Form::zero(&self.vars, &self.field, self.degree);
        for (idx, c) in &self.coeffs {
            out.add_component(idx.clone(), c * f);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Form {
        let mut out = Form::zero(&self.vars, &self.field, self.degree);
        for (idx, c) in &self.coeffs {
            out.add_component(idx.clone(), f(c));
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(&self.vars, &self.field, self.degree + 1);
        for (idx, c) in &self.coeffs {
            for j in 0..self.vars.len() {
                let dc = c.derivative(j);
                if dc.is_zero() {
                    continue;
                }
                let mut new_idx = vec![j];
                new_idx.extend_from_slice(idx);
                out.add_component(new_idx, dc);
            }
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Result<Form, FormError> {
        self.check_chart(other)?;
        let mut out = Form::zero(&self.vars, &self.field, self.degree + other.degree);
        for (i1, c1) in &self.coeffs {
            for (i2, c2) in &other.coeffs {
                let mut idx = i1.clone();
                idx.extend_from_slice(i2);
                out.add_component(idx, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Interior product with a vector field given by its components.
    pub fn contract(&self, field: &[MultiPoly]) -> Form {
        assert!(self.degree >= 1, "cannot contract a function");
        let mut out = Form::zero(&self.vars, &self.field, self.degree - 1);
        for (idx, c) in &self.coeffs {
            for (pos, &i) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(pos);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                out.add_component(rest, (c * &field[i]).scale_int(sign));
            }
        }
        out
    }

    /// Pullback along a polynomial map whose target chart is ours.
    pub fn pullback(&self, map: &PolyMap) -> Result<Form, FormError> {
        if map.target != self.vars {
            return Err(FormError::ChartMismatch {
                expected: map.target.to_vec(),
                found: self.vars.to_vec(),
            });
        }
        let src = &map.source;
        let dimages: Vec<Form> = map
            .images
            .iter()
            .map(|f| Form::function(f.clone()).d())
            .collect();
        let mut out = Form::zero(src, &self.field, self.degree);
        for (idx, c) in &self.coeffs {
            let mut acc = Form::function(c.substitute(&map.images));
            for &i in idx {
                acc = acc.wedge(&dimages[i]).expect("same chart");
            }
            out = out.add(&acc).expect("same chart");
        }
        Ok(out)
    }

    /// Splits off the largest monomial in the listed variables dividing every coefficient.
    pub fn divide_by_monomial(&self, which: &[usize]) -> Result<(Vec<u32>, Form), FormError> {
        if self.is_zero() {
            return Err(FormError::ZeroInput);
        }
        let powers: Vec<u32> = which
            .iter()
            .map(|&i| {
                self.coeffs
                    .values()
                    .map(|c| c.min_degree_in(i).unwrap_or(0))
                    .min()
                    .unwrap_or(0)
            })
            .collect();
        let mut m = vec![0u32; self.vars.len()];
        for (k, &i) in which.iter().enumerate() {
            m[i] = powers[k];
        }
        let m = Monomial(m);
        Ok((powers, self.map_coeffs(|c| c.div_monomial(&m))))
    }

    /// Re-expresses in another chart with the same number of variables.
    pub fn with_vars(&self, target: &Vars) -> Form {
        let map: Vec<usize> = (0..self.vars.len()).collect();
        let mut out = Form::zero(target, &self.field, self.degree);
        for (idx, c) in &self.coeffs {
            out.add_component(idx.clone(), c.rename(target, &map));
        }
        out
    }
}

fn basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, k, &mut vec![], &mut out);
    out
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(idx, c)| {
                if idx.is_empty() {
                    return c.to_string();
                }
                let basis: Vec<String> = idx.iter().map(|&i| format!("d{}", self.vars[i])).collect();
                format!("({})*{}", c, basis.join("^"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A polynomial map `source chart → target chart`, given by the expression of
/// each target coordinate in the source coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    pub source: Vars,
    pub target: Vars,
    pub images: Vec<MultiPoly>,
}

impl PolyMap {
    pub fn new(source: &Vars, target: &Vars, images: Vec<MultiPoly>) -> PolyMap {
        assert_eq!(images.len(), target.len(), "one image per target coordinate");
        assert!(images.iter().all(|p| p.vars() == source), "images live in the source ring");
        PolyMap {
            source: source.clone(),
            target: target.clone(),
            images,
        }
    }

    pub fn identity(vars: &Vars, field: &Field) -> PolyMap {
        PolyMap::new(
            vars,
            vars,
            (0..vars.len()).map(|i| MultiPoly::var(vars, field, i)).collect(),
        )
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap, FormError> {
        if inner.target != self.source {
            return Err(FormError::ChartMismatch {
                expected: self.source.to_vec(),
                found: inner.target.to_vec(),
            });
        }
        Ok(PolyMap::new(
            &inner.source,
            &self.target,
            self.images.iter().map(|f| f.substitute(&inner.images)).collect(),
        ))
    }

    /// Pulls back a function on the target chart.
    pub fn pull_function(&self, f: &MultiPoly) -> MultiPoly {
        assert!(f.vars() == &self.target, "function must live on the target chart");
        f.substitute(&self.images)
    }

    /// Jacobian entries `∂ image_i / ∂ source_j`.
    pub fn jacobian(&self) -> Vec<Vec<MultiPoly>> {
        self.images
            .iter()
            .map(|f| (0..self.source.len()).map(|j| f.derivative(j)).collect())
            .collect()
    }
}

/// Convenience: integrability test `ω ∧ dω == 0`.
pub fn is_integrable(omega: &OneForm) -> bool {
    omega.wedge(&omega.d()).expect("same chart").is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::vars;
    use proptest::prelude::*;

    fn ring() -> (Vars, Field) {
        (vars(&["x", "y", "z"]), Field::new(4).unwrap())
    }

    fn coords(v: &Vars, k: &Field) -> (MultiPoly, MultiPoly, MultiPoly) {
        (
            MultiPoly::var(v, k, 0),
            MultiPoly::var(v, k, 1),
            MultiPoly::var(v, k, 2),
        )
    }

    #[test]
    fn derivative_of_constant_and_product() {
        let (v, k) = ring();
        let (x, y, _) = coords(&v, &k);
        assert!(Form::function(MultiPoly::int(&v, &k, 5)).d().is_zero());
        let d = Form::function(&x * &y).d();
        assert_eq!(d.component(&[0]), y);
        assert_eq!(d.component(&[1]), x);
        assert!(d.component(&[2]).is_zero());
    }

    #[test]
    fn wedge_basics() {
        let (v, k) = ring();
        let dx = Form::dx(&v, &k, 0);
        let dy = Form::dx(&v, &k, 1);
        assert!(dx.wedge(&dx).unwrap().is_zero());
        let w = dx.wedge(&dy).unwrap();
        assert_eq!(w.component(&[0, 1]), MultiPoly::one(&v, &k));
        assert_eq!(dy.wedge(&dx).unwrap().component(&[0, 1]), MultiPoly::int(&v, &k, -1));
    }

    #[test]
    fn non_integrable_contact_like_form() {
        let (v, k) = ring();
        let (x, _, z) = coords(&v, &k);
        let omega = Form::one_form(vec![z.clone(), x.clone(), MultiPoly::one(&v, &k)]);
        let w = omega.wedge(&omega.d()).unwrap();
        let expect = &x + &MultiPoly::one(&v, &k);
        assert_eq!(w.component(&[0, 1, 2]), expect);
        assert!(!is_integrable(&omega));
        let exact = Form::function(&z.pow(2) + &x.pow(3)).d();
        assert!(is_integrable(&exact));
    }

    #[test]
    fn pullback_examples() {
        let (v, k) = ring();
        let (x, y, z) = coords(&v, &k);
        let id = PolyMap::identity(&v, &k);
        let omega = Form::one_form(vec![y.clone(), z.clone(), x.clone()]);
        assert_eq!(omega.pullback(&id).unwrap(), omega);
        let blow = PolyMap::new(&v, &v, vec![x.clone(), &x * &y, z.clone()]);
        let dy = Form::dx(&v, &k, 1).pullback(&blow).unwrap();
        assert_eq!(dy.component(&[0]), y);
        assert_eq!(dy.component(&[1]), x);
    }

    #[test]
    fn divide_form_by_monomial() {
        let (v, k) = ring();
        let (x, y, z) = coords(&v, &k);
        let omega = Form::one_form(vec![x.pow(3) * y.clone(), x.pow(2) * z.clone(), x.pow(2)]);
        let (pw, red) = omega.divide_by_monomial(&[0, 1]).unwrap();
        assert_eq!(pw, vec![2, 0]);
        assert_eq!(red.component(&[0]), &x * &y);
        assert!(Form::zero(&v, &k, 1).divide_by_monomial(&[0]).is_err());
    }

    fn small_poly(v: &Vars, k: &Field, seed: &[(u32, u32, u32, i64)]) -> MultiPoly {
        MultiPoly::from_terms(
            v,
            k,
            seed.iter()
                .map(|&(a, b, c, n)| (Monomial(vec![a, b, c]), k.from_int(n))),
        )
    }

    fn terms_strategy() -> impl Strategy<Value = Vec<(u32, u32, u32, i64)>> {
        prop::collection::vec((0u32..3, 0u32..3, 0u32..3, -3i64..4), 1..5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn d_squared_vanishes(a in terms_strategy(), b in terms_strategy(), c in terms_strategy()) {
            let (v, k) = ring();
            let f = small_poly(&v, &k, &a);
            prop_assert!(Form::function(f.clone()).d().d().is_zero());
            let w = Form::one_form(vec![f, small_poly(&v, &k, &b), small_poly(&v, &k, &c)]);
            prop_assert!(w.d().d().is_zero());
        }

        #[test]
        fn leibniz_rule(a in terms_strategy(), b in terms_strategy()) {
            let (v, k) = ring();
            let f = small_poly(&v, &k, &a);
            let g = small_poly(&v, &k, &b);
            let lhs = Form::function(&f * &g).d();
            let rhs = Form::function(f.clone()).d().scale_poly(&g)
                .add(&Form::function(g.clone()).d().scale_poly(&f)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pullback_functorial_and_natural(a in terms_strategy(), b in terms_strategy(), e1 in 0u32..3, e2 in 0u32..3) {
            let (v, k) = ring();
            let (x, y, z) = coords(&v, &k);
            // blow-up shaped maps
            let m1 = PolyMap::new(&v, &v, vec![x.clone(), &x * &y, &x.pow(e1) * &z]);
            let m2 = PolyMap::new(&v, &v, vec![&x * &y, &y + &MultiPoly::int(&v, &k, 2), &y.pow(e2) * &z]);
            let w = Form::one_form(vec![small_poly(&v, &k, &a), small_poly(&v, &k, &b), x.clone()]);
            let composed = m2.compose(&m1).unwrap();
            prop_assert_eq!(
                w.pullback(&composed).unwrap(),
                w.pullback(&m2).unwrap().pullback(&m1).unwrap()
            );
            prop_assert_eq!(w.d().pullback(&m1).unwrap(), w.pullback(&m1).unwrap().d());
        }
    }
}

/// Weighted order of a polynomial `G(Ψ, z)`; `Infinity` for `G = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(crate::numeric::Rational),
    Infinity,
}

/// `min (2α + rβ) / gcd(2, r)` over the terms `Ψ^α z^β` of `g`.
/// Variable 0 of `g` is Ψ and variable 1 is z.
pub fn weighted_valuation(g: &MultiPoly, r: u32) -> Valuation {
    use num_integer::Integer;
    let den = 2u32.gcd(&r) as i64;
    match g
        .terms()
        .map(|(m, _)| 2 * m.0[0] as i64 + r as i64 * m.0[1] as i64)
        .min()
    {
        None => Valuation::Infinity,
        Some(n) => Valuation::Finite(crate::numeric::rat(n, den)),
    }
}

#[cfg(test)]
mod valuation_tests {
    use super::*;
    use crate::numeric::rat;
    use crate::poly::vars;
    use proptest::prelude::*;

    fn g_ring() -> (Vars, Field) {
        (vars(&["Psi", "z"]), Field::new(4).unwrap())
    }

    #[test]
    fn examples() {
        let (v, k) = g_ring();
        let psi = MultiPoly::var(&v, &k, 0);
        let z = MultiPoly::var(&v, &k, 1);
        assert_eq!(weighted_valuation(&MultiPoly::int(&v, &k, 3), 5), Valuation::Finite(rat(0, 1)));
        assert_eq!(weighted_valuation(&(&psi * &z), 2), Valuation::Finite(rat(2, 1)));
        assert_eq!(weighted_valuation(&(&psi.pow(2) + &z.pow(3)), 3), Valuation::Finite(rat(4, 1)));
        assert_eq!(weighted_valuation(&MultiPoly::zero(&v, &k), 3), Valuation::Infinity);
        assert!(Valuation::Finite(rat(100, 1)) < Valuation::Infinity);
    }

    proptest! {
        #[test]
        fn additive_under_products(
            a in prop::collection::vec((0u32..4, 0u32..4), 1..4),
            b in prop::collection::vec((0u32..4, 0u32..4), 1..4),
            r in 1u32..7,
        ) {
            let (v, k) = g_ring();
            // positive coefficients keep the minimal-weight part from cancelling
            let mk = |t: &[(u32, u32)]| MultiPoly::from_terms(&v, &k,
                t.iter().map(|&(x, y)| (Monomial(vec![x, y]), k.one())));
            let (ga, gb) = (mk(&a), mk(&b));
            let sum = match (weighted_valuation(&ga, r), weighted_valuation(&gb, r)) {
                (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
                _ => Valuation::Infinity,
            };
            prop_assert_eq!(weighted_valuation(&(&ga * &gb), r), sum);
        }
    }
}
