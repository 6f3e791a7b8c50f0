//! Sparse multivariate polynomials over Q(ζ_M).
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose order is
//! graded lexicographic in the variable order of the ring. Zero coefficients
//! are never stored.

mod gcd;
mod parse;
mod resultant;

pub use parse::{parse_poly, ParsePolyError};
pub use resultant::{bareiss_det, resultant};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use crate::numeric::{CycloScalar, Field, Rational};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n])
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered coordinate names of a chart or formal ring.
pub type Vars = Arc<Vec<String>>;

pub fn vars(names: &[&str]) -> Vars {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vars,
    field: Field,
    terms: BTreeMap<Monomial, CycloScalar>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars, field: &Field) -> MultiPoly {
        MultiPoly {
            vars: vars.clone(),
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: CycloScalar) -> MultiPoly {
        let field = c.field().clone();
        let mut p = MultiPoly::zero(vars, &field);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn int(vars: &Vars, field: &Field, n: i64) -> MultiPoly {
        MultiPoly::constant(vars, field.from_int(n))
    }

    pub fn one(vars: &Vars, field: &Field) -> MultiPoly {
        MultiPoly::int(vars, field, 1)
    }

    /// The coordinate function of variable `i`.
    pub fn var(vars: &Vars, field: &Field, i: usize) -> MultiPoly {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        MultiPoly::monomial(vars, Monomial(e), field.one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: CycloScalar) -> MultiPoly {
        assert_eq!(m.0.len(), vars.len(), "exponent length mismatch");
        let field = c.field().clone();
        let mut p = MultiPoly::zero(vars, &field);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(
        vars: &Vars,
        field: &Field,
        terms: impl IntoIterator<Item = (Monomial, CycloScalar)>,
    ) -> MultiPoly {
        let mut p = MultiPoly::zero(vars, field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CycloScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Constant term (possibly zero).
    pub fn constant_term(&self) -> CycloScalar {
        self.terms
            .get(&Monomial::one(self.nvars()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn coeff(&self, m: &Monomial) -> CycloScalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: CycloScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &CycloScalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    /// Lowest total degree of a term (the order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    pub fn min_degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).min()
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    fn assert_compatible(&self, other: &MultiPoly) {
        assert!(
            self.vars == other.vars,
            "polynomial ring mismatch: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn scale(&self, c: &CycloScalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars, &self.field);
        }
        MultiPoly {
            vars: self.vars.clone(),
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> MultiPoly {
        self.scale(&self.field.from_int(n))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, a)| {
                    (
                        Monomial(k.0.iter().zip(&m.0).map(|(x, y)| x + y).collect()),
                        a.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(&self.vars, &self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars, &self.field);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c.scale(&Rational::from_integer((e as i64).into())));
        }
        out
    }

    /// Substitutes `values[i]` for variable `i`; the result lives in the ring of the values.
    pub fn substitute(&self, values: &[MultiPoly]) -> MultiPoly {
        assert_eq!(values.len(), self.nvars(), "substitution arity mismatch");
        let target_vars = values
            .first()
            .map(|v| v.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        let mut powers: Vec<Vec<MultiPoly>> = values
            .iter()
            .map(|v| vec![MultiPoly::one(&target_vars, &self.field), v.clone()])
            .collect();
        let mut out = MultiPoly::zero(&target_vars, &self.field);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &values[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Sets variable `i` to the constant `value` (the variable stays in the ring).
    pub fn eval_var(&self, i: usize, value: &CycloScalar) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars, &self.field);
        let mut cache: Vec<CycloScalar> = vec![self.field.one()];
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            while cache.len() <= e {
                let next = &cache[cache.len() - 1] * value;
                cache.push(next);
            }
            let mut m2 = m.clone();
            m2.0[i] = 0;
            out.add_term(m2, c * &cache[e]);
        }
        out
    }

    /// Evaluates at a point of K^n.
    pub fn eval(&self, point: &[CycloScalar]) -> CycloScalar {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Re-expresses the polynomial in another ring by naming, for each of our
    /// variables, its index in `target`.
    pub fn rename(&self, target: &Vars, index_map: &[usize]) -> MultiPoly {
        let mut out = MultiPoly::zero(target, &self.field);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[index_map[i]] += x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Largest monomial in `which` dividing the polynomial, and the quotient.
    /// Returns `None` for the zero polynomial.
    pub fn divide_by_monomial(&self, which: &[usize]) -> Option<(Vec<u32>, MultiPoly)> {
        if self.is_zero() {
            return None;
        }
        let powers: Vec<u32> = which
            .iter()
            .map(|&i| self.min_degree_in(i).unwrap_or(0))
            .collect();
        let mut m = vec![0u32; self.nvars()];
        for (k, &i) in which.iter().enumerate() {
            m[i] = powers[k];
        }
        Some((powers, self.div_monomial(&Monomial(m))))
    }

    /// Divides by a monomial that must divide every term.
    pub fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, a)| {
                    assert!(m.divides(k), "monomial does not divide term");
                    (
                        Monomial(k.0.iter().zip(&m.0).map(|(x, y)| x - y).collect()),
                        a.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        self.assert_compatible(divisor);
        let (lm, lc) = divisor.leading()?;
        let (lm, lc_inv) = (lm.clone(), lc.inverse().ok()?);
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.vars, &self.field);
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = Monomial(m.0.iter().zip(&lm.0).map(|(x, y)| x - y).collect());
            let qc = c * &lc_inv;
            rem = &rem - &divisor.mul_monomial(&qm).scale(&qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inverse().expect("nonzero leading coefficient")),
        }
    }

    /// Coefficients with respect to variable `i`, lowest power first; each
    /// coefficient is a polynomial in the same ring not involving `i`.
    pub fn coefficients_in(&self, i: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(i).unwrap_or(0) as usize;
        let mut out = vec![MultiPoly::zero(&self.vars, &self.field); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            let mut m2 = m.clone();
            m2.0[i] = 0;
            out[e].add_term(m2, c.clone());
        }
        out
    }

    /// Inverse of [`MultiPoly::coefficients_in`].
    pub fn from_coefficients_in(i: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let first = &coeffs[0];
        let mut out = MultiPoly::zero(&first.vars, &first.field);
        for (e, c) in coeffs.iter().enumerate() {
            let mut m = vec![0; first.nvars()];
            m[i] = e as u32;
            out = &out + &c.mul_monomial(&Monomial(m));
        }
        out
    }

    /// Greatest common divisor, normalized to leading coefficient 1.
    pub fn gcd(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_compatible(other);
        gcd::gcd(self, other)
    }

    /// Translates variable `i` by a constant: `x_i ↦ x_i + shift`.
    pub fn translate(&self, i: usize, shift: &CycloScalar) -> MultiPoly {
        let mut values: Vec<MultiPoly> = (0..self.nvars())
            .map(|j| MultiPoly::var(&self.vars, &self.field, j))
            .collect();
        values[i] = &values[i] + &MultiPoly::constant(&self.vars, shift.clone());
        self.substitute(&values)
    }
}

impl<'a> std::ops::Add for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> std::ops::Mul for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut out = MultiPoly::zero(&self.vars, &self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = Monomial(m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect());
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-self.field.one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Canonical rendering: terms in decreasing graded-lex order, `*` between
/// factors, `^` for exponents above 1, non-rational coefficients parenthesized.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], e)
                    }
                })
                .collect();
            let (neg, coeff) = match c.as_rational() {
                Some(q) => (
                    q.is_negative(),
                    if q.abs().is_one() && !mono.is_empty() {
                        None
                    } else {
                        Some(q.abs().to_string())
                    },
                ),
                None => (false, Some(format!("({})", c))),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if let Some(c) = coeff {
                parts.push(c);
            }
            parts.extend(mono);
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Vars, Field) {
        (vars(&["x", "y", "z"]), Field::new(4).unwrap())
    }

    #[test]
    fn arithmetic_and_display() {
        let (v, k) = setup();
        let x = MultiPoly::var(&v, &k, 0);
        let y = MultiPoly::var(&v, &k, 1);
        let p = &(&x * &y) + &x.pow(2).scale_int(-3);
        assert_eq!(p.to_string(), "-3*x^2 + x*y");
        let z = MultiPoly::constant(&v, &k.one() + &k.zeta());
        assert_eq!((&z * &y).to_string(), "(1 + zeta)*y");
    }

    #[test]
    fn exact_division_and_remainder_detection() {
        let (v, k) = setup();
        let x = MultiPoly::var(&v, &k, 0);
        let y = MultiPoly::var(&v, &k, 1);
        let a = &(&y.pow(2) - &x) * &(&x + &y);
        assert_eq!(a.div_exact(&(&x + &y)).unwrap(), &y.pow(2) - &x);
        assert!(a.div_exact(&(&x - &y)).is_none());
    }

    #[test]
    fn monomial_division() {
        let (v, k) = setup();
        let x = MultiPoly::var(&v, &k, 0);
        let y = MultiPoly::var(&v, &k, 1);
        let base = &y.pow(2) - &x;
        let f = &x.pow(4) * &base.pow(2);
        let (pw, red) = f.divide_by_monomial(&[0]).unwrap();
        assert_eq!(pw, vec![4]);
        assert_eq!(red, base.pow(2));
        let (pw, red) = base.divide_by_monomial(&[0]).unwrap();
        assert_eq!(pw, vec![0]);
        assert_eq!(red, base);
        let (pw, red) = (&x.pow(2) * &y.pow(3)).divide_by_monomial(&[0, 1]).unwrap();
        assert_eq!(pw, vec![2, 3]);
        assert_eq!(red, MultiPoly::one(&v, &k));
        assert!(MultiPoly::zero(&v, &k).divide_by_monomial(&[0]).is_none());
    }

    #[test]
    fn substitution_matches_direct_expansion() {
        let (v, k) = setup();
        let x = MultiPoly::var(&v, &k, 0);
        let y = MultiPoly::var(&v, &k, 1);
        let z = MultiPoly::var(&v, &k, 2);
        let a = MultiPoly::constant(&v, k.zeta());
        let phi = (&y.pow(2) - &(&a * &x.pow(3))).pow(2);
        let pulled = phi.substitute(&[x.clone(), &x * &y, z.clone()]);
        let expect = &x.pow(4) * &(&y.pow(2) - &(&a * &x)).pow(2);
        assert_eq!(pulled, expect);
    }

    #[test]
    fn gcd_of_products() {
        let (v, k) = setup();
        let x = MultiPoly::var(&v, &k, 0);
        let y = MultiPoly::var(&v, &k, 1);
        let z = MultiPoly::var(&v, &k, 2);
        let common = &(&z.pow(2) + &(&y - &MultiPoly::one(&v, &k)).pow(3)) * &x;
        let a = &common * &(&y + &z);
        let b = &common * &(&x.pow(2) - &y);
        assert_eq!(a.gcd(&b), common.monic());
        let one = (&x + &y).gcd(&(&x - &y));
        assert_eq!(one, MultiPoly::one(&v, &k));
    }
}
