//! Exact arithmetic in the cyclotomic field Q(ζ_M).
//!
//! Elements are stored as coefficient vectors in the power basis
//! `1, ζ, …, ζ^{φ(M)-1}`, always reduced modulo the M-th cyclotomic
//! polynomial, so structural equality is field equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use super::Rational;
use crate::error::ArithError;

/// Shared description of Q(ζ_M): the order and its cyclotomic modulus.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    order: u32,
    /// Monic Φ_M, lowest degree first.
    modulus: Vec<BigInt>,
}

static FIELDS: Lazy<Mutex<HashMap<u32, Field>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Handle to a cyclotomic field; cheap to clone.
#[derive(Clone, Debug)]
pub struct Field(Arc<CycloField>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.order == other.0.order
    }
}
impl Eq for Field {}

impl Field {
    /// Returns the (cached) field Q(ζ_order).
    pub fn new(order: u32) -> Result<Field, ArithError> {
        if order == 0 {
            return Err(ArithError::UnsupportedOrder(order));
        }
        let mut cache = FIELDS.lock().expect("field cache poisoned");
        if let Some(f) = cache.get(&order) {
            return Ok(f.clone());
        }
        let f = Field(Arc::new(CycloField {
            order,
            modulus: cyclotomic_polynomial(order),
        }));
        cache.insert(order, f.clone());
        Ok(f)
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// φ(M), the degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn zero(&self) -> CycloScalar {
        CycloScalar {
            field: self.clone(),
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> CycloScalar {
        self.from_rational(Rational::one())
    }

    pub fn from_int(&self, n: i64) -> CycloScalar {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(&self, q: Rational) -> CycloScalar {
        let mut s = self.zero();
        s.coeffs[0] = q;
        s
    }

    /// ζ^k for any integer k (negative exponents allowed).
    pub fn zeta_pow(&self, k: i64) -> CycloScalar {
        let m = self.order() as i64;
        let e = k.rem_euclid(m) as usize;
        let mut raw = vec![Rational::zero(); e + 1];
        raw[e] = Rational::one();
        self.reduce(raw)
    }

    pub fn zeta(&self) -> CycloScalar {
        self.zeta_pow(1)
    }

    /// Builds an element from arbitrary-length power-basis coefficients,
    /// reducing modulo Φ_M.
    pub fn from_coeffs(&self, coeffs: Vec<Rational>) -> CycloScalar {
        self.reduce(coeffs)
    }

    fn reduce(&self, mut raw: Vec<Rational>) -> CycloScalar {
        let n = self.degree();
        let modulus = &self.0.modulus;
        while raw.len() > n {
            let top = raw.pop().expect("non-empty");
            if top.is_zero() {
                continue;
            }
            let shift = raw.len() - n;
            for (i, c) in modulus.iter().take(n).enumerate() {
                if !c.is_zero() {
                    raw[shift + i] -= &top * Rational::from_integer(c.clone());
                }
            }
        }
        raw.resize(n, Rational::zero());
        CycloScalar {
            field: self.clone(),
            coeffs: raw,
        }
    }
}

/// Φ_M with integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    // Φ_M = (x^M - 1) / ∏_{d | M, d < M} Φ_d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            num = int_poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

/// Exact element of Q(ζ_M).
#[derive(Clone, PartialEq, Eq)]
pub struct CycloScalar {
    field: Field,
    coeffs: Vec<Rational>,
}

impl std::hash::Hash for CycloScalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.coeffs.hash(state);
    }
}

impl CycloScalar {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> CycloScalar {
        CycloScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> CycloScalar {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn check_order(&self, rhs: &CycloScalar) -> Result<(), ArithError> {
        if self.order() != rhs.order() {
            Err(ArithError::OrderMismatch(self.order(), rhs.order()))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, rhs: &CycloScalar) -> Result<CycloScalar, ArithError> {
        self.check_order(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_sub(&self, rhs: &CycloScalar) -> Result<CycloScalar, ArithError> {
        self.check_order(rhs)?;
        Ok(self - rhs)
    }

    pub fn checked_mul(&self, rhs: &CycloScalar) -> Result<CycloScalar, ArithError> {
        self.check_order(rhs)?;
        Ok(self * rhs)
    }

    pub fn checked_div(&self, rhs: &CycloScalar) -> Result<CycloScalar, ArithError> {
        self.check_order(rhs)?;
        Ok(self * &rhs.inverse()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inverse(&self) -> Result<CycloScalar, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let modulus: Vec<Rational> = self
            .field
            .0
            .modulus
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        // Invariant: s_i * self ≡ r_i (mod Φ_M).
        let mut r0 = modulus;
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while r1.len() > 1 {
            let (q, r) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since Φ_M is irreducible.
        let c = r1[0].recip();
        let s: Vec<Rational> = s1.iter().map(|x| x * &c).collect();
        Ok(self.field.reduce(s))
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.len() > 1 && v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        v.push(Rational::zero());
    }
    v
}

fn qpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn qpoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect()
}

fn qpoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![Rational::zero()], r);
    }
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    (q, trim(r))
}

impl<'a> Add for &'a CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &'a CycloScalar) -> CycloScalar {
        assert_eq!(self.order(), rhs.order(), "cyclotomic order mismatch");
        CycloScalar {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub for &'a CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &'a CycloScalar) -> CycloScalar {
        assert_eq!(self.order(), rhs.order(), "cyclotomic order mismatch");
        CycloScalar {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul for &'a CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &'a CycloScalar) -> CycloScalar {
        assert_eq!(self.order(), rhs.order(), "cyclotomic order mismatch");
        if let Some(q) = self.as_rational() {
            return rhs.scale(q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(q);
        }
        self.field.reduce(qpoly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloScalar {
            type Output = CycloScalar;
            fn $m(self, rhs: CycloScalar) -> CycloScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        -&self
    }
}

/// Canonical text: `a0 + a1*zeta + a2*zeta^2 ...`.
impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{}", abs)?,
                (1, true) => write!(f, "zeta")?,
                (1, false) => write!(f, "{}*zeta", abs)?,
                (_, true) => write!(f, "zeta^{}", i)?,
                (_, false) => write!(f, "{}*zeta^{}", abs, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self, self.order())
    }
}

/// lcm of two positive integers.
pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}
