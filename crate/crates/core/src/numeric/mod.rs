//! Exact arithmetic: rationals, the cyclotomic coefficient field, continued fractions.

pub mod cf;
pub mod cyclo;

pub use cf::{cf_expand, CfDigits};
pub use cyclo::{CycloScalar, Field};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
