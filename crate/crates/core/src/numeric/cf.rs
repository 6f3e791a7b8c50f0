//! Canonical continued-fraction expansion of a positive rational p/q.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::Rational;

/// Digits `[c0; c1, …, cN]` with `c_ν >= 1` for `ν >= 1` and `cN >= 2` when `N >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfDigits {
    pub digits: Vec<u64>,
    /// Digit sum; the number of point blow-ups that resolve `y^p = x^q`.
    pub k: u64,
}

impl CfDigits {
    /// Evaluates the digits back to a rational.
    pub fn evaluate(&self) -> Rational {
        evaluate_digits(&self.digits)
    }
}

pub fn evaluate_digits(digits: &[u64]) -> Rational {
    let mut it = digits.iter().rev();
    let mut acc = Rational::from_integer(BigInt::from(*it.next().expect("non-empty digits")));
    for &c in it {
        acc = Rational::from_integer(BigInt::from(c)) + acc.recip();
    }
    acc
}

/// Euclidean expansion. The Euclidean algorithm already yields the canonical
/// form: the last quotient is at least 2 whenever more than one digit exists.
pub fn cf_expand(p: u64, q: u64) -> CfDigits {
    assert!(p >= 1 && q >= 1, "cf_expand requires positive integers");
    let (mut a, mut b) = (p, q);
    let mut digits = Vec::new();
    while b != 0 {
        digits.push(a / b);
        let r = a % b;
        a = b;
        b = r;
    }
    let k = digits.iter().sum();
    CfDigits { digits, k }
}

/// The subtractive Euclidean walk on (p, q): at each step the larger entry
/// loses the smaller one, until both are equal. Returns which side shrank at
/// every step (`true` when the `q` side shrank), so its length is `k - 1`.
pub fn subtractive_walk(p: u64, q: u64) -> Vec<bool> {
    let (mut a, mut b) = (p, q);
    let mut walk = Vec::new();
    while a != b {
        if a > b {
            a -= b;
            walk.push(false);
        } else {
            b -= a;
            walk.push(true);
        }
    }
    walk
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    /// Independent oracle: repeated floor/reciprocal on exact rationals.
    fn oracle_digits(p: u64, q: u64) -> Vec<u64> {
        let mut x = Rational::new(BigInt::from(p), BigInt::from(q));
        let mut out = vec![];
        loop {
            let fl = x.floor();
            out.push(u64::try_from(fl.to_integer()).unwrap());
            let frac = &x - &fl;
            if frac.is_zero() {
                break;
            }
            x = frac.recip();
        }
        out
    }

    #[test]
    fn spec_examples() {
        assert_eq!(cf_expand(4, 2), CfDigits { digits: vec![2], k: 2 });
        assert_eq!(cf_expand(7, 5), CfDigits { digits: vec![1, 2, 2], k: 5 });
        assert_eq!(cf_expand(2, 3), CfDigits { digits: vec![0, 1, 2], k: 3 });
        assert_eq!(oracle_digits(7, 5), vec![1, 2, 2]);
        assert_eq!(oracle_digits(2, 3), vec![0, 1, 2]);
    }

    #[test]
    fn walk_length_is_k_minus_one() {
        for p in 1..40 {
            for q in 1..40 {
                assert_eq!(subtractive_walk(p, q).len() as u64 + 1, cf_expand(p, q).k);
            }
        }
    }

    #[test]
    fn round_trip_up_to_500() {
        for p in 1..=500u64 {
            for q in (1..=500u64).step_by(7) {
                let cf = cf_expand(p, q);
                assert_eq!(cf.evaluate(), Rational::new(BigInt::from(p), BigInt::from(q)));
            }
        }
    }

    proptest! {
        #[test]
        fn canonical_and_matches_oracle(p in 1u64..=500, q in 1u64..=500) {
            let cf = cf_expand(p, q);
            prop_assert_eq!(&cf.digits, &oracle_digits(p, q));
            if cf.digits.len() > 1 {
                prop_assert!(*cf.digits.last().unwrap() >= 2);
                prop_assert!(cf.digits[1..].iter().all(|&c| c >= 1));
            }
            prop_assert_eq!(cf.k, cf.digits.iter().sum::<u64>());
        }
    }
}
