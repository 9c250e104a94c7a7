//! Integer gcd utilities.
//!
//! Two routes to the same value: the Euclidean algorithm, and the totient-sum
//! identity gcd(a,b) = Σ φ(q) over the common divisors q of a and b. The
//! second exists so the identity itself is executable and checkable against
//! the first; it is only sensible for positive arguments.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("totient-sum gcd requires positive arguments, got ({a}, {b})")]
    NonPositive { a: i64, b: i64 },
}

/// Euclidean gcd with the conventions gcd(0,0) = 0 and gcd(a,0) = |a|.
pub fn gcd_euclid(a: i64, b: i64) -> u64 {
    let mut x = a.unsigned_abs();
    let mut y = b.unsigned_abs();
    while y != 0 {
        let r = x % y;
        x = y;
        y = r;
    }
    x
}

/// Euclidean gcd for big integers, same conventions as [`gcd_euclid`].
pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.abs();
    let mut y = b.abs();
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

/// Euler's totient by trial-division factorization.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1, "totient is defined for positive integers");
    let mut remaining = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= remaining {
        if remaining.is_multiple_of(p) {
            while remaining.is_multiple_of(p) {
                remaining /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if remaining > 1 {
        result -= result / remaining;
    }
    result
}

/// gcd(a,b) as the sum of φ(q) over every q dividing both a and b.
///
/// Positive arguments only; the identity is stated for positive integers.
/// Must agree with [`gcd_euclid`] everywhere.
pub fn gcd_via_totient(a: i64, b: i64) -> Result<u64, ArithError> {
    if a < 1 || b < 1 {
        return Err(ArithError::NonPositive { a, b });
    }
    let (a, b) = (a as u64, b as u64);
    let mut sum = 0;
    for q in 1..=a.min(b) {
        if a % q == 0 && b % q == 0 {
            sum += totient(q);
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Oracle: largest d dividing both, by exhaustive scan.
    fn gcd_by_scan(a: u64, b: u64) -> u64 {
        if a == 0 && b == 0 {
            return 0;
        }
        let bound = if a == 0 { b } else { a };
        (1..=bound)
            .filter(|d| (a == 0 || a.is_multiple_of(*d)) && (b == 0 || b.is_multiple_of(*d)))
            .max()
            .unwrap()
    }

    #[test]
    fn euclid_examples() {
        assert_eq!(gcd_by_scan(12, 18), 6);
        assert_eq!(gcd_euclid(12, 18), 6);
        assert_eq!(gcd_euclid(0, 0), 0);
        assert_eq!(gcd_euclid(-7, 7), 7);
        assert_eq!(gcd_euclid(5, 0), 5);
    }

    #[test]
    fn totient_small_values() {
        // φ(1)=1, φ(2)=1, φ(3)=2, φ(6)=2, φ(7)=6, φ(12)=4
        assert_eq!(totient(1), 1);
        assert_eq!(totient(2), 1);
        assert_eq!(totient(3), 2);
        assert_eq!(totient(6), 2);
        assert_eq!(totient(7), 6);
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn totient_sum_examples() {
        // Common divisors of (12, 18) are {1,2,3,6}; φ-sum 1+1+2+2 = 6.
        assert_eq!(gcd_via_totient(12, 18).unwrap(), 6);
        assert_eq!(gcd_via_totient(12, 18).unwrap(), gcd_euclid(12, 18));
        // (7, 7): φ(1)+φ(7) = 1+6 = 7.
        assert_eq!(gcd_via_totient(7, 7).unwrap(), 7);
        for n in 1..50 {
            assert_eq!(gcd_via_totient(1, n).unwrap(), 1);
        }
    }

    #[test]
    fn totient_sum_rejects_nonpositive() {
        assert!(gcd_via_totient(0, 5).is_err());
        assert!(gcd_via_totient(5, -1).is_err());
    }

    #[test]
    fn big_gcd_matches_machine() {
        let a = BigInt::from(-84);
        let b = BigInt::from(30);
        assert_eq!(gcd_big(&a, &b), BigInt::from(6));
        assert_eq!(gcd_big(&BigInt::from(0), &BigInt::from(0)), BigInt::from(0));
    }

    proptest! {
        #[test]
        fn totient_identity_agrees_with_euclid(a in 1i64..=300, b in 1i64..=300) {
            prop_assert_eq!(gcd_via_totient(a, b).unwrap(), gcd_euclid(a, b));
        }

        #[test]
        fn euclid_agrees_with_scan(a in 0u64..=200, b in 0u64..=200) {
            prop_assert_eq!(gcd_euclid(a as i64, b as i64), gcd_by_scan(a, b));
        }
    }
}
