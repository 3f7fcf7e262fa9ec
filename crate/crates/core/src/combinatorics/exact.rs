//! Exact integer and rational helpers.
//!
//! `binomial` follows the convention C(x, y) = 0 whenever y < 0, y > x or
//! x < 0, so formulas with out-of-range indices evaluate to zero instead of
//! failing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn binomial(x: i64, y: i64) -> BigInt {
    if x < 0 || y < 0 || y > x {
        return BigInt::zero();
    }
    let y = y.min(x - y);
    let mut acc = BigInt::one();
    for i in 0..y {
        acc *= BigInt::from(x - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(x: u64) -> BigInt {
    (1..=x).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn big(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

/// `base^exp` with the convention 0^0 = 1.
pub fn pow_rational(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Lossy conversion at the theory-evaluation boundary.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Double factorial (2m-1)!! for m >= 0, i.e. 1, 1, 3, 15, 105, ...
pub fn odd_double_factorial(m: u32) -> u128 {
    (1..=m as u128).map(|i| 2 * i - 1).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, -2), BigInt::zero());
        assert_eq!(binomial(1, 3), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(10), BigInt::from(3628800));
        assert_eq!(odd_double_factorial(0), 1);
        assert_eq!(odd_double_factorial(3), 15);
        assert_eq!(odd_double_factorial(6), 10395);
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(pow_rational(&int(0), 0), BigRational::one());
        assert_eq!(pow_rational(&int(0), 3), BigRational::zero());
    }
}
