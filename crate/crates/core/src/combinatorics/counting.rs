use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::exact::{big, binomial, factorial, int, pow_rational};
use crate::error::{LabError, Result};

/// Closed-form size of `A_{2p,s}`: tuples in `{1..n}^{2p}` whose alternating
/// sum is exactly `s * n`.
pub fn card_a2ps(n: u64, p: u64, s: i64) -> Result<BigInt> {
    if p < 1 {
        return Err(LabError::Domain("card_a2ps needs p >= 1".into()));
    }
    let pi = p as i64;
    if s.abs() > pi - 1 {
        return Err(LabError::Domain(format!(
            "card_a2ps needs |s| <= p-1, got s={s}, p={p}"
        )));
    }
    let ni = n as i64;
    let mut acc = BigInt::zero();
    for k in 0..=(pi + s - 1) {
        let term = binomial(2 * pi, k) * binomial((pi + s - k) * ni + pi - 1, 2 * pi - 1);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Limit of `|A_p^{(k)}| / n^{p-1}`, as an exact rational.
pub fn h_pk(p: u32, k: u32) -> Result<BigRational> {
    if p < 2 || k > p {
        return Err(LabError::Domain(format!(
            "h_pk needs 0 <= k <= p and p >= 2, got p={p}, k={k}"
        )));
    }
    let (pi, ki) = (p as i64, k as i64);
    let s_lo = -((pi - ki + 1) / 2);
    let s_hi = ki / 2;
    let two = int(2);
    let mut acc = BigRational::zero();
    for s in s_lo..=s_hi {
        let top = 2 * s + pi - ki;
        for q in 0..=top {
            let base = int(top - q) / &two;
            let term = big(binomial(pi, q)) * pow_rational(&base, p - 1);
            if q % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    Ok(acc / big(factorial(p as u64 - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{count, EnumerationCaps, Family};

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn card_small_values() {
        assert_eq!(card_a2ps(4, 2, 0).unwrap(), BigInt::from(44));
        assert_eq!(card_a2ps(4, 2, 1).unwrap(), BigInt::from(10));
        for n in 1..10 {
            assert_eq!(card_a2ps(n, 1, 0).unwrap(), BigInt::from(n));
        }
        assert!(matches!(card_a2ps(4, 2, 2), Err(LabError::Domain(_))));
    }

    #[test]
    fn card_matches_enumeration() {
        let caps = EnumerationCaps::default();
        for n in 1..=6u32 {
            for p in 1..=3u64 {
                let pi = p as i64;
                for s in -(pi - 1)..=(pi - 1) {
                    let e = count(Family::A2ps { s }, n, 2 * p as usize, &caps).unwrap();
                    assert_eq!(card_a2ps(n as u64, p, s).unwrap(), BigInt::from(e));
                }
            }
        }
    }

    #[test]
    fn h_values() {
        assert_eq!(h_pk(2, 1).unwrap(), r(1, 2));
        assert_eq!(h_pk(2, 0).unwrap(), r(0, 1));
        // j1 + j2 = j3 + j4 in [1, n/2]: sum of squared triangle counts ~ n^3 / 12
        assert_eq!(h_pk(4, 2).unwrap(), r(1, 12));
        assert_eq!(h_pk(4, 1).unwrap(), r(1, 24));
        assert_eq!(h_pk(3, 0).unwrap(), r(1, 8));
        assert!(matches!(h_pk(1, 0), Err(LabError::Domain(_))));
        assert!(matches!(h_pk(3, 4), Err(LabError::Domain(_))));
    }

    #[test]
    fn h_matches_enumeration() {
        let caps = EnumerationCaps::default();
        for n in [50u32, 100, 200] {
            for p in 2..=4u32 {
                for k in 0..=p {
                    let c = count(Family::Apk { k: k as usize }, n, p as usize, &caps).unwrap();
                    let ratio = c as f64 / (n as f64).powi(p as i32 - 1);
                    let h = crate::combinatorics::exact::to_f64(&h_pk(p, k).unwrap());
                    assert!((ratio - h).abs() <= 3.0 / n as f64, "p={p} k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn h_symmetry() {
        for p in 2..=6 {
            for k in 0..=p {
                assert_eq!(h_pk(p, k).unwrap(), h_pk(p, p - k).unwrap());
            }
        }
    }
}
