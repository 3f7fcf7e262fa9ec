use std::collections::HashMap;

use crate::error::{LabError, Result};
use crate::MatrixKind;

/// Largest total degree accepted by [`wick_moment`]; 15!! = 2027025 pairings.
pub const MAX_WICK_DEGREE: u32 = 16;

/// `E[prod Z_i^{powers_i}]` for a centred Gaussian vector with covariance
/// `cov`, by the Gaussian integration-by-parts recursion
/// `E[Z_i F] = sum_j cov_ij E[dF/dZ_j]`, memoized on the power vector.
pub fn wick_moment(cov: &[Vec<f64>], powers: &[u32]) -> Result<f64> {
    if cov.len() != powers.len() || cov.iter().any(|row| row.len() != powers.len()) {
        return Err(LabError::Domain(format!(
            "covariance is not {0}x{0}",
            powers.len()
        )));
    }
    let total: u32 = powers.iter().sum();
    if total > MAX_WICK_DEGREE {
        return Err(LabError::Capacity {
            what: "Wick moment".into(),
            needed: total as u128,
            cap: MAX_WICK_DEGREE as u128,
            cap_name: "max total degree",
        });
    }
    let mut memo = HashMap::new();
    Ok(recurse(cov, powers.to_vec(), &mut memo))
}

fn recurse(cov: &[Vec<f64>], mut pw: Vec<u32>, memo: &mut HashMap<Vec<u32>, f64>) -> f64 {
    let total: u32 = pw.iter().sum();
    if total == 0 {
        return 1.0;
    }
    if total % 2 == 1 {
        return 0.0;
    }
    if let Some(&v) = memo.get(&pw) {
        return v;
    }
    let key = pw.clone();
    let i = pw.iter().position(|&e| e > 0).expect("nonzero total");
    pw[i] -= 1;
    let mut acc = 0.0;
    for j in 0..pw.len() {
        if pw[j] == 0 || cov[i][j] == 0.0 {
            continue;
        }
        let mult = pw[j] as f64;
        let mut next = pw.clone();
        next[j] -= 1;
        acc += cov[i][j] * mult * recurse(cov, next, memo);
    }
    memo.insert(key, acc);
    acc
}

/// One factor `w_p(t)` (RC) or `eta_p(t)` (SC) of a joint moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEntry {
    pub kind: MatrixKind,
    pub p: u32,
    pub t: f64,
}

/// Limit of `E[prod X_i]` for a centred Gaussian family with pairwise
/// covariance `cov`: zero for an odd count, otherwise the sum over pair
/// partitions of products of pair covariances.
pub fn gaussian_joint_moment<E>(entries: &[E], mut cov: impl FnMut(&E, &E) -> f64) -> f64 {
    if entries.len() % 2 == 1 {
        return 0.0;
    }
    let idx: Vec<usize> = (0..entries.len()).collect();
    let mut c = |i: usize, j: usize| cov(&entries[i], &entries[j]);
    pairings(&idx, &mut c)
}

fn pairings(rest: &[usize], cov: &mut impl FnMut(usize, usize) -> f64) -> f64 {
    if rest.is_empty() {
        return 1.0;
    }
    let first = rest[0];
    let mut acc = 0.0;
    for k in 1..rest.len() {
        let others: Vec<usize> = rest[1..]
            .iter()
            .enumerate()
            .filter(|&(pos, _)| pos + 1 != k)
            .map(|(_, &v)| v)
            .collect();
        acc += cov(first, rest[k]) * pairings(&others, cov);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::exact::odd_double_factorial;

    /// Direct sum over perfect matchings of the expanded variable list.
    fn brute(cov: &[Vec<f64>], powers: &[u32]) -> f64 {
        let vars: Vec<usize> = powers
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        gaussian_joint_moment(&vars, |&a, &b| cov[a][b])
    }

    #[test]
    fn univariate_double_factorials() {
        for m in 0..=6u32 {
            let v = wick_moment(&[vec![1.0]], &[2 * m]).unwrap();
            assert_eq!(v, odd_double_factorial(m) as f64);
        }
        let v = wick_moment(&[vec![2.0]], &[4]).unwrap();
        assert_eq!(v, 12.0);
    }

    #[test]
    fn isserlis_cases() {
        let c = vec![
            vec![1.0, 0.3, 0.2],
            vec![0.3, 2.0, -0.4],
            vec![0.2, -0.4, 1.5],
        ];
        assert_eq!(wick_moment(&c, &[1, 1, 1]).unwrap(), 0.0);
        let v = wick_moment(&c, &[2, 2, 0]).unwrap();
        assert!((v - (1.0 * 2.0 + 2.0 * 0.09)).abs() < 1e-14);
    }

    #[test]
    fn recursion_matches_matchings() {
        let c = vec![
            vec![1.0, 0.5, 0.25],
            vec![0.5, 1.5, 0.1],
            vec![0.25, 0.1, 0.8],
        ];
        for powers in [[2, 2, 2], [3, 1, 2], [4, 0, 2], [1, 3, 0], [3, 3, 2]] {
            let a = wick_moment(&c, &powers).unwrap();
            let b = brute(&c, &powers);
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "{powers:?}");
        }
    }

    #[test]
    fn degree_cap() {
        assert!(wick_moment(&[vec![1.0]], &[16]).is_ok());
        assert!(matches!(
            wick_moment(&[vec![1.0]], &[18]),
            Err(LabError::Capacity { .. })
        ));
    }

    #[test]
    fn joint_moment_small_counts() {
        let c = [[1.0, 0.2, 0.3, 0.4], [0.2, 1.0, 0.5, 0.6], [0.3, 0.5, 1.0, 0.7], [0.4, 0.6, 0.7, 1.0]];
        let e = [0usize, 1, 2, 3];
        let f = |a: &usize, b: &usize| c[*a][*b];
        assert_eq!(gaussian_joint_moment(&e[..3], f), 0.0);
        assert_eq!(gaussian_joint_moment(&e[..2], f), 0.2);
        let v = gaussian_joint_moment(&e, f);
        assert!((v - (0.2 * 0.7 + 0.3 * 0.6 + 0.4 * 0.5)).abs() < 1e-15);
    }
}
