use std::collections::BTreeMap;

use crate::error::{LabError, Result};

/// Every value occurs exactly twice, once at an odd and once at an even
/// 1-based position.
pub fn is_odd_even_pair_matched(indices: &[u32]) -> bool {
    let mut seen: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
    for (pos, &v) in indices.iter().enumerate() {
        let e = seen.entry(v).or_default();
        // pos is 0-based, so an even pos is an odd 1-based position
        if pos % 2 == 0 {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    seen.values().all(|&(odd, even)| odd == 1 && even == 1)
}

fn check_lengths(indices: &[u32], signs: &[i8]) -> Result<()> {
    if indices.len() != signs.len() {
        return Err(LabError::Domain(format!(
            "{} indices but {} signs",
            indices.len(),
            signs.len()
        )));
    }
    Ok(())
}

/// Whether `value` occurs exactly twice in `indices` with opposite signs.
pub fn value_is_opposite_sign_matched(indices: &[u32], signs: &[i8], value: u32) -> Result<bool> {
    check_lengths(indices, signs)?;
    let hits: Vec<i8> = indices
        .iter()
        .zip(signs)
        .filter(|(&v, _)| v == value)
        .map(|(_, &s)| s)
        .collect();
    Ok(hits.len() == 2 && hits[0] == -hits[1])
}

/// Every value occurs exactly twice with opposite signs.
pub fn is_opposite_sign_pair_matched(indices: &[u32], signs: &[i8]) -> Result<bool> {
    check_lengths(indices, signs)?;
    for &v in indices {
        if !value_is_opposite_sign_matched(indices, signs, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_even() {
        assert!(!is_odd_even_pair_matched(&[1, 2, 1, 3]));
        assert!(is_odd_even_pair_matched(&[1, 1, 3, 3]));
        assert!(is_odd_even_pair_matched(&[1, 1]));
        assert!(is_odd_even_pair_matched(&[2, 5, 5, 2]));
        assert!(!is_odd_even_pair_matched(&[1, 1, 1, 1]));
        assert!(is_odd_even_pair_matched(&[]));
    }

    #[test]
    fn opposite_sign() {
        assert!(value_is_opposite_sign_matched(&[2, 3, 5, 2], &[1, 1, 1, -1], 2).unwrap());
        assert!(!value_is_opposite_sign_matched(&[2, 3, 5, 2], &[1, 1, 1, 1], 2).unwrap());
        assert!(is_opposite_sign_pair_matched(&[4, 4], &[1, -1]).unwrap());
        assert!(!is_opposite_sign_pair_matched(&[2, 3, 5, 2], &[1, 1, 1, -1]).unwrap());
        assert!(is_opposite_sign_pair_matched(&[2, 3, 3, 2], &[1, -1, 1, -1]).unwrap());
        assert!(is_opposite_sign_pair_matched(&[1], &[1, -1]).is_err());
    }
}
