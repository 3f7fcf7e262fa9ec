use std::collections::BTreeMap;

use super::index_sets::{enumerate, EnumerationCaps, Family};
use crate::error::{LabError, Result};
use crate::MatrixKind;

/// Blocks of tuple positions; tuples in one block are chained by shared
/// values, tuples in different blocks share none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    pub blocks: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Blocks are listed in order of their smallest member.
pub fn cluster_decompose<T: AsRef<[u32]>>(tuples: &[T]) -> ClusterPartition {
    let n = tuples.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut owner: BTreeMap<u32, usize> = BTreeMap::new();
    for (i, t) in tuples.iter().enumerate() {
        for &v in t.as_ref() {
            match owner.get(&v) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
                None => {
                    owner.insert(v, i);
                }
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        blocks.entry(root).or_default().push(i);
    }
    let mut blocks: Vec<Vec<usize>> = blocks.into_values().collect();
    blocks.sort_by_key(|b| b[0]);
    ClusterPartition { blocks }
}

/// Number of ordered choices `(J_1, ..., J_l)`, `J_i` from the trace index
/// set of length `lengths[i]`, that form a single cluster in which every
/// value of the union occurs at least twice. Sign patterns of the
/// symmetric-circulant sets are counted separately.
pub fn count_b_pl(
    n: u32,
    lengths: &[usize],
    kind: MatrixKind,
    caps: &EnumerationCaps,
) -> Result<u128> {
    if lengths.is_empty() {
        return Err(LabError::Domain("count_b_pl needs at least one tuple".into()));
    }
    let family = match kind {
        MatrixKind::Rc => Family::A2p,
        MatrixKind::Sc => Family::AkSc,
    };
    let mut sets = Vec::with_capacity(lengths.len());
    for &len in lengths {
        if kind == MatrixKind::Rc && len % 2 != 0 {
            return Err(LabError::Domain(format!(
                "reverse-circulant tuples have even length, got {len}"
            )));
        }
        let members: Vec<Vec<u32>> = enumerate(family, n, len, caps)?
            .into_iter()
            .map(|t| t.indices)
            .collect();
        sets.push(members);
    }
    let work = sets
        .iter()
        .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128));
    if work > caps.max_work {
        return Err(LabError::Capacity {
            what: format!("cluster count over {} tuples at n={n}", lengths.len()),
            needed: work,
            cap: caps.max_work,
            cap_name: "max_work",
        });
    }
    let mut choice = vec![0usize; sets.len()];
    let mut total = 0u128;
    if sets.iter().any(|s| s.is_empty()) {
        return Ok(0);
    }
    loop {
        let picked: Vec<&[u32]> = choice
            .iter()
            .zip(&sets)
            .map(|(&c, s)| s[c].as_slice())
            .collect();
        if qualifies(&picked) {
            total += 1;
        }
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(total);
            }
            choice[pos] += 1;
            if choice[pos] < sets[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn qualifies(picked: &[&[u32]]) -> bool {
    let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
    for t in picked {
        for &v in *t {
            *mult.entry(v).or_default() += 1;
        }
    }
    mult.values().all(|&m| m >= 2) && cluster_decompose(picked).blocks.len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_examples() {
        let p = cluster_decompose(&[vec![1, 1], vec![2, 2]]);
        assert_eq!(p.blocks, vec![vec![0], vec![1]]);
        let p = cluster_decompose(&[vec![1, 2], vec![2, 3], vec![3, 4]]);
        assert_eq!(p.blocks, vec![vec![0, 1, 2]]);
        let p = cluster_decompose(&[vec![5, 6, 5, 6]]);
        assert_eq!(p.blocks, vec![vec![0]]);
        // chain closes through the last tuple
        let p = cluster_decompose(&[vec![1], vec![7], vec![2], vec![1, 2]]);
        assert_eq!(p.blocks, vec![vec![0, 2, 3], vec![1]]);
    }

    #[test]
    fn pairs_of_diagonals() {
        let caps = EnumerationCaps::default();
        assert_eq!(count_b_pl(6, &[2, 2], MatrixKind::Rc, &caps).unwrap(), 6);
    }

    #[test]
    fn three_diagonals_need_one_shared_value() {
        let caps = EnumerationCaps::default();
        for n in [4u32, 6, 8, 10] {
            assert_eq!(count_b_pl(n, &[2, 2, 2], MatrixKind::Rc, &caps).unwrap(), n as u128);
        }
    }

    #[test]
    fn impossible_sets_give_zero() {
        let caps = EnumerationCaps::default();
        // A_1 is empty for symmetric circulants with odd n
        assert_eq!(count_b_pl(5, &[1, 1], MatrixKind::Sc, &caps).unwrap(), 0);
    }
}
