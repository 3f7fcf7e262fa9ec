use std::fmt;

use crate::error::{LabError, Result};

/// The index-set families. Lengths are passed separately to [`enumerate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Alternating sum `-i_1 + i_2 - i_3 + ...` vanishes mod n, `1 <= i <= n`.
    A2p,
    /// Alternating sum equals exactly `s * n`.
    A2ps { s: i64 },
    /// Signed tuples, `sum eps_i j_i = 0 mod n`, `1 <= j < n/2`.
    AkSc,
    /// Signed tuples, `sum eps_i j_i = n/2 mod n`, `1 <= j < n/2`, n even.
    AtildeSc,
    /// `j_1 + ... + j_k - j_{k+1} - ... - j_p = 0 mod n`, `1 <= j <= n/2`.
    Apk { k: usize },
}

impl Family {
    pub fn is_signed(self) -> bool {
        matches!(self, Family::AkSc | Family::AtildeSc)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A2p => "a2p",
            Family::A2ps { .. } => "a2ps",
            Family::AkSc => "ak_sc",
            Family::AtildeSc => "atilde_sc",
            Family::Apk { .. } => "apk",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A2ps { s } => write!(f, "a2ps(s={s})"),
            Family::Apk { k } => write!(f, "apk(k={k})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintTuple {
    pub indices: Vec<u32>,
    /// Empty for the unsigned families.
    pub signs: Vec<i8>,
    pub modulus: u32,
    pub family: Family,
}

/// Enumeration work limit, measured in visited leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCaps {
    pub max_work: u128,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps {
            max_work: 100_000_000,
        }
    }
}

enum Target {
    /// Weighted sum congruent to the residue mod n.
    Residue(i64),
    Exact(i64),
}

struct Shape {
    n: i64,
    hi: i64,
    signed: bool,
    weights: Vec<i64>,
    target: Target,
}

fn shape(family: Family, n: u32, len: usize) -> Result<Shape> {
    if n < 1 {
        return Err(LabError::Domain("modulus n must be at least 1".into()));
    }
    let ni = n as i64;
    let alternating = (1..=len)
        .map(|k| if k % 2 == 1 { -1 } else { 1 })
        .collect();
    let s = match family {
        Family::A2p => Shape {
            n: ni,
            hi: ni,
            signed: false,
            weights: alternating,
            target: Target::Residue(0),
        },
        Family::A2ps { s } => Shape {
            n: ni,
            hi: ni,
            signed: false,
            weights: alternating,
            target: Target::Exact(s * ni),
        },
        Family::AkSc => Shape {
            n: ni,
            hi: (ni - 1) / 2,
            signed: true,
            weights: vec![1; len],
            target: Target::Residue(0),
        },
        Family::AtildeSc => {
            if !n.is_multiple_of(2) {
                return Err(LabError::Domain(format!(
                    "atilde_sc requires even n, got {n}"
                )));
            }
            Shape {
                n: ni,
                hi: ni / 2 - 1,
                signed: true,
                weights: vec![1; len],
                target: Target::Residue(ni / 2),
            }
        }
        Family::Apk { k } => {
            if k > len {
                return Err(LabError::Domain(format!(
                    "apk requires k <= p, got k={k}, p={len}"
                )));
            }
            Shape {
                n: ni,
                hi: ni / 2,
                signed: false,
                weights: (0..len).map(|i| if i < k { 1 } else { -1 }).collect(),
                target: Target::Residue(0),
            }
        }
    };
    Ok(s)
}

fn work_estimate(sh: &Shape, len: usize) -> u128 {
    let branch = (sh.hi.max(0) as u128) * if sh.signed { 2 } else { 1 };
    let mut w: u128 = if sh.signed { 2 } else { 1 };
    for _ in 1..len {
        w = w.saturating_mul(branch);
    }
    w
}

/// Visits every member of the family with `len` entries. Signs are passed
/// as an empty slice for unsigned families. The last entry is solved from
/// the constraint, so the work is about `range^(len-1)`.
pub fn for_each(
    family: Family,
    n: u32,
    len: usize,
    caps: &EnumerationCaps,
    mut f: impl FnMut(&[u32], &[i8]),
) -> Result<()> {
    let sh = shape(family, n, len)?;
    let work = work_estimate(&sh, len);
    if work > caps.max_work {
        return Err(LabError::Capacity {
            what: format!("enumerating {family} with n={n}, length {len}"),
            needed: work,
            cap: caps.max_work,
            cap_name: "max_work",
        });
    }
    if len == 0 {
        let hit = match sh.target {
            Target::Residue(c) => c.rem_euclid(sh.n) == 0,
            Target::Exact(v) => v == 0,
        };
        if hit {
            f(&[], &[]);
        }
        return Ok(());
    }
    if sh.hi < 1 {
        return Ok(());
    }
    let mut idx = vec![0u32; len];
    let mut sg = vec![1i8; if sh.signed { len } else { 0 }];
    descend(&sh, 0, 0, &mut idx, &mut sg, &mut f);
    Ok(())
}

fn descend(
    sh: &Shape,
    depth: usize,
    sigma: i64,
    idx: &mut [u32],
    sg: &mut [i8],
    f: &mut impl FnMut(&[u32], &[i8]),
) {
    let len = idx.len();
    let sign_choices: &[i64] = if sh.signed { &[-1, 1] } else { &[1] };
    if depth + 1 == len {
        // Solve for the last entry: w * j + sigma hits the target.
        let mut sols: [(i64, i64); 2] = [(0, 0); 2];
        let mut ns = 0;
        for &e in sign_choices {
            let w = sh.weights[depth] * e;
            let j = match sh.target {
                Target::Residue(c) => {
                    let r = (w * (c - sigma)).rem_euclid(sh.n);
                    if r == 0 {
                        sh.n
                    } else {
                        r
                    }
                }
                Target::Exact(v) => w * (v - sigma),
            };
            if (1..=sh.hi).contains(&j) {
                sols[ns] = (j, e);
                ns += 1;
            }
        }
        for &(j, e) in &sols[..ns] {
            idx[depth] = j as u32;
            if sh.signed {
                sg[depth] = e as i8;
            }
            f(idx, sg);
        }
        return;
    }
    for j in 1..=sh.hi {
        idx[depth] = j as u32;
        for &e in sign_choices {
            if sh.signed {
                sg[depth] = e as i8;
            }
            descend(sh, depth + 1, sigma + sh.weights[depth] * e * j, idx, sg, f);
        }
    }
}

/// Complete list of family members in lexicographic order of
/// (indices, signs).
pub fn enumerate(
    family: Family,
    n: u32,
    len: usize,
    caps: &EnumerationCaps,
) -> Result<Vec<ConstraintTuple>> {
    let mut out = Vec::new();
    for_each(family, n, len, caps, |idx, sg| {
        out.push(ConstraintTuple {
            indices: idx.to_vec(),
            signs: sg.to_vec(),
            modulus: n,
            family,
        })
    })?;
    out.sort_by(|a, b| (&a.indices, &a.signs).cmp(&(&b.indices, &b.signs)));
    Ok(out)
}

pub fn count(family: Family, n: u32, len: usize, caps: &EnumerationCaps) -> Result<u128> {
    let mut c: u128 = 0;
    for_each(family, n, len, caps, |_, _| c += 1)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> EnumerationCaps {
        EnumerationCaps::default()
    }

    fn naive(family: Family, n: u32, len: usize) -> Vec<(Vec<u32>, Vec<i8>)> {
        let sh = shape(family, n, len).unwrap();
        let mut out = Vec::new();
        let total = (sh.hi.max(0) as usize).pow(len as u32);
        let nsig = if sh.signed { 1usize << len } else { 1 };
        for code in 0..total {
            let mut c = code;
            let idx: Vec<u32> = (0..len)
                .map(|_| {
                    let v = (c % sh.hi as usize) as u32 + 1;
                    c /= sh.hi as usize;
                    v
                })
                .collect();
            for sc in 0..nsig {
                let sg: Vec<i8> = if sh.signed {
                    (0..len).map(|b| if sc >> b & 1 == 1 { 1 } else { -1 }).collect()
                } else {
                    vec![]
                };
                let sigma: i64 = (0..len)
                    .map(|i| {
                        let e = if sh.signed { sg[i] as i64 } else { 1 };
                        sh.weights[i] * e * idx[i] as i64
                    })
                    .sum();
                let ok = match sh.target {
                    Target::Residue(c) => (sigma - c).rem_euclid(sh.n) == 0,
                    Target::Exact(v) => sigma == v,
                };
                if ok {
                    out.push((idx.clone(), sg));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn a2p_length_two_is_diagonal() {
        let v = enumerate(Family::A2p, 7, 2, &caps()).unwrap();
        assert_eq!(v.len(), 7);
        assert!(v.iter().all(|t| t.indices[0] == t.indices[1]));
    }

    #[test]
    fn ak_sc_small_cases() {
        assert!(enumerate(Family::AkSc, 5, 1, &caps()).unwrap().is_empty());
        let v = enumerate(Family::AkSc, 5, 2, &caps()).unwrap();
        let got: Vec<_> = v.iter().map(|t| (t.indices.clone(), t.signs.clone())).collect();
        assert_eq!(
            got,
            vec![
                (vec![1, 1], vec![-1, 1]),
                (vec![1, 1], vec![1, -1]),
                (vec![2, 2], vec![-1, 1]),
                (vec![2, 2], vec![1, -1]),
            ]
        );
    }

    #[test]
    fn solver_matches_naive_scan() {
        let fams = [
            Family::A2p,
            Family::A2ps { s: 0 },
            Family::A2ps { s: 1 },
            Family::A2ps { s: -1 },
            Family::AkSc,
            Family::AtildeSc,
            Family::Apk { k: 0 },
            Family::Apk { k: 1 },
            Family::Apk { k: 2 },
        ];
        for fam in fams {
            for n in [4u32, 5, 6, 8] {
                for len in 0..=4usize {
                    if let Family::Apk { k } = fam {
                        if k > len {
                            continue;
                        }
                    }
                    if fam == Family::AtildeSc && n % 2 == 1 {
                        continue;
                    }
                    let got: Vec<_> = enumerate(fam, n, len, &caps())
                        .unwrap()
                        .into_iter()
                        .map(|t| (t.indices, t.signs))
                        .collect();
                    assert_eq!(got, naive(fam, n, len), "{fam} n={n} len={len}");
                }
            }
        }
    }

    #[test]
    fn empty_tuple_membership() {
        assert_eq!(count(Family::A2p, 5, 0, &caps()).unwrap(), 1);
        assert_eq!(count(Family::AkSc, 6, 0, &caps()).unwrap(), 1);
        assert_eq!(count(Family::AtildeSc, 6, 0, &caps()).unwrap(), 0);
        assert_eq!(count(Family::A2ps { s: 1 }, 6, 0, &caps()).unwrap(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let tight = EnumerationCaps { max_work: 100 };
        let err = count(Family::A2p, 20, 4, &tight).unwrap_err();
        assert!(matches!(err, LabError::Capacity { cap: 100, .. }));
    }

    #[test]
    fn odd_modulus_rejected_for_atilde() {
        assert!(matches!(
            count(Family::AtildeSc, 7, 2, &caps()),
            Err(LabError::Domain(_))
        ));
    }
}
