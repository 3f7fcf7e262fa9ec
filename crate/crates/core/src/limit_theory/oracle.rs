//! Exact finite-n moments of the trace statistics.
//!
//! Traces are expanded through the index-set formulas into polynomials in
//! the raw label values `b_l(t)`; Gaussian moments of each monomial are then
//! exact. Cross-time moments treat `(b_l(t1), b_l(t2))` as a bivariate
//! Gaussian with covariance `min(t1, t2)`.

use std::collections::HashMap;

use super::wick::wick_moment;
use crate::combinatorics::exact::odd_double_factorial;
use crate::combinatorics::{EnumerationCaps, Monomial, TracePolynomial};
use crate::error::{LabError, Result};
use crate::numerics::CompensatedSum;
use crate::MatrixKind;

/// Size limits of the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub cov_max_n: u32,
    pub cov_rc_max_p: u32,
    pub cov_sc_max_p: u32,
    pub mean_max_n: u32,
    pub mean_rc_max_p: u32,
    pub mean_sc_max_p: u32,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            cov_max_n: 12,
            cov_rc_max_p: 2,
            cov_sc_max_p: 3,
            mean_max_n: 16,
            mean_rc_max_p: 3,
            mean_sc_max_p: 6,
        }
    }
}

fn cap_err(what: String, needed: u32, cap: u32, cap_name: &'static str) -> LabError {
    LabError::Capacity {
        what,
        needed: needed as u128,
        cap: cap as u128,
        cap_name,
    }
}

/// `E[b(t)^e]`.
fn gaussian_power_mean(e: u32, t: f64) -> f64 {
    if e % 2 == 1 {
        0.0
    } else {
        odd_double_factorial(e / 2) as f64 * t.powi((e / 2) as i32)
    }
}

fn monomial_mean(m: &Monomial, t: f64) -> f64 {
    m.iter().map(|&(_, e)| gaussian_power_mean(e, t)).product()
}

/// `E[R]` where `Tr(M^power) = prefactor * n^(-power/2) * R` and `R` is the
/// trace polynomial evaluated at the raw labels.
pub(crate) fn reduced_expectation(poly: &TracePolynomial, t: f64) -> f64 {
    poly.terms
        .iter()
        .map(|(m, &c)| c as f64 * monomial_mean(m, t))
        .collect::<CompensatedSum>()
        .value()
}

fn check_mean_caps(kind: MatrixKind, p: u32, n: u32, caps: &OracleCaps) -> Result<()> {
    if n > caps.mean_max_n {
        return Err(cap_err(
            format!("exact trace expectation at n={n}"),
            n,
            caps.mean_max_n,
            "oracle mean max n",
        ));
    }
    let pmax = match kind {
        MatrixKind::Rc => caps.mean_rc_max_p,
        MatrixKind::Sc => caps.mean_sc_max_p,
    };
    if p > pmax {
        return Err(cap_err(
            format!("exact {kind} trace expectation of order {p}"),
            p,
            pmax,
            "oracle mean max p",
        ));
    }
    Ok(())
}

/// The trace polynomial of the order-`p` statistic, within the mean caps.
pub(crate) fn statistic_polynomial(kind: MatrixKind, p: u32, n: u32, caps: &OracleCaps) -> Result<TracePolynomial> {
    check_mean_caps(kind, p, n, caps)?;
    TracePolynomial::build(kind, n, kind.power_of(p), &EnumerationCaps::default())
}

/// Exact `E[Tr(RC^{2p})]` or `E[Tr(SC^p)]` at time `t`.
pub fn exact_trace_expectation(kind: MatrixKind, p: u32, t: f64, n: u32) -> Result<f64> {
    exact_trace_expectation_with(kind, p, t, n, &OracleCaps::default())
}

pub fn exact_trace_expectation_with(
    kind: MatrixKind,
    p: u32,
    t: f64,
    n: u32,
    caps: &OracleCaps,
) -> Result<f64> {
    if p < 1 {
        return Err(LabError::Domain("order p must be at least 1".into()));
    }
    let poly = statistic_polynomial(kind, p, n, caps)?;
    let scale = poly.prefactor() * (n as f64).powf(-(poly.power as f64) / 2.0);
    Ok(scale * reduced_expectation(&poly, t))
}

/// Exact `Cov(w_p(t1), w_q(t2))` (RC) or `Cov(eta_p(t1), eta_q(t2))` (SC)
/// at dimension `n`.
pub fn exact_finite_n_cov(kind: MatrixKind, p: u32, q: u32, t1: f64, t2: f64, n: u32) -> Result<f64> {
    exact_finite_n_cov_with(kind, p, q, t1, t2, n, &OracleCaps::default())
}

pub fn exact_finite_n_cov_with(
    kind: MatrixKind,
    p: u32,
    q: u32,
    t1: f64,
    t2: f64,
    n: u32,
    caps: &OracleCaps,
) -> Result<f64> {
    if p < 1 || q < 1 {
        return Err(LabError::Domain("orders must be at least 1".into()));
    }
    if !(t1 >= 0.0 && t2 >= 0.0 && t1.is_finite() && t2.is_finite()) {
        return Err(LabError::Domain(format!("times must be non-negative, got {t1}, {t2}")));
    }
    if n > caps.cov_max_n {
        return Err(cap_err(
            format!("exact covariance at n={n}"),
            n,
            caps.cov_max_n,
            "oracle cov max n",
        ));
    }
    let pmax = match kind {
        MatrixKind::Rc => caps.cov_rc_max_p,
        MatrixKind::Sc => caps.cov_sc_max_p,
    };
    if p.max(q) > pmax {
        return Err(cap_err(
            format!("exact {kind} covariance of orders ({p}, {q})"),
            p.max(q),
            pmax,
            "oracle cov max p",
        ));
    }
    let ecaps = EnumerationCaps::default();
    let a = TracePolynomial::build(kind, n, kind.power_of(p), &ecaps)?;
    let b = TracePolynomial::build(kind, n, kind.power_of(q), &ecaps)?;

    let s = t1.min(t2);
    let cov2 = vec![vec![t1, s], vec![s, t2]];
    let mut joint: HashMap<(u32, u32), f64> = HashMap::new();
    let mut joint_moment = |x: u32, y: u32| -> f64 {
        *joint
            .entry((x, y))
            .or_insert_with(|| wick_moment(&cov2, &[x, y]).expect("degree within cap"))
    };
    let b_means: Vec<(&Monomial, f64, f64)> = b
        .terms
        .iter()
        .map(|(m, &c)| (m, c as f64, monomial_mean(m, t2)))
        .collect();

    let mut acc = CompensatedSum::new();
    for (ma, &ca) in &a.terms {
        let mean_a = monomial_mean(ma, t1);
        for &(mb, cb, mean_b) in &b_means {
            if !shares_label(ma, mb) {
                continue;
            }
            let mut prod = 1.0;
            let (mut i, mut j) = (0, 0);
            while i < ma.len() || j < mb.len() {
                let (la, ea) = ma.get(i).copied().unwrap_or((u32::MAX, 0));
                let (lb, eb) = mb.get(j).copied().unwrap_or((u32::MAX, 0));
                if la == lb {
                    prod *= joint_moment(ea, eb);
                    i += 1;
                    j += 1;
                } else if la < lb {
                    prod *= gaussian_power_mean(ea, t1);
                    i += 1;
                } else {
                    prod *= gaussian_power_mean(eb, t2);
                    j += 1;
                }
                if prod == 0.0 {
                    break;
                }
            }
            let c = prod - mean_a * mean_b;
            if c != 0.0 {
                acc.add(ca as f64 * cb * c);
            }
        }
    }
    let nf = n as f64;
    let scale = a.prefactor() * b.prefactor() * nf.powf(-((a.power + b.power) as f64) / 2.0) / nf;
    Ok(scale * acc.value())
}

fn shares_label(a: &Monomial, b: &Monomial) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Equal => return true,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectations() {
        for n in [3u32, 4, 7, 10] {
            let e = exact_trace_expectation(MatrixKind::Rc, 1, 0.7, n).unwrap();
            assert!((e - n as f64 * 0.7).abs() < 1e-12);
            let e = exact_trace_expectation(MatrixKind::Sc, 1, 0.7, n).unwrap();
            assert_eq!(e, 0.0);
        }
        for n in [5u32, 7, 9] {
            let e = exact_trace_expectation(MatrixKind::Sc, 2, 1.3, n).unwrap();
            assert!((e - n as f64 * 1.3).abs() < 1e-12);
        }
    }

    #[test]
    fn rc_first_order_covariance() {
        for n in 2..=12u32 {
            let c = exact_finite_n_cov(MatrixKind::Rc, 1, 1, 0.5, 1.0, n).unwrap();
            assert!((c - 0.5).abs() < 1e-12, "n={n}: {c}");
            let c = exact_finite_n_cov(MatrixKind::Rc, 1, 1, 1.0, 1.0, n).unwrap();
            assert!((c - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sc_hand_values() {
        let c = exact_finite_n_cov(MatrixKind::Sc, 2, 2, 1.0, 1.0, 5).unwrap();
        assert!((c - 3.6).abs() < 1e-12);
        let c = exact_finite_n_cov(MatrixKind::Sc, 1, 1, 0.4, 0.9, 7).unwrap();
        assert!((c - 0.4).abs() < 1e-12);
        let c = exact_finite_n_cov(MatrixKind::Sc, 1, 1, 0.4, 0.9, 8).unwrap();
        assert!((c - 0.4).abs() < 1e-12);
    }

    #[test]
    fn caps_reported() {
        assert!(matches!(
            exact_finite_n_cov(MatrixKind::Rc, 3, 1, 1.0, 1.0, 5),
            Err(LabError::Capacity { .. })
        ));
        assert!(matches!(
            exact_finite_n_cov(MatrixKind::Sc, 2, 2, 1.0, 1.0, 13),
            Err(LabError::Capacity { .. })
        ));
        assert!(matches!(
            exact_trace_expectation(MatrixKind::Sc, 7, 1.0, 5),
            Err(LabError::Capacity { .. })
        ));
    }
}
