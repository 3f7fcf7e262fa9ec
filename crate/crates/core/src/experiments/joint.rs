use serde::Serialize;

use crate::error::{LabError, Result};
use crate::limit_theory::{gaussian_joint_moment, TheoryMode, MAX_WICK_DEGREE};

use super::config::ExperimentConfig;
use super::covariance::{experiment_id, oracle_cov, theory_cov};
use super::simulate::simulate_statistics;
use super::stats::{centered_product_moment, covariance, Estimate, Verdict};

/// Empirical `E[prod_i stat_{p_i}(t_i)]` and its Gaussian references.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointMomentReport {
    pub experiment_id: String,
    pub entries: Vec<(u32, f64)>,
    pub empirical: Estimate,
    /// Isserlis combination of the empirical pairwise covariances.
    pub reference_empirical: f64,
    /// Isserlis combination of reconciled limit covariances.
    pub reference_theory: Option<f64>,
    /// Isserlis combination of extrapolated oracle covariances.
    pub reference_oracle: Option<f64>,
    /// Against the theory reference, or the oracle one when there is none.
    pub verdict: Verdict,
    pub verdict_oracle: Verdict,
}

fn isserlis(len: usize, cov: impl Fn(usize, usize) -> Option<f64>) -> Option<f64> {
    let m = (0..len)
        .map(|i| (0..len).map(|j| cov(i.min(j), i.max(j))).collect())
        .collect::<Option<Vec<Vec<f64>>>>()?;
    let idx: Vec<usize> = (0..len).collect();
    Some(gaussian_joint_moment(&idx, |&a, &b| m[a][b]))
}

pub fn run_joint_moment_experiment(cfg: &ExperimentConfig) -> Result<JointMomentReport> {
    cfg.validate()?;
    let entries = cfg.entries();
    if entries.len() < 2 || entries.len() > MAX_WICK_DEGREE as usize {
        return Err(LabError::Config(format!(
            "joint moments need 2..={MAX_WICK_DEGREE} entries, got {}",
            entries.len()
        )));
    }
    let stats = simulate_statistics(cfg)?;
    let cols: Vec<&[f64]> = stats.iter().map(|c| c.as_slice()).collect();
    let empirical = centered_product_moment(&cols);
    let l = entries.len();
    let reference_empirical =
        isserlis(l, |i, j| Some(covariance(&stats[i], &stats[j]).value)).unwrap_or(f64::NAN);
    let kind = cfg.kind;
    let at = |i: usize, j: usize| (entries[i], entries[j]);
    let reference_theory = isserlis(l, |i, j| {
        let ((p, s), (q, t)) = at(i, j);
        theory_cov(kind, p, q, s, t, TheoryMode::Reconciled)
    });
    let reference_oracle = isserlis(l, |i, j| {
        let ((p, s), (q, t)) = at(i, j);
        oracle_cov(kind, p, q, s, t)
    });
    let judge = |r| Verdict::judge(empirical.value, empirical.se, r, cfg.tolerance);
    let verdict_oracle = judge(reference_oracle);
    let verdict = match reference_theory {
        Some(_) => judge(reference_theory),
        None => verdict_oracle,
    };
    Ok(JointMomentReport {
        experiment_id: experiment_id("joint", cfg),
        entries,
        empirical,
        reference_empirical,
        reference_theory,
        reference_oracle,
        verdict,
        verdict_oracle,
    })
}
