use serde::Serialize;

use crate::ensemble::brownian::sample_with;
use crate::ensemble::rng::GaussianStream;
use crate::ensemble::{build_circulant, TimeGrid};
use crate::error::{LabError, Result};
use crate::fluctuations::{gaussian_even_moment, rc_odd_statistic_of};
use crate::MatrixKind;

use super::simulate::replicate;
use super::stats::{mean_estimate, Estimate, Verdict};

/// Distribution of `sum_k lambda_k^{2p+1}` for RC.
#[derive(Debug, Clone, PartialEq)]
pub struct OddConfig {
    pub p: u32,
    pub n: usize,
    pub replicas: usize,
    pub t: f64,
    pub seed: u64,
    pub tolerance: f64,
    pub workers: usize,
}

impl OddConfig {
    pub fn new(p: u32, n: usize, replicas: usize, t: f64) -> Self {
        OddConfig {
            p,
            n,
            replicas,
            t,
            seed: 20_240_603,
            tolerance: 3.0,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddStatisticReport {
    pub p: u32,
    pub n: usize,
    pub t: f64,
    pub mean: Estimate,
    pub second: Estimate,
    pub third: Estimate,
    /// `E[G^{2(2p+1)}]`, doubled for even n.
    pub reference_second: f64,
    pub verdict_mean: Verdict,
    pub verdict_second: Verdict,
    pub verdict_third: Verdict,
}

pub fn run_odd_statistic_experiment(cfg: &OddConfig) -> Result<OddStatisticReport> {
    if cfg.replicas < 2 || cfg.n < 2 || cfg.p < 1 {
        return Err(LabError::Config(format!(
            "odd statistic needs p >= 1, n >= 2, R >= 2; got p={}, n={}, R={}",
            cfg.p, cfg.n, cfg.replicas
        )));
    }
    if !(cfg.t.is_finite() && cfg.t > 0.0) {
        return Err(LabError::Config(format!("time must be positive, got {}", cfg.t)));
    }
    let grid = TimeGrid::new(vec![cfg.t])?;
    let values = replicate(cfg.replicas, cfg.workers, |r| {
        let mut stream = GaussianStream::for_replica(cfg.seed, r);
        let ens = sample_with(MatrixKind::Rc.labels_needed(cfg.n), &grid, &mut stream)?;
        rc_odd_statistic_of(&build_circulant(&ens, MatrixKind::Rc, cfg.t, cfg.n)?, cfg.p)
    })?;
    let powered = |k: i32| -> Vec<f64> { values.iter().map(|v| v.powi(k)).collect() };
    let mean = mean_estimate(&values);
    let second = mean_estimate(&powered(2));
    let third = mean_estimate(&powered(3));
    let copies = if cfg.n.is_multiple_of(2) { 2.0 } else { 1.0 };
    let reference_second = copies * gaussian_even_moment(2 * cfg.p + 1, cfg.t);
    let judge = |e: Estimate, r: f64| Verdict::judge(e.value, e.se, Some(r), cfg.tolerance);
    Ok(OddStatisticReport {
        p: cfg.p,
        n: cfg.n,
        t: cfg.t,
        mean,
        second,
        third,
        reference_second,
        verdict_mean: judge(mean, 0.0),
        verdict_second: judge(second, reference_second),
        verdict_third: judge(third, 0.0),
    })
}
