use serde::Serialize;

use crate::error::{LabError, Result};
use crate::fluctuations::CenteringMode;
use crate::MatrixKind;

use super::config::ExperimentConfig;
use super::simulate::simulate_statistics;
use super::stats::{mean_estimate, Estimate};

/// Fourth-moment increments `E|stat_p(t) - stat_p(s)|^4` over time pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct TightnessConfig {
    pub kind: MatrixKind,
    pub p: u32,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
    pub pairs: Vec<(f64, f64)>,
    /// Half-width of the slope band in standard errors.
    pub tolerance: f64,
    pub workers: usize,
}

impl TightnessConfig {
    /// Pairs `(s, s + gap)` for each gap.
    pub fn from_gaps(kind: MatrixKind, p: u32, n: usize, replicas: usize, s: f64, gaps: &[f64]) -> Self {
        TightnessConfig {
            kind,
            p,
            n,
            replicas,
            seed: 20_240_602,
            pairs: gaps.iter().map(|g| (s, s + g)).collect(),
            tolerance: 3.0,
            workers: 0,
        }
    }

    fn fitted_gaps(&self) -> Vec<f64> {
        let mut gaps: Vec<f64> = self
            .pairs
            .iter()
            .map(|(s, t)| (t - s).abs())
            .filter(|&g| g > 0.0)
            .collect();
        gaps.sort_by(f64::total_cmp);
        gaps.dedup();
        gaps
    }

    pub fn validate(&self) -> Result<()> {
        let gaps = self.fitted_gaps();
        if gaps.len() < 4 {
            return Err(LabError::Config(format!(
                "tightness fit needs at least 4 distinct non-zero gaps, got {}",
                gaps.len()
            )));
        }
        let span = gaps[gaps.len() - 1] / gaps[0];
        if span < 4.0 {
            return Err(LabError::Config(format!(
                "gaps span a factor {span}, need at least 4"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncrementMoment {
    pub s: f64,
    pub t: f64,
    pub moment: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessReport {
    pub kind: MatrixKind,
    pub p: u32,
    pub n: usize,
    pub points: Vec<IncrementMoment>,
    pub slope: f64,
    pub slope_se: f64,
    /// `slope -/+ tolerance * slope_se`.
    pub band: (f64, f64),
}

/// Least-squares slope of `log m` against `log gap` with a delta-method
/// standard error, `var(log m_i) = (se_i / m_i)^2`.
fn fit_slope(points: &[(f64, Estimate)]) -> Result<(f64, f64)> {
    let xs: Vec<f64> = points.iter().map(|(g, _)| g.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, m)| m.value.ln()).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(LabError::Domain("increment moment is not positive".into()));
    }
    let k = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / k;
    let ybar = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum::<f64>() / sxx;
    let var: f64 = xs
        .iter()
        .zip(points)
        .map(|(x, (_, m))| ((x - xbar) / sxx).powi(2) * (m.se / m.value).powi(2))
        .sum();
    Ok((slope, var.sqrt()))
}

pub fn run_tightness_diagnostic(cfg: &TightnessConfig) -> Result<TightnessReport> {
    cfg.validate()?;
    let mut times: Vec<f64> = cfg.pairs.iter().flat_map(|&(s, t)| [s, t]).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let exp = ExperimentConfig {
        n: cfg.n,
        replicas: cfg.replicas,
        seed: cfg.seed,
        centering: CenteringMode::Empirical,
        workers: cfg.workers,
        tolerance: cfg.tolerance,
        ..ExperimentConfig::new(cfg.kind, vec![cfg.p], times.clone())
    };
    let stats = simulate_statistics(&exp)?;
    let col = |t: f64| &stats[times.iter().position(|&x| x == t).expect("time simulated")];
    let points: Vec<IncrementMoment> = cfg
        .pairs
        .iter()
        .map(|&(s, t)| {
            let fourth: Vec<f64> = col(s)
                .iter()
                .zip(col(t))
                .map(|(a, b)| (b - a).powi(4))
                .collect();
            IncrementMoment {
                s,
                t,
                moment: mean_estimate(&fourth),
            }
        })
        .collect();
    let mut fit: Vec<(f64, Estimate)> = Vec::new();
    for pt in &points {
        let g = (pt.t - pt.s).abs();
        if g > 0.0 && !fit.iter().any(|(x, _)| *x == g) {
            fit.push((g, pt.moment));
        }
    }
    let (slope, slope_se) = fit_slope(&fit)?;
    Ok(TightnessReport {
        kind: cfg.kind,
        p: cfg.p,
        n: cfg.n,
        points,
        slope,
        slope_se,
        band: (slope - cfg.tolerance * slope_se, slope + cfg.tolerance * slope_se),
    })
}
