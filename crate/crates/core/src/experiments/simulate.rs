use rayon::prelude::*;

use crate::ensemble::brownian::sample_with;
use crate::ensemble::rng::GaussianStream;
use crate::ensemble::{default_method, build_circulant, TimeGrid};
use crate::error::{LabError, Result};
use crate::fluctuations::{reduced_trace, statistic, TraceBatch};
use crate::MatrixKind;

use super::config::ExperimentConfig;

/// Runs `f` on a pool with `workers` threads (0: the global pool).
pub(crate) fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| LabError::Config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

/// Per-replica values produced by `per_replica`, in replica order.
pub(crate) fn replicate<T: Send>(
    replicas: usize,
    workers: usize,
    per_replica: impl Fn(u64) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    with_workers(workers, || {
        (0..replicas as u64)
            .into_par_iter()
            .map(&per_replica)
            .collect::<Result<Vec<T>>>()
    })?
}

/// Reduced traces for each `(power, time)` column, indexed `[column][replica]`.
pub(crate) fn simulate_reduced(
    kind: MatrixKind,
    n: usize,
    columns: &[(u32, f64)],
    cfg: &ExperimentConfig,
) -> Result<Vec<Vec<f64>>> {
    let times: Vec<f64> = columns.iter().map(|c| c.1).collect();
    let grid = TimeGrid::covering(&times)?;
    let labels = kind.labels_needed(n);
    let rows = replicate(cfg.replicas, cfg.workers, |r| {
        let mut stream = GaussianStream::for_replica(cfg.seed, r);
        let ens = sample_with(labels, &grid, &mut stream)?;
        let mut samples = Vec::with_capacity(grid.len());
        for &t in grid.times() {
            samples.push(build_circulant(&ens, kind, t, n)?);
        }
        columns
            .iter()
            .map(|&(power, t)| {
                let s = &samples[grid.index_of(t)?];
                let method = cfg.method.unwrap_or_else(|| default_method(n, power));
                reduced_trace(s, power, method)
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok((0..columns.len())
        .map(|c| rows.iter().map(|row| row[c]).collect())
        .collect())
}

/// Centred, scaled statistics for each entry of [`ExperimentConfig::entries`],
/// indexed `[entry][replica]`. Repeated entries share one simulated column.
pub fn simulate_statistics(cfg: &ExperimentConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let entries = cfg.entries();
    let mut distinct: Vec<(u32, f64)> = Vec::new();
    let slot: Vec<usize> = entries
        .iter()
        .map(|e| match distinct.iter().position(|d| d == e) {
            Some(i) => i,
            None => {
                distinct.push(*e);
                distinct.len() - 1
            }
        })
        .collect();
    let columns: Vec<(u32, f64)> = distinct
        .iter()
        .map(|&(p, t)| (cfg.kind.power_of(p), t))
        .collect();
    let reduced = simulate_reduced(cfg.kind, cfg.n, &columns, cfg)?;
    let stats = reduced
        .into_iter()
        .zip(&distinct)
        .map(|(values, &(p, t))| {
            let batch = TraceBatch {
                kind: cfg.kind,
                n: cfg.n,
                power: cfg.kind.power_of(p),
                t,
                reduced: values,
            };
            statistic(&batch, p, cfg.centering)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(slot.iter().map(|&i| stats[i].clone()).collect())
}
