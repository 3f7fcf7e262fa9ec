use std::path::Path;

use crate::error::{LabError, Result};

use super::config::ExperimentConfig;
use super::report::{fmt_machine, write_atomic};
use super::simulate::simulate_statistics;

/// CSV of per-replica trajectories: one `(replica, t, value)` row per
/// replica and time, replica-major. All entries must share one order.
pub fn paths_csv(cfg: &ExperimentConfig) -> Result<Vec<u8>> {
    cfg.validate()?;
    let entries = cfg.entries();
    if entries.windows(2).any(|w| w[0].0 != w[1].0) {
        return Err(LabError::Config("path export needs a single order".into()));
    }
    let stats = simulate_statistics(cfg)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| LabError::Config(format!("csv encoding failed: {e}"));
    w.write_record(["replica", "t", "value"]).map_err(csv_err)?;
    for r in 0..cfg.replicas {
        for (col, &(_, t)) in stats.iter().zip(&entries) {
            w.write_record([r.to_string(), fmt_machine(t), fmt_machine(col[r])])
                .map_err(csv_err)?;
        }
    }
    w.into_inner()
        .map_err(|e| LabError::Config(format!("csv encoding failed: {e}")))
}

pub fn export_paths(cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    let bytes = paths_csv(cfg)?;
    write_atomic(path, &bytes)
}
