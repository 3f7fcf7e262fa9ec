use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::{LabError, Result};

use super::covariance::CovarianceReport;

/// Machine-readable float: 17 significant digits.
pub fn fmt_machine(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Human-readable float: 6 significant digits.
pub fn fmt_human(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            let s = s.trim_end_matches('0');
            if s.ends_with('.') {
                format!("{s}0")
            } else {
                s.to_string()
            }
        } else {
            format!("{s}.0")
        }
    } else {
        format!("{x:.5e}")
    }
}

/// Writes `bytes` next to `path` and renames into place, so a failed run
/// never leaves a truncated file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| LabError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| LabError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| LabError::io(path, e))?;
    tmp.persist(path).map_err(|e| LabError::io(path, e.error))?;
    Ok(())
}

pub const REPORT_HEADER: [&str; 15] = [
    "experiment_id",
    "kind",
    "p",
    "q",
    "t1",
    "t2",
    "n",
    "R",
    "seed",
    "empirical",
    "se",
    "theory_paper",
    "theory_reconciled",
    "oracle",
    "verdict",
];

fn opt(x: Option<f64>) -> String {
    x.map(fmt_machine).unwrap_or_default()
}

pub fn reports_to_csv(reports: &[CovarianceReport]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| LabError::Config(format!("csv encoding failed: {e}"));
    w.write_record(REPORT_HEADER).map_err(csv_err)?;
    for r in reports {
        w.write_record([
            r.experiment_id.clone(),
            r.kind.to_string(),
            r.p.to_string(),
            r.q.to_string(),
            fmt_machine(r.t1),
            fmt_machine(r.t2),
            r.n.to_string(),
            r.replicas.to_string(),
            r.seed.to_string(),
            fmt_machine(r.empirical),
            fmt_machine(r.se),
            opt(r.theory_paper),
            opt(r.theory_reconciled),
            opt(r.oracle),
            r.verdict.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| LabError::Config(format!("csv encoding failed: {e}")))
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)
        .map_err(|e| LabError::Config(format!("json encoding failed: {e}")))?;
    v.push(b'\n');
    Ok(v)
}

pub fn write_reports_csv(path: &Path, reports: &[CovarianceReport]) -> Result<()> {
    write_atomic(path, &reports_to_csv(reports)?)
}

pub fn write_reports_json(path: &Path, reports: &[CovarianceReport]) -> Result<()> {
    write_atomic(path, &to_json(reports)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_format_round_trips() {
        for x in [2.0, 0.1, 1.0 / 3.0, -7.25e-9, 1e300] {
            let s = fmt_machine(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_machine(2.0), "2.0000000000000000e0");
    }

    #[test]
    fn human_format() {
        assert_eq!(fmt_human(2.0), "2.0");
        assert_eq!(fmt_human(1.0 / 3.0), "0.333333");
        assert_eq!(fmt_human(44.0), "44.0");
        assert_eq!(fmt_human(3.6), "3.6");
        assert_eq!(fmt_human(1234567.0), "1.23457e6");
    }
}
