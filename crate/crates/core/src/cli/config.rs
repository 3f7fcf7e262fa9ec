use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::ensemble::TraceMethod;
use crate::error::{LabError, Result};
use crate::experiments::ExperimentConfig;
use crate::fluctuations::CenteringMode;
use crate::limit_theory::TheoryMode;
use crate::MatrixKind;

use super::SimulateArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulateKind {
    Covariance,
    Joint,
    Paths,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        self != OutputFormat::Json
    }

    pub fn json(self) -> bool {
        self != OutputFormat::Csv
    }
}

/// Flat key-value document; every key is optional here and checked in
/// [`RunConfig::resolve`].
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: Option<String>,
    kind: Option<String>,
    orders: Option<Vec<u32>>,
    times: Option<Vec<f64>>,
    n: Option<usize>,
    replicas: Option<usize>,
    seed: Option<u64>,
    centering: Option<String>,
    mode: Option<String>,
    tolerance: Option<f64>,
    workers: Option<usize>,
    method: Option<String>,
    out_dir: Option<PathBuf>,
    format: Option<String>,
}

/// A fully resolved `simulate` run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: SimulateKind,
    pub kind: MatrixKind,
    pub orders: Vec<u32>,
    pub times: Vec<f64>,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
    pub centering: CenteringMode,
    pub mode: TheoryMode,
    pub tolerance: f64,
    pub workers: usize,
    pub method: Option<TraceMethod>,
    pub out_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

fn missing(key: &str) -> LabError {
    LabError::Config(format!("missing required key `{key}`"))
}

impl RunConfig {
    /// Parses a configuration document without flag overrides.
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| LabError::Config(format!("invalid config: {e}")))?;
        Self::from_raw(raw)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        let raw: RawConfig = toml::from_str(&text).map_err(|e| {
            LabError::Config(format!("invalid config {}: {e}", path.display()))
        })?;
        Self::from_raw(raw)
    }

    /// The config file (if any) with command-line flags applied on top.
    pub fn resolve(args: &SimulateArgs) -> Result<Self> {
        let mut raw = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
                toml::from_str(&text).map_err(|e| {
                    LabError::Config(format!("invalid config {}: {e}", path.display()))
                })?
            }
            None => RawConfig::default(),
        };
        macro_rules! over {
            ($($f:ident),*) => {$(
                if let Some(v) = &args.$f {
                    raw.$f = Some(v.clone());
                }
            )*};
        }
        over!(experiment, kind, orders, times, n, replicas, seed, centering, mode, tolerance, workers, method, out_dir, format);
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let experiment = match raw.experiment.as_deref().unwrap_or("covariance") {
            "covariance" | "cov" => SimulateKind::Covariance,
            "joint" => SimulateKind::Joint,
            "paths" => SimulateKind::Paths,
            other => {
                return Err(LabError::Config(format!(
                    "key `experiment`: unknown value {other:?} (expected covariance, joint or paths)"
                )))
            }
        };
        let format = match raw.format.as_deref().unwrap_or("both") {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            "both" => OutputFormat::Both,
            other => {
                return Err(LabError::Config(format!(
                    "key `format`: unknown value {other:?} (expected csv, json or both)"
                )))
            }
        };
        let defaults = ExperimentConfig::new(MatrixKind::Rc, vec![], vec![]);
        let run = RunConfig {
            experiment,
            kind: raw.kind.as_deref().ok_or_else(|| missing("kind"))?.parse()?,
            orders: raw.orders.ok_or_else(|| missing("orders"))?,
            times: raw.times.ok_or_else(|| missing("times"))?,
            n: raw.n.unwrap_or(defaults.n),
            replicas: raw.replicas.unwrap_or(defaults.replicas),
            seed: raw.seed.unwrap_or(defaults.seed),
            centering: match raw.centering {
                Some(c) => CenteringMode::parse(&c)?,
                None => defaults.centering,
            },
            mode: match raw.mode {
                Some(m) => TheoryMode::parse(&m)?,
                None => defaults.mode,
            },
            tolerance: raw.tolerance.unwrap_or(defaults.tolerance),
            workers: raw.workers.unwrap_or(defaults.workers),
            method: raw.method.map(|m| m.parse()).transpose()?,
            out_dir: raw.out_dir,
            format,
        };
        run.experiment_config()?.validate()?;
        Ok(run)
    }

    pub fn experiment_config(&self) -> Result<ExperimentConfig> {
        Ok(ExperimentConfig {
            kind: self.kind,
            orders: self.orders.clone(),
            times: self.times.clone(),
            n: self.n,
            replicas: self.replicas,
            seed: self.seed,
            centering: self.centering,
            mode: self.mode,
            tolerance: self.tolerance,
            workers: self.workers,
            method: self.method,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_document() {
        let run = RunConfig::from_toml(
            "kind = \"sc\"\norders = [2]\ntimes = [1.0, 1.0]\nn = 64\nreplicas = 100\n",
        )
        .unwrap();
        assert_eq!(run.kind, MatrixKind::Sc);
        assert_eq!(run.n, 64);
        assert_eq!(run.format, OutputFormat::Both);
    }

    #[test]
    fn rejects_unknown_and_missing_keys() {
        let e = RunConfig::from_toml("kind = \"rc\"\norders = [1]\ntimes = [1.0]\nbogus = 1\n")
            .unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
        let e = RunConfig::from_toml("orders = [1]\ntimes = [1.0]\n").unwrap_err();
        assert!(e.to_string().contains("`kind`"), "{e}");
    }

    #[test]
    fn rejects_bad_ranges() {
        let e = RunConfig::from_toml("kind = \"rc\"\norders = [1]\ntimes = [1.0]\nreplicas = 1\n")
            .unwrap_err();
        assert!(e.is_configuration());
    }
}
