use crate::ensemble::TraceMethod;
use crate::error::{LabError, Result};
use crate::fluctuations::{exact_reduced_expectation, CenteringMode};
use crate::limit_theory::TheoryMode;
use crate::MatrixKind;

/// One Monte Carlo run: statistics of orders `orders[i]` at `times[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: MatrixKind,
    pub orders: Vec<u32>,
    pub times: Vec<f64>,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
    pub centering: CenteringMode,
    pub mode: TheoryMode,
    /// Verdict threshold in standard errors.
    pub tolerance: f64,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    /// Trace method for powers above 2; `None` picks the default.
    pub method: Option<TraceMethod>,
}

impl ExperimentConfig {
    /// Desk-scale defaults: n = 512, R = 20000, empirical centering,
    /// reconciled theory, tolerance 3 SE.
    pub fn new(kind: MatrixKind, orders: Vec<u32>, times: Vec<f64>) -> Self {
        ExperimentConfig {
            kind,
            orders,
            times,
            n: 512,
            replicas: 20_000,
            seed: 20_240_601,
            centering: CenteringMode::Empirical,
            mode: TheoryMode::Reconciled,
            tolerance: 3.0,
            workers: 0,
            method: None,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_replicas(mut self, r: usize) -> Self {
        self.replicas = r;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_centering(mut self, c: CenteringMode) -> Self {
        self.centering = c;
        self
    }

    pub fn with_workers(mut self, w: usize) -> Self {
        self.workers = w;
        self
    }

    /// Checks everything that can fail before simulation starts.
    pub fn validate(&self) -> Result<()> {
        if self.replicas < 2 {
            return Err(LabError::Config(format!(
                "replicas must be at least 2, got {}",
                self.replicas
            )));
        }
        if self.n < 2 {
            return Err(LabError::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if self.orders.is_empty() {
            return Err(LabError::Config("no orders given".into()));
        }
        if self.times.is_empty() {
            return Err(LabError::Config("no times given".into()));
        }
        let (no, nt) = (self.orders.len(), self.times.len());
        if no != nt && no != 1 && nt != 1 {
            return Err(LabError::Config(format!("{no} orders but {nt} times")));
        }
        if let Some(p) = self.orders.iter().find(|&&p| p < 1) {
            return Err(LabError::Config(format!("orders must be at least 1, got {p}")));
        }
        if let Some(t) = self.times.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(LabError::Config(format!(
                "times must be finite and non-negative, got {t}"
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(LabError::Config(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.centering == CenteringMode::Exact {
            for (p, t) in self.entries() {
                exact_reduced_expectation(self.kind, self.n, self.kind.power_of(p), t)?;
            }
        }
        Ok(())
    }

    /// `(order, time)` pairs; a single order or a single time is broadcast.
    pub fn entries(&self) -> Vec<(u32, f64)> {
        let len = self.orders.len().max(self.times.len());
        (0..len)
            .map(|i| {
                let p = self.orders[if self.orders.len() == 1 { 0 } else { i }];
                let t = self.times[if self.times.len() == 1 { 0 } else { i }];
                (p, t)
            })
            .collect()
    }

    /// Short stable hash of the configuration, used in experiment ids.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let text = format!(
            "{}|{:?}|{:?}|{}|{}|{}|{}|{}|{:?}|{:?}",
            self.kind,
            self.orders,
            self.times,
            self.n,
            self.replicas,
            self.seed,
            self.centering.name(),
            self.mode,
            self.tolerance,
            self.method
        );
        let digest = Sha256::digest(text.as_bytes());
        digest[..4].iter().map(|b| format!("{b:02x}")).collect()
    }
}
