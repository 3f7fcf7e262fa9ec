//! Linear eigenvalue statistics of Brownian reverse-circulant (RC) and
//! symmetric-circulant (SC) random matrices.
//!
//! The crate samples Brownian entry paths, builds the two matrix families,
//! computes the centred and scaled trace fluctuations, and compares Monte
//! Carlo estimates with the closed-form limit covariances and with an exact
//! finite-n Gaussian moment oracle.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub mod cli;
pub mod combinatorics;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod fluctuations;
pub mod limit_theory;
pub mod numerics;

pub use error::{LabError, Result};

/// The two circulant families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    /// Reverse circulant, entry `(i, j)` is `x_{(i+j-2) mod n}`.
    Rc,
    /// Symmetric circulant, entry `(i, j)` is `x_{n/2 - |n/2 - |i-j||}`.
    Sc,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Rc => "rc",
            MatrixKind::Sc => "sc",
        }
    }

    /// Matrix power whose trace defines the order-`p` statistic: `2p` for
    /// RC and `p` for SC.
    pub fn power_of(self, p: u32) -> u32 {
        match self {
            MatrixKind::Rc => 2 * p,
            MatrixKind::Sc => p,
        }
    }

    /// Number of distinct entry processes used at dimension `n`.
    pub fn labels_needed(self, n: usize) -> usize {
        match self {
            MatrixKind::Rc => n,
            MatrixKind::Sc => n / 2 + 1,
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rc" | "reverse-circulant" => Ok(MatrixKind::Rc),
            "sc" | "symmetric-circulant" => Ok(MatrixKind::Sc),
            other => Err(LabError::Config(format!(
                "unknown matrix kind {other:?} (expected rc or sc)"
            ))),
        }
    }
}
