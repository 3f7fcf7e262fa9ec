//! Closed-form limit covariances, the Wick engine and the exact finite-n
//! oracle.

mod extrapolate;
mod limits;
pub mod oracle;
mod wick;

pub use crate::combinatorics::TheoryMode;
pub use extrapolate::{extrapolate_limit, Extrapolation};
pub use limits::{limit_cov, rc_limit_cov, sc_limit_cov, CovQuery};
pub use oracle::{
    exact_finite_n_cov, exact_finite_n_cov_with, exact_trace_expectation,
    exact_trace_expectation_with, OracleCaps,
};
pub use wick::{gaussian_joint_moment, wick_moment, JointEntry, MAX_WICK_DEGREE};

use crate::error::Result;
use crate::MatrixKind;

/// Dimensions used to extrapolate oracle values to the limit.
pub const ORACLE_SEQUENCE: [u32; 4] = [5, 7, 9, 11];

/// Oracle covariances over [`ORACLE_SEQUENCE`] and their `1/n`
/// extrapolation.
pub fn oracle_limit(kind: MatrixKind, p: u32, q: u32, t1: f64, t2: f64) -> Result<(Vec<(u32, f64)>, Extrapolation)> {
    let mut seq = Vec::with_capacity(ORACLE_SEQUENCE.len());
    for n in ORACLE_SEQUENCE {
        seq.push((n, exact_finite_n_cov(kind, p, q, t1, t2, n)?));
    }
    let pts: Vec<(f64, f64)> = seq.iter().map(|&(n, v)| (n as f64, v)).collect();
    Ok((seq, extrapolate_limit(&pts)?))
}
