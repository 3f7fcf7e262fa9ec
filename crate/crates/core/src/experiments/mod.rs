//! Monte Carlo harness: covariances, joint moments, tightness increments and
//! the odd statistic, with verdicts against theory and the oracle.

mod config;
mod covariance;
mod joint;
mod odd;
mod paths;
pub mod report;
mod simulate;
mod stats;
mod tightness;
mod verify;

pub use config::ExperimentConfig;
pub use covariance::{oracle_cov, run_covariance_experiment, theory_cov, CovarianceReport};
pub use joint::{run_joint_moment_experiment, JointMomentReport};
pub use odd::{run_odd_statistic_experiment, OddConfig, OddStatisticReport};
pub use paths::{export_paths, paths_csv};
pub use simulate::simulate_statistics;
pub use stats::{
    batch_count, batch_means_se, centered_product_moment, covariance, mean, mean_estimate,
    Estimate, Verdict,
};
pub use tightness::{run_tightness_diagnostic, IncrementMoment, TightnessConfig, TightnessReport};
pub use verify::{discrepancies, run_verify, Check, Discrepancy, VerifyReport, VerifyScale};
