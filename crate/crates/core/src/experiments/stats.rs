use serde::Serialize;

use crate::numerics::compensated_sum;

/// Outcome of one comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        }
    }

    /// Pass iff `|estimate - reference| <= tolerance * se`.
    pub fn judge(estimate: f64, se: f64, reference: Option<f64>, tolerance: f64) -> Verdict {
        match reference {
            None => Verdict::NotApplicable,
            Some(r) if (estimate - r).abs() <= tolerance * se => Verdict::Pass,
            Some(_) => Verdict::Fail,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Point estimate with its batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    compensated_sum(xs.iter().copied()) / xs.len() as f64
}

/// Number of contiguous batches used for `r` replicas: `ceil(sqrt(r))`.
pub fn batch_count(r: usize) -> usize {
    let mut b = (r as f64).sqrt() as usize;
    while b * b < r {
        b += 1;
    }
    while b > 1 && (b - 1) * (b - 1) >= r {
        b -= 1;
    }
    b.max(1)
}

/// Standard error of the mean of `terms` from the spread of contiguous
/// batch means.
pub fn batch_means_se(terms: &[f64]) -> f64 {
    let r = terms.len();
    let b = batch_count(r).min(r);
    if b < 2 {
        return f64::NAN;
    }
    let means: Vec<f64> = (0..b)
        .map(|i| {
            let lo = i * r / b;
            let hi = (i + 1) * r / b;
            mean(&terms[lo..hi])
        })
        .collect();
    let m = mean(&means);
    let ss = compensated_sum(means.iter().map(|x| (x - m) * (x - m)));
    (ss / ((b * (b - 1)) as f64)).sqrt()
}

/// Sample mean with batch-means SE.
pub fn mean_estimate(xs: &[f64]) -> Estimate {
    Estimate {
        value: mean(xs),
        se: batch_means_se(xs),
    }
}

/// Mean of `prod_i (x_i - mean_i)` over replicas, scaled by `R / (R - 1)`
/// when there are exactly two factors so that it is the usual unbiased
/// covariance.
pub fn centered_product_moment(columns: &[&[f64]]) -> Estimate {
    let r = columns[0].len();
    let means: Vec<f64> = columns.iter().map(|c| mean(c)).collect();
    let terms: Vec<f64> = (0..r)
        .map(|i| {
            columns
                .iter()
                .zip(&means)
                .map(|(c, m)| c[i] - m)
                .product()
        })
        .collect();
    let scale = if columns.len() == 2 {
        r as f64 / (r as f64 - 1.0)
    } else {
        1.0
    };
    let e = mean_estimate(&terms);
    Estimate {
        value: e.value * scale,
        se: e.se * scale,
    }
}

/// Unbiased covariance with batch-means SE.
pub fn covariance(x: &[f64], y: &[f64]) -> Estimate {
    centered_product_moment(&[x, y])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batches() {
        assert_eq!(batch_count(20000), 142);
        assert_eq!(batch_count(10000), 100);
        assert_eq!(batch_count(10001), 101);
        assert_eq!(batch_count(2), 2);
    }

    #[test]
    fn covariance_matches_textbook() {
        let x = [1.0, 2.0, 4.0, 7.0];
        let y = [2.0, 1.0, 5.0, 3.0];
        let c = covariance(&x, &y);
        // means 3.5 and 2.75
        let want = ((-2.5 * -0.75) + (-1.5 * -1.75) + (0.5 * 2.25) + (3.5 * 0.25)) / 3.0;
        assert!((c.value - want).abs() < 1e-14);
    }

    #[test]
    fn judge() {
        assert_eq!(Verdict::judge(1.0, 0.1, Some(1.25), 3.0), Verdict::Pass);
        assert_eq!(Verdict::judge(1.0, 0.1, Some(1.35), 3.0), Verdict::Fail);
        assert_eq!(Verdict::judge(1.0, 0.1, None, 3.0), Verdict::NotApplicable);
    }
}
