use super::rng::GaussianStream;
use crate::error::{LabError, Result};

/// Strictly increasing, non-negative sampling times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(LabError::Config("time grid is empty".into()));
        }
        if let Some(bad) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(LabError::Config(format!(
                "time grid entries must be finite and non-negative, got {bad}"
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LabError::Config(
                "time grid must be strictly increasing".into(),
            ));
        }
        Ok(TimeGrid { times })
    }

    /// Grid made of the distinct values of `times`, sorted.
    pub fn covering(times: &[f64]) -> Result<Self> {
        let mut v = times.to_vec();
        v.sort_by(f64::total_cmp);
        v.dedup();
        Self::new(v)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Position of `t` on the grid (exact match).
    pub fn index_of(&self, t: f64) -> Result<usize> {
        self.times
            .iter()
            .position(|&s| s == t)
            .ok_or(LabError::Lookup(t))
    }
}

/// Entry processes `b_0, ..., b_{L-1}` sampled on a grid, stored label-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianEnsemble {
    n_labels: usize,
    grid: TimeGrid,
    values: Vec<f64>,
}

impl BrownianEnsemble {
    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn value(&self, label: usize, time_index: usize) -> f64 {
        self.values[label * self.grid.len() + time_index]
    }

    pub fn path(&self, label: usize) -> &[f64] {
        let m = self.grid.len();
        &self.values[label * m..(label + 1) * m]
    }

    /// Values of labels `0..count` at one grid time.
    pub fn labels_at(&self, time_index: usize, count: usize) -> Vec<f64> {
        (0..count).map(|l| self.value(l, time_index)).collect()
    }
}

/// Cumulative sums of independent Gaussian increments whose variances are
/// the grid spacings (the first spacing is measured from time 0). Labels are
/// drawn in order, each label consuming one normal per grid point.
pub fn sample_brownian_paths(n_labels: usize, grid: &TimeGrid, seed: u64) -> Result<BrownianEnsemble> {
    let mut stream = GaussianStream::new(seed);
    sample_with(n_labels, grid, &mut stream)
}

pub(crate) fn sample_with(
    n_labels: usize,
    grid: &TimeGrid,
    stream: &mut GaussianStream,
) -> Result<BrownianEnsemble> {
    if n_labels < 1 {
        return Err(LabError::Config("need at least one label".into()));
    }
    let steps: Vec<f64> = grid
        .times()
        .iter()
        .scan(0.0, |prev, &t| {
            let sd = (t - *prev).sqrt();
            *prev = t;
            Some(sd)
        })
        .collect();
    let mut values = Vec::with_capacity(n_labels * grid.len());
    for _ in 0..n_labels {
        let mut acc = 0.0;
        for &sd in &steps {
            acc += sd * stream.normal();
            values.push(acc);
        }
    }
    Ok(BrownianEnsemble {
        n_labels,
        grid: grid.clone(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(matches!(TimeGrid::new(vec![]), Err(LabError::Config(_))));
        assert!(matches!(TimeGrid::new(vec![-1.0, 0.0]), Err(LabError::Config(_))));
        assert!(TimeGrid::new(vec![0.0, 0.0]).is_err());
        assert!(TimeGrid::new(vec![0.5, 0.25]).is_err());
        let g = TimeGrid::new(vec![0.0, 0.5, 1.0]).unwrap();
        assert_eq!(g.index_of(0.5).unwrap(), 1);
        assert!(matches!(g.index_of(0.7), Err(LabError::Lookup(_))));
    }

    #[test]
    fn zero_at_time_zero() {
        let g = TimeGrid::new(vec![0.0]).unwrap();
        let e = sample_brownian_paths(1, &g, 7).unwrap();
        assert_eq!(e.value(0, 0), 0.0);
        let g = TimeGrid::new(vec![0.0, 1.0, 2.0]).unwrap();
        let e = sample_brownian_paths(5, &g, 9).unwrap();
        assert!((0..5).all(|l| e.value(l, 0) == 0.0));
    }

    #[test]
    fn deterministic() {
        let g = TimeGrid::new(vec![0.0, 1.0]).unwrap();
        let a = sample_brownian_paths(3, &g, 42).unwrap();
        let b = sample_brownian_paths(3, &g, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_brownian_paths(3, &g, 43).unwrap();
        assert_ne!(a, c);
    }
}
