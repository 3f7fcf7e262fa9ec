use super::brownian::BrownianEnsemble;
use crate::error::{LabError, Result};
use crate::MatrixKind;

/// One realized matrix, stored through its first row.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSample {
    pub kind: MatrixKind,
    pub n: usize,
    pub t: f64,
    /// `first_row[j] = b_{label_of(j)}(t) / sqrt(n)`.
    pub first_row: Vec<f64>,
    /// Unscaled label values `b_0(t), ..., b_{L-1}(t)`.
    pub labels: Vec<f64>,
}

/// Label of first-row position `j`: `j` for RC, `min(j, n - j)` for SC
/// (the integer form of `n/2 - |n/2 - j|`).
pub fn label_of(kind: MatrixKind, n: usize, j: usize) -> usize {
    match kind {
        MatrixKind::Rc => j,
        MatrixKind::Sc => j.min(n - j),
    }
}

impl CirculantSample {
    /// Sample from explicit label values (`labels.len()` at least
    /// `kind.labels_needed(n)`).
    pub fn from_labels(kind: MatrixKind, n: usize, t: f64, labels: &[f64]) -> Result<Self> {
        if n < 1 {
            return Err(LabError::Config("dimension must be at least 1".into()));
        }
        let need = kind.labels_needed(n);
        if labels.len() < need {
            return Err(LabError::Config(format!(
                "{kind} with n={n} needs {need} labels, only {} available",
                labels.len()
            )));
        }
        let scale = (n as f64).sqrt();
        let first_row = (0..n).map(|j| labels[label_of(kind, n, j)] / scale).collect();
        Ok(CirculantSample {
            kind,
            n,
            t,
            first_row,
            labels: labels[..need].to_vec(),
        })
    }

    /// Entry `(i, j)` with 0-based indices.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let n = self.n;
        match self.kind {
            MatrixKind::Rc => self.first_row[(i + j) % n],
            MatrixKind::Sc => self.first_row[i.abs_diff(j)],
        }
    }

    /// Row-major dense matrix.
    pub fn dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut m = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                m.push(self.entry(i, j));
            }
        }
        m
    }
}

pub fn build_circulant(
    ensemble: &BrownianEnsemble,
    kind: MatrixKind,
    t: f64,
    n: usize,
) -> Result<CirculantSample> {
    let ti = ensemble.grid().index_of(t)?;
    let need = kind.labels_needed(n);
    if need > ensemble.n_labels() {
        return Err(LabError::Config(format!(
            "{kind} with n={n} needs {need} labels, ensemble has {}",
            ensemble.n_labels()
        )));
    }
    let labels = ensemble.labels_at(ti, need);
    CirculantSample::from_labels(kind, n, t, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{sample_brownian_paths, TimeGrid};

    #[test]
    fn rc_two_by_two() {
        let s = CirculantSample::from_labels(MatrixKind::Rc, 2, 1.0, &[3.0, 5.0]).unwrap();
        let r = 2f64.sqrt();
        assert_eq!(s.dense(), vec![3.0 / r, 5.0 / r, 5.0 / r, 3.0 / r]);
    }

    #[test]
    fn sc_label_patterns() {
        let pat: Vec<usize> = (0..4).map(|j| label_of(MatrixKind::Sc, 4, j)).collect();
        assert_eq!(pat, vec![0, 1, 2, 1]);
        let pat: Vec<usize> = (0..5).map(|j| label_of(MatrixKind::Sc, 5, j)).collect();
        assert_eq!(pat, vec![0, 1, 2, 2, 1]);
    }

    #[test]
    fn symmetric_and_lookup_errors() {
        let g = TimeGrid::new(vec![0.0, 1.0]).unwrap();
        let e = sample_brownian_paths(9, &g, 1).unwrap();
        for kind in [MatrixKind::Rc, MatrixKind::Sc] {
            for n in 1..=9 {
                let s = build_circulant(&e, kind, 1.0, n).unwrap();
                let m = s.dense();
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(m[i * n + j], m[j * n + i]);
                    }
                }
            }
        }
        assert!(matches!(
            build_circulant(&e, MatrixKind::Rc, 0.5, 4),
            Err(LabError::Lookup(_))
        ));
        assert!(matches!(
            build_circulant(&e, MatrixKind::Rc, 1.0, 10),
            Err(LabError::Config(_))
        ));
        assert!(build_circulant(&e, MatrixKind::Sc, 1.0, 16).is_ok());
    }

    #[test]
    fn sc_matches_index_law() {
        let labels = [1.0, 2.0, 3.0, 4.0];
        for n in [6usize, 7] {
            let s = CirculantSample::from_labels(MatrixKind::Sc, n, 1.0, &labels).unwrap();
            let r = (n as f64).sqrt();
            for i in 0..n {
                for j in 0..n {
                    let d = i.abs_diff(j) as f64;
                    let h = n as f64 / 2.0;
                    let l = (h - (h - d).abs()) as usize;
                    assert_eq!(s.entry(i, j), labels[l] / r);
                }
            }
        }
    }
}
