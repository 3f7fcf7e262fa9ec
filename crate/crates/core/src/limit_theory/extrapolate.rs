use crate::error::{LabError, Result};

/// Least-squares fit of `value(n) = limit + slope / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub limit: f64,
    pub slope: f64,
    /// Largest absolute residual of the fit.
    pub max_residual: f64,
}

pub fn extrapolate_limit(points: &[(f64, f64)]) -> Result<Extrapolation> {
    if points.len() < 3 {
        return Err(LabError::Domain(format!(
            "extrapolation needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) || points[0].0 <= 0.0 {
        return Err(LabError::Domain(
            "extrapolation needs strictly increasing positive n".into(),
        ));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(n, _)| 1.0 / n).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = points.iter().map(|&(_, v)| v).sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(points)
        .map(|(x, &(_, v))| (x - mx) * (v - my))
        .sum();
    let slope = sxy / sxx;
    let limit = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(points)
        .map(|(x, &(_, v))| (v - limit - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(Extrapolation {
        limit,
        slope,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_linear() {
        let e = extrapolate_limit(&[(5.0, 2.5), (7.0, 2.5), (9.0, 2.5)]).unwrap();
        assert!((e.limit - 2.5).abs() < 1e-14);
        let pts: Vec<(f64, f64)> = [5.0, 7.0, 11.0].iter().map(|&n| (n, 4.0 - 2.0 / n)).collect();
        let e = extrapolate_limit(&pts).unwrap();
        assert!((e.limit - 4.0).abs() < 1e-12);
        assert!((e.slope + 2.0).abs() < 1e-10);
        assert!(e.max_residual < 1e-12);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            extrapolate_limit(&[(5.0, 1.0), (7.0, 1.0)]),
            Err(LabError::Domain(_))
        ));
    }
}
