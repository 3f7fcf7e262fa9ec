//! Centred, scaled trace statistics `w_p(t)` (RC, power `2p`) and
//! `eta_p(t)` (SC, power `p`).
//!
//! Traces are carried in reduced form `R = Tr(B^power) / prefactor`, where
//! `B = sqrt(n) M` is the matrix of raw labels and the prefactor is `n` (RC,
//! odd-n SC) or `n/2` (even-n SC). Powers 1 and 2 are evaluated directly
//! from the labels, so `eta_1` reproduces `b_0(t)` bit for bit.

use crate::combinatorics::exact::odd_double_factorial;
use crate::ensemble::{spectrum, trace_power, CirculantSample, Spectrum, TraceMethod};
use crate::error::{LabError, Result};
use crate::limit_theory::oracle::{reduced_expectation, statistic_polynomial};
use crate::limit_theory::OracleCaps;
use crate::numerics::compensated_sum;
use crate::MatrixKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CenteringMode {
    /// Subtract the cross-replica sample mean.
    Empirical,
    /// Subtract the exact Gaussian expectation.
    Exact,
}

impl CenteringMode {
    pub fn name(self) -> &'static str {
        match self {
            CenteringMode::Empirical => "empirical",
            CenteringMode::Exact => "exact",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "empirical" => Ok(CenteringMode::Empirical),
            "exact" => Ok(CenteringMode::Exact),
            other => Err(LabError::Config(format!(
                "unknown centering {other:?} (expected empirical or exact)"
            ))),
        }
    }
}

/// `(numerator, denominator)` of the trace prefactor.
pub fn prefactor(kind: MatrixKind, n: usize) -> (u64, u64) {
    match kind {
        MatrixKind::Sc if n.is_multiple_of(2) => (n as u64 / 2, 1),
        _ => (n as u64, 1),
    }
}

/// Reduced trace of one sample at the given matrix power.
pub fn reduced_trace(sample: &CirculantSample, power: u32, method: TraceMethod) -> Result<f64> {
    let n = sample.n;
    let b = &sample.labels;
    let sq = |x: f64| x * x;
    match (sample.kind, power) {
        (MatrixKind::Sc, 1) => Ok(if n % 2 == 1 { b[0] } else { 2.0 * b[0] }),
        (MatrixKind::Sc, 2) => {
            let h = n / 2;
            if n % 2 == 1 {
                Ok(sq(b[0]) + 2.0 * compensated_sum(b[1..=h].iter().map(|&x| sq(x))))
            } else {
                let mid = compensated_sum(b[1..h].iter().map(|&x| sq(x)));
                Ok(2.0 * (sq(b[0]) + sq(b[h]) + 2.0 * mid))
            }
        }
        (MatrixKind::Rc, 2) => Ok(compensated_sum(b.iter().map(|&x| sq(x)))),
        _ => {
            let tr = trace_power(sample, power, method)?;
            let (num, den) = prefactor(sample.kind, n);
            Ok(tr * den as f64 / num as f64 * (n as f64).powf(power as f64 / 2.0))
        }
    }
}

/// Factor `kappa` with `(Tr - c) / sqrt(n) = kappa (R - c_R)`, i.e.
/// `prefactor * n^{-(power+1)/2}`, computed exactly when the exponent is an
/// integer.
pub fn fluctuation_scale(kind: MatrixKind, n: usize, power: u32) -> f64 {
    let (num, den) = prefactor(kind, n);
    let e = power + 1;
    if e.is_multiple_of(2) {
        let mut d = den as u128;
        for _ in 0..e / 2 {
            d *= n as u128;
        }
        let g = gcd(num as u128, d);
        (num as u128 / g) as f64 / (d / g) as f64
    } else {
        num as f64 / den as f64 * (n as f64).powi(-((e / 2) as i32)) / (n as f64).sqrt()
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Per-replica reduced traces of one statistic at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceBatch {
    pub kind: MatrixKind,
    pub n: usize,
    pub power: u32,
    pub t: f64,
    pub reduced: Vec<f64>,
}

impl TraceBatch {
    pub fn from_samples(samples: &[CirculantSample], power: u32, method: TraceMethod) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| LabError::Config("no samples".into()))?;
        let reduced = samples
            .iter()
            .map(|s| reduced_trace(s, power, method))
            .collect::<Result<Vec<f64>>>()?;
        Ok(TraceBatch {
            kind: first.kind,
            n: first.n,
            power,
            t: first.t,
            reduced,
        })
    }

    /// Batch from plain trace values `Tr(M^power)`.
    pub fn from_traces(kind: MatrixKind, n: usize, power: u32, t: f64, traces: &[f64]) -> Self {
        let (num, den) = prefactor(kind, n);
        let f = den as f64 / num as f64 * (n as f64).powf(power as f64 / 2.0);
        TraceBatch {
            kind,
            n,
            power,
            t,
            reduced: traces.iter().map(|x| x * f).collect(),
        }
    }

    pub fn traces(&self) -> Vec<f64> {
        let (num, den) = prefactor(self.kind, self.n);
        let f = num as f64 / den as f64 * (self.n as f64).powf(-(self.power as f64) / 2.0);
        self.reduced.iter().map(|x| x * f).collect()
    }
}

/// Exact `E[R]` at time `t`, within the oracle caps. The first two powers
/// have closed forms and are available at every `n`.
pub fn exact_reduced_expectation(kind: MatrixKind, n: usize, power: u32, t: f64) -> Result<f64> {
    match (kind, power) {
        (MatrixKind::Sc, 1) => Ok(0.0),
        (MatrixKind::Sc, 2) => {
            let (num, _) = prefactor(kind, n);
            // E[Tr(B^2)] = n^2 t
            Ok((n * n) as f64 * t / num as f64)
        }
        (MatrixKind::Rc, 2) => Ok(n as f64 * t),
        _ => {
            let p = match kind {
                MatrixKind::Rc if power.is_multiple_of(2) => power / 2,
                MatrixKind::Rc => {
                    return Err(LabError::Domain(
                        "exact centering needs an even reverse-circulant power".into(),
                    ))
                }
                MatrixKind::Sc => power,
            };
            let poly = statistic_polynomial(kind, p, n as u32, &OracleCaps::default())?;
            Ok(reduced_expectation(&poly, t))
        }
    }
}

fn fluctuation(batch: &TraceBatch, centering: CenteringMode) -> Result<Vec<f64>> {
    let center = match centering {
        CenteringMode::Empirical => {
            if batch.reduced.len() < 2 {
                return Err(LabError::Config(
                    "empirical centering needs at least 2 replicas".into(),
                ));
            }
            compensated_sum(batch.reduced.iter().copied()) / batch.reduced.len() as f64
        }
        CenteringMode::Exact => exact_reduced_expectation(batch.kind, batch.n, batch.power, batch.t)?,
    };
    let kappa = fluctuation_scale(batch.kind, batch.n, batch.power);
    Ok(batch.reduced.iter().map(|&r| kappa * (r - center)).collect())
}

/// `w_p(t)` per replica from traces of `RC^{2p}`.
pub fn rc_fluctuation(batch: &TraceBatch, p: u32, centering: CenteringMode) -> Result<Vec<f64>> {
    if batch.kind != MatrixKind::Rc {
        return Err(LabError::Kind("rc_fluctuation needs RC traces".into()));
    }
    if p < 1 || batch.power != 2 * p {
        return Err(LabError::Domain(format!(
            "w_{p} needs traces of power {}, got {}",
            2 * p,
            batch.power
        )));
    }
    fluctuation(batch, centering)
}

/// `eta_p(t)` per replica from traces of `SC^p`.
pub fn sc_fluctuation(batch: &TraceBatch, p: u32, centering: CenteringMode) -> Result<Vec<f64>> {
    if batch.kind != MatrixKind::Sc {
        return Err(LabError::Kind("sc_fluctuation needs SC traces".into()));
    }
    if p < 1 || batch.power != p {
        return Err(LabError::Domain(format!(
            "eta_{p} needs traces of power {p}, got {}",
            batch.power
        )));
    }
    fluctuation(batch, centering)
}

/// The order-`p` statistic of either kind.
pub fn statistic(batch: &TraceBatch, p: u32, centering: CenteringMode) -> Result<Vec<f64>> {
    match batch.kind {
        MatrixKind::Rc => rc_fluctuation(batch, p, centering),
        MatrixKind::Sc => sc_fluctuation(batch, p, centering),
    }
}

/// `sum_k lambda_k^{2p+1}` of an RC spectrum.
pub fn rc_odd_statistic(spec: &Spectrum, p: u32) -> Result<f64> {
    if spec.kind != MatrixKind::Rc {
        return Err(LabError::Kind("odd statistic is defined for RC spectra".into()));
    }
    let e = (2 * p + 1) as i32;
    Ok(compensated_sum(spec.eigenvalues.iter().map(|l| l.powi(e))))
}

/// Right-hand side of the odd-power collapse: `lambda_0^{2p+1}`, plus
/// `lambda_{n/2}^{2p+1}` for even n.
pub fn rc_odd_collapse(spec: &Spectrum, p: u32) -> f64 {
    let e = (2 * p + 1) as i32;
    let mut v = spec.eigenvalues[0].powi(e);
    if spec.n.is_multiple_of(2) {
        v += spec.eigenvalues[spec.n / 2].powi(e);
    }
    v
}

/// Odd statistic directly from a sample.
pub fn rc_odd_statistic_of(sample: &CirculantSample, p: u32) -> Result<f64> {
    rc_odd_statistic(&spectrum(sample), p)
}

/// `E[G^{2m}]` for `G ~ N(0, t)`.
pub fn gaussian_even_moment(m: u32, t: f64) -> f64 {
    odd_double_factorial(m) as f64 * t.powi(m as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_is_exact_for_unit_cases() {
        for n in [5usize, 49, 511] {
            assert_eq!(fluctuation_scale(MatrixKind::Sc, n, 1), 1.0);
        }
        for n in [4usize, 50, 512] {
            assert_eq!(fluctuation_scale(MatrixKind::Sc, n, 1), 0.5);
        }
        let k = fluctuation_scale(MatrixKind::Rc, 9, 2);
        assert!((k - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn eta_one_is_b0() {
        for n in [5usize, 6, 49, 50] {
            let labels: Vec<f64> = (0..=n / 2).map(|l| 0.1 + 0.37 * l as f64 - 1.3f64.powi(l as i32 % 5)).collect();
            let s = CirculantSample::from_labels(MatrixKind::Sc, n, 1.0, &labels).unwrap();
            let b = TraceBatch::from_samples(&[s], 1, TraceMethod::Dense).unwrap();
            let eta = sc_fluctuation(&b, 1, CenteringMode::Exact).unwrap();
            assert_eq!(eta[0].to_bits(), labels[0].to_bits());
        }
    }

    #[test]
    fn closed_form_expectations_match_oracle() {
        for n in [5usize, 6, 9, 12] {
            for kind in [MatrixKind::Rc, MatrixKind::Sc] {
                let direct = exact_reduced_expectation(kind, n, 2, 0.8).unwrap();
                let p = if kind == MatrixKind::Rc { 1 } else { 2 };
                let poly = statistic_polynomial(kind, p, n as u32, &OracleCaps::default()).unwrap();
                let via = reduced_expectation(&poly, 0.8);
                assert!((direct - via).abs() < 1e-12 * direct.abs().max(1.0));
            }
        }
    }

    #[test]
    fn sc_second_order_hand_expansion() {
        let labels = [0.4, -1.1, 0.7];
        let s = CirculantSample::from_labels(MatrixKind::Sc, 5, 0.6, &labels).unwrap();
        let b = TraceBatch::from_samples(&[s], 2, TraceMethod::Dense).unwrap();
        let eta = sc_fluctuation(&b, 2, CenteringMode::Exact).unwrap()[0];
        let want = (0.16 + 2.0 * (1.21 + 0.49) - 5.0 * 0.6) / 5f64.sqrt();
        assert!((eta - want).abs() < 1e-14);
    }

    #[test]
    fn empirical_needs_two() {
        let b = TraceBatch::from_traces(MatrixKind::Rc, 4, 2, 1.0, &[1.0]);
        assert!(matches!(
            rc_fluctuation(&b, 1, CenteringMode::Empirical),
            Err(LabError::Config(_))
        ));
        assert!(matches!(
            sc_fluctuation(&b, 1, CenteringMode::Exact),
            Err(LabError::Kind(_))
        ));
    }
}
