use std::fmt;
use std::str::FromStr;

use super::circulant::CirculantSample;
use super::spectrum::spectrum;
use crate::combinatorics::{EnumerationCaps, TracePolynomial};
use crate::error::{LabError, Result};
use crate::numerics::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceMethod {
    /// Sum of eigenvalue powers.
    Spectral,
    /// Trace of repeated dense products.
    Dense,
    /// Index-set trace formula.
    Combinatorial,
}

impl TraceMethod {
    pub fn name(self) -> &'static str {
        match self {
            TraceMethod::Spectral => "spectral",
            TraceMethod::Dense => "dense",
            TraceMethod::Combinatorial => "combinatorial",
        }
    }
}

impl fmt::Display for TraceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TraceMethod {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(TraceMethod::Spectral),
            "dense" => Ok(TraceMethod::Dense),
            "combinatorial" => Ok(TraceMethod::Combinatorial),
            other => Err(LabError::Config(format!("unknown trace method {other:?}"))),
        }
    }
}

/// Spectral for `p >= 3` and `n >= 64`, dense otherwise.
pub fn default_method(n: usize, p: u32) -> TraceMethod {
    if p >= 3 && n >= 64 {
        TraceMethod::Spectral
    } else {
        TraceMethod::Dense
    }
}

/// Size limits of the combinatorial method.
pub const COMBINATORIAL_MAX_N: usize = 16;
pub const COMBINATORIAL_MAX_P: u32 = 4;

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            let row = &b[k * n..(k + 1) * n];
            let out = &mut c[i * n..(i + 1) * n];
            for (o, &x) in out.iter_mut().zip(row) {
                *o += aik * x;
            }
        }
    }
    c
}

fn dense_trace(sample: &CirculantSample, p: u32) -> f64 {
    let n = sample.n;
    let m = sample.dense();
    let diag = |x: &[f64]| compensated_sum((0..n).map(|i| x[i * n + i]));
    match p {
        0 => n as f64,
        1 => diag(&m),
        // symmetric matrix: Tr(M^2) is the squared Frobenius norm
        2 => compensated_sum(m.iter().map(|x| x * x)),
        _ => {
            let mut acc = m.clone();
            for _ in 1..p {
                acc = matmul(&acc, &m, n);
            }
            diag(&acc)
        }
    }
}

/// `Tr(M^p)` by the chosen method.
pub fn trace_power(sample: &CirculantSample, p: u32, method: TraceMethod) -> Result<f64> {
    match method {
        TraceMethod::Spectral => {
            let ev = spectrum(sample).eigenvalues;
            Ok(compensated_sum(ev.iter().map(|l| l.powi(p as i32))))
        }
        TraceMethod::Dense => Ok(dense_trace(sample, p)),
        TraceMethod::Combinatorial => {
            if sample.n > COMBINATORIAL_MAX_N || p > COMBINATORIAL_MAX_P {
                return Err(LabError::Capacity {
                    what: format!(
                        "combinatorial trace of power {p} at n={}",
                        sample.n
                    ),
                    needed: (sample.n as u128).max(p as u128),
                    cap: if sample.n > COMBINATORIAL_MAX_N {
                        COMBINATORIAL_MAX_N as u128
                    } else {
                        COMBINATORIAL_MAX_P as u128
                    },
                    cap_name: if sample.n > COMBINATORIAL_MAX_N {
                        "combinatorial max n"
                    } else {
                        "combinatorial max p"
                    },
                });
            }
            let poly = TracePolynomial::build(
                sample.kind,
                sample.n as u32,
                p,
                &EnumerationCaps::default(),
            )?;
            let scale = (sample.n as f64).sqrt();
            let x: Vec<f64> = sample.labels.iter().map(|b| b / scale).collect();
            Ok(poly.eval(&x))
        }
    }
}
