use std::cell::RefCell;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::circulant::CirculantSample;
use crate::MatrixKind;

/// Eigenvalues indexed by Fourier frequency `k = 0..n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub kind: MatrixKind,
    pub n: usize,
    pub eigenvalues: Vec<f64>,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn dft(row: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = row.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    if buf.len() > 1 {
        let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
        fft.process(&mut buf);
    }
    buf
}

/// RC: `lambda_0 = sum x_j`, `lambda_{n/2} = sum (-1)^j x_j` for even n, and
/// `(lambda_k, lambda_{n-k}) = (|d_k|, -|d_k|)` otherwise, `d` the DFT of the
/// first row. SC: the real part of the DFT of the first row.
pub fn spectrum(sample: &CirculantSample) -> Spectrum {
    let n = sample.n;
    let d = dft(&sample.first_row);
    let eigenvalues = match sample.kind {
        MatrixKind::Sc => d.iter().map(|z| z.re).collect(),
        MatrixKind::Rc => {
            let mut ev = vec![0.0; n];
            ev[0] = sample.first_row.iter().sum();
            if n.is_multiple_of(2) {
                ev[n / 2] = sample
                    .first_row
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| if j % 2 == 0 { x } else { -x })
                    .sum();
            }
            for k in 1..=(n - 1) / 2 {
                let m = d[k].norm();
                ev[k] = m;
                ev[n - k] = -m;
            }
            ev
        }
    };
    Spectrum {
        kind: sample.kind,
        n,
        eigenvalues,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{sample_brownian_paths, build_circulant, TimeGrid};

    #[test]
    fn constant_row() {
        let n = 6;
        let c = 1.7;
        let s = CirculantSample::from_labels(MatrixKind::Rc, n, 1.0, &[c; 6]).unwrap();
        let sp = spectrum(&s);
        assert!((sp.eigenvalues[0] - c * (n as f64).sqrt()).abs() < 1e-12);
        assert!(sp.eigenvalues[1..].iter().all(|l| l.abs() < 1e-12));
    }

    #[test]
    fn antisymmetric_pairs_and_frobenius() {
        let g = TimeGrid::new(vec![1.0]).unwrap();
        for seed in 0..20 {
            let e = sample_brownian_paths(10, &g, seed).unwrap();
            for n in [8usize, 9, 10] {
                let s = build_circulant(&e, MatrixKind::Rc, 1.0, n).unwrap();
                let ev = spectrum(&s).eigenvalues;
                for k in 1..=(n - 1) / 2 {
                    assert!((ev[k] + ev[n - k]).abs() < 1e-12);
                }
                for kind in [MatrixKind::Rc, MatrixKind::Sc] {
                    let s = build_circulant(&e, kind, 1.0, n).unwrap();
                    let ev = spectrum(&s).eigenvalues;
                    let fro: f64 = s.dense().iter().map(|x| x * x).sum();
                    let sq: f64 = ev.iter().map(|x| x * x).sum();
                    assert!((fro - sq).abs() <= 1e-9 * fro);
                }
            }
        }
    }
}
