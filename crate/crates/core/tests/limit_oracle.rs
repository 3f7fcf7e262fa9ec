//! Reconciled limit covariances against closed-form Gaussian limits.
//!
//! RC: each `w_p(t)` is driven by `|d(t)|^{2p}` for a complex Brownian `d`
//! with `E|d(t)|^2 = t`, counted twice, so the limit is
//! `2 Cov(|d(s)|^{2p}, |d(t)|^{2q})`.
//! SC: `eta_p(t)` behaves like `2 (u(t)^p - E)` summed over labels minus the
//! projection on `u` itself, giving
//! `2 Cov(u(s)^p, u(t)^q) - p q s m_{p-1}(s) m_{q-1}(t)` for real Brownian `u`.

use circlab::limit_theory::{limit_cov, CovQuery, TheoryMode};
use circlab::MatrixKind::{Rc, Sc};

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn binom(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `E[G^m]` for `G ~ N(0, t)`.
fn normal_moment(m: u32, t: f64) -> f64 {
    if m % 2 == 1 {
        return 0.0;
    }
    let dfact: f64 = (1..m).step_by(2).map(f64::from).product();
    dfact * t.powi(m as i32 / 2)
}

fn rc_truth(p: u32, q: u32, s: f64, t: f64) -> f64 {
    // |d(s)|^2 ~ Exp(mean s); E|a + e|^{2q} = sum_i C(q,i)^2 i! h^i |a|^{2(q-i)}
    let h = t - s;
    let joint: f64 = (0..=q)
        .map(|i| binom(q, i).powi(2) * factorial(i) * h.powi(i as i32) * factorial(p + q - i) * s.powi((p + q - i) as i32))
        .sum();
    2.0 * (joint - factorial(p) * s.powi(p as i32) * factorial(q) * t.powi(q as i32))
}

fn sc_truth(p: u32, q: u32, s: f64, t: f64) -> f64 {
    let h = t - s;
    let joint: f64 = (0..=q)
        .map(|i| binom(q, i) * normal_moment(i, h) * normal_moment(p + q - i, s))
        .sum();
    let cov = joint - normal_moment(p, s) * normal_moment(q, t);
    2.0 * cov - f64::from(p * q) * s * normal_moment(p - 1, s) * normal_moment(q - 1, t)
}

const TIMES: [(f64, f64); 4] = [(1.0, 1.0), (0.5, 1.0), (0.3, 2.0), (1.5, 1.7)];

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs().max(1.0)
}

#[test]
fn rc_reconciled_matches_gaussian_limit() {
    for p in 1..=4 {
        for q in 1..=4 {
            for (s, t) in TIMES {
                let got = limit_cov(&CovQuery::new(Rc, p, q, s, t).unwrap(), TheoryMode::Reconciled).unwrap();
                let want = rc_truth(p, q, s, t);
                assert!(close(got, want), "rc p={p} q={q} s={s} t={t}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn sc_reconciled_matches_gaussian_limit() {
    for p in 2..=6 {
        for q in 2..=6 {
            for (s, t) in TIMES {
                let got = limit_cov(&CovQuery::new(Sc, p, q, s, t).unwrap(), TheoryMode::Reconciled).unwrap();
                let want = sc_truth(p, q, s, t);
                assert!(close(got, want), "sc p={p} q={q} s={s} t={t}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn known_values() {
    assert!(close(rc_truth(1, 1, 1.0, 1.0), 2.0));
    assert!(close(rc_truth(2, 2, 1.0, 1.0), 40.0));
    assert!(close(sc_truth(2, 2, 1.0, 1.0), 4.0));
    assert!(close(sc_truth(3, 3, 1.0, 1.0), 21.0));
    assert!(close(sc_truth(4, 4, 1.0, 1.0), 192.0));
}

#[test]
fn paper_literal_differs_where_documented() {
    let lit = |k, p, q| limit_cov(&CovQuery::new(k, p, q, 1.0, 1.0).unwrap(), TheoryMode::PaperLiteral).unwrap();
    assert_eq!(lit(Rc, 1, 1), 0.0);
    assert_eq!(lit(Sc, 2, 2), 0.0);
    assert!(close(lit(Sc, 3, 3), 9.0));
}
