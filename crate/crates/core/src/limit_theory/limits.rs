use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::exact::{big, binomial, factorial, int, to_f64};
use crate::combinatorics::{h_pk, rc_constants, sc_constants, ScConstant, TheoryMode};
use crate::error::{LabError, Result};
use crate::MatrixKind;

/// Orders and times of one limit covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovQuery {
    pub kind: MatrixKind,
    pub p: u32,
    pub q: u32,
    pub t1: f64,
    pub t2: f64,
}

impl CovQuery {
    pub fn new(kind: MatrixKind, p: u32, q: u32, t1: f64, t2: f64) -> Result<Self> {
        let query = CovQuery { kind, p, q, t1, t2 };
        query.validate()?;
        Ok(query)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t1.is_finite() && self.t2.is_finite()) || self.t1 <= 0.0 {
            return Err(LabError::Domain(format!(
                "times must satisfy 0 < t1 <= t2, got t1={}, t2={}",
                self.t1, self.t2
            )));
        }
        if self.t1 > self.t2 {
            return Err(LabError::Domain(format!(
                "t1={} exceeds t2={}",
                self.t1, self.t2
            )));
        }
        let min_order = match self.kind {
            MatrixKind::Rc => 1,
            MatrixKind::Sc => 2,
        };
        if self.p < min_order || self.q < min_order {
            return Err(LabError::Domain(format!(
                "{} covariance needs p, q >= {min_order}, got p={}, q={}",
                self.kind, self.p, self.q
            )));
        }
        Ok(())
    }
}

fn time_factor(t1: f64, t2: f64, e1: u32, e2: u32) -> f64 {
    t1.powi(e1 as i32) * (t2 - t1).powi(e2 as i32)
}

/// Limit of `Cov(w_p(t1), w_q(t2))`.
///
/// Reconciled mode drops the `C(2q, 2r')` weight and uses the reconciled
/// `g(k)`; see [`crate::combinatorics::rc_g`].
pub fn rc_limit_cov(query: &CovQuery, mode: TheoryMode) -> Result<f64> {
    query.validate()?;
    if query.kind != MatrixKind::Rc {
        return Err(LabError::Kind("rc_limit_cov called with an SC query".into()));
    }
    let CovQuery { p, q, t1, t2, .. } = *query;
    let mut total = 0.0;
    for r in 1..=q {
        let mut inner = BigRational::zero();
        let (c1, _) = rc_constants(p, r, q, 1, mode)?;
        for k in 1..=p.min(r) {
            let (c, g) = rc_constants(p, r, q, k, mode)?;
            inner += c * g;
        }
        inner -= c1;
        if mode == TheoryMode::PaperLiteral {
            inner *= big(binomial(2 * q as i64, 2 * r as i64));
        }
        total += to_f64(&inner) * time_factor(t1, t2, p + r, q - r);
    }
    Ok(total)
}

/// `sum_s C(c,s)^2 s! (c-s)! h_c(s)`. For `c = 1` the defining limit is
/// zero (no single index in `[1, n/2]` vanishes mod n).
fn h_weight(c: u32) -> Result<BigRational> {
    if c < 2 {
        return Ok(BigRational::zero());
    }
    let mut acc = BigRational::zero();
    for s in 0..=c {
        let b = big(binomial(c as i64, s as i64));
        let f = big(factorial(s as u64) * factorial((c - s) as u64));
        acc += &b * &b * f * h_pk(c, s)?;
    }
    Ok(acc)
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        big(num_bigint::BigInt::from(2).pow(e as u32))
    } else {
        BigRational::new(1.into(), num_bigint::BigInt::from(2).pow((-e) as u32))
    }
}

/// Weight of a term with `c` cross-matched entries.
///
/// Paper-literal: the `h`-weighted sums with the printed powers of two
/// (`2 / 2^{(p+q-4)/2}` for `c = 2`). Reconciled: `2 c! / 2^{(p+q-2c)/2}`
/// for `c >= 2` and zero for `c = 1`.
fn cross_weight(c: u32, p: u32, q: u32, r: u32, mode: TheoryMode) -> Result<BigRational> {
    let (p, q, r, ci) = (p as i64, q as i64, r as i64, c as i64);
    match mode {
        TheoryMode::Reconciled => {
            if c < 2 {
                Ok(BigRational::zero())
            } else {
                Ok(int(2) * big(factorial(c as u64)) / pow2((p + q - 2 * ci) / 2))
            }
        }
        TheoryMode::PaperLiteral => {
            if c == 2 {
                Ok(int(2) / pow2((p + q - 4) / 2))
            } else {
                Ok(h_weight(c)? / pow2((p + r - 2 * ci) / 2))
            }
        }
    }
}

/// Limit of `Cov(eta_p(t1), eta_q(t2))`: the even/even and odd/odd
/// branches, and exactly zero for mixed parity.
pub fn sc_limit_cov(query: &CovQuery, mode: TheoryMode) -> Result<f64> {
    query.validate()?;
    if query.kind != MatrixKind::Sc {
        return Err(LabError::Kind("sc_limit_cov called with an RC query".into()));
    }
    let CovQuery { p, q, t1, t2, .. } = *query;
    if p % 2 != q % 2 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    if p % 2 == 0 {
        for r in (2..=q).step_by(2) {
            let mut inner = BigRational::zero();
            for m in 1..=(p / 2).min(r / 2) {
                let a = sc_constants(p, q, r, m, ScConstant::A, mode)?;
                inner += a * cross_weight(2 * m, p, q, r, mode)?;
            }
            inner *= big(binomial(q as i64, r as i64));
            total += to_f64(&inner) * time_factor(t1, t2, (p + r) / 2, (q - r) / 2);
        }
    } else {
        for r in (1..=q).step_by(2) {
            let mut inner = BigRational::zero();
            for m in 0..=((p - 1) / 2).min((r - 1) / 2) {
                let b = sc_constants(p, q, r, m, ScConstant::B, mode)?;
                inner += b * cross_weight(2 * m + 1, p, q, r, mode)?;
            }
            inner *= big(binomial(q as i64, r as i64));
            total += to_f64(&inner) * time_factor(t1, t2, (p + r) / 2, (q - r) / 2);
        }
        let lead = int((p * q) as i64) / pow2(((p + q) / 2) as i64 - 1);
        for r in (0..q).step_by(2) {
            let d = sc_constants(p, q, r, 0, ScConstant::D, mode)?;
            let term = &lead * big(binomial(q as i64 - 1, r as i64)) * d;
            total += to_f64(&term) * time_factor(t1, t2, (p + 1 + r) / 2, (q - 1 - r) / 2);
        }
    }
    Ok(total)
}

/// Dispatch on the query kind.
pub fn limit_cov(query: &CovQuery, mode: TheoryMode) -> Result<f64> {
    match query.kind {
        MatrixKind::Rc => rc_limit_cov(query, mode),
        MatrixKind::Sc => sc_limit_cov(query, mode),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(kind: MatrixKind, p: u32, q: u32, t1: f64, t2: f64) -> CovQuery {
        CovQuery::new(kind, p, q, t1, t2).unwrap()
    }

    #[test]
    fn rc_first_order() {
        let rec = TheoryMode::Reconciled;
        for t in [0.5, 1.0, 2.0] {
            let v = rc_limit_cov(&q(MatrixKind::Rc, 1, 1, t, t), rec).unwrap();
            assert!((v - 2.0 * t * t).abs() < 1e-14);
            let v = rc_limit_cov(&q(MatrixKind::Rc, 1, 1, t, t), TheoryMode::PaperLiteral).unwrap();
            assert_eq!(v, 0.0);
        }
        let v = rc_limit_cov(&q(MatrixKind::Rc, 1, 1, 0.5, 1.0), rec).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rc_second_order_reconciled() {
        let rec = TheoryMode::Reconciled;
        let v = rc_limit_cov(&q(MatrixKind::Rc, 2, 2, 1.0, 1.0), rec).unwrap();
        assert!((v - 40.0).abs() < 1e-12);
        // 40 s^4 + 32 s^3 h at s = 0.5, h = 0.5
        let v = rc_limit_cov(&q(MatrixKind::Rc, 2, 2, 0.5, 1.0), rec).unwrap();
        assert!((v - (40.0 / 16.0 + 32.0 / 16.0)).abs() < 1e-12);
        // 8 s^3 + 8 s^2 h
        let v = rc_limit_cov(&q(MatrixKind::Rc, 1, 2, 0.5, 1.0), rec).unwrap();
        assert!((v - (1.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn sc_branches() {
        let lit = TheoryMode::PaperLiteral;
        let rec = TheoryMode::Reconciled;
        assert_eq!(sc_limit_cov(&q(MatrixKind::Sc, 2, 3, 0.3, 1.0), lit).unwrap(), 0.0);
        assert_eq!(sc_limit_cov(&q(MatrixKind::Sc, 2, 3, 0.3, 1.0), rec).unwrap(), 0.0);
        assert_eq!(sc_limit_cov(&q(MatrixKind::Sc, 2, 2, 1.0, 1.0), lit).unwrap(), 0.0);
        let v = sc_limit_cov(&q(MatrixKind::Sc, 2, 2, 1.5, 1.5), rec).unwrap();
        assert!((v - 4.0 * 2.25).abs() < 1e-12);
        let v = sc_limit_cov(&q(MatrixKind::Sc, 3, 3, 1.0, 1.0), rec).unwrap();
        assert!((v - 21.0).abs() < 1e-12);
    }

    #[test]
    fn query_validation() {
        assert!(matches!(
            CovQuery::new(MatrixKind::Rc, 1, 1, 1.0, 0.5),
            Err(LabError::Domain(_))
        ));
        assert!(CovQuery::new(MatrixKind::Sc, 1, 2, 1.0, 1.0).is_err());
        assert!(CovQuery::new(MatrixKind::Rc, 1, 1, 0.0, 1.0).is_err());
        let sc = q(MatrixKind::Sc, 2, 2, 1.0, 1.0);
        assert!(matches!(rc_limit_cov(&sc, TheoryMode::Reconciled), Err(LabError::Kind(_))));
    }
}
