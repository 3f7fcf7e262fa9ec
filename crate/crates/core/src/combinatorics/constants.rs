use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::exact::{big, binomial, factorial, int};
use crate::error::{LabError, Result};

/// Which version of the published constants to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoryMode {
    /// Constants exactly as printed.
    PaperLiteral,
    /// Constants corrected where the exact finite-n oracle disagrees.
    Reconciled,
}

impl TheoryMode {
    pub fn name(self) -> &'static str {
        match self {
            TheoryMode::PaperLiteral => "paper-literal",
            TheoryMode::Reconciled => "reconciled",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper-literal" | "paper_literal" | "paper" | "literal" => Ok(TheoryMode::PaperLiteral),
            "reconciled" => Ok(TheoryMode::Reconciled),
            other => Err(LabError::Config(format!(
                "unknown theory mode {other:?} (expected paper-literal or reconciled)"
            ))),
        }
    }
}

impl fmt::Display for TheoryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn sq(x: BigInt) -> BigInt {
    &x * &x
}

/// The weight `g(k)` multiplying `c_k` in the reverse-circulant covariance.
pub fn rc_g(k: u32, mode: TheoryMode) -> Result<BigRational> {
    if k < 1 {
        return Err(LabError::Domain("g(k) needs k >= 1".into()));
    }
    let ki = k as i64;
    let kf = factorial(k as u64);
    match mode {
        TheoryMode::Reconciled => {
            if k == 1 {
                Ok(int(3))
            } else {
                Ok(big(BigInt::from(2) * sq(kf)))
            }
        }
        TheoryMode::PaperLiteral => {
            let mut acc = BigInt::zero();
            for s in -(ki - 1)..=(ki - 1) {
                let mult = if s == 0 { 1 } else { 2 };
                for j in 0..=(ki + s - 1) {
                    let base = BigInt::from(ki + s - j).pow(2 * k - 1);
                    let term = binomial(2 * ki, j) * base * mult;
                    if j % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
            }
            let num = acc * sq(kf);
            Ok(BigRational::new(num, factorial(2 * k as u64 - 1)))
        }
    }
}

/// `(c_k, g(k))` for the reverse-circulant covariance term with inner index
/// `r'`.
pub fn rc_constants(
    p: u32,
    rprime: u32,
    q: u32,
    k: u32,
    mode: TheoryMode,
) -> Result<(BigRational, BigRational)> {
    if k < 1 || k > p.min(rprime) {
        return Err(LabError::Domain(format!(
            "rc_constants needs 1 <= k <= min(p, r'), got p={p}, r'={rprime}, k={k}"
        )));
    }
    if rprime > q {
        return Err(LabError::Domain(format!(
            "rc_constants needs r' <= q, got r'={rprime}, q={q}"
        )));
    }
    let (p, r, q, k) = (p as i64, rprime as i64, q as i64, k as i64);
    let c = sq(binomial(p, p - k))
        * factorial((p - k) as u64)
        * sq(binomial(r, r - k))
        * factorial((r - k) as u64)
        * sq(binomial(q, q - r))
        * factorial((q - r) as u64);
    Ok((big(c), rc_g(k as u32, mode)?))
}

/// The symmetric-circulant constant families and their tilde versions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScConstant {
    A,
    B,
    D,
    ATilde,
    BTilde,
    DTilde,
}

/// `C(top, sub) * C(sub, sub/2) * (sub/2)!`, zero when `sub` is out of range.
fn pair_factor(top: i64, sub: i64) -> BigInt {
    let b = binomial(top, sub);
    if b.is_zero() || sub % 2 != 0 {
        return BigInt::zero();
    }
    b * binomial(sub, sub / 2) * factorial((sub / 2) as u64)
}

/// `C(x, x/2) * (x/2)!`, zero for negative or odd `x`.
fn self_pairings(x: i64) -> BigInt {
    if x < 0 || x % 2 != 0 {
        return BigInt::zero();
    }
    binomial(x, x / 2) * factorial((x / 2) as u64)
}

fn parity_err(which: ScConstant, p: u32, q: u32, r: u32) -> LabError {
    LabError::Domain(format!(
        "parity constraint violated for {which:?}: p={p}, q={q}, r={r}"
    ))
}

/// Symmetric-circulant constants `a_m`, `b_m`, `d_r` and their tilde versions
/// (which set `q = p`). In reconciled mode the trailing factor of `a_m` and
/// `b_m` counts self-pairings of the `q - r` remaining entries instead of
/// using the printed `C(q, q-2r)` arguments; `d_r` is unchanged.
pub fn sc_constants(
    p: u32,
    q: u32,
    r: u32,
    m: u32,
    which: ScConstant,
    mode: TheoryMode,
) -> Result<BigRational> {
    let q = match which {
        ScConstant::ATilde | ScConstant::BTilde | ScConstant::DTilde => p,
        _ => q,
    };
    let even = |x: u32| x.is_multiple_of(2);
    let (pi, qi, ri, mi) = (p as i64, q as i64, r as i64, m as i64);
    let tail = |shift: i64| match mode {
        TheoryMode::PaperLiteral => pair_factor(qi, qi - 2 * ri - shift),
        TheoryMode::Reconciled => self_pairings(qi - ri),
    };
    let v = match which {
        ScConstant::A | ScConstant::ATilde => {
            if !(even(p) && even(q) && even(r)) {
                return Err(parity_err(which, p, q, r));
            }
            let head = pair_factor(pi, pi - 2 * mi) * pair_factor(ri, ri - 2 * mi);
            if head.is_zero() {
                head
            } else {
                head * tail(0)
            }
        }
        ScConstant::B | ScConstant::BTilde => {
            if even(p) || even(q) || even(r) {
                return Err(parity_err(which, p, q, r));
            }
            let head = pair_factor(pi, pi - 2 * mi - 1) * pair_factor(ri, ri - 2 * mi - 1);
            if head.is_zero() {
                head
            } else {
                head * tail(1)
            }
        }
        ScConstant::D | ScConstant::DTilde => {
            if even(p) || even(q) || !even(r) {
                return Err(parity_err(which, p, q, r));
            }
            self_pairings(pi - 1) * self_pairings(ri) * self_pairings(qi - ri - 1)
        }
    };
    Ok(big(v))
}
