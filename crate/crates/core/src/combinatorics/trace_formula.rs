use std::collections::BTreeMap;

use super::exact::binomial;
use super::index_sets::{for_each, EnumerationCaps, Family};
use crate::error::{LabError, Result};
use crate::numerics::CompensatedSum;
use crate::MatrixKind;

/// Sorted `(label, exponent)` pairs with positive exponents.
pub type Monomial = Vec<(u32, u32)>;

/// `Tr(M^power)` as `prefactor * sum_m coeff_m * prod x_label^exp`, where
/// `x` is the first-row label value and `prefactor = num / den`.
#[derive(Debug, Clone, PartialEq)]
pub struct TracePolynomial {
    pub kind: MatrixKind,
    pub n: u32,
    pub power: u32,
    pub prefactor_num: u64,
    pub prefactor_den: u64,
    pub terms: BTreeMap<Monomial, i64>,
}

fn monomial(parts: impl IntoIterator<Item = (u32, u32)>) -> Monomial {
    let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
    for (l, e) in parts {
        if e > 0 {
            *acc.entry(l).or_default() += e;
        }
    }
    acc.into_iter().collect()
}

fn small_binom(x: u32, y: u32) -> i64 {
    i64::try_from(binomial(x as i64, y as i64)).expect("binomial fits in i64")
}

impl TracePolynomial {
    /// Expands the trace through the index-set formulas. Reverse-circulant
    /// traces exist only for even powers.
    pub fn build(kind: MatrixKind, n: u32, power: u32, caps: &EnumerationCaps) -> Result<Self> {
        if n < 1 {
            return Err(LabError::Domain("dimension must be at least 1".into()));
        }
        let mut terms: BTreeMap<Monomial, i64> = BTreeMap::new();
        let mut add = |m: Monomial, c: i64| {
            *terms.entry(m).or_default() += c;
        };
        let (num, den) = match kind {
            MatrixKind::Rc => {
                if !power.is_multiple_of(2) {
                    return Err(LabError::Domain(format!(
                        "no trace formula for odd reverse-circulant power {power}; use the spectrum"
                    )));
                }
                for_each(Family::A2p, n, power as usize, caps, |idx, _| {
                    add(monomial(idx.iter().map(|&i| (i % n, 1))), 1);
                })?;
                (n as u64, 1)
            }
            MatrixKind::Sc if n % 2 == 1 => {
                for k in 0..=power {
                    let c = small_binom(power, k);
                    for_each(Family::AkSc, n, k as usize, caps, |idx, _| {
                        let parts = idx.iter().map(|&j| (j, 1)).chain([(0, power - k)]);
                        add(monomial(parts), c);
                    })?;
                }
                (n as u64, 1)
            }
            MatrixKind::Sc => {
                let h = n / 2;
                for k in 0..=power {
                    let c = small_binom(power, k);
                    let rest = power - k;
                    // (x0 + xh)^rest +- (x0 - xh)^rest keeps even (+) or odd (-)
                    // powers of xh, each doubled
                    for (family, parity) in [(Family::AkSc, 0), (Family::AtildeSc, 1)] {
                        for_each(family, n, k as usize, caps, |idx, _| {
                            for i in (parity..=rest).step_by(2) {
                                let w = 2 * c * small_binom(rest, i);
                                let parts = idx
                                    .iter()
                                    .map(|&j| (j, 1))
                                    .chain([(0, rest - i), (h, i)]);
                                add(monomial(parts), w);
                            }
                        })?;
                    }
                }
                (n as u64 / 2, 1)
            }
        };
        terms.retain(|_, c| *c != 0);
        Ok(TracePolynomial {
            kind,
            n,
            power,
            prefactor_num: num,
            prefactor_den: den,
            terms,
        })
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor_num as f64 / self.prefactor_den as f64
    }

    /// `sum coeff * prod v^exp` without the prefactor.
    pub fn eval_reduced(&self, values: &[f64]) -> f64 {
        let mut s = CompensatedSum::new();
        for (m, &c) in &self.terms {
            let mut prod = c as f64;
            for &(l, e) in m {
                prod *= values[l as usize].powi(e as i32);
            }
            s.add(prod);
        }
        s.value()
    }

    /// The trace, given first-row label values `x_0, ..., x_{L-1}`.
    pub fn eval(&self, values: &[f64]) -> f64 {
        self.prefactor() * self.eval_reduced(values)
    }

    pub fn max_label(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|&(l, _)| l))
            .max()
            .unwrap_or(0)
    }
}
