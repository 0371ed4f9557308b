use alloc::vec::Vec;

use super::{LaurentSeries, Precision};
use crate::error::{Error, Result};
use crate::nilring::RingElem;

impl LaurentSeries {
    /// Inverse of a power series whose constant term is a unit, known below
    /// degree `upto`.
    pub(crate) fn power_series_inverse(&self, upto: i64) -> Result<Self> {
        let a0 = self.coeff(0)?;
        if self.min_deg < 0 || !a0.is_unit() {
            return Err(Error::NotInvertible);
        }
        let b0 = a0.invert()?;
        if self.is_exact() && self.max_deg() == Some(0) {
            return Ok(Self::constant(b0));
        }
        let prec = self.prec.min(Precision::Finite(upto.max(1)));
        let n = prec.finite().expect("bounded by upto") as usize;
        let neg_b0 = -&b0;
        let mut b: Vec<RingElem> = Vec::with_capacity(n);
        b.push(b0);
        for k in 1..n {
            let mut acc = RingElem::zero(&self.ring);
            for i in 1..=k {
                if let Some(a) = self.coeff_ref(i as i64) {
                    if !a.is_zero() && !b[k - i].is_zero() {
                        a.mul_acc_into(&b[k - i], &mut acc);
                    }
                }
            }
            b.push(&acc * &neg_b0);
        }
        Ok(Self::build(&self.ring, 0, b, prec))
    }

    /// Multiplicative inverse, known below degree `upto` (or exact).
    ///
    /// With `nu` the order and `q = h t^-nu = P + n` split into its power
    /// series part `P` and its nilpotent negative part `n`, the inverse is
    /// `t^-nu P^-1 sum_k (-n P^-1)^k`, a finite sum because the coefficients
    /// of `n` generate a nilpotent ideal.
    pub fn invert(&self, upto: i64) -> Result<Self> {
        let nu = self.order_nu()?;
        let q = self.shift(-nu);
        let neg = q.below(0);
        let p0 = q.at_or_above(0);
        let (depth, index) = nil_depth(&neg)?;
        let horizon = upto + nu + index * depth + 1;
        let p0_inv = p0.power_series_inverse(horizon)?;
        let q_inv = if neg.is_known_zero() {
            p0_inv
        } else {
            let n = -(&neg * &p0_inv);
            let mut sum = Self::one(&self.ring);
            let mut power = Self::one(&self.ring);
            for _ in 1..index {
                power = &power * &n;
                sum = &sum + &power;
            }
            &sum * &p0_inv
        };
        let result = q_inv.shift(-nu).truncate(upto);
        if self.is_exact() && !result.is_exact() {
            let candidate = result.assume_exact();
            if (&candidate * self).is_exact_one() {
                return Ok(candidate);
            }
        }
        Ok(result)
    }
}

/// For an exact series with nilpotent coefficients: how far below zero it
/// reaches and the nilpotency index of its coefficient ideal.
pub(crate) fn nil_depth(neg: &LaurentSeries) -> Result<(i64, i64)> {
    if neg.is_known_zero() {
        return Ok((0, 1));
    }
    let index = neg
        .coeff_ideal()
        .nil_index()
        .ok_or_else(|| Error::Internal("negative part has a unit coefficient".into()))?;
    Ok(((-neg.min_deg).max(0), index as i64))
}
