use alloc::vec::Vec;

use super::compose::PowerTable;
use super::invert::nil_depth;
use super::{LaurentSeries, Precision};
use crate::error::{Error, Result};
use crate::linalg;
use crate::nilring::RingElem;
use crate::rational::Rational;

/// `h = v_minus * a0 * t^nu * v_plus` with `v_minus = 1 + (nilpotent, negative
/// degrees)` and `v_plus = 1 + (positive degrees)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitFactorization {
    pub nu: i64,
    pub a0: RingElem,
    pub v_minus: LaurentSeries,
    pub v_plus: LaurentSeries,
}

impl UnitFactorization {
    pub fn recompose(&self) -> LaurentSeries {
        let mid = LaurentSeries::monomial(self.a0.clone(), self.nu);
        &(&self.v_minus * &mid) * &self.v_plus
    }

    /// Checks the shape constraints on each factor.
    pub fn is_well_formed(&self) -> bool {
        let vm = &self.v_minus;
        let vp = &self.v_plus;
        self.a0.is_unit()
            && vm.is_exact()
            && vm.coeff_or_zero(0).is_one()
            && vm.max_deg() == Some(0)
            && vm.terms().all(|(d, c)| d == 0 || c.is_nilpotent())
            && vp.min_deg() == 0
            && vp.coeff_or_zero(0).is_one()
    }
}

impl LaurentSeries {
    /// `exp(self)` for a series whose coefficients generate a nilpotent
    /// ideal. `terms` bounds the number of summands (the nilpotency index).
    pub(crate) fn exp_nil_series(&self, terms: i64) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut power = Self::one(&self.ring);
        for k in 1..terms {
            power = (&power * self).scale_rational(&Rational::new(1, k));
            acc = &acc + &power;
        }
        acc
    }

    /// `log(1 + self)` under the same hypothesis as [`Self::exp_nil_series`].
    pub(crate) fn log_one_plus_nil_series(&self, terms: i64) -> Self {
        let mut acc = Self::zero(&self.ring);
        let mut power = Self::one(&self.ring);
        for k in 1..terms {
            power = &power * self;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = &acc + &power.scale_rational(&Rational::new(sign, k));
        }
        acc
    }

    /// Split an invertible series as `v_minus * a0 * t^nu * v_plus`.
    /// `v_plus` is known below degree `upto` (or exact); `v_minus` is always exact.
    pub fn factorize_unit(&self, upto: i64) -> Result<UnitFactorization> {
        let nu = self.order_nu()?;
        let q = self.shift(-nu);
        let neg = q.below(0);
        let p0 = q.at_or_above(0);
        let (depth, index) = nil_depth(&neg)?;
        let horizon = upto.max(1) + index * depth + 2;
        let p0_inv = p0.power_series_inverse(horizon)?;
        // q = p0 (1 + n); the coefficients of n lie in the ideal of neg, so
        // every power from `index` on vanishes exactly.
        let n = &neg * &p0_inv;
        let log = n.log_one_plus_nil_series(index);
        if !log.prec().covers(-1) && !log.is_known_zero() {
            return Err(Error::InsufficientPrecision { needed: 0, have: log.prec() });
        }
        let v_minus = log.below(0).exp_nil_series(index);
        let p = &log.at_or_above(0).exp_nil_series(index) * &p0;
        let a0 = p.coeff(0)?;
        let v_plus = p.scale(&a0.invert()?).truncate(upto);
        let mut out = UnitFactorization { nu, a0, v_minus, v_plus };
        if self.is_exact() && !out.v_plus.is_exact() {
            let candidate = UnitFactorization { v_plus: out.v_plus.assume_exact(), ..out.clone() };
            if candidate.recompose() == *self {
                out = candidate;
            }
        }
        Ok(out)
    }

    /// Split an admissible series as `phi = phi_minus(phi_plus)`, with
    /// `phi_plus = a0 + a1 t + ...` (`a0` nilpotent, `a1` a unit) and
    /// `phi_minus = t + (nilpotent, negative degrees)`. Returns `(phi_plus, phi_minus)`.
    ///
    /// `psi`, the inverse of `phi_minus`, is `t + sum_{l<0} c_l t^l` with
    /// `psi(phi)` free of negative degrees. That condition is linear in the
    /// `c_l` and unitriangular modulo the nilradical, so it is solved directly.
    pub fn factorize_aut(&self, upto: i64) -> Result<(LaurentSeries, LaurentSeries)> {
        let nu = self.order_nu()?;
        if nu != 1 {
            return Err(Error::NotAdmissible(nu));
        }
        let ring = self.ring.clone();
        let t = LaurentSeries::t(&ring);
        if self.below(0).is_exact_zero() {
            return Ok((self.truncate(upto), t));
        }
        let (depth, index) = nil_depth(&self.below(0))?;
        let mut k = depth.max(1);
        let limit = (depth + 1) * (index + 1) * 4 + 8;
        let coeffs = loop {
            if k > limit {
                return Err(Error::Internal("automorphism factorization did not terminate".into()));
            }
            let first = self.solve_minus_part(k)?;
            let second = self.solve_minus_part(k + 3)?;
            match (first, second) {
                (Some(a), Some(b)) if agree_padded(&a, &b) => break a,
                (Some(_), Some(_)) => {
                    return Err(Error::Internal("automorphism factorization is not unique".into()))
                }
                _ => k *= 2,
            }
        };
        let psi = &t + &LaurentSeries::from_terms(
            &ring,
            coeffs.iter().enumerate().map(|(j, c)| (-(j as i64) - 1, c.clone())),
            Precision::Exact,
        )?;
        let table = PowerTable::new(self, -(coeffs.len() as i64), -1, upto)?;
        let mut plus = self.truncate(upto);
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                plus = &plus + &table.power(-(j as i64) - 1).scale(c);
            }
        }
        let plus = plus.truncate(upto);
        let minus = psi.comp_inverse(upto)?;
        Ok((plus, minus))
    }

    /// Solve for `c_{-1..-k}` using the equations at degrees `-1..-k`, and
    /// return them if the resulting `psi(phi)` has no negative part at all.
    fn solve_minus_part(&self, k: i64) -> Result<Option<Vec<RingElem>>> {
        
        let table = PowerTable::new(self, -k, -1, 0)?;
        let powers: Vec<LaurentSeries> = (1..=k).map(|l| table.power(-l)).collect();
        for p in &powers {
            if !p.prec().covers(-1) {
                return Err(Error::InsufficientPrecision { needed: 0, have: p.prec() });
            }
        }
        let matrix: linalg::Matrix =
            (1..=k).map(|d| powers.iter().map(|p| p.coeff_or_zero(-d)).collect()).collect();
        let rhs: Vec<RingElem> = (1..=k).map(|d| -&self.coeff_or_zero(-d)).collect();
        let c = linalg::solve(&matrix, &rhs)
            .map_err(|_| Error::Internal("degenerate automorphism factorization system".into()))?;
        let mut negative = self.below(0);
        for (p, cl) in powers.iter().zip(&c) {
            negative = &negative + &p.below(0).scale(cl);
        }
        Ok(negative.is_known_zero().then_some(c))
    }
}

fn agree_padded(a: &[RingElem], b: &[RingElem]) -> bool {
    let n = a.len().max(b.len());
    (0..n).all(|i| match (a.get(i), b.get(i)) {
        (Some(x), Some(y)) => x == y,
        (Some(x), None) | (None, Some(x)) => x.is_zero(),
        (None, None) => true,
    })
}
