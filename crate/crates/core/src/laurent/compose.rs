use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{LaurentSeries, Precision};
use crate::error::{Error, Result};
use crate::nilring::{Ring, RingElem};
use crate::rational::Rational;

/// An admissible parameter `g = c1 t (1 + ghat) + u`, where the first part has
/// rational coefficients and `u` has nilpotent ones.
struct Split {
    ring: Ring,
    c1: Rational,
    /// `1 + ghat` over Q.
    hat: LaurentSeries,
    /// `u^i` for `i < terms`.
    u_pows: Vec<LaurentSeries>,
    /// How much each power of `u` can lower the degree.
    loss: i64,
}

impl Split {
    fn new(g: &LaurentSeries) -> Result<Self> {
        let nu = g.order_nu()?;
        if nu != 1 {
            return Err(Error::NotAdmissible(nu));
        }
        let ring = g.ring().clone();
        let phibar = g.mod_nil();
        let c1 = phibar.coeff(1)?.constant_term().clone();
        let hat = phibar.shift(-1).scale_rational(&c1.recip().expect("order one has unit coefficient"));
        let u = g.nil_part();
        let terms = if u.is_exact_zero() {
            1
        } else if u.is_exact() {
            u.coeff_ideal().nil_index().expect("nil part is nilpotent")
        } else {
            ring.loewy_length()
        };
        let loss = match u.ord_bound() {
            Precision::Finite(o) => (-o).max(0),
            Precision::Exact => 0,
        };
        let mut u_pows = Vec::with_capacity(terms as usize);
        u_pows.push(LaurentSeries::one(&ring));
        for i in 1..terms as usize {
            let next = &u_pows[i - 1] * &u;
            u_pows.push(next);
        }
        Ok(Split { ring, c1, hat, u_pows, loss })
    }

    fn terms(&self) -> usize {
        self.u_pows.len()
    }

    /// Absolute precision needed on `phibar^m` so that `phibar^m u^i` is known
    /// below `upto` for every `i`.
    fn needed(&self, upto: i64) -> i64 {
        upto + (self.terms() as i64 - 1) * self.loss
    }

    /// `(1 + ghat)^m` for `m` in `lo..=hi`, each known below relative degree `need - m`.
    fn hat_powers(&self, lo: i64, hi: i64, need: i64) -> Result<BTreeMap<i64, LaurentSeries>> {
        let q = self.hat.ring().clone();
        let mut out = BTreeMap::new();
        if self.hat.is_exact_one() {
            for m in lo..=hi {
                out.insert(m, LaurentSeries::one(&q));
            }
            return Ok(out);
        }
        let mut cur = LaurentSeries::one(&q);
        for m in 0..=hi {
            if m >= lo {
                out.insert(m, cur.truncate(need - m));
            }
            cur = (&cur * &self.hat).truncate(need - m);
        }
        if lo < 0 {
            let inv = self.hat.power_series_inverse(need - lo)?;
            let mut cur = LaurentSeries::one(&q);
            for m in (lo..0).rev() {
                cur = (&cur * &inv).truncate(need - lo);
                if m <= hi {
                    out.insert(m, cur.truncate(need - m));
                }
            }
        }
        Ok(out)
    }

    /// `phibar^m` lifted to the coefficient ring, scaled by `coeff`.
    fn phibar_pow(&self, hat_m: &LaurentSeries, m: i64, coeff: &RingElem) -> LaurentSeries {
        let s = coeff.scale(&self.c1.pow(m));
        LaurentSeries::constant(s).mul_scalar_series(hat_m).shift(m)
    }
}

/// Integer powers `g^k` of an admissible parameter for `k` in a fixed range,
/// sharing the expansion `g^k = sum_i C(k, i) phibar^(k-i) u^i`.
pub struct PowerTable {
    split: Split,
    hat: BTreeMap<i64, LaurentSeries>,
    lo: i64,
    hi: i64,
    upto: i64,
}

impl PowerTable {
    /// Prepare `g^k` for `lo <= k <= hi`, each known below degree `upto`.
    pub fn new(g: &LaurentSeries, lo: i64, hi: i64, upto: i64) -> Result<Self> {
        let split = Split::new(g)?;
        let need = split.needed(upto);
        let hat = split.hat_powers(lo - split.terms() as i64 + 1, hi, need)?;
        Ok(PowerTable { split, hat, lo, hi, upto })
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    /// Number of nilpotent-correction terms in the expansion.
    pub fn correction_terms(&self) -> usize {
        self.split.terms()
    }

    pub fn power(&self, k: i64) -> LaurentSeries {
        assert!(self.lo <= k && k <= self.hi, "power {k} outside prepared range");
        let ring = &self.split.ring;
        let mut acc = LaurentSeries::zero(ring);
        for (i, u_i) in self.split.u_pows.iter().enumerate() {
            let b = Rational::binomial(k, i as u32);
            if b.is_zero() {
                continue;
            }
            let m = k - i as i64;
            let term = self.split.phibar_pow(&self.hat[&m], m, &RingElem::from_rational(ring, b));
            acc = &acc + &(&term * u_i);
        }
        acc.truncate(self.upto)
    }
}

impl LaurentSeries {
    /// Substitution `self(g)` for an admissible `g` (order exactly 1), known
    /// below degree `upto`.
    ///
    /// Uses the Taylor expansion `sum_i (f^(i)/i!)(phibar) u^i`, which is a
    /// finite sum since `u` has nilpotent coefficients.
    pub fn compose(&self, g: &LaurentSeries, upto: i64) -> Result<Self> {
        self.check_ring(g)?;
        let split = Split::new(g)?;
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let need = split.needed(upto);
        let k = split.terms() as i64;
        let used: Vec<(i64, &RingElem)> = self.terms().filter(|(n, _)| *n < need + k - 1).collect();
        let skipped_any = self.terms().any(|(n, _)| n >= need + k - 1);
        let mlo = self.min_deg - k + 1;
        let mhi = used.last().map_or(mlo, |(n, _)| *n);
        let hat = split.hat_powers(mlo.min(mhi), mhi, need)?;

        let mut result = LaurentSeries::zero(&self.ring);
        for (i, u_i) in split.u_pows.iter().enumerate() {
            let i = i as i64;
            let mut f_i = LaurentSeries::zero(&self.ring);
            for (n, c) in &used {
                let b = Rational::binomial(*n, i as u32);
                if b.is_zero() {
                    continue;
                }
                let m = n - i;
                f_i = &f_i + &split.phibar_pow(&hat[&m], m, &c.scale(&b));
            }
            let mut cap = self.prec.shift(-i);
            if skipped_any {
                cap = cap.min(Precision::Finite(need));
            }
            f_i = f_i.limit_prec(cap);
            result = &result + &(&f_i * u_i);
        }
        Ok(result.truncate(upto))
    }

    /// Compositional inverse `psi` with `self(psi) = t`, known below `upto`.
    ///
    /// The rational part is reverted by Newton iteration over Q. The result is
    /// then corrected through the powers of the nilradical using the fixed
    /// rational slope `1 / phibar'(psibar)`, gaining one power per step.
    pub fn comp_inverse(&self, upto: i64) -> Result<Self> {
        let split = Split::new(self)?;
        let ring = self.ring.clone();
        let t = LaurentSeries::t(&ring);
        let phibar = self.mod_nil();
        let mut margin = 4 + ring.loewy_length() as i64 * (split.loss + 1);
        for attempt in 0..4 {
            let horizon = upto + margin;
            let psibar = revert_scalar(&phibar, horizon)?;
            let mut psi = psibar.lift_scalar(&ring);
            if !self.nil_part().is_exact_zero() {
                let slope = phibar.derivative().compose(&psibar, horizon)?.invert(horizon)?.lift_scalar(&ring);
                let mut converged = false;
                for _ in 0..=ring.loewy_length() {
                    let err = &self.compose(&psi, horizon)? - &t;
                    if err.is_known_zero() {
                        converged = true;
                        break;
                    }
                    psi = (&psi - &(&err * &slope)).truncate(horizon);
                }
                if !converged {
                    return Err(Error::Internal("compositional inverse did not converge".into()));
                }
            }
            if self.is_exact() && !psi.is_exact() {
                let candidate = psi.assume_exact();
                if candidate.order_nu() == Ok(1) && self.compose(&candidate, horizon)? == t {
                    return Ok(candidate);
                }
            }
            if psi.prec() >= Precision::Finite(upto) || attempt == 3 {
                return Ok(psi.truncate(upto));
            }
            margin *= 2;
        }
        unreachable!("the last attempt always returns")
    }

    /// Lower the precision to at most `cap`, dropping coefficients beyond it.
    pub(crate) fn limit_prec(&self, cap: Precision) -> Self {
        if cap >= self.prec {
            return self.clone();
        }
        Self::build(&self.ring, self.min_deg, self.coeffs.clone(), cap)
    }
}

/// Reversion of a series over Q with order one, known below `horizon`.
fn revert_scalar(phibar: &LaurentSeries, horizon: i64) -> Result<LaurentSeries> {
    let q = phibar.ring().clone();
    let c1 = phibar.coeff(1)?.constant_term().clone();
    let mut psi = LaurentSeries::t(&q).scale_rational(&c1.recip().expect("nonzero leading coefficient"));
    if phibar.is_exact() && phibar.max_deg() == Some(1) && phibar.min_deg() == 1 {
        return Ok(psi);
    }
    let t = LaurentSeries::t(&q);
    let d = phibar.derivative();
    for _ in 0..(2 * (64 - horizon.max(2).leading_zeros()) + 4) {
        let err = &phibar.compose(&psi, horizon)? - &t;
        if err.is_known_zero() {
            return Ok(psi);
        }
        let slope = d.compose(&psi, horizon)?.invert(horizon)?;
        psi = (&psi - &(&err * &slope)).truncate(horizon);
    }
    Err(Error::Internal("series reversion did not converge".into()))
}
