//! Truncated Laurent series over a nilpotent coefficient ring.
//!
//! A [`LaurentSeries`] stores the coefficients of degrees `min_deg..` as a
//! dense vector together with a [`Precision`]: either `Finite(p)`, meaning
//! coefficients of degree `>= p` are unknown, or `Exact`, meaning everything
//! beyond the stored support is zero. Arithmetic propagates precision
//! pessimistically and never invents coefficients.
//!
//! Operations whose exact answer can be an infinite series (inversion,
//! substitution into negative powers, compositional inverse) take an explicit
//! horizon `upto`: the result is known at least below degree `upto` whenever
//! the inputs are precise enough. When the infinite answer happens to be a
//! finite series this is detected and the result is marked exact.

mod compose;
mod factor;
mod invert;

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

pub use compose::PowerTable;
pub use factor::UnitFactorization;

use crate::error::{Error, Result};
use crate::nilring::{same_ring, write_scaled_monomial, ArithOp, Ideal, Ring, RingElem, RingSpec};
use crate::rational::Rational;

/// Degree below which a series is known. `Exact` sorts above every `Finite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Precision {
    Finite(i64),
    Exact,
}

impl Precision {
    pub fn finite(self) -> Option<i64> {
        match self {
            Precision::Finite(p) => Some(p),
            Precision::Exact => None,
        }
    }

    pub fn is_exact(self) -> bool {
        self == Precision::Exact
    }

    pub fn shift(self, k: i64) -> Self {
        match self {
            Precision::Finite(p) => Precision::Finite(p + k),
            Precision::Exact => Precision::Exact,
        }
    }

    /// Does this precision cover degree `d`?
    pub fn covers(self, d: i64) -> bool {
        match self {
            Precision::Finite(p) => d < p,
            Precision::Exact => true,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Finite(p) => write!(f, "O(t^{p})"),
            Precision::Exact => write!(f, "exact"),
        }
    }
}

#[derive(Clone)]
pub struct LaurentSeries {
    ring: Ring,
    min_deg: i64,
    coeffs: Vec<RingElem>,
    prec: Precision,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring)
            && self.prec == other.prec
            && self.min_deg == other.min_deg
            && self.coeffs == other.coeffs
    }
}

impl Eq for LaurentSeries {}

impl LaurentSeries {
    /// Canonical constructor: trims zeros at both ends and drops coefficients
    /// at or above the precision.
    pub(crate) fn build(ring: &Ring, min_deg: i64, mut coeffs: Vec<RingElem>, prec: Precision) -> Self {
        if let Precision::Finite(p) = prec {
            let keep = (p - min_deg).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(RingElem::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        let min_deg = if coeffs.is_empty() {
            match prec {
                Precision::Finite(p) => p,
                Precision::Exact => 0,
            }
        } else {
            min_deg + lead as i64
        };
        LaurentSeries { ring: ring.clone(), min_deg, coeffs, prec }
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::build(ring, 0, Vec::new(), Precision::Exact)
    }

    /// The unknown series `O(t^p)`.
    pub fn big_o(ring: &Ring, p: i64) -> Self {
        Self::build(ring, p, Vec::new(), Precision::Finite(p))
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(RingElem::one(ring))
    }

    pub fn constant(c: RingElem) -> Self {
        Self::monomial(c, 0)
    }

    /// The exact series `c * t^deg`.
    pub fn monomial(c: RingElem, deg: i64) -> Self {
        let ring = c.ring().clone();
        Self::build(&ring, deg, alloc::vec![c], Precision::Exact)
    }

    /// The exact series `t^deg`.
    pub fn t_pow(ring: &Ring, deg: i64) -> Self {
        Self::monomial(RingElem::one(ring), deg)
    }

    pub fn t(ring: &Ring) -> Self {
        Self::t_pow(ring, 1)
    }

    /// Series from `(degree, coefficient)` pairs; repeated degrees are summed.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (i64, RingElem)>, prec: Precision) -> Result<Self> {
        let terms: Vec<(i64, RingElem)> = terms.into_iter().collect();
        for (_, c) in &terms {
            if !same_ring(c.ring(), ring) {
                return Err(Error::RingMismatch(c.ring().to_string(), ring.to_string()));
            }
        }
        let Some(lo) = terms.iter().map(|(d, _)| *d).min() else {
            return Ok(Self::build(ring, 0, Vec::new(), prec));
        };
        let hi = terms.iter().map(|(d, _)| *d).max().unwrap_or(lo);
        let mut coeffs = alloc::vec![RingElem::zero(ring); (hi - lo + 1) as usize];
        for (d, c) in terms {
            let slot = &mut coeffs[(d - lo) as usize];
            *slot = &*slot + &c;
        }
        Ok(Self::build(ring, lo, coeffs, prec))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_exact()
    }

    /// Lowest stored degree (for an empty series, the precision or 0).
    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    /// Highest stored nonzero degree.
    pub fn max_deg(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.min_deg + self.coeffs.len() as i64 - 1)
    }

    /// Lower bound on the order: the first known nonzero degree, or the
    /// precision when nothing nonzero is known (`Exact` for the zero series).
    pub fn ord_bound(&self) -> Precision {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            Precision::Finite(self.min_deg)
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_exact()
    }

    /// True when every known coefficient vanishes.
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_one(&self) -> bool {
        self.is_exact() && self.min_deg == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Coefficient at degree `d`; fails if `d` lies beyond the precision.
    pub fn coeff(&self, d: i64) -> Result<RingElem> {
        if !self.prec.covers(d) {
            return Err(Error::InsufficientPrecision { needed: d + 1, have: self.prec });
        }
        Ok(self.coeff_or_zero(d))
    }

    pub(crate) fn coeff_ref(&self, d: i64) -> Option<&RingElem> {
        if d < self.min_deg {
            return None;
        }
        self.coeffs.get((d - self.min_deg) as usize)
    }

    /// Coefficient at degree `d`, zero when unknown or absent.
    pub fn coeff_or_zero(&self, d: i64) -> RingElem {
        self.coeff_ref(d).cloned().unwrap_or_else(|| RingElem::zero(&self.ring))
    }

    /// Nonzero `(degree, coefficient)` pairs in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &RingElem)> + '_ {
        let lo = self.min_deg;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (lo + i as i64, c))
    }

    /// Drop everything at or above degree `p`. An exact series whose support
    /// already lies below `p` is returned unchanged.
    pub fn truncate(&self, p: i64) -> Self {
        if self.is_exact() && self.max_deg().is_none_or(|m| m < p) {
            return self.clone();
        }
        if !self.prec.covers(p) {
            return self.clone();
        }
        Self::build(&self.ring, self.min_deg, self.coeffs.clone(), Precision::Finite(p))
    }

    /// The same known coefficients, declared exact.
    pub fn assume_exact(&self) -> Self {
        Self::build(&self.ring, self.min_deg, self.coeffs.clone(), Precision::Exact)
    }

    /// Equality of coefficients below the smaller of the two precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if !same_ring(&self.ring, &other.ring) {
            return false;
        }
        let p = self.prec.min(other.prec);
        let lo = self.min_deg.min(other.min_deg);
        let hi = self.max_deg().into_iter().chain(other.max_deg()).max().unwrap_or(lo);
        (lo..=hi).filter(|&d| p.covers(d)).all(|d| self.coeff_or_zero(d) == other.coeff_or_zero(d))
    }

    pub(crate) fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()))
        }
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        self.check_ring(other)?;
        Ok(match op {
            ArithOp::Add => self.add_impl(other, false),
            ArithOp::Sub => self.add_impl(other, true),
            ArithOp::Mul => self.mul_impl(other),
        })
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let prec = self.prec.min(other.prec);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return Self::build(&self.ring, 0, Vec::new(), prec);
        }
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, _) => other.min_deg,
            (_, true) => self.min_deg,
            _ => self.min_deg.min(other.min_deg),
        };
        let hi = self.max_deg().into_iter().chain(other.max_deg()).max().unwrap_or(lo);
        let hi = match prec {
            Precision::Finite(p) => hi.min(p - 1),
            Precision::Exact => hi,
        };
        if hi < lo {
            return Self::build(&self.ring, lo, Vec::new(), prec);
        }
        let zero = RingElem::zero(&self.ring);
        let coeffs = (lo..=hi)
            .map(|d| {
                let a = self.coeff_ref(d).unwrap_or(&zero);
                let b = other.coeff_ref(d).unwrap_or(&zero);
                if negate {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        Self::build(&self.ring, lo, coeffs, prec)
    }

    fn product_prec(&self, other: &Self) -> Precision {
        let (oa, ob) = (self.ord_bound(), other.ord_bound());
        let pa = match ob {
            Precision::Finite(o) => self.prec.shift(o),
            Precision::Exact => Precision::Exact,
        };
        let pb = match oa {
            Precision::Finite(o) => other.prec.shift(o),
            Precision::Exact => Precision::Exact,
        };
        pa.min(pb)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.ring);
        }
        let prec = self.product_prec(other);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::build(&self.ring, 0, Vec::new(), prec);
        }
        let lo = self.min_deg + other.min_deg;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Precision::Finite(p) = prec {
            len = len.min((p - lo).max(0) as usize);
        }
        let mut coeffs = alloc::vec![RingElem::zero(&self.ring); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    a.mul_acc_into(b, &mut coeffs[i + j]);
                }
            }
        }
        Self::build(&self.ring, lo, coeffs, prec)
    }

    /// Product with a series over Q, whose coefficients act as scalars.
    pub(crate) fn mul_scalar_series(&self, q: &LaurentSeries) -> Self {
        debug_assert_eq!(q.ring.dimension(), 1);
        if self.is_exact_zero() || q.is_exact_zero() {
            return Self::zero(&self.ring);
        }
        let prec = self.product_prec(q);
        if self.coeffs.is_empty() || q.coeffs.is_empty() {
            return Self::build(&self.ring, 0, Vec::new(), prec);
        }
        let lo = self.min_deg + q.min_deg;
        let mut len = self.coeffs.len() + q.coeffs.len() - 1;
        if let Precision::Finite(p) = prec {
            len = len.min((p - lo).max(0) as usize);
        }
        let mut coeffs = alloc::vec![RingElem::zero(&self.ring); len];
        for (j, s) in q.coeffs.iter().enumerate() {
            let s = s.constant_term();
            if j >= len || s.is_zero() {
                continue;
            }
            for (i, a) in self.coeffs.iter().enumerate().take(len - j) {
                if !a.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &a.scale(s);
                }
            }
        }
        Self::build(&self.ring, lo, coeffs, prec)
    }

    pub fn scale(&self, c: &RingElem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Self::build(&self.ring, self.min_deg, coeffs, self.prec)
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.ring);
        }
        let coeffs = self.coeffs.iter().map(|a| a.scale(q)).collect();
        Self::build(&self.ring, self.min_deg, coeffs, self.prec)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            ring: self.ring.clone(),
            min_deg: self.min_deg + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec.shift(k),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rational::from_int(self.min_deg + i as i64)))
            .collect();
        Self::build(&self.ring, self.min_deg - 1, coeffs, self.prec.shift(-1))
    }

    /// Coefficient of `t^-1`.
    pub fn residue(&self) -> Result<RingElem> {
        self.coeff(-1)
    }

    /// The part of degree `< k`, which is exact when the precision covers it.
    pub fn below(&self, k: i64) -> Self {
        let prec = self.prec.min(Precision::Finite(k));
        let prec = if prec == Precision::Finite(k) { Precision::Exact } else { prec };
        let keep = (k - self.min_deg).clamp(0, self.coeffs.len() as i64) as usize;
        Self::build(&self.ring, self.min_deg, self.coeffs[..keep].to_vec(), prec)
    }

    /// The part of degree `>= k`.
    pub fn at_or_above(&self, k: i64) -> Self {
        let skip = (k - self.min_deg).clamp(0, self.coeffs.len() as i64) as usize;
        Self::build(&self.ring, self.min_deg + skip as i64, self.coeffs[skip..].to_vec(), self.prec)
    }

    /// Image under the augmentation `A -> Q`, as a series over Q.
    pub fn mod_nil(&self) -> Self {
        let q = RingSpec::rationals();
        let coeffs = self.coeffs.iter().map(|c| RingElem::from_rational(&q, c.constant_term().clone())).collect();
        Self::build(&q, self.min_deg, coeffs, self.prec)
    }

    /// Embed a series over Q into a series over `ring`.
    pub fn lift_scalar(&self, ring: &Ring) -> Self {
        let coeffs = self.coeffs.iter().map(|c| RingElem::from_rational(ring, c.constant_term().clone())).collect();
        Self::build(ring, self.min_deg, coeffs, self.prec)
    }

    /// `self - lift(mod_nil(self))`: the part with nilpotent coefficients.
    pub fn nil_part(&self) -> Self {
        let coeffs = self.coeffs.iter().map(RingElem::nil_part).collect();
        Self::build(&self.ring, self.min_deg, coeffs, self.prec)
    }

    /// The ideal generated by the known coefficients.
    pub fn coeff_ideal(&self) -> Ideal {
        Ideal::generated_by(&self.ring, self.coeffs.iter())
    }

    /// Apply a coefficient-wise map into another ring.
    pub fn map_coeffs(&self, ring: &Ring, f: impl Fn(&RingElem) -> Result<RingElem>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Self::build(ring, self.min_deg, coeffs, self.prec))
    }

    /// Embed into an extension ring built by adjoining generators.
    pub fn coerce(&self, target: &Ring) -> Result<Self> {
        self.map_coeffs(target, |c| c.coerce(target))
    }

    /// `nu`: the lowest degree carrying a unit coefficient.
    pub fn order_nu(&self) -> Result<i64> {
        match self.terms().find(|(_, c)| c.is_unit()) {
            Some((d, _)) => Ok(d),
            None if self.is_exact() => Err(Error::NotInvertible),
            None => Err(Error::InsufficientPrecision {
                needed: self.prec.finite().unwrap_or(0) + 1,
                have: self.prec,
            }),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.order_nu().is_ok()
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.terms() {
            for (m, q) in c.terms() {
                let neg = q.is_negative();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { '-' } else { '+' })?;
                }
                first = false;
                let mag = q.abs();
                if d == 0 {
                    write_scaled_monomial(f, &mag, m, &self.ring)?;
                    continue;
                }
                if !(m.is_one() && mag.is_one()) {
                    write_scaled_monomial(f, &mag, m, &self.ring)?;
                    write!(f, "*")?;
                }
                if d == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{d}")?;
                }
            }
        }
        match self.prec {
            Precision::Exact if first => write!(f, "0"),
            Precision::Exact => Ok(()),
            Precision::Finite(p) if first => write!(f, "O(t^{p})"),
            Precision::Finite(p) => write!(f, " + O(t^{p})"),
        }
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! series_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&LaurentSeries> for &LaurentSeries {
            type Output = LaurentSeries;
            /// Panics on a ring mismatch; [`LaurentSeries::arith`] is the checked form.
            fn $method(self, rhs: &LaurentSeries) -> LaurentSeries {
                assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch");
                $body(self, rhs)
            }
        }
        impl $tr<LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

series_binop!(Add, add, |a: &LaurentSeries, b| a.add_impl(b, false));
series_binop!(Sub, sub, |a: &LaurentSeries, b| a.add_impl(b, true));
series_binop!(Mul, mul, |a: &LaurentSeries, b| a.mul_impl(b));

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        LaurentSeries::build(&self.ring, self.min_deg, coeffs, self.prec)
    }
}

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

#[cfg(test)]
mod tests;
