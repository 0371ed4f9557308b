//! Cochains on `G` with values in `L Gm` (with the action through `Aut`) or in
//! `Gm` (trivial action), the 1-cocycles `Lambda` and `Omega`, and their
//! cup products paired through the Contou-Carrère symbol.

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use crate::cc::cc;
use crate::error::{with_horizon, Error, Result};
use crate::group::GroupElem;
use crate::laurent::LaurentSeries;
use crate::nilring::{Ring, RingElem};

/// Largest horizon tried when precision is found to be insufficient.
pub const MAX_HORIZON: i64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OneTag {
    Lambda,
    Omega,
}

impl OneTag {
    pub fn name(self) -> &'static str {
        match self {
            OneTag::Lambda => "Lambda",
            OneTag::Omega => "Omega",
        }
    }
}

/// `Lambda(h, phi) = h`, `Omega(h, phi) = d phi / dt`.
pub fn eval_one_cocycle(tag: OneTag, x: &GroupElem) -> LaurentSeries {
    match tag {
        OneTag::Lambda => x.h.clone(),
        OneTag::Omega => x.phi.derivative(),
    }
}

type OneFn = dyn Fn(&GroupElem) -> Result<LaurentSeries> + Send + Sync;
type TwoFn = dyn Fn(&GroupElem, &GroupElem) -> Result<RingElem> + Send + Sync;

/// A 1-cochain with values in `L Gm`, named for reports.
#[derive(Clone)]
pub struct OneCocycle {
    pub name: String,
    eval: Arc<OneFn>,
}

impl OneCocycle {
    pub fn new(name: impl Into<String>, eval: impl Fn(&GroupElem) -> Result<LaurentSeries> + Send + Sync + 'static) -> Self {
        OneCocycle { name: name.into(), eval: Arc::new(eval) }
    }

    pub fn tagged(tag: OneTag) -> Self {
        Self::new(tag.name(), move |x| Ok(eval_one_cocycle(tag, x)))
    }

    pub fn eval(&self, x: &GroupElem) -> Result<LaurentSeries> {
        (self.eval)(x)
    }
}

impl fmt::Debug for OneCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OneCocycle({})", self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TwoTag {
    CupLL,
    CupLO,
    CupOO,
    DetD,
    Custom(String),
}

impl fmt::Display for TwoTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoTag::CupLL => f.write_str("<Lambda,Lambda>"),
            TwoTag::CupLO => f.write_str("<Lambda,Omega>"),
            TwoTag::CupOO => f.write_str("<Omega,Omega>"),
            TwoTag::DetD => f.write_str("D"),
            TwoTag::Custom(s) => f.write_str(s),
        }
    }
}

/// A 2-cochain with values in `Gm`.
#[derive(Clone)]
pub struct TwoCocycle {
    pub tag: TwoTag,
    eval: Arc<TwoFn>,
}

impl TwoCocycle {
    pub fn new(tag: TwoTag, eval: impl Fn(&GroupElem, &GroupElem) -> Result<RingElem> + Send + Sync + 'static) -> Self {
        TwoCocycle { tag, eval: Arc::new(eval) }
    }

    /// `<l1, l2>` for the two tagged 1-cocycles.
    pub fn cup(l1: OneTag, l2: OneTag) -> Self {
        let tag = match (l1, l2) {
            (OneTag::Lambda, OneTag::Lambda) => TwoTag::CupLL,
            (OneTag::Lambda, OneTag::Omega) => TwoTag::CupLO,
            (OneTag::Omega, OneTag::Omega) => TwoTag::CupOO,
            (OneTag::Omega, OneTag::Lambda) => TwoTag::Custom("<Omega,Lambda>".into()),
        };
        Self::new(tag, move |x, y| cup_cocycle(l1, l2, x, y))
    }

    pub fn eval(&self, x: &GroupElem, y: &GroupElem) -> Result<RingElem> {
        (self.eval)(x, y)
    }

    /// Multiply every value by `exp(a(x)^2 b(y))`, where `a` and `b` read
    /// nilpotent constant terms. Not a cocycle whenever the ring has room for
    /// the cross term.
    pub fn perturbed(&self) -> Self {
        let inner = self.clone();
        let tag = TwoTag::Custom(alloc::format!("perturbed {}", self.tag));
        Self::new(tag, move |x, y| {
            let a = x.h.coeff_or_zero(0).nil_part();
            let b = y.phi.coeff_or_zero(0).nil_part();
            let bump = (&(&a * &a) * &b).exp_nil()?;
            Ok(&inner.eval(x, y)? * &bump)
        })
    }
}

impl fmt::Debug for TwoCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoCocycle({})", self.tag)
    }
}

/// `CC(l1(x), l2(y) o phi_x)`.
pub fn cup_cocycle(l1: OneTag, l2: OneTag, x: &GroupElem, y: &GroupElem) -> Result<RingElem> {
    let f = eval_one_cocycle(l1, x);
    let g = eval_one_cocycle(l2, y);
    with_horizon(16, MAX_HORIZON, |upto| cc(&f, &g.compose(&x.phi, upto)?))
}

/// Coefficient modules for the coboundary operators.
pub trait GModule {
    type Value: Clone;
    fn one(ring: &Ring) -> Self::Value;
    fn mul(a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn inv(a: &Self::Value, upto: i64) -> Result<Self::Value>;
    fn act(g: &GroupElem, v: &Self::Value, upto: i64) -> Result<Self::Value>;
}

/// `Gm` with the trivial action.
pub struct TrivialGm;

impl GModule for TrivialGm {
    type Value = RingElem;
    fn one(ring: &Ring) -> RingElem {
        RingElem::one(ring)
    }
    fn mul(a: &RingElem, b: &RingElem) -> RingElem {
        a * b
    }
    fn inv(a: &RingElem, _upto: i64) -> Result<RingElem> {
        a.invert()
    }
    fn act(_g: &GroupElem, v: &RingElem, _upto: i64) -> Result<RingElem> {
        Ok(v.clone())
    }
}

/// `L Gm`, with `(h, phi)` acting by `f -> f o phi`.
pub struct LoopGm;

impl GModule for LoopGm {
    type Value = LaurentSeries;
    fn one(ring: &Ring) -> LaurentSeries {
        LaurentSeries::one(ring)
    }
    fn mul(a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a * b
    }
    fn inv(a: &LaurentSeries, upto: i64) -> Result<LaurentSeries> {
        a.invert(upto)
    }
    fn act(g: &GroupElem, v: &LaurentSeries, upto: i64) -> Result<LaurentSeries> {
        v.compose(&g.phi, upto)
    }
}

/// `(delta c)(x, y) = x.c(y) * c(xy)^-1 * c(x)`.
pub fn delta1<M: GModule>(
    c: impl Fn(&GroupElem) -> Result<M::Value>,
    x: &GroupElem,
    y: &GroupElem,
    upto: i64,
) -> Result<M::Value> {
    let xy = x.mul(y, upto)?;
    let a = M::act(x, &c(y)?, upto)?;
    let b = M::inv(&c(&xy)?, upto)?;
    Ok(M::mul(&M::mul(&a, &b), &c(x)?))
}

/// `(delta c)(x, y, z) = x.c(y, z) * c(xy, z)^-1 * c(x, yz) * c(x, y)^-1`.
pub fn delta2<M: GModule>(
    c: impl Fn(&GroupElem, &GroupElem) -> Result<M::Value>,
    x: &GroupElem,
    y: &GroupElem,
    z: &GroupElem,
    upto: i64,
) -> Result<M::Value> {
    let xy = x.mul(y, upto)?;
    let yz = y.mul(z, upto)?;
    let a = M::act(x, &c(y, z)?, upto)?;
    let b = M::inv(&c(&xy, z)?, upto)?;
    let d = c(x, &yz)?;
    let e = M::inv(&c(x, y)?, upto)?;
    Ok(M::mul(&M::mul(&a, &b), &M::mul(&d, &e)))
}

/// `delta2` of a `Gm`-valued 2-cochain, retrying at larger horizons when the
/// products `xy`, `yz` are not known far enough.
pub fn delta2_trivial(c: &TwoCocycle, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Result<RingElem> {
    with_horizon(16, MAX_HORIZON, |upto| delta2::<TrivialGm>(|a, b| c.eval(a, b), x, y, z, upto))
}

/// `Phi_l(h, phi) = (l(h, phi), phi)`; a homomorphism exactly when `l` is a
/// 1-cocycle.
pub fn universal_map(tag: OneTag, x: &GroupElem) -> Result<GroupElem> {
    GroupElem::new(eval_one_cocycle(tag, x), x.phi.clone())
}

/// Checks `value == 1` for a `L Gm` coboundary value, insisting on
/// coefficients known at least below `min_prec`.
pub fn is_loop_identity(value: &LaurentSeries, min_prec: i64) -> Result<bool> {
    if !value.prec().covers(min_prec - 1) {
        return Err(Error::InsufficientPrecision { needed: min_prec, have: value.prec() });
    }
    Ok(value.agrees_with(&LaurentSeries::one(value.ring())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Bounds, Sampler, Shape};
    use crate::laurent::Precision;
    use crate::nilring::RingSpec;
    use alloc::vec;

    fn ints(r: &Ring, lo: i64, cs: &[i64]) -> LaurentSeries {
        LaurentSeries::from_terms(r, cs.iter().enumerate().map(|(i, &x)| (lo + i as i64, RingElem::from_int(r, x))), Precision::Exact)
            .unwrap()
    }

    #[test]
    fn one_cocycle_examples() {
        let q = RingSpec::rationals();
        let x = GroupElem::new(ints(&q, 0, &[1, 1]), ints(&q, 1, &[1, 1])).unwrap();
        assert_eq!(eval_one_cocycle(OneTag::Lambda, &x), ints(&q, 0, &[1, 1]));
        assert_eq!(eval_one_cocycle(OneTag::Omega, &x), ints(&q, 0, &[1, 2]));
        assert!(eval_one_cocycle(OneTag::Omega, &GroupElem::identity(&q)).is_exact_one());
    }

    #[test]
    fn cup_examples() {
        let r = RingSpec::new(vec!["e".into(), "d".into()], vec![2, 2], None).unwrap();
        let e = RingElem::generator(&r, "e").unwrap();
        let d = RingElem::generator(&r, "d").unwrap();
        let one = LaurentSeries::one(&r);
        let t = LaurentSeries::t(&r);
        let x = GroupElem::new(&one + &LaurentSeries::monomial(e.clone(), -1), t.clone()).unwrap();
        let y = GroupElem::new(one.clone(), &t + &LaurentSeries::monomial(d.clone(), 2)).unwrap();
        let expected = &RingElem::one(&r) + &(&e * &d).scale(&crate::Rational::from_int(2));
        assert_eq!(cup_cocycle(OneTag::Lambda, OneTag::Omega, &x, &y).unwrap(), expected);

        let f2 = ints(&r, 0, &[1, -1]);
        let y2 = GroupElem::new(f2.clone(), t.clone()).unwrap();
        assert_eq!(cup_cocycle(OneTag::Lambda, OneTag::Lambda, &x, &y2).unwrap(), cc(&x.h, &f2).unwrap());
        assert!(cup_cocycle(OneTag::Omega, OneTag::Omega, &x, &y2).unwrap().is_one());
    }

    #[test]
    fn coboundaries_vanish_on_cocycles() {
        let r = RingSpec::new(vec!["a".into(), "b".into()], vec![3, 2], None).unwrap();
        let mut s = Sampler::new(&r, Bounds { linear_phi: true, ..Bounds::default() }, 7).unwrap();
        let (x, y, z) = (s.group_elem(Shape::G0), s.group_elem(Shape::G0), s.group_elem(Shape::G0));
        for tag in [OneTag::Lambda, OneTag::Omega] {
            let v = delta1::<LoopGm>(|g| Ok(eval_one_cocycle(tag, g)), &x, &y, 12).unwrap();
            assert!(is_loop_identity(&v, 6).unwrap(), "{v}");
        }
        for (a, b) in [(OneTag::Lambda, OneTag::Lambda), (OneTag::Lambda, OneTag::Omega), (OneTag::Omega, OneTag::Omega)] {
            assert!(delta2_trivial(&TwoCocycle::cup(a, b), &x, &y, &z).unwrap().is_one());
        }
    }

    #[test]
    fn perturbed_cochain_is_caught() {
        let r = RingSpec::new(vec!["a".into(), "b".into()], vec![3, 2], None).unwrap();
        let a = RingElem::generator(&r, "a").unwrap();
        let b = RingElem::generator(&r, "b").unwrap();
        let one = LaurentSeries::one(&r);
        let t = LaurentSeries::t(&r);
        let x = GroupElem::new(&one + &LaurentSeries::constant(a.clone()), t.clone()).unwrap();
        let y = GroupElem::new(&one + &LaurentSeries::constant(a), t.clone()).unwrap();
        let z = GroupElem::new(one, &t + &LaurentSeries::constant(b)).unwrap();
        let bad = TwoCocycle::cup(OneTag::Lambda, OneTag::Lambda).perturbed();
        assert!(!delta2_trivial(&bad, &x, &y, &z).unwrap().is_one());
    }

    #[test]
    fn universal_map_is_multiplicative() {
        let r = RingSpec::new(vec!["a".into()], vec![3], None).unwrap();
        let mut s = Sampler::new(&r, Bounds { linear_phi: true, ..Bounds::default() }, 3).unwrap();
        let (x, y) = (s.group_elem(Shape::G0), s.group_elem(Shape::G0));
        for tag in [OneTag::Lambda, OneTag::Omega] {
            let lhs = universal_map(tag, &x.mul(&y, 12).unwrap()).unwrap();
            let rhs = universal_map(tag, &x).unwrap().mul(&universal_map(tag, &y).unwrap(), 12).unwrap();
            assert!(lhs.agrees_with(&rhs));
            assert_eq!(eval_one_cocycle(OneTag::Lambda, &universal_map(tag, &x).unwrap()), eval_one_cocycle(tag, &x));
        }
    }
}
