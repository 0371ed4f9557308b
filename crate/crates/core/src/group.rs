//! The group `G(A)` of pairs `(h, phi)`, with `h` an invertible Laurent series
//! and `phi` an automorphism of `A((t))` stored by its value `phi(t)`, and its
//! Lie algebra of pairs `s + r d/dt`.
//!
//! Automorphisms compose contravariantly on their stored values:
//! `(phi1 phi2)(t) = phi2(t) o phi1(t)`. All of that convention lives in
//! [`GroupElem::mul`].

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::laurent::{LaurentSeries, Precision};
use crate::nilring::{same_ring, Monomial, Ring, RingElem};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct GroupElem {
    pub h: LaurentSeries,
    pub phi: LaurentSeries,
}

/// Subgroup memberships of a [`GroupElem`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Membership {
    /// `nu(h) = 0`.
    pub in_g0: bool,
    /// `h` lies in `A[[t]]*` and `phi` in `Aut_+`.
    pub in_gplus: bool,
    /// `h = a0 * v` with `a0` a unit constant and `v` in `V_-`.
    pub h_in_gm_vminus: bool,
    /// `h` has no negative-degree terms (so `h` lies in `Gm * V_+`).
    pub h_in_gm_vplus: bool,
    /// `phi = a0 + a1 t + ...` with no negative-degree terms.
    pub phi_in_aut_plus: bool,
    /// `phi = t + (nilpotent, negative degrees)`.
    pub phi_in_aut_minus: bool,
}

impl GroupElem {
    pub fn new(h: LaurentSeries, phi: LaurentSeries) -> Result<Self> {
        if !same_ring(h.ring(), phi.ring()) {
            return Err(Error::RingMismatch(h.ring().to_string(), phi.ring().to_string()));
        }
        h.order_nu()?;
        let nu = phi.order_nu()?;
        if nu != 1 {
            return Err(Error::NotAdmissible(nu));
        }
        Ok(GroupElem { h, phi })
    }

    pub fn identity(ring: &Ring) -> Self {
        GroupElem { h: LaurentSeries::one(ring), phi: LaurentSeries::t(ring) }
    }

    pub fn ring(&self) -> &Ring {
        self.h.ring()
    }

    pub fn is_exact(&self) -> bool {
        self.h.is_exact() && self.phi.is_exact()
    }

    pub fn prec(&self) -> Precision {
        self.h.prec().min(self.phi.prec())
    }

    pub fn is_identity(&self) -> bool {
        self.h.is_exact_one() && self.phi == LaurentSeries::t(self.ring())
    }

    /// Equality of all coefficients known on both sides.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.h.agrees_with(&other.h) && self.phi.agrees_with(&other.phi)
    }

    /// `(h1, phi1)(h2, phi2) = (h1 * (h2 o phi1), phi2 o phi1)`.
    pub fn mul(&self, other: &Self, upto: i64) -> Result<Self> {
        let h = &self.h * &other.h.compose(&self.phi, upto + self.h_depth())?;
        let phi = other.phi.compose(&self.phi, upto)?;
        Ok(GroupElem { h: h.truncate(upto), phi })
    }

    /// With `psi` the compositional inverse of `phi`: `(h^-1 o psi, psi)`.
    pub fn inv(&self, upto: i64) -> Result<Self> {
        let psi = self.phi.comp_inverse(upto)?;
        let h = self.h.invert(upto)?.compose(&psi, upto)?;
        Ok(GroupElem { h, phi: psi })
    }

    /// The action on `A((t))`: `f -> h * (f o phi)`.
    pub fn act(&self, f: &LaurentSeries, upto: i64) -> Result<LaurentSeries> {
        Ok((&self.h * &f.compose(&self.phi, upto + self.h_depth())?).truncate(upto))
    }

    fn h_depth(&self) -> i64 {
        (-self.h.min_deg()).max(0)
    }

    pub fn membership(&self) -> Membership {
        let ring = self.ring();
        let h_nu = self.h.order_nu().ok();
        let no_neg = |s: &LaurentSeries| s.prec().covers(-1) && s.below(0).is_known_zero();
        let h_plus = no_neg(&self.h) && self.h.coeff_or_zero(0).is_unit();
        let phi_plus = no_neg(&self.phi);
        let h_minus = self.h.is_exact()
            && self.h.max_deg() == Some(0)
            && self.h.coeff_or_zero(0).is_unit()
            && self.h.below(0).terms().all(|(_, c)| c.is_nilpotent());
        let phi_minus = self.phi.is_exact()
            && self.phi.at_or_above(0) == LaurentSeries::t(ring)
            && self.phi.below(0).terms().all(|(_, c)| c.is_nilpotent());
        Membership {
            in_g0: h_nu == Some(0),
            in_gplus: h_plus && phi_plus,
            h_in_gm_vminus: h_minus,
            h_in_gm_vplus: h_plus,
            phi_in_aut_plus: phi_plus,
            phi_in_aut_minus: phi_minus,
        }
    }

    /// Image in an extension ring built by adjoining generators.
    pub fn coerce(&self, target: &Ring) -> Result<Self> {
        Ok(GroupElem { h: self.h.coerce(target)?, phi: self.phi.coerce(target)? })
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(h={}; phi={})", self.h, self.phi)
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `s + r d/dt` in the Lie algebra `A((t)) x| Der A((t))`.
#[derive(Clone, PartialEq, Eq)]
pub struct LieElem {
    pub s: LaurentSeries,
    pub r: LaurentSeries,
}

impl LieElem {
    pub fn new(s: LaurentSeries, r: LaurentSeries) -> Result<Self> {
        if !same_ring(s.ring(), r.ring()) {
            return Err(Error::RingMismatch(s.ring().to_string(), r.ring().to_string()));
        }
        Ok(LieElem { s, r })
    }

    /// The multiplication operator by `t^n`.
    pub fn e(ring: &Ring, n: i64) -> Self {
        LieElem { s: LaurentSeries::t_pow(ring, n), r: LaurentSeries::zero(ring) }
    }

    /// The vector field `t^(n+1) d/dt`.
    pub fn d(ring: &Ring, n: i64) -> Self {
        LieElem { s: LaurentSeries::zero(ring), r: LaurentSeries::t_pow(ring, n + 1) }
    }

    pub fn ring(&self) -> &Ring {
        self.s.ring()
    }

    /// `[z, w]`, with s-part `r1 s2' - r2 s1'` and r-part `r1 r2' - r2 r1'`.
    pub fn bracket(&self, other: &Self) -> Self {
        let (s1, r1, s2, r2) = (&self.s, &self.r, &other.s, &other.r);
        LieElem {
            s: &(r1 * &s2.derivative()) - &(r2 * &s1.derivative()),
            r: &(r1 * &r2.derivative()) - &(r2 * &r1.derivative()),
        }
    }

    /// Action as a first-order operator: `f -> s f + r f'`.
    pub fn act(&self, f: &LaurentSeries) -> LaurentSeries {
        &(&self.s * f) + &(&self.r * &f.derivative())
    }

    pub fn add(&self, other: &Self) -> Self {
        LieElem { s: &self.s + &other.s, r: &self.r + &other.r }
    }

    pub fn scale(&self, c: &RingElem) -> Self {
        LieElem { s: self.s.scale(c), r: self.r.scale(c) }
    }

    pub fn coerce(&self, target: &Ring) -> Result<Self> {
        Ok(LieElem { s: self.s.coerce(target)?, r: self.r.coerce(target)? })
    }

    /// `(1 + s eps, t + r eps)` over a ring that contains a square-zero
    /// generator `eps` and extends the ring of `self`.
    pub fn to_group(&self, ext: &Ring, eps: &str) -> Result<GroupElem> {
        let e = RingElem::generator(ext, eps)?;
        let h = &LaurentSeries::one(ext) + &self.s.coerce(ext)?.scale(&e);
        let phi = &LaurentSeries::t(ext) + &self.r.coerce(ext)?.scale(&e);
        GroupElem::new(h, phi)
    }
}

impl fmt::Display for LieElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s={}; r={})", self.s, self.r)
    }
}

impl fmt::Debug for LieElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Which subgroup a random element is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `nu(h) = 0`.
    G0,
    /// No negative-degree terms anywhere.
    Gplus,
    /// `h` of random order in `-2..=2`.
    General,
}

/// Support and size bounds for random elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Highest positive degree of the non-constant part of `h`.
    pub h_degree: i64,
    /// Highest degree of `phi`.
    pub phi_degree: i64,
    /// Deepest negative degree of the nilpotent tails.
    pub neg_depth: i64,
    /// Integer coefficients are drawn from `-coeff..=coeff`.
    pub coeff: i64,
    /// When set, `phi` reduces modulo the nilradical to `a1 t` (no higher
    /// rational terms), which keeps every composition exact.
    pub linear_phi: bool,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { h_degree: 2, phi_degree: 2, neg_depth: 2, coeff: 2, linear_phi: false }
    }
}

impl Bounds {
    fn validate(&self) -> Result<()> {
        if self.coeff < 1 {
            return Err(Error::Bounds("coefficient bound must be positive".into()));
        }
        if self.h_degree < 0 || self.neg_depth < 0 {
            return Err(Error::Bounds("degrees must be non-negative".into()));
        }
        if self.phi_degree < 1 {
            return Err(Error::Bounds("phi must reach degree 1".into()));
        }
        if self.linear_phi && self.phi_degree > 1 && self.coeff < 1 {
            return Err(Error::Bounds("linear phi with higher terms needs nilpotent room".into()));
        }
        Ok(())
    }
}

/// Random draws of ring elements, series and group elements.
pub struct Sampler {
    ring: Ring,
    rng: ChaCha8Rng,
    bounds: Bounds,
}

impl Sampler {
    pub fn new(ring: &Ring, bounds: Bounds, seed: u64) -> Result<Self> {
        bounds.validate()?;
        Ok(Sampler { ring: ring.clone(), rng: ChaCha8Rng::seed_from_u64(seed), bounds })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    fn int(&mut self, nonzero: bool) -> i64 {
        let c = self.bounds.coeff;
        loop {
            let x = self.rng.gen_range(-c..=c);
            if !nonzero || x != 0 {
                return x;
            }
        }
    }

    pub fn rational(&mut self, nonzero: bool) -> Rational {
        let n = self.int(nonzero);
        let d = if self.rng.gen_bool(0.25) { 2 } else { 1 };
        Rational::new(n, d)
    }

    /// A nilpotent element with a few random monomials.
    pub fn nilpotent(&mut self) -> RingElem {
        let basis: Vec<Monomial> = self.ring.basis()[1..].to_vec();
        let mut x = RingElem::zero(&self.ring);
        for m in basis {
            if self.rng.gen_bool(0.5) {
                let c = self.rational(false);
                x = &x + &RingElem::monomial(&self.ring, &m, c);
            }
        }
        x
    }

    pub fn unit(&mut self) -> RingElem {
        let c = self.rational(true);
        &RingElem::from_rational(&self.ring, c) + &self.nilpotent()
    }

    pub fn element(&mut self) -> RingElem {
        let c = self.rational(false);
        &RingElem::from_rational(&self.ring, c) + &self.nilpotent()
    }

    /// `sum_{-depth <= k < 0} (nilpotent) t^k`, with a nonzero deepest term
    /// when the ring allows it.
    fn nil_tail(&mut self, depth: i64) -> LaurentSeries {
        let mut terms = Vec::new();
        for k in -depth..0 {
            terms.push((k, self.nilpotent()));
        }
        LaurentSeries::from_terms(&self.ring, terms, Precision::Exact).expect("same ring")
    }

    fn poly(&mut self, lo: i64, hi: i64) -> LaurentSeries {
        let terms: Vec<(i64, RingElem)> = (lo..=hi).map(|k| (k, self.element())).collect();
        LaurentSeries::from_terms(&self.ring, terms, Precision::Exact).expect("same ring")
    }

    /// A unit of order zero: `unit + positive part + nilpotent negative tail`.
    pub fn unit_series(&mut self, with_negative: bool) -> LaurentSeries {
        let c = LaurentSeries::constant(self.unit());
        let pos = self.poly(1, self.bounds.h_degree);
        let mut h = &c + &pos;
        if with_negative {
            h = &h + &self.nil_tail(self.bounds.neg_depth);
        }
        h
    }

    /// An admissible parameter `a0 + a1 t + ...` with `a0` nilpotent.
    pub fn parameter(&mut self, with_negative: bool) -> LaurentSeries {
        let a0 = LaurentSeries::constant(self.nilpotent());
        let a1 = LaurentSeries::monomial(self.unit(), 1);
        let higher = if self.bounds.linear_phi {
            let terms: Vec<(i64, RingElem)> = (2..=self.bounds.phi_degree).map(|k| (k, self.nilpotent())).collect();
            LaurentSeries::from_terms(&self.ring, terms, Precision::Exact).expect("same ring")
        } else {
            self.poly(2, self.bounds.phi_degree)
        };
        let mut phi = &(&a0 + &a1) + &higher;
        if with_negative {
            phi = &phi + &self.nil_tail(self.bounds.neg_depth);
        }
        phi
    }

    pub fn group_elem(&mut self, shape: Shape) -> GroupElem {
        let neg = shape != Shape::Gplus;
        let mut h = self.unit_series(neg);
        if shape == Shape::General {
            let nu = self.rng.gen_range(-2..=2);
            h = h.shift(nu);
        }
        let phi = self.parameter(neg);
        GroupElem::new(h, phi).expect("random element is well formed")
    }

    /// A Lie element with finite support in `-depth..=degree`.
    pub fn lie_elem(&mut self) -> LieElem {
        let (lo, hi) = (-self.bounds.neg_depth, self.bounds.h_degree);
        let s = self.poly(lo, hi);
        let r = self.poly(lo, hi);
        LieElem { s, r }
    }
}

/// Deterministic random group element; see [`Sampler`].
pub fn random_group_elem(ring: &Ring, shape: Shape, bounds: Bounds, seed: u64) -> Result<GroupElem> {
    Ok(Sampler::new(ring, bounds, seed)?.group_elem(shape))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilring::RingSpec;
    use alloc::vec;

    fn series(r: &Ring, lo: i64, cs: &[i64]) -> LaurentSeries {
        LaurentSeries::from_terms(r, cs.iter().enumerate().map(|(i, &c)| (lo + i as i64, RingElem::from_int(r, c))), Precision::Exact)
            .unwrap()
    }

    fn dual(names: &[&str]) -> Ring {
        RingSpec::new(names.iter().map(|n| (*n).into()).collect(), vec![2; names.len()], None).unwrap()
    }

    fn eps_t(r: &Ring, name: &str, deg: i64) -> LaurentSeries {
        LaurentSeries::monomial(RingElem::generator(r, name).unwrap(), deg)
    }

    #[test]
    fn product_examples() {
        let r = RingSpec::rationals();
        let a = GroupElem::new(series(&r, 0, &[1, 1]), LaurentSeries::t(&r)).unwrap();
        let b = GroupElem::new(LaurentSeries::one(&r), series(&r, 1, &[2])).unwrap();
        assert_eq!(a.mul(&b, 8).unwrap(), GroupElem::new(series(&r, 0, &[1, 1]), series(&r, 1, &[2])).unwrap());
        assert_eq!(b.mul(&a, 8).unwrap(), GroupElem::new(series(&r, 0, &[1, 2]), series(&r, 1, &[2])).unwrap());
        assert_eq!(a.mul(&GroupElem::identity(&r), 8).unwrap(), a);
    }

    #[test]
    fn inverse_examples() {
        let r = RingSpec::rationals();
        let b = GroupElem::new(LaurentSeries::one(&r), series(&r, 1, &[2])).unwrap();
        let half = LaurentSeries::t(&r).scale_rational(&Rational::new(1, 2));
        assert_eq!(b.inv(8).unwrap(), GroupElem::new(LaurentSeries::one(&r), half).unwrap());

        let a = GroupElem::new(series(&r, 0, &[1, 1]), LaurentSeries::t(&r)).unwrap();
        let ai = a.inv(6).unwrap();
        assert_eq!(ai.h, series(&r, 0, &[1, -1, 1, -1, 1, -1]).limit_prec(Precision::Finite(6)));

        let d = dual(&["e"]);
        let x = GroupElem::new(LaurentSeries::one(&d), &LaurentSeries::t(&d) + &eps_t(&d, "e", -1)).unwrap();
        let xi = x.inv(6).unwrap();
        assert_eq!(xi.phi, &LaurentSeries::t(&d) - &eps_t(&d, "e", -1));
        assert!(x.mul(&xi, 6).unwrap().is_identity());
    }

    #[test]
    fn action_examples() {
        let r = RingSpec::rationals();
        let x = GroupElem::new(LaurentSeries::t(&r), LaurentSeries::t(&r)).unwrap();
        assert_eq!(x.act(&LaurentSeries::one(&r), 5).unwrap(), LaurentSeries::t(&r));
        let y = GroupElem::new(LaurentSeries::one(&r), series(&r, 1, &[2])).unwrap();
        assert_eq!(y.act(&LaurentSeries::t_pow(&r, 2), 5).unwrap(), series(&r, 2, &[4]));
    }

    #[test]
    fn membership_examples() {
        let r = RingSpec::rationals();
        let x = GroupElem::new(series(&r, 0, &[1, 1]), series(&r, 1, &[1, 1])).unwrap();
        assert!(x.membership().in_gplus);
        let y = GroupElem::new(LaurentSeries::t(&r), LaurentSeries::t(&r)).unwrap();
        assert!(!y.membership().in_g0);
        let d = dual(&["e"]);
        let z = GroupElem::new(&LaurentSeries::one(&d) + &eps_t(&d, "e", -1), LaurentSeries::t(&d)).unwrap();
        let m = z.membership();
        assert!(m.in_g0 && !m.in_gplus && m.h_in_gm_vminus);
    }

    #[test]
    fn bracket_examples() {
        let r = RingSpec::rationals();
        let ddt = LieElem::d(&r, -1);
        let t = LieElem::e(&r, 1);
        let b = ddt.bracket(&t);
        assert!(b.s.is_exact_one() && b.r.is_exact_zero());
        let euler = LieElem::d(&r, 0);
        assert_eq!(ddt.bracket(&euler), ddt);
        let z = LieElem::e(&r, 2).bracket(&LieElem::e(&r, 3));
        assert!(z.s.is_exact_zero() && z.r.is_exact_zero());
    }

    #[test]
    fn lie_to_group_examples() {
        let q = RingSpec::rationals();
        let ext = q.adjoin(&["e"], &[2]).unwrap();
        let z = LieElem::new(LaurentSeries::one(&q), LaurentSeries::zero(&q)).unwrap();
        let g = z.to_group(&ext, "e").unwrap();
        assert_eq!(g.h, &LaurentSeries::one(&ext) + &eps_t(&ext, "e", 0));
        assert_eq!(g.phi, LaurentSeries::t(&ext));
        let w = LieElem::new(LaurentSeries::zero(&q), LaurentSeries::t_pow(&q, 2)).unwrap();
        let g = w.to_group(&ext, "e").unwrap();
        assert_eq!(g.phi, &LaurentSeries::t(&ext) + &eps_t(&ext, "e", 2));
        let h0 = g.h.map_coeffs(&q, |c| c.restrict(&q)).unwrap();
        let p0 = g.phi.map_coeffs(&q, |c| c.restrict(&q)).unwrap();
        assert!(GroupElem::new(h0, p0).unwrap().is_identity());
        assert!(matches!(z.to_group(&q, "e"), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn random_elements_are_deterministic_and_shaped() {
        let r = RingSpec::new(vec!["a".into(), "b".into()], vec![3, 2], None).unwrap();
        let b = Bounds::default();
        let x1 = random_group_elem(&r, Shape::Gplus, b, 1).unwrap();
        assert!(x1.membership().in_gplus);
        assert_eq!(x1, random_group_elem(&r, Shape::Gplus, b, 1).unwrap());
        assert_ne!(x1, random_group_elem(&r, Shape::Gplus, b, 2).unwrap());
        assert!(random_group_elem(&r, Shape::G0, b, 3).unwrap().membership().in_g0);
        let bad = Bounds { coeff: 0, ..b };
        assert!(matches!(random_group_elem(&r, Shape::G0, bad, 1), Err(Error::Bounds(_))));
    }
}
