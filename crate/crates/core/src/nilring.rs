//! Finite-dimensional local Q-algebras `Q[x1..xk]/(monomial ideal)`.
//!
//! The relations are `xi^ei = 0` plus an optional bound on total degree
//! (monomials of degree `>= cap` vanish). The quotient has the explicit
//! monomial basis, so an element is a dense vector of rationals indexed by
//! that basis and the product is a lookup in a precomputed table.
//!
//! Every such ring is local with residue field Q: an element is a unit exactly
//! when its constant term is nonzero, and nilpotent otherwise.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::Rational;

const MAX_DIMENSION: usize = 4096;

/// Exponent vector of a basis monomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

#[derive(Clone, Debug)]
pub struct RingSpec {
    generators: Vec<String>,
    exponents: Vec<u32>,
    degree_cap: Option<u32>,
    /// Number of leading generators whose degrees count toward `degree_cap`.
    cap_scope: usize,
    basis: Vec<Monomial>,
    lookup: BTreeMap<Monomial, usize>,
    table: Vec<u32>,
    max_degree: u32,
}

/// Shared handle to a ring.
pub type Ring = Arc<RingSpec>;

const NO_PRODUCT: u32 = u32::MAX;

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
            && self.exponents == other.exponents
            && self.degree_cap == other.degree_cap
            && self.cap_scope == other.cap_scope
    }
}

impl Eq for RingSpec {}

pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl RingSpec {
    /// The field Q itself.
    pub fn rationals() -> Ring {
        Self::new(Vec::new(), Vec::new(), None).expect("Q is a valid ring")
    }

    pub fn new(generators: Vec<String>, exponents: Vec<u32>, degree_cap: Option<u32>) -> Result<Ring> {
        let scope = generators.len();
        Self::with_cap_scope(generators, exponents, degree_cap, scope)
    }

    /// Like [`RingSpec::new`], but the cap only counts the first `cap_scope`
    /// generators. This is what adjoining new variables to a capped ring gives.
    pub fn with_cap_scope(
        generators: Vec<String>,
        exponents: Vec<u32>,
        degree_cap: Option<u32>,
        cap_scope: usize,
    ) -> Result<Ring> {
        if generators.len() != exponents.len() {
            return Err(Error::InvalidRing("generator and exponent counts differ".into()));
        }
        if cap_scope > generators.len() {
            return Err(Error::InvalidRing("cap scope exceeds generator count".into()));
        }
        let cap_scope = if degree_cap.is_some() { cap_scope } else { generators.len() };
        for (i, name) in generators.iter().enumerate() {
            if !is_valid_name(name) {
                return Err(Error::InvalidRing(alloc::format!("bad generator name `{name}`")));
            }
            if name == "t" || name == "Q" {
                return Err(Error::InvalidRing(alloc::format!("generator name `{name}` is reserved")));
            }
            if generators[..i].contains(name) {
                return Err(Error::NameCollision(name.clone()));
            }
        }
        if let Some(&e) = exponents.iter().find(|&&e| e == 0) {
            return Err(Error::InvalidRing(alloc::format!("nilpotency exponent must be >= 1, got {e}")));
        }
        if degree_cap == Some(0) {
            return Err(Error::InvalidRing("degree cap must be >= 1".into()));
        }

        let mut basis = Vec::new();
        let mut current = vec![0u32; generators.len()];
        enumerate_monomials(&exponents, degree_cap, cap_scope, 0, &mut current, &mut basis)?;
        basis.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));

        let lookup: BTreeMap<Monomial, usize> =
            basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let dim = basis.len();
        let mut table = vec![NO_PRODUCT; dim * dim];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let prod = Monomial(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
                if let Some(&k) = lookup.get(&prod) {
                    table[i * dim + j] = k as u32;
                }
            }
        }
        let max_degree = basis.iter().map(Monomial::degree).max().unwrap_or(0);
        Ok(Arc::new(RingSpec {
            generators,
            exponents,
            degree_cap,
            cap_scope,
            basis,
            lookup,
            table,
            max_degree,
        }))
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree_cap(&self) -> Option<u32> {
        self.degree_cap
    }

    pub fn cap_scope(&self) -> usize {
        self.cap_scope
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Least `k` with `N^k = 0`, where `N` is the maximal ideal.
    pub fn loewy_length(&self) -> u32 {
        self.max_degree + 1
    }

    #[inline]
    fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.table[i * self.basis.len() + j];
        (k != NO_PRODUCT).then_some(k as usize)
    }

    /// Adjoin fresh generators with the given nilpotency exponents.
    ///
    /// The original ring embeds as the elements not involving the new
    /// generators (see [`RingElem::coerce`]).
    pub fn adjoin(self: &Ring, names: &[&str], exponents: &[u32]) -> Result<Ring> {
        if names.len() != exponents.len() {
            return Err(Error::InvalidRing("name and exponent counts differ".into()));
        }
        let mut gens = self.generators.clone();
        for name in names {
            if gens.iter().any(|g| g == name) {
                return Err(Error::NameCollision((*name).to_string()));
            }
            gens.push((*name).to_string());
        }
        let mut exps = self.exponents.clone();
        exps.extend_from_slice(exponents);
        RingSpec::with_cap_scope(gens, exps, self.degree_cap, self.cap_scope)
    }

    /// Adjoin two square-zero generators with names not already in use.
    pub fn adjoin_dual_pair(self: &Ring) -> (Ring, String, String) {
        let fresh = |stem: &str| {
            let mut name = String::from(stem);
            while self.generators.contains(&name) {
                name.push('_');
            }
            name
        };
        let (a, b) = (fresh("eps1"), fresh("eps2"));
        let ring = self.adjoin(&[&a, &b], &[2, 2]).expect("fresh names never collide");
        (ring, a, b)
    }

    /// True when `self` is `base` with extra generators appended.
    pub fn extends(&self, base: &RingSpec) -> bool {
        self.generators.len() >= base.generators.len()
            && self.generators[..base.generators.len()] == base.generators[..]
            && self.exponents[..base.exponents.len()] == base.exponents[..]
            && self.degree_cap == base.degree_cap
            && (base.degree_cap.is_none() || self.cap_scope == base.cap_scope)
    }
}

fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn enumerate_monomials(
    exponents: &[u32],
    cap: Option<u32>,
    scope: usize,
    pos: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) -> Result<()> {
    if pos == exponents.len() {
        if out.len() >= MAX_DIMENSION {
            return Err(Error::InvalidRing(alloc::format!("dimension exceeds {MAX_DIMENSION}")));
        }
        out.push(Monomial(current.clone()));
        return Ok(());
    }
    for e in 0..exponents[pos] {
        current[pos] = e;
        if let Some(cap) = cap {
            let scoped: u32 = current[..scope.min(pos + 1)].iter().sum();
            if scoped >= cap {
                break;
            }
        }
        enumerate_monomials(exponents, cap, scope, pos + 1, current, out)?;
    }
    current[pos] = 0;
    Ok(())
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        let group = |f: &mut fmt::Formatter<'_>, range: core::ops::Range<usize>, cap: Option<u32>| {
            write!(f, "[")?;
            for (n, i) in range.enumerate() {
                if n > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}^{}=0", self.generators[i], self.exponents[i])?;
            }
            if let Some(c) = cap {
                write!(f, "; cap={c}")?;
            }
            write!(f, "]")
        };
        let n = self.generators.len();
        if n == 0 {
            return Ok(());
        }
        match self.degree_cap {
            Some(cap) if self.cap_scope < n => {
                group(f, 0..self.cap_scope, Some(cap))?;
                group(f, self.cap_scope..n, None)
            }
            cap => group(f, 0..n, cap),
        }
    }
}

/// Which operation [`RingElem::arith`] performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// An element of a [`RingSpec`], stored as coefficients over the monomial basis.
#[derive(Clone)]
pub struct RingElem {
    ring: Ring,
    coeffs: Vec<Rational>,
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

impl Eq for RingElem {}

impl RingElem {
    pub fn zero(ring: &Ring) -> Self {
        RingElem { ring: ring.clone(), coeffs: vec![Rational::zero(); ring.dimension()] }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::from_rational(ring, Rational::one())
    }

    pub fn from_rational(ring: &Ring, q: Rational) -> Self {
        let mut e = Self::zero(ring);
        e.coeffs[0] = q;
        e
    }

    pub fn from_int(ring: &Ring, n: i64) -> Self {
        Self::from_rational(ring, Rational::from_int(n))
    }

    pub fn generator(ring: &Ring, name: &str) -> Result<Self> {
        let g = ring.generator_index(name).ok_or_else(|| Error::UnknownGenerator(name.into()))?;
        let mut exps = vec![0; ring.generators.len()];
        exps[g] = 1;
        Ok(Self::monomial(ring, &Monomial(exps), Rational::one()))
    }

    /// `coeff * m`; zero when `m` lies in the ideal.
    pub fn monomial(ring: &Ring, m: &Monomial, coeff: Rational) -> Self {
        let mut e = Self::zero(ring);
        if let Some(i) = ring.index_of(m) {
            e.coeffs[i] = coeff;
        }
        e
    }

    pub fn from_coeffs(ring: &Ring, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != ring.dimension() {
            return Err(Error::InvalidRing("coefficient vector has wrong length".into()));
        }
        Ok(RingElem { ring: ring.clone(), coeffs })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Nonzero `(monomial, coefficient)` pairs in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + '_ {
        self.ring.basis.iter().zip(&self.coeffs).filter(|(_, c)| !c.is_zero())
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.ring.index_of(m).map(|i| self.coeffs[i].clone()).unwrap_or_default()
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// True when the element is a rational multiple of 1.
    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// The nilpotent part `a - constant_term(a)`.
    pub fn nil_part(&self) -> Self {
        let mut e = self.clone();
        e.coeffs[0] = Rational::zero();
        e
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()))
        }
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        self.check_ring(other)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other),
            ArithOp::Sub => self.sub_unchecked(other),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        RingElem { ring: self.ring.clone(), coeffs }
    }

    fn sub_unchecked(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        RingElem { ring: self.ring.clone(), coeffs }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.ring);
        self.mul_acc_into(other, &mut out);
        out
    }

    /// `acc += self * other`.
    pub fn mul_acc_into(&self, other: &Self, acc: &mut Self) {
        debug_assert!(same_ring(&self.ring, &other.ring) && same_ring(&self.ring, &acc.ring));
        if self.ring.dimension() == 1 {
            let p = &self.coeffs[0] * &other.coeffs[0];
            acc.coeffs[0] += &p;
            return;
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = self.ring.product_index(i, j) {
                    let p = a * b;
                    acc.coeffs[k] += &p;
                }
            }
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.ring);
        }
        let coeffs = self.coeffs.iter().map(|c| if c.is_zero() { c.clone() } else { c * q }).collect();
        RingElem { ring: self.ring.clone(), coeffs }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power allowing negative exponents for units.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            Ok(self.invert()?.pow(n.unsigned_abs() as u32))
        }
    }

    /// Least `k >= 1` with `self^k = 0`, or `None` for units.
    pub fn nil_index(&self) -> Option<u32> {
        if self.is_unit() {
            return None;
        }
        let mut k = 1;
        let mut p = self.clone();
        while !p.is_zero() {
            p = &p * self;
            k += 1;
        }
        Some(k)
    }

    /// Inverse of a unit: `c^-1 * sum_k (-n/c)^k` where `self = c + n`.
    pub fn invert(&self) -> Result<Self> {
        let c = self.constant_term().recip().ok_or(Error::NotUnit)?;
        let x = self.nil_part().scale(&-&c);
        let mut acc = Self::one(&self.ring);
        let mut power = Self::one(&self.ring);
        for _ in 1..self.ring.loewy_length() {
            power = &power * &x;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.scale(&c))
    }

    /// `exp(self)` for nilpotent `self` (a finite sum).
    pub fn exp_nil(&self) -> Result<Self> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let mut acc = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        for k in 1..self.ring.loewy_length() as i64 {
            term = (&term * self).scale(&Rational::new(1, k));
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// `log(1 + self)` for nilpotent `self` (a finite sum).
    pub fn log_one_plus_nil(&self) -> Result<Self> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let mut acc = Self::zero(&self.ring);
        let mut power = Self::one(&self.ring);
        for k in 1..self.ring.loewy_length() as i64 {
            power = &power * self;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = &acc + &power.scale(&Rational::new(sign, k));
        }
        Ok(acc)
    }

    /// Image under the inclusion into an extension ring built by [`RingSpec::adjoin`].
    pub fn coerce(&self, target: &Ring) -> Result<Self> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        if !target.extends(&self.ring) {
            return Err(Error::RingMismatch(self.ring.to_string(), target.to_string()));
        }
        let extra = target.generators.len() - self.ring.generators.len();
        let mut out = RingElem::zero(target);
        for (m, c) in self.terms() {
            let mut exps = m.0.clone();
            exps.extend(core::iter::repeat_n(0, extra));
            let idx = target.index_of(&Monomial(exps)).expect("base monomials survive adjoining");
            out.coeffs[idx] = c.clone();
        }
        Ok(out)
    }

    /// Coefficient of the monomial `m` in the adjoined generators, as an
    /// element of `base`. `m` lists exponents of the generators after `base`'s.
    pub fn extract_coeff(&self, m: &Monomial, base: &Ring) -> Result<Self> {
        if !self.ring.extends(base) {
            return Err(Error::RingMismatch(self.ring.to_string(), base.to_string()));
        }
        let nb = base.generators.len();
        if m.0.len() != self.ring.generators.len() - nb {
            return Err(Error::InvalidRing("monomial has wrong number of exponents".into()));
        }
        let mut out = RingElem::zero(base);
        for (mono, c) in self.terms() {
            if mono.0[nb..] == m.0[..] {
                let idx = base.index_of(&Monomial(mono.0[..nb].to_vec())).expect("base part is a base monomial");
                out.coeffs[idx] = c.clone();
            }
        }
        Ok(out)
    }

    /// Image of the homomorphism sending each adjoined generator to zero.
    pub fn restrict(&self, base: &Ring) -> Result<Self> {
        let extra = self.ring.generators.len() - base.generators.len().min(self.ring.generators.len());
        self.extract_coeff(&Monomial(vec![0; extra]), base)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            write_scaled_monomial(f, &mag, m, &self.ring)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Writes `mag * m` with `mag >= 0`, e.g. `3*e1*e2^2`, `(1/2)*e1`, `e1`, `5`.
pub(crate) fn write_scaled_monomial(
    f: &mut fmt::Formatter<'_>,
    mag: &Rational,
    m: &Monomial,
    ring: &RingSpec,
) -> fmt::Result {
    let mut parts = 0;
    if m.is_one() || !mag.is_one() {
        if mag.is_integer() {
            write!(f, "{mag}")?;
        } else {
            write!(f, "({mag})")?;
        }
        parts += 1;
    }
    for (name, &e) in ring.generators.iter().zip(&m.0) {
        if e == 0 {
            continue;
        }
        if parts > 0 {
            write!(f, "*")?;
        }
        if e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
        parts += 1;
    }
    Ok(())
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! ring_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&RingElem> for &RingElem {
            type Output = RingElem;
            /// Panics if the operands live in different rings; use
            /// [`RingElem::arith`] for a checked version.
            fn $method(self, rhs: &RingElem) -> RingElem {
                assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch");
                self.$imp(rhs)
            }
        }
        impl $tr<RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                (&self).$method(&rhs)
            }
        }
    };
}

ring_binop!(Add, add, add_unchecked);
ring_binop!(Sub, sub, sub_unchecked);
ring_binop!(Mul, mul, mul_unchecked);

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

/// An ideal of a [`RingSpec`], held as a Q-basis in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    rows: Vec<Vec<Rational>>,
}

impl Ideal {
    pub fn zero(ring: &Ring) -> Self {
        Ideal { ring: ring.clone(), rows: Vec::new() }
    }

    /// The ideal generated by `gens`.
    pub fn generated_by<'a>(ring: &Ring, gens: impl IntoIterator<Item = &'a RingElem>) -> Self {
        let mut span = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            for m in ring.basis() {
                let prod = g * &RingElem::monomial(ring, m, Rational::one());
                if !prod.is_zero() {
                    span.push(prod.coeffs);
                }
            }
        }
        Ideal { ring: ring.clone(), rows: echelon(span) }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.rows.len() == self.ring.dimension()
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn mul(&self, other: &Ideal) -> Ideal {
        let mut span = Vec::new();
        for a in &self.rows {
            let a = RingElem { ring: self.ring.clone(), coeffs: a.clone() };
            for b in &other.rows {
                let b = RingElem { ring: self.ring.clone(), coeffs: b.clone() };
                let p = &a * &b;
                if !p.is_zero() {
                    span.push(p.coeffs);
                }
            }
        }
        Ideal { ring: self.ring.clone(), rows: echelon(span) }
    }

    /// Least `p >= 1` with `I^p = 0`; `None` if the ideal is not nilpotent.
    /// The zero ideal has index 1.
    pub fn nil_index(&self) -> Option<u32> {
        if self.is_zero() {
            return Some(1);
        }
        if self.is_unit_ideal() || self.rows.iter().any(|r| !r[0].is_zero()) {
            return None;
        }
        let mut p = 1;
        let mut power = self.clone();
        while !power.is_zero() {
            power = power.mul(self);
            p += 1;
        }
        Some(p)
    }
}

fn echelon(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip().expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(&factor * p);
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}
