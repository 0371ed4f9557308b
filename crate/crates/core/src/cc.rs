//! The Contou-Carrère symbol `CC : A((t))* x A((t))* -> A*`.
//!
//! [`cc_exact`] evaluates the closed product formula over the decompositions
//! `f = prod_{i<0} (1 - a_i t^i) a_0 t^nu prod_{i>0} (1 - a_i t^i)`.
//! [`cc_explog`] evaluates `exp res(log f dg/g)` for `f` in `V_+ V_-`.
//! [`cc`] returns the first and, in debug builds, checks it against a
//! bimultiplicative reduction to the second.

use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::laurent::{LaurentSeries, Precision};
use crate::nilring::RingElem;
use crate::rational::Rational;

/// Coefficients `a_i` of `prod (1 - a_i t^i)`, with `a_0`, `nu` and the
/// negative-degree factors exact and the positive ones listed as far as known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDecomposition {
    pub nu: i64,
    pub a0: RingElem,
    /// `(i, a_-i)` for `i >= 1` with `a_-i` nonzero (all nilpotent).
    pub negative: Vec<(i64, RingElem)>,
    /// `a_1, a_2, ...`; `positive[i - 1] = a_i`.
    pub positive: Vec<RingElem>,
}

fn geometric(a: &RingElem, deg: i64, upto: i64) -> LaurentSeries {
    // 1 / (1 - a t^deg) as far as needed: exact when a is nilpotent.
    let ring = a.ring();
    let mut terms = Vec::new();
    let mut p = RingElem::one(ring);
    let mut k = 0i64;
    loop {
        if p.is_zero() {
            return LaurentSeries::from_terms(ring, terms, Precision::Exact).expect("same ring");
        }
        if deg > 0 && k * deg >= upto {
            return LaurentSeries::from_terms(ring, terms, Precision::Finite(upto)).expect("same ring");
        }
        terms.push((k * deg, p.clone()));
        p = &p * a;
        k += 1;
    }
}

fn negative_factors(v_minus: &LaurentSeries) -> Result<Vec<(i64, RingElem)>> {
    let mut cur = v_minus.clone();
    let depth = (-cur.min_deg()).max(0);
    let index = cur.below(0).coeff_ideal().nil_index().unwrap_or(1) as i64;
    let mut out = Vec::new();
    for i in 1..=depth * index.max(1) {
        if cur.is_exact_one() {
            break;
        }
        let a = -&cur.coeff_or_zero(-i);
        if !a.is_zero() {
            cur = &cur * &geometric(&a, -i, 0);
            out.push((i, a));
        }
    }
    if !cur.is_exact_one() {
        return Err(Error::Internal("negative product decomposition did not close".into()));
    }
    Ok(out)
}

/// The factors `a_i` for `1 <= i < upto` of a series `1 + O(t)`.
fn positive_factors(v_plus: &LaurentSeries, upto: i64) -> Result<Vec<RingElem>> {
    if upto > 1 && !v_plus.prec().covers(upto - 1) {
        return Err(Error::InsufficientPrecision { needed: upto, have: v_plus.prec() });
    }
    let mut cur = v_plus.truncate(upto);
    let mut out = Vec::new();
    for i in 1..upto {
        let a = -&cur.coeff_or_zero(i);
        if !a.is_zero() {
            cur = (&cur * &geometric(&a, i, upto)).truncate(upto);
        }
        out.push(a);
    }
    Ok(out)
}

impl ProductDecomposition {
    /// Decompose `f`, listing positive factors `a_i` for `i < upto`.
    pub fn of(f: &LaurentSeries, upto: i64) -> Result<Self> {
        let fac = f.factorize_unit(upto)?;
        let negative = negative_factors(&fac.v_minus)?;
        let positive = positive_factors(&fac.v_plus, upto)?;
        Ok(ProductDecomposition { nu: fac.nu, a0: fac.a0, negative, positive })
    }

    /// `max (i * m)` over the negative factors `a_-i` of nilpotency index `m`:
    /// partner factors of degree at least this contribute nothing.
    pub fn reach(&self) -> i64 {
        self.negative.iter().map(|(i, a)| i * a.nil_index().unwrap_or(1) as i64).max().unwrap_or(1)
    }

    pub fn a(&self, i: i64) -> Option<&RingElem> {
        self.positive.get(i as usize - 1)
    }
}

/// `prod_{i>0} prod_{j in neg} (1 - a_i^{j/(i,j)} b_-j^{i/(i,j)})^{(i,j)}`.
fn cross_product(pos: &ProductDecomposition, neg: &ProductDecomposition) -> RingElem {
    let ring = pos.a0.ring();
    let mut acc = RingElem::one(ring);
    for (j, b) in &neg.negative {
        let m = b.nil_index().unwrap_or(1) as i64;
        for i in 1..j * m {
            let g = i.gcd(j);
            if i / g >= m {
                continue;
            }
            let Some(a) = pos.a(i) else { continue };
            let x = &a.pow((j / g) as u32) * &b.pow((i / g) as u32);
            if x.is_zero() {
                continue;
            }
            let factor = &RingElem::one(ring) - &x;
            acc = &acc * &factor.pow(g as u32);
        }
    }
    acc
}

/// The closed product formula. Needs `f` known far enough for the factors
/// `a_i` with `i < reach(g)` and symmetrically for `g`.
pub fn cc_exact(f: &LaurentSeries, g: &LaurentSeries) -> Result<RingElem> {
    f.check_ring(g)?;
    let df0 = ProductDecomposition::of(f, 1)?;
    let dg0 = ProductDecomposition::of(g, 1)?;
    let df = ProductDecomposition::of(f, dg0.reach())?;
    let dg = ProductDecomposition::of(g, df0.reach())?;
    let sign = if (df.nu * dg.nu) % 2 == 0 { 1 } else { -1 };
    let num = &df.a0.powi(dg.nu)? * &cross_product(&df, &dg);
    let den = &dg.a0.powi(df.nu)? * &cross_product(&dg, &df);
    Ok((&num * &den.invert()?).scale(&Rational::from_int(sign)))
}

/// `log(1 + y)` for `y` in `t A[[t]]`, known below `upto`.
fn log_power_series(y: &LaurentSeries, upto: i64) -> LaurentSeries {
    let mut acc = LaurentSeries::zero(y.ring()).limit_prec(y.prec().min(Precision::Finite(upto)));
    let mut power = LaurentSeries::one(y.ring());
    for k in 1..upto.max(1) {
        power = (&power * y).truncate(upto);
        if power.is_known_zero() && power.prec() >= Precision::Finite(upto) {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc = &acc + &power.scale_rational(&Rational::new(sign, k));
    }
    acc.truncate(upto)
}

/// `log f` for `f = v_minus v_plus` in `V_+ V_-`.
fn log_unit(f: &LaurentSeries, upto: i64) -> Result<LaurentSeries> {
    let fac = f.factorize_unit(upto)?;
    if fac.nu != 0 || !fac.a0.is_one() {
        return Err(Error::NotInVplusVminus(alloc::format!("nu = {}, a0 = {}", fac.nu, fac.a0)));
    }
    let index = fac.v_minus.below(0).coeff_ideal().nil_index().unwrap_or(1) as i64;
    let log_minus = (&fac.v_minus - &LaurentSeries::one(f.ring())).log_one_plus_nil_series(index);
    let log_plus = log_power_series(&(&fac.v_plus - &LaurentSeries::one(f.ring())), upto);
    Ok(&log_minus + &log_plus)
}

/// `exp res(log f * dg/g)` for `f` in `V_+ V_-`.
pub fn cc_explog(f: &LaurentSeries, g: &LaurentSeries) -> Result<RingElem> {
    f.check_ring(g)?;
    g.order_nu()?;
    let mut upto = 8;
    loop {
        let log_f = log_unit(f, upto)?;
        let dlog_g = &g.derivative() * &g.invert(upto)?;
        let prod = &log_f * &dlog_g;
        if prod.prec().covers(-1) {
            return prod.residue()?.exp_nil();
        }
        if upto > 4096 || (f.is_exact() && g.is_exact() && upto > 1024) {
            return Err(Error::InsufficientPrecision { needed: -1, have: prod.prec() });
        }
        if !f.prec().covers(upto) && !g.prec().covers(upto) {
            return Err(Error::InsufficientPrecision { needed: upto, have: f.prec().min(g.prec()) });
        }
        upto *= 2;
    }
}

/// `CC(t, g) = b_0^-1 (-1)^nu(g) exp(-(log w)_0)` for `g = b_0 t^nu w`.
fn cc_t_with(g: &LaurentSeries) -> Result<RingElem> {
    let fac = g.factorize_unit(1)?;
    let index = fac.v_minus.below(0).coeff_ideal().nil_index().unwrap_or(1) as i64;
    let log_minus = (&fac.v_minus - &LaurentSeries::one(g.ring())).log_one_plus_nil_series(index);
    let e = (-&log_minus.coeff_or_zero(0)).exp_nil()?;
    let sign = if fac.nu % 2 == 0 { 1 } else { -1 };
    Ok((&fac.a0.invert()? * &e).scale(&Rational::from_int(sign)))
}

/// `CC(a_0, g) CC(t, g)^nu CC(v, g)` with `f = a_0 t^nu v`, the last factor via [`cc_explog`].
pub fn cc_reduced(f: &LaurentSeries, g: &LaurentSeries) -> Result<RingElem> {
    let fac = f.factorize_unit(1)?;
    let nu_g = g.order_nu()?;
    let v = f.shift(-fac.nu).scale(&fac.a0.invert()?);
    let ct = cc_t_with(g)?;
    let part = &fac.a0.powi(nu_g)? * &ct.powi(fac.nu)?;
    Ok(&part * &cc_explog(&v, g)?)
}

/// The symbol, evaluated by [`cc_exact`]. Debug builds cross-check against [`cc_reduced`].
pub fn cc(f: &LaurentSeries, g: &LaurentSeries) -> Result<RingElem> {
    let value = cc_exact(f, g)?;
    #[cfg(debug_assertions)]
    if f.is_exact() && g.is_exact() {
        let other = cc_reduced(f, g)?;
        assert_eq!(value, other, "symbol algorithms disagree on ({f}, {g})");
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilring::{Ring, RingSpec};

    fn ints(r: &Ring, lo: i64, cs: &[i64]) -> LaurentSeries {
        LaurentSeries::from_terms(r, cs.iter().enumerate().map(|(i, &x)| (lo + i as i64, RingElem::from_int(r, x))), Precision::Exact)
            .unwrap()
    }

    fn ring(names: &[&str], exps: &[u32]) -> Ring {
        RingSpec::new(names.iter().map(|n| (*n).into()).collect(), exps.to_vec(), None).unwrap()
    }

    fn eps(r: &Ring, name: &str, deg: i64) -> LaurentSeries {
        LaurentSeries::monomial(RingElem::generator(r, name).unwrap(), deg)
    }

    #[test]
    fn symbol_examples() {
        let q = RingSpec::rationals();
        let t = LaurentSeries::t(&q);
        assert_eq!(cc(&t, &t).unwrap(), RingElem::from_int(&q, -1));
        assert_eq!(cc(&ints(&q, 0, &[2]), &LaurentSeries::t_pow(&q, 3)).unwrap(), RingElem::from_int(&q, 8));

        let d = ring(&["e"], &[2]);
        let e = RingElem::generator(&d, "e").unwrap();
        let f = &LaurentSeries::one(&d) + &eps(&d, "e", -1);
        let g = ints(&d, 0, &[1, -1]);
        let expected = &RingElem::one(&d) - &e;
        assert_eq!(cc_exact(&f, &g).unwrap(), expected);
        assert_eq!(cc_explog(&f, &g).unwrap(), expected);
        assert_eq!(cc(&f, &g).unwrap(), expected);
    }

    #[test]
    fn explog_examples() {
        let q = RingSpec::rationals();
        let f = ints(&q, 0, &[1, 1]);
        assert!(cc_explog(&f, &f).unwrap().is_one());
        assert!(cc_explog(&LaurentSeries::one(&q), &f).unwrap().is_one());
        assert!(matches!(cc_explog(&ints(&q, 0, &[2]), &f), Err(Error::NotInVplusVminus(_))));
    }

    #[test]
    fn vanishing_on_minus_parts() {
        let r = ring(&["e", "d"], &[2, 2]);
        let f = &LaurentSeries::one(&r) + &eps(&r, "e", -1);
        let g = &LaurentSeries::one(&r) + &eps(&r, "d", -1);
        assert!(cc(&f, &g).unwrap().is_one());
    }

    #[test]
    fn product_decomposition_recomposes() {
        let r = ring(&["a"], &[3]);
        let a = RingElem::generator(&r, "a").unwrap();
        let f = &(&ints(&r, 0, &[3, 1, 2]) + &eps(&r, "a", -2)) + &LaurentSeries::monomial(a.clone(), -1);
        let dec = ProductDecomposition::of(&f, 6).unwrap();
        let mut back = LaurentSeries::monomial(dec.a0.clone(), dec.nu);
        for (i, c) in &dec.negative {
            back = &back * &(&LaurentSeries::one(&r) - &LaurentSeries::monomial(c.clone(), -i));
        }
        for (i, c) in dec.positive.iter().enumerate() {
            back = &back * &(&LaurentSeries::one(&r) - &LaurentSeries::monomial(c.clone(), i as i64 + 1));
        }
        let depth = dec.negative.iter().map(|(i, c)| i * c.nil_index().unwrap() as i64).max().unwrap();
        assert!(back.truncate(6 - depth).agrees_with(&f), "{back} vs {f}");
    }

    #[test]
    fn nontrivial_pairing_agrees_across_algorithms() {
        let r = ring(&["a", "b"], &[3, 2]);
        let a = RingElem::generator(&r, "a").unwrap();
        let f = &(&ints(&r, 1, &[2, 1, -1]) + &eps(&r, "a", -2)) + &eps(&r, "b", -1);
        let g = &ints(&r, -1, &[3, 0, 1]) + &LaurentSeries::monomial(&a * &a, -3);
        let x = cc_exact(&f, &g).unwrap();
        assert_eq!(x, cc_reduced(&f, &g).unwrap());
        assert!((&x * &cc_exact(&g, &f).unwrap()).is_one());
    }
}
