//! The determinant 2-cocycle `D(x, y) = det(d_x d_y d_xy^-1)` on `G0`, computed
//! on finite windows of the block matrices of the action on
//! `A((t)) = t^-1 A[t^-1] + A[[t]]`, together with the Lie-level trace formula
//! and the extraction of Lie 2-cocycles from group 2-cocycles.
//!
//! Window sizes come from two per-element quantities. The *band* `B` of `g`
//! bounds how far `g` lowers degrees: `g(t^k)` lies in `t^(k-B) A[[t]]` for every
//! integer `k`. The *index* `I` is the nilpotency index of the ideal `J` spanned
//! by the coefficients that can lower degrees. Modulo the nilradical `d_g` is
//! lower triangular with unit diagonal, and its part above the diagonal has
//! entries in `J` and width `B`. Consequently `d_g^-1` has width at most
//! `(I - 1) B` above the diagonal, and the inverse of the top-left `W x W`
//! window agrees with `d_g^-1` on its first `W - I B` rows.

use alloc::vec::Vec;

use crate::cocycles::{TwoCocycle, TwoTag};
use crate::error::{with_horizon, Error, Result};
use crate::group::{GroupElem, LieElem};
use crate::laurent::{LaurentSeries, PowerTable, Precision};
use crate::linalg::{self, Matrix};
use crate::nilring::{Ideal, Monomial, RingElem};

/// Extra rows checked beyond the certified block.
const CHECK_MARGIN: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    A,
    B,
    C,
    D,
}

/// A finite piece of one block. Entry `(i, k)` is the coefficient of
/// `t^row_degrees[i]` in `g(t^col_degrees[k])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockWindow {
    pub which: Block,
    pub matrix: Matrix,
    pub row_degrees: Vec<i64>,
    pub col_degrees: Vec<i64>,
    pub reach: i64,
}

/// Band and index of a `G0` element, as described in the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reach {
    pub band: i64,
    pub index: i64,
}

fn check_g0(x: &GroupElem) -> Result<()> {
    match x.h.order_nu()? {
        0 => Ok(()),
        nu => Err(Error::NotInG0(nu)),
    }
}

fn lowering_coefficients(x: &GroupElem) -> Vec<RingElem> {
    let mut gens: Vec<RingElem> = x.h.below(0).terms().map(|(_, c)| c.clone()).collect();
    gens.extend(x.phi.nil_part().terms().map(|(_, c)| c.clone()));
    gens
}

fn index_of(gens: &[RingElem], exact: bool, ring_loewy: u32) -> i64 {
    if !exact {
        return ring_loewy as i64;
    }
    match gens.first() {
        None => 1,
        Some(g) => Ideal::generated_by(g.ring(), gens.iter()).nil_index().unwrap_or(ring_loewy) as i64,
    }
}

/// With `phi^k = sum_i C(k, i) phibar^(k-i) u^i`, the term `h phibar^(k-i) u^i`
/// starts at degree `k - i + ord(h u^i)`.
pub fn reach(x: &GroupElem) -> Result<Reach> {
    check_g0(x)?;
    let u = x.phi.nil_part();
    let loewy = x.ring().loewy_length();
    let u_index = if u.is_exact_zero() {
        1
    } else if u.is_exact() {
        u.coeff_ideal().nil_index().unwrap_or(loewy) as i64
    } else {
        loewy as i64
    };
    let mut band = 0;
    let mut pow = LaurentSeries::one(x.ring());
    for i in 0..u_index {
        let term = &x.h * &pow;
        if let Precision::Finite(o) = term.ord_bound() {
            band = band.max(i - o);
        }
        pow = &pow * &u;
        if pow.is_exact_zero() {
            break;
        }
    }
    let index = index_of(&lowering_coefficients(x), x.is_exact(), loewy);
    Ok(Reach { band, index })
}

/// Certified `B` with `x(t^k)` in `t^(k-B) A[[t]]` for all `k`.
pub fn reach_bound(x: &GroupElem) -> Result<i64> {
    Ok(reach(x)?.band)
}

/// `x(t^k)` for `k` in `lo..=hi`, each known below degree `upto`.
fn images(x: &GroupElem, lo: i64, hi: i64, upto: i64) -> Result<Vec<LaurentSeries>> {
    if hi < lo {
        return Ok(Vec::new());
    }
    let depth = (-x.h.min_deg()).max(0);
    let table = PowerTable::new(&x.phi, lo, hi, upto + depth)?;
    (lo..=hi)
        .map(|k| {
            let img = (&x.h * &table.power(k)).truncate(upto);
            if img.prec().covers(upto - 1) {
                Ok(img)
            } else {
                Err(Error::InsufficientPrecision { needed: upto, have: img.prec() })
            }
        })
        .collect()
}

fn window(x: &GroupElem, rows: &[i64], cols: &[i64]) -> Result<Matrix> {
    let (Some(&lo), Some(&hi)) = (cols.iter().min(), cols.iter().max()) else {
        return Ok(rows.iter().map(|_| Vec::new()).collect());
    };
    let upto = rows.iter().max().map_or(0, |m| m + 1);
    let imgs = images(x, lo, hi, upto)?;
    Ok(rows
        .iter()
        .map(|&i| cols.iter().map(|&k| imgs[(k - lo) as usize].coeff_or_zero(i)).collect())
        .collect())
}

fn d_matrix(x: &GroupElem, size: usize) -> Result<Matrix> {
    let degs: Vec<i64> = (0..size as i64).collect();
    window(x, &degs, &degs)
}

/// One block of `x`, `len` rows/columns on each `A[[t]]` side and enough
/// negative rows to contain every nonzero entry.
pub fn block_window(x: &GroupElem, which: Block, len: usize) -> Result<BlockWindow> {
    if len == 0 {
        return Err(Error::Bounds("window length must be positive".into()));
    }
    let band = reach_bound(x)?;
    let l = len as i64;
    let pos: Vec<i64> = (0..l).collect();
    let neg = |n: i64| -> Vec<i64> { (1..=n).map(|j| -j).collect() };
    let (row_degrees, col_degrees) = match which {
        Block::A => (neg(l + band), neg(l)),
        Block::B => (neg(band.max(1)), pos.clone()),
        Block::C => (pos.clone(), neg(l)),
        Block::D => (pos.clone(), pos),
    };
    let matrix = window(x, &row_degrees, &col_degrees)?;
    Ok(BlockWindow { which, matrix, row_degrees, col_degrees, reach: band })
}

/// The value of `D` with the window sizes that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetValue {
    pub value: RingElem,
    /// Size of the block whose determinant is taken.
    pub block: usize,
    /// Size of the padded windows.
    pub window: usize,
}

/// `D(x, y)` on `G0`.
pub fn det_cocycle_d(x: &GroupElem, y: &GroupElem) -> Result<RingElem> {
    Ok(det_cocycle_d_detailed(x, y, None)?.value)
}

/// `D(x, y)` with the block size at least `min_block`.
///
/// With `R = d_x d_y d_xy^-1 = 1 - c_x b_y d_xy^-1`, the columns of `R - 1`
/// vanish from `n = B_y + (I - 1) B_xy` on, so `det R` is the determinant of
/// its top-left `n x n` block. The identity of the remaining computed columns
/// is checked at run time.
pub fn det_cocycle_d_detailed(x: &GroupElem, y: &GroupElem, min_block: Option<usize>) -> Result<DetValue> {
    let rx = reach(x)?;
    let ry = reach(y)?;
    let ring = x.ring().clone();
    let mut gens = lowering_coefficients(x);
    gens.extend(lowering_coefficients(y));
    let index = index_of(&gens, x.is_exact() && y.is_exact(), ring.loewy_length());

    let mut band_xy = rx.band + ry.band;
    let n_guess = (ry.band + (index - 1) * band_xy) as usize;
    let rows_guess = n_guess.max(min_block.unwrap_or(0)) + CHECK_MARGIN;
    let pad = (rx.band + ry.band + index * band_xy) as usize;
    let xy = with_horizon((rows_guess + pad) as i64 * 2, 64 * (rows_guess + pad + 8) as i64, |h| {
        let xy = x.mul(y, h)?;
        d_matrix(&xy, rows_guess + pad)?;
        Ok(xy)
    })?;
    if xy.is_exact() {
        band_xy = band_xy.min(reach(&xy)?.band);
    }

    let n = ((ry.band + (index - 1) * band_xy) as usize).max(min_block.unwrap_or(0));
    let rows = n + CHECK_MARGIN;
    let w = rows + (rx.band + ry.band + index * band_xy) as usize;

    let dx = d_matrix(x, w)?;
    let dy = d_matrix(y, w)?;
    let dxy = d_matrix(&xy, w)?;
    let top: Matrix = linalg::mat_mul(&ring, &dx[..rows].to_vec(), &dy);
    let r = linalg::transpose(&linalg::solve_matrix(&linalg::transpose(&dxy), &linalg::transpose(&top))?);

    for (i, row) in r.iter().enumerate() {
        for (k, e) in row.iter().enumerate().skip(n) {
            let ok = if i == k { e.is_one() } else { e.is_zero() };
            if !ok {
                return Err(Error::Internal(alloc::format!(
                    "d_x d_y d_xy^-1 is not the identity outside the {n}x{n} block (entry {i},{k})"
                )));
            }
        }
    }
    let block: Matrix = r[..n].iter().map(|row| row[..n].to_vec()).collect();
    let value = linalg::determinant(&ring, &block)?;
    Ok(DetValue { value, block: n, window: w })
}

impl TwoCocycle {
    /// The determinant cocycle `D`.
    pub fn det() -> Self {
        TwoCocycle::new(TwoTag::DetD, det_cocycle_d)
    }
}

/// First `k` with `z(t^m)` free of negative degrees for all `m >= k`.
fn lie_b_columns(z: &LieElem) -> i64 {
    let mut k = 0;
    if !z.s.is_known_zero() {
        k = k.max(-z.s.min_deg());
    }
    if !z.r.is_known_zero() {
        k = k.max(1 - z.r.min_deg());
    }
    k
}

/// `tr(c_w b_z)` as a finite sum over the columns where `b_z` is nonzero.
fn trace_cb(w: &LieElem, z: &LieElem) -> Result<RingElem> {
    let ring = z.ring();
    let mut acc = RingElem::zero(ring);
    for k in 0..lie_b_columns(z) {
        let img = z.act(&LaurentSeries::t_pow(ring, k));
        for (d, b) in img.below(0).terms() {
            let j = -d;
            // Coefficient of t^k in w(t^-j) = s_w t^-j - j r_w t^(-j-1).
            let c = &w.s.coeff(k + j)? - &w.r.coeff(k + j + 1)?.scale(&crate::Rational::from_int(j));
            b.mul_acc_into(&c, &mut acc);
        }
    }
    Ok(acc)
}

/// `tr(c_w b_z - c_z b_w)`.
pub fn lie_trace(z: &LieElem, w: &LieElem) -> Result<RingElem> {
    Ok(&trace_cb(w, z)? - &trace_cb(z, w)?)
}

/// The Lie 2-cocycle induced by `coc`: embed `z` with `eps1` and `w` with
/// `eps2` and read `coc(z, w) coc(w, z)^-1 = 1 + a eps1 eps2`.
pub fn lie_extract(coc: &TwoCocycle, z: &LieElem, w: &LieElem) -> Result<RingElem> {
    let base = z.ring().clone();
    let (ext, e1, e2) = base.adjoin_dual_pair();
    let d1 = z.to_group(&ext, &e1)?;
    let d2 = w.to_group(&ext, &e2)?;
    let q = &coc.eval(&d1, &d2)? * &coc.eval(&d2, &d1)?.invert()?;
    let a = q.extract_coeff(&Monomial(alloc::vec![1, 1]), &base)?;
    let e12 = &RingElem::generator(&ext, &e1)? * &RingElem::generator(&ext, &e2)?;
    let expected = &RingElem::one(&ext) + &(&a.coerce(&ext)? * &e12);
    if q != expected {
        return Err(Error::LieShape(alloc::format!("{q}")));
    }
    Ok(a)
}

/// `f = u + x(v)` with `u` in `t^-1 A[t^-1]` and `v` in `A[[t]]`; `v` is known
/// below `upto` unless it is recognised as a polynomial.
pub fn solve_direct_sum(x: &GroupElem, f: &LaurentSeries, upto: i64) -> Result<(LaurentSeries, LaurentSeries)> {
    let Reach { band, index } = reach(x)?;
    let upto = upto.max(band).max(1);
    let w = (upto + index * band) as usize;
    let dx = d_matrix(x, w)?;
    let rhs: Vec<RingElem> = (0..w as i64).map(|k| f.coeff(k)).collect::<Result<_>>()?;
    let sol = linalg::solve(&dx, &rhs)?;
    let v = LaurentSeries::from_terms(
        x.ring(),
        sol.into_iter().take(upto as usize).enumerate().map(|(k, c)| (k as i64, c)),
        Precision::Finite(upto),
    )?;
    let mut u = f.below(0);
    if band > 0 {
        for (k, img) in images(x, 0, band - 1, 0)?.iter().enumerate() {
            let vk = v.coeff_or_zero(k as i64);
            if !vk.is_zero() {
                u = &u - &img.below(0).scale(&vk);
            }
        }
    }
    if f.is_exact() && x.is_exact() {
        let candidate = v.assume_exact();
        let image = x.act(&candidate, upto + 1)?;
        if image.is_exact() && &u + &image == *f {
            return Ok((u, candidate));
        }
    }
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::OneTag;
    use crate::group::{Bounds, Sampler, Shape};
    use crate::nilring::{Ring, RingSpec};
    use crate::Rational;
    use alloc::vec;

    fn dual(names: &[&str]) -> Ring {
        RingSpec::new(names.iter().map(|n| (*n).into()).collect(), vec![2; names.len()], None).unwrap()
    }

    fn gen(r: &Ring, name: &str, deg: i64) -> LaurentSeries {
        LaurentSeries::monomial(RingElem::generator(r, name).unwrap(), deg)
    }

    #[test]
    fn reach_examples() {
        let r = dual(&["e"]);
        let one = LaurentSeries::one(&r);
        let t = LaurentSeries::t(&r);
        assert_eq!(reach_bound(&GroupElem::identity(&r)).unwrap(), 0);
        let x = GroupElem::new(one.clone(), &t + &gen(&r, "e", -1)).unwrap();
        assert_eq!(reach_bound(&x).unwrap(), 2);
        let y = GroupElem::new(&one + &gen(&r, "e", -3), t.clone()).unwrap();
        assert_eq!(reach_bound(&y).unwrap(), 3);
        let z = GroupElem::new(t.clone(), t).unwrap();
        assert!(matches!(reach_bound(&z), Err(Error::NotInG0(1))));
    }

    #[test]
    fn window_examples() {
        let q = RingSpec::rationals();
        let id = block_window(&GroupElem::identity(&q), Block::D, 4).unwrap();
        assert!(linalg::is_identity(&id.matrix));
        let two_t = LaurentSeries::t(&q).scale_rational(&Rational::from_int(2));
        let x = GroupElem::new(LaurentSeries::one(&q), two_t).unwrap();
        let d = block_window(&x, Block::D, 3).unwrap().matrix;
        for (i, row) in d.iter().enumerate() {
            for (k, e) in row.iter().enumerate() {
                let expect = if i == k { 1 << i } else { 0 };
                assert_eq!(*e, RingElem::from_int(&q, expect));
            }
        }
        let b = block_window(&x, Block::B, 3).unwrap().matrix;
        assert!(b.iter().flatten().all(RingElem::is_zero));
    }

    #[test]
    fn d_is_trivial_on_gplus_and_identity() {
        let r = dual(&["e"]);
        let t = LaurentSeries::t(&r);
        let x = GroupElem::new(&LaurentSeries::one(&r) + &gen(&r, "e", 1), &t + &gen(&r, "e", 2)).unwrap();
        let y = GroupElem::new(LaurentSeries::one(&r), &t + &gen(&r, "e", -1)).unwrap();
        assert!(det_cocycle_d(&x, &x).unwrap().is_one());
        assert!(det_cocycle_d(&GroupElem::identity(&r), &y).unwrap().is_one());
        assert!(det_cocycle_d(&y, &GroupElem::identity(&r)).unwrap().is_one());
    }

    /// `det(1 - b_y d_xy^-1 c_x)` on the span of `t^-1 .. t^-B_y`.
    fn sylvester(x: &GroupElem, y: &GroupElem) -> RingElem {
        let ring = x.ring().clone();
        let by = reach_bound(y).unwrap();
        let xy = x.mul(y, 400).unwrap();
        let w = 120usize;
        let pos: Vec<i64> = (0..w as i64).collect();
        let neg: Vec<i64> = (1..=by).map(|j| -j).collect();
        let c = window(x, &pos, &neg).unwrap();
        let b = window(y, &neg, &pos).unwrap();
        let v = linalg::solve_matrix(&d_matrix(&xy, w).unwrap(), &c).unwrap();
        let k = linalg::mat_mul(&ring, &b, &v);
        let m: Matrix = (0..neg.len())
            .map(|i| (0..neg.len()).map(|j| if i == j { &RingElem::one(&ring) - &k[i][j] } else { -&k[i][j] }).collect())
            .collect();
        linalg::determinant(&ring, &m).unwrap()
    }

    #[test]
    fn d_matches_the_finite_rank_formula() {
        let r = dual(&["e", "d"]);
        let one = LaurentSeries::one(&r);
        let t = LaurentSeries::t(&r);
        let x = GroupElem::new(one.clone(), &t + &gen(&r, "e", -1)).unwrap();
        let y = GroupElem::new(&one + &gen(&r, "d", -1), t.clone()).unwrap();
        let dv = det_cocycle_d_detailed(&x, &y, None).unwrap();
        assert_eq!(dv.value, sylvester(&x, &y));
        assert_eq!(det_cocycle_d_detailed(&x, &y, Some(dv.block + 4)).unwrap().value, dv.value);
    }

    #[test]
    fn d_is_a_cocycle_on_random_triples() {
        let r = RingSpec::new(vec!["a".into(), "b".into()], vec![3, 2], None).unwrap();
        let bounds = Bounds { neg_depth: 1, linear_phi: true, ..Bounds::default() };
        let mut s = Sampler::new(&r, bounds, 11).unwrap();
        let (x, y, z) = (s.group_elem(Shape::G0), s.group_elem(Shape::G0), s.group_elem(Shape::G0));
        let d = TwoCocycle::det();
        assert!(crate::cocycles::delta2_trivial(&d, &x, &y, &z).unwrap().is_one());
        assert_eq!(d.eval(&x, &y).unwrap(), sylvester(&x, &y));
    }

    #[test]
    fn lie_trace_table() {
        let q = RingSpec::rationals();
        let c = |n| RingElem::from_int(&q, n);
        assert_eq!(lie_trace(&LieElem::e(&q, -3), &LieElem::e(&q, 3)).unwrap(), c(3));
        assert_eq!(lie_trace(&LieElem::e(&q, -1), &LieElem::d(&q, 1)).unwrap(), c(-1));
        assert_eq!(lie_trace(&LieElem::d(&q, -2), &LieElem::d(&q, 2)).unwrap(), c(-1));
        assert!(lie_trace(&LieElem::e(&q, 2), &LieElem::e(&q, 3)).unwrap().is_zero());
    }

    #[test]
    fn lie_extraction_examples() {
        let q = RingSpec::rationals();
        let (z, w) = (LieElem::e(&q, -1), LieElem::e(&q, 1));
        assert!(lie_extract(&TwoCocycle::det(), &z, &w).unwrap().is_one());
        // 2 res(s1 ds2) with s1 = t^-1, s2 = t is 2.
        let ll = lie_extract(&TwoCocycle::cup(OneTag::Lambda, OneTag::Lambda), &z, &w).unwrap();
        assert_eq!(ll, RingElem::from_int(&q, 2));
        let (z, w) = (LieElem::d(&q, -2), LieElem::d(&q, 2));
        let oo = lie_extract(&TwoCocycle::cup(OneTag::Omega, OneTag::Omega), &z, &w).unwrap();
        let expect = (&z.r.derivative() * &w.r.derivative().derivative()).residue().unwrap().scale(&Rational::from_int(2));
        assert_eq!(oo, expect);
    }

    #[test]
    fn direct_sum_examples() {
        let q = RingSpec::rationals();
        let f = LaurentSeries::from_terms(&q, [(-1, RingElem::one(&q)), (0, RingElem::one(&q)), (1, RingElem::one(&q))], Precision::Exact)
            .unwrap();
        let (u, v) = solve_direct_sum(&GroupElem::identity(&q), &f, 6).unwrap();
        assert_eq!(u, LaurentSeries::t_pow(&q, -1));
        assert_eq!(v, f.at_or_above(0));

        let r = RingSpec::new(vec!["a".into()], vec![3], None).unwrap();
        let mut s = Sampler::new(&r, Bounds { linear_phi: true, ..Bounds::default() }, 5).unwrap();
        let x = s.group_elem(Shape::G0);
        let f = s.unit_series(true);
        let (u, v) = solve_direct_sum(&x, &f, 30).unwrap();
        assert!(u.at_or_above(0).is_exact_zero());
        let back = &u + &x.act(&v, 10).unwrap();
        assert!(back.prec() >= Precision::Finite(10), "{}", back.prec());
        assert!(back.agrees_with(&f));
    }
}
