use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::nilring::RingSpec;

fn q() -> Ring {
    RingSpec::rationals()
}

fn dual(names: &[&str]) -> Ring {
    RingSpec::new(names.iter().map(|n| (*n).into()).collect(), vec![2; names.len()], None).unwrap()
}

fn c(r: &Ring, n: i64) -> RingElem {
    RingElem::from_int(r, n)
}

fn g(r: &Ring, name: &str) -> RingElem {
    RingElem::generator(r, name).unwrap()
}

/// Exact series from integer coefficients starting at `lo`.
fn ints(r: &Ring, lo: i64, cs: &[i64]) -> LaurentSeries {
    LaurentSeries::from_terms(r, cs.iter().enumerate().map(|(i, &x)| (lo + i as i64, c(r, x))), Precision::Exact)
        .unwrap()
}

fn term(coeff: RingElem, d: i64) -> LaurentSeries {
    LaurentSeries::monomial(coeff, d)
}

#[test]
fn arithmetic_examples() {
    let r = q();
    let a = ints(&r, -1, &[1, 1]);
    assert_eq!(&a * &LaurentSeries::t(&r), ints(&r, 0, &[1, 1]));

    let d = dual(&["e"]);
    let e = g(&d, "e");
    let one = LaurentSeries::one(&d);
    let prod = &(&one + &term(e.clone(), -1)) * &(&one - &term(e, -1));
    assert!(prod.is_exact_one());

    let f = ints(&r, 0, &[1, 1]).limit_prec(Precision::Finite(3));
    let sq = &f * &f;
    assert_eq!(sq.prec(), Precision::Finite(3));
    assert_eq!(sq.coeff(2).unwrap(), c(&r, 1));
    assert!(sq.coeff(3).is_err());
}

#[test]
fn derivative_and_residue() {
    let r = q();
    assert_eq!(LaurentSeries::t_pow(&r, -1).residue().unwrap(), c(&r, 1));
    let f = ints(&r, -2, &[3, 5, 7]);
    assert_eq!(f.residue().unwrap(), c(&r, 5));
    assert!(f.derivative().residue().unwrap().is_zero());
    assert!(LaurentSeries::big_o(&r, -1).residue().is_err());
}

#[test]
fn order_examples() {
    let r = q();
    let h = &ints(&r, 3, &[2]) * &ints(&r, 0, &[1, 1]);
    assert_eq!(h.order_nu().unwrap(), 3);
    let d = dual(&["e"]);
    let x = &term(g(&d, "e"), 0) + &LaurentSeries::t(&d);
    assert_eq!(x.order_nu().unwrap(), 1);
    assert!(!term(g(&d, "e"), -1).is_invertible());
}

#[test]
fn inversion_examples() {
    let r = q();
    let inv = ints(&r, 0, &[1, -1]).invert(4).unwrap();
    assert_eq!(inv, ints(&r, 0, &[1, 1, 1, 1]).limit_prec(Precision::Finite(4)));
    assert_eq!(LaurentSeries::t(&r).invert(4).unwrap(), LaurentSeries::t_pow(&r, -1));

    let d = dual(&["e"]);
    let one = LaurentSeries::one(&d);
    let e = g(&d, "e");
    let inv = (&one + &term(e.clone(), -1)).invert(4).unwrap();
    assert_eq!(inv, &one - &term(e, -1));
}

#[test]
fn inversion_with_nilpotent_tail_multiplies_to_one() {
    let r = RingSpec::new(vec!["a".into(), "b".into()], vec![3, 2], None).unwrap();
    let (a, b) = (g(&r, "a"), g(&r, "b"));
    let h = &(&(&term(a.clone(), -2) + &ints(&r, 1, &[2, 3])) + &term(b.clone(), -1)) + &term(&a * &b, 4);
    let inv = h.invert(10).unwrap();
    let prod = &h * &inv;
    assert!(prod.prec() >= Precision::Finite(8), "{}", prod.prec());
    assert!(prod.agrees_with(&LaurentSeries::one(&r)));
}

/// `sum_k c_k t^k` with `c_k = (-1)^k` is `1/(1+t)`.
fn geometric_alternating(r: &Ring, lo: i64, n: usize) -> LaurentSeries {
    let cs: Vec<i64> = (0..n).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect();
    ints(r, lo, &cs)
}

#[test]
fn composition_examples() {
    let r = q();
    let g1 = ints(&r, 1, &[1, 1]);
    let got = LaurentSeries::t_pow(&r, -1).compose(&g1, 2).unwrap();
    let oracle = geometric_alternating(&r, -1, 3).limit_prec(Precision::Finite(2));
    assert_eq!(got, oracle);

    let f = ints(&r, -2, &[4, 0, 1, 7]);
    assert_eq!(f.compose(&LaurentSeries::t(&r), 10).unwrap(), f);

    let d = dual(&["e"]);
    let phi = &LaurentSeries::t(&d) + &term(g(&d, "e"), -1);
    assert_eq!(LaurentSeries::t(&d).compose(&phi, 5).unwrap(), phi);
    assert!(matches!(f.compose(&ints(&r, 2, &[1]), 4), Err(Error::NotAdmissible(2))));
}

#[test]
fn composition_over_nilpotents_matches_direct_expansion() {
    // (t^-1 + t^2) o (t + e t^-1) with e^2 = 0:
    // t^-1 (1 + e t^-2)^-1 = t^-1 - e t^-3, (t + e t^-1)^2 = t^2 + 2e.
    let d = dual(&["e"]);
    let e = g(&d, "e");
    let f = &LaurentSeries::t_pow(&d, -1) + &LaurentSeries::t_pow(&d, 2);
    let phi = &LaurentSeries::t(&d) + &term(e.clone(), -1);
    let expected = LaurentSeries::from_terms(
        &d,
        [(-3, -&e), (-1, c(&d, 1)), (0, e.scale(&Rational::from_int(2))), (2, c(&d, 1))],
        Precision::Exact,
    )
    .unwrap();
    assert_eq!(f.compose(&phi, 6).unwrap(), expected);
}

fn catalan(n: i64) -> i64 {
    // C(2n, n) / (n + 1)
    (Rational::binomial(2 * n, n as u32) * Rational::new(1, n + 1)).to_i64().unwrap()
}

#[test]
fn reversion_examples() {
    let r = q();
    let psi = ints(&r, 1, &[1, 1]).comp_inverse(5).unwrap();
    let cs: Vec<i64> = (1..5).map(|n| if n % 2 == 1 { catalan(n - 1) } else { -catalan(n - 1) }).collect();
    assert_eq!(cs, vec![1, -1, 2, -5]);
    assert_eq!(psi, ints(&r, 1, &cs).limit_prec(Precision::Finite(5)));

    let half = LaurentSeries::t(&r).scale_rational(&Rational::new(1, 2));
    assert_eq!(ints(&r, 1, &[2]).comp_inverse(5).unwrap(), half);

    let d = dual(&["e"]);
    let e = g(&d, "e");
    let phi = &LaurentSeries::t(&d) + &term(e.clone(), -1);
    let inv = phi.comp_inverse(5).unwrap();
    assert_eq!(inv, &LaurentSeries::t(&d) - &term(e, -1));
    assert_eq!(phi.compose(&inv, 5).unwrap(), LaurentSeries::t(&d));
}

#[test]
fn reversion_with_mixed_parts() {
    let r = RingSpec::new(vec!["a".into()], vec![3], None).unwrap();
    let a = g(&r, "a");
    let phi = &(&(&LaurentSeries::t(&r) + &LaurentSeries::t_pow(&r, 2)) + &term(a.clone(), -2)) + &term(a, 0);
    let psi = phi.comp_inverse(40).unwrap();
    assert_eq!(psi.prec(), Precision::Finite(40));
    let id = phi.compose(&psi, 8).unwrap();
    assert!(id.prec() >= Precision::Finite(8));
    assert!(id.agrees_with(&LaurentSeries::t(&r)));
    let id2 = psi.compose(&phi, 8).unwrap();
    assert!(id2.prec() >= Precision::Finite(8));
    assert!(id2.agrees_with(&LaurentSeries::t(&r)), "{id2}");
}

#[test]
fn unit_factorization_examples() {
    let d = dual(&["e"]);
    let e = g(&d, "e");
    let one = LaurentSeries::one(&d);
    let vm = &one + &term(e, -1);
    let vp = ints(&d, 0, &[1, 1]);
    let h = &(&ints(&d, 1, &[2]) * &vp) * &vm;
    let fac = h.factorize_unit(8).unwrap();
    assert_eq!(fac.nu, 1);
    assert_eq!(fac.a0, c(&d, 2));
    assert_eq!(fac.v_minus, vm);
    assert_eq!(fac.v_plus, vp);
    assert!(fac.is_well_formed());
    assert_eq!(fac.recompose(), h);

    let r = q();
    let five = ints(&r, 0, &[5]).factorize_unit(4).unwrap();
    assert_eq!((five.nu, five.a0.clone()), (0, c(&r, 5)));
    assert!(five.v_minus.is_exact_one() && five.v_plus.is_exact_one());
    let tm2 = LaurentSeries::t_pow(&r, -2).factorize_unit(4).unwrap();
    assert_eq!((tm2.nu, tm2.a0), (-2, c(&r, 1)));
}

#[test]
fn unit_factorization_of_a_dense_unit() {
    let r = RingSpec::new(vec!["a".into(), "b".into()], vec![3, 2], None).unwrap();
    let (a, b) = (g(&r, "a"), g(&r, "b"));
    let h = &(&(&term(a.clone(), -3) + &term(b, -1)) + &ints(&r, 0, &[3, 1, 2])) + &term(a, 2);
    let fac = h.factorize_unit(10).unwrap();
    assert!(fac.is_well_formed());
    let back = fac.recompose();
    assert!(back.prec() >= Precision::Finite(10));
    assert!(back.agrees_with(&h));
}

#[test]
fn aut_factorization_examples() {
    let r = q();
    let phi = ints(&r, 1, &[1, 1]);
    let (plus, minus) = phi.factorize_aut(6).unwrap();
    assert_eq!(plus, phi);
    assert_eq!(minus, LaurentSeries::t(&r));

    let d = dual(&["e"]);
    let e = g(&d, "e");
    let phi = &LaurentSeries::t(&d) + &term(e.clone(), -1);
    let (plus, minus) = phi.factorize_aut(6).unwrap();
    assert_eq!(plus, LaurentSeries::t(&d));
    assert_eq!(minus, phi);

    let phi = &ints(&d, 1, &[1, 1]) + &term(e, -1);
    let (plus, minus) = phi.factorize_aut(12).unwrap();
    assert!(plus.min_deg() >= 0 && plus.coeff_or_zero(0).is_nilpotent() && plus.coeff_or_zero(1).is_unit());
    assert!(minus.is_exact() && minus.below(0).terms().all(|(_, c)| c.is_nilpotent()));
    assert_eq!(minus.at_or_above(0), LaurentSeries::t(&d));
    let back = minus.compose(&plus, 8).unwrap();
    assert!(back.prec() >= Precision::Finite(8));
    assert!(back.agrees_with(&phi));
}

#[test]
fn display_round_trip_shapes() {
    let d = dual(&["e"]);
    let e = g(&d, "e");
    let s = &(&ints(&d, 0, &[1, 0, 3]) + &term(e.scale(&Rational::new(1, 2)), -2)).limit_prec(Precision::Finite(5))
        - &term(e, 1);
    assert_eq!(alloc::format!("{s}"), "(1/2)*e*t^-2 + 1 - e*t + 3*t^2 + O(t^5)");
    assert_eq!(alloc::format!("{}", LaurentSeries::zero(&d)), "0");
}



