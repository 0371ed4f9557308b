use proptest::prelude::*;
use punctured_core::group::{Bounds, Sampler, Shape};
use punctured_core::*;

fn ring() -> Ring {
    RingSpec::new(vec!["a".into(), "b".into()], vec![3, 2], None).unwrap()
}

fn sampler(seed: u64, linear: bool) -> Sampler {
    Sampler::new(&ring(), Bounds { linear_phi: linear, ..Bounds::default() }, seed).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ring_units_and_nilpotents(seed in any::<u64>()) {
        let mut s = sampler(seed, true);
        let x = s.element();
        prop_assert_eq!(x.is_unit(), !x.constant_term().is_zero());
        prop_assert_eq!(x.is_nilpotent(), x.constant_term().is_zero());
        let u = s.unit();
        prop_assert!((&u * &u.invert().unwrap()).is_one());
        let (n1, n2) = (s.nilpotent(), s.nilpotent());
        let lhs = (&n1 + &n2).exp_nil().unwrap();
        prop_assert_eq!(lhs, &n1.exp_nil().unwrap() * &n2.exp_nil().unwrap());
        prop_assert!(n1.nil_index().unwrap() as usize <= ring().dimension());
    }

    #[test]
    fn series_inverse(seed in any::<u64>()) {
        let mut s = sampler(seed, false);
        let h = s.unit_series(true).shift((seed % 5) as i64 - 2);
        let prod = &h * &h.invert(16).unwrap();
        prop_assert!(prod.prec() >= Precision::Finite(8));
        prop_assert!(prod.agrees_with(&LaurentSeries::one(&ring())));
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut s = sampler(seed, false);
        let f = s.unit_series(true);
        let (g, k) = (s.parameter(true), s.parameter(true));
        let lhs = f.compose(&g, 20).unwrap().compose(&k, 12).unwrap();
        let rhs = f.compose(&g.compose(&k, 64).unwrap(), 12).unwrap();
        prop_assert!(lhs.prec().min(rhs.prec()) >= Precision::Finite(6));
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn reversion_round_trips(seed in any::<u64>()) {
        let mut s = sampler(seed, false);
        let g = s.parameter(true);
        let psi = g.comp_inverse(40).unwrap();
        let t = LaurentSeries::t(&ring());
        for back in [psi.compose(&g, 8).unwrap(), g.compose(&psi, 8).unwrap()] {
            prop_assert!(back.prec() >= Precision::Finite(4), "{}", back.prec());
            prop_assert!(back.agrees_with(&t));
        }
    }

    #[test]
    fn exact_forms_have_no_residue(seed in any::<u64>()) {
        let mut s = sampler(seed, false);
        let (f, g) = (s.unit_series(true), s.unit_series(true).shift(-1));
        let form = &(&f * &g.derivative()) + &(&g * &f.derivative());
        prop_assert!(form.residue().unwrap().is_zero());
    }

    #[test]
    fn unit_factorization_round_trips(seed in any::<u64>()) {
        let mut s = sampler(seed, false);
        let h = s.unit_series(true).shift((seed % 3) as i64 - 1);
        let fac = h.factorize_unit(12).unwrap();
        prop_assert!(fac.is_well_formed());
        let back = fac.recompose();
        prop_assert!(back.prec() >= Precision::Finite(6));
        prop_assert!(back.agrees_with(&h));
    }

    #[test]
    fn aut_factorization_round_trips(seed in any::<u64>()) {
        let mut s = sampler(seed, true);
        let phi = s.parameter(true);
        let (plus, minus) = phi.factorize_aut(16).unwrap();
        prop_assert!(plus.min_deg() >= 0 && plus.coeff_or_zero(1).is_unit());
        prop_assert!(minus.is_exact() && minus.at_or_above(0) == LaurentSeries::t(&ring()));
        let back = minus.compose(&plus, 8).unwrap();
        prop_assert!(back.prec() >= Precision::Finite(6));
        prop_assert!(back.agrees_with(&phi));
    }

    #[test]
    fn group_axioms(seed in any::<u64>()) {
        let mut s = sampler(seed, true);
        let (x, y, z) = (s.group_elem(Shape::General), s.group_elem(Shape::G0), s.group_elem(Shape::General));
        let lhs = x.mul(&y, 16).unwrap().mul(&z, 16).unwrap();
        let rhs = x.mul(&y.mul(&z, 16).unwrap(), 16).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
        let e = x.mul(&x.inv(24).unwrap(), 12).unwrap();
        prop_assert!(e.agrees_with(&GroupElem::identity(&ring())));
    }

    #[test]
    fn symbol_is_antisymmetric_and_bimultiplicative(seed in any::<u64>()) {
        let mut s = sampler(seed, true);
        let f1 = s.unit_series(true).shift((seed % 3) as i64 - 1);
        let f2 = s.unit_series(true);
        let g = s.unit_series(true).shift(1);
        prop_assert!((&cc(&f1, &g).unwrap() * &cc(&g, &f1).unwrap()).is_one());
        prop_assert_eq!(cc(&(&f1 * &f2), &g).unwrap(), &cc(&f1, &g).unwrap() * &cc(&f2, &g).unwrap());
    }
}
