mod common;

use bcov_core::exact::{parse_ratfunc, parse_rational, rat, Poly, Rational, RationalFunction, TruncatedSeries, Var};
use bcov_core::modular::QuasiModularPoly;
use bcov_core::ring::{hat, unhat, DerivationTable};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rat(), 0..=max_len).prop_map(Poly::new)
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (poly(4), poly(3)).prop_filter_map("zero denominator", |(n, d)| RationalFunction::new(n, d).ok())
}

fn series(order: i64) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(small_rat(), 1..=(order as usize + 1))
        .prop_map(move |cs| TruncatedSeries::from_coeffs(Var::X, 0, cs, order))
}

proptest! {
    #[test]
    fn rational_display_round_trip(r in small_rat()) {
        prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn ratfunc_display_round_trip(f in ratfunc()) {
        let printed = f.to_string();
        prop_assert_eq!(parse_ratfunc(&printed).unwrap(), f, "{}", printed);
    }

    #[test]
    fn ratfunc_field_laws(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b).unwrap() * &b, a);
        }
    }

    #[test]
    fn ratfunc_derivative_is_a_derivation(a in ratfunc(), b in ratfunc()) {
        let lhs = (&a * &b).derivative();
        prop_assert_eq!(lhs, &(&a.derivative() * &b) + &(&a * &b.derivative()));
    }

    #[test]
    fn expansion_is_a_ring_map(a in ratfunc(), b in ratfunc()) {
        // only when both are regular at 0, so orders are not consumed
        prop_assume!(!a.den().coeff(0).is_zero() && !b.den().coeff(0).is_zero());
        let n = 8;
        let lhs = (&a * &b).expand(Var::X, n);
        let rhs = &a.expand(Var::X, n) * &b.expand(Var::X, n);
        prop_assert_eq!(lhs.first_difference(&rhs), None);
    }

    #[test]
    fn series_inverse(s in series(10)) {
        prop_assume!(!s.coeff(0).is_zero());
        let inv = s.inverse().unwrap();
        let one = TruncatedSeries::one(Var::X, 10);
        prop_assert_eq!((&s * &inv).first_difference(&one), None);
    }

    #[test]
    fn series_exp_log(s in series(8)) {
        let t = s.shift(1).truncate(8);
        let back = t.exp().unwrap().log().unwrap();
        prop_assert_eq!(back.first_difference(&t), None);
    }

    #[test]
    fn compose_revert(tail in series(8), a1 in small_rat()) {
        prop_assume!(!a1.is_zero());
        let f = &TruncatedSeries::monomial(Var::X, a1, 1) + &tail.shift(2).truncate(9);
        let f = f.truncate(9);
        let g = f.revert(Var::X).unwrap();
        let id = TruncatedSeries::variable(Var::X);
        prop_assert_eq!(f.compose(&g).unwrap().first_difference(&id), None);
        prop_assert_eq!(g.compose(&f).unwrap().first_difference(&id), None);
    }

    #[test]
    fn ramanujan_derivative_is_a_derivation(i in 0usize..3, j in 0usize..3) {
        let gens = [QuasiModularPoly::e2(), QuasiModularPoly::e4(), QuasiModularPoly::e6()];
        let (a, b) = (&gens[i], &gens[j]);
        let lhs = (a * b).ramanujan_derive();
        let rhs = &(&a.ramanujan_derive() * b) + &(a * &b.ramanujan_derive());
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_leibniz_and_commutation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = common::alphabet_r2();
        let t = DerivationTable::reduced(2);
        let a = common::random_element(&mut rng, &gens, 3, 2);
        let b = common::random_element(&mut rng, &gens, 2, 2);
        for i in 0..2 {
            let lhs = t.derive(&(&a * &b), i).unwrap();
            let rhs = &(&t.derive(&a, i).unwrap() * &b) + &(&a * &t.derive(&b, i).unwrap());
            prop_assert!(lhs == rhs);
        }
        let x = t.derive(&t.derive(&a, 0).unwrap(), 1).unwrap();
        let y = t.derive(&t.derive(&a, 1).unwrap(), 0).unwrap();
        prop_assert!(x == y);
    }

    #[test]
    fn hat_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plain: Vec<_> = common::alphabet_r2().into_iter().filter(|g| !g.is_hatted()).collect();
        let a = common::random_element(&mut rng, &plain, 4, 3);
        prop_assert!(unhat(&hat(&a, 2), 2) == a);
    }

    #[test]
    fn kz_intertwining(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_almost_hol(&mut rng);
        prop_assert_eq!(
            p.almost_hol_derive().kz_constant_term(),
            p.kz_constant_term().ramanujan_derive()
        );
    }
}
