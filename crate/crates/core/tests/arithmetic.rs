use lacunary_core::coeffield::{binom_fractional, integer_root, rat, GaussianRational};
use lacunary_core::{BigInt, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (small_rational(), small_rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
}

#[test]
fn binom_pascal_recurrence() {
    for d in 2..=12u32 {
        assert!(binom_fractional(d, 0).is_one());
        let r = rat(1, d as i64);
        for n in 1..=30u32 {
            let step = (&r - rat(n as i64 - 1, 1)) / rat(n as i64, 1);
            assert_eq!(binom_fractional(d, n), binom_fractional(d, n - 1) * step, "d={d} n={n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn integer_root_inverts_power(digits in proptest::collection::vec(any::<u32>(), 1..6), d in 1u32..=8) {
        // y up to 2^160 > 10^48
        let y = BigInt::from_slice(num_bigint::Sign::Plus, &digits);
        let n = num_traits::pow(y.clone(), d as usize);
        prop_assert_eq!(integer_root(&n, d), Some(y.clone()));
        if d >= 2 && !y.is_zero() {
            prop_assert_eq!(integer_root(&(n + 1u32), d), None);
        }
    }

    #[test]
    fn field_axioms(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(a.norm().is_zero(), a.is_zero());
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        }
    }

    #[test]
    fn display_round_trips(a in gaussian()) {
        let back: GaussianRational = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn nth_roots_are_roots(a in gaussian(), d in 1u32..=5) {
        let p = a.pow(d as i64).unwrap();
        let roots = p.nth_roots(d);
        prop_assert!(roots.contains(&a));
        for r in roots {
            prop_assert_eq!(r.pow(d as i64).unwrap(), p.clone());
        }
    }
}
