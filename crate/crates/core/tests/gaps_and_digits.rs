use lacunary_core::coeffield::rat;
use lacunary_core::compgap::{
    gap_report, kmin_search, ruzsa_bound_check, sigmapos_witness, vector_factorizations, w_lower_bound,
    linear_rank, KminConfig, RuzsaStatus,
};
use lacunary_core::digits::{exhaustive_search, family_instance, gap_condition, DigitSearchConfig, GapSide, FAMILIES};
use lacunary_core::{ExponentVector, GaussianRational, SparsePoly, UniPoly};
use proptest::prelude::*;

fn inner(nvars: usize) -> impl Strategy<Value = SparsePoly> {
    inner_with(nvars, vec![1, -1, 2])
}

fn inner_with(nvars: usize, coeffs: Vec<i64>) -> impl Strategy<Value = SparsePoly> {
    proptest::collection::btree_map(proptest::collection::vec(-2i64..=2, nvars), proptest::sample::select(coeffs), 1..=4)
        .prop_map(move |m| {
            SparsePoly::from_terms(nvars, m.into_iter().map(|(e, c)| (ExponentVector(e), GaussianRational::from_int(c))))
        })
}

fn outer() -> impl Strategy<Value = UniPoly> {
    proptest::collection::btree_map(0i64..=3, prop_oneof![Just(1i64), Just(-1), Just(-2)], 1..=3)
        .prop_map(|m| UniPoly::from_coeffs(m.into_iter().map(|(e, c)| (e, GaussianRational::from_int(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gap_identity(f in outer(), g in inner(2)) {
        prop_assume!(f.degree().unwrap() >= 1);
        let r = gap_report(&f, &g).unwrap();
        prop_assert_eq!(r.w - r.c, r.k);
        prop_assert_eq!(r.k, lacunary_core::compose(&f, &g).unwrap().term_count());
        prop_assert_eq!(r.cancelled.len(), r.c);
    }

    // positive coefficients: no power of g loses a sumset element
    #[test]
    fn w_respects_the_sumset_bound(f in outer(), g in inner_with(2, vec![1, 2])) {
        let deg = f.degree().unwrap();
        prop_assume!(deg >= 1);
        let support: Vec<ExponentVector> = g.support().cloned().collect();
        let sigma = 2i64;
        prop_assume!(lacunary_core::compgap::affine_dim(&support) as i64 >= sigma - 1);
        let r = gap_report(&f, &g).unwrap();
        prop_assert!(r.w as i64 >= w_lower_bound(sigma, support.len() as i64, deg));
    }

    #[test]
    fn factorizations_recompute(
        w in proptest::collection::vec(0i64..=4, 2),
        gens in proptest::collection::vec(proptest::collection::vec(0i64..=2, 2), 1..=4),
    ) {
        let gens: Vec<ExponentVector> = gens.into_iter().map(ExponentVector).collect();
        for f in vector_factorizations(&ExponentVector(w), &gens, &[2, 3, 4], None).unwrap() {
            prop_assert!(f.verify(&[2, 3, 4]));
        }
    }
}

#[test]
fn witness_family_for_sigma_at_least_two() {
    for sigma in 2..=5 {
        for h in sigma..=8 {
            let w = sigmapos_witness(sigma, h).unwrap();
            assert!(w.holds, "sigma={sigma} h={h}: k={} expected {}", w.report.k, w.expected_k);
            assert_eq!(w.g.term_count(), h);
        }
    }
}

#[test]
fn ruzsa_on_simplices() {
    for sigma in 1..=4usize {
        let mut simplex = vec![ExponentVector::zero(sigma)];
        simplex.extend((0..sigma).map(|i| ExponentVector::unit(sigma, i)));
        let r = ruzsa_bound_check(&simplex, &simplex).unwrap();
        assert_eq!(r.status, RuzsaStatus::Holds);
        assert_eq!(r.slack, 0, "sigma={sigma}");
    }
}

#[test]
fn kmin_never_beats_the_lower_bound() {
    for sigma in 1..=2usize {
        let cfg = KminConfig {
            sigma,
            lo: -1,
            hi: 2,
            h_max: 3,
            f_family: vec![UniPoly::monomial(2), UniPoly::monomial(3)],
            coeffs: KminConfig::default_coeffs(),
        };
        let best = kmin_search(&cfg).unwrap().best.unwrap();
        assert!(best.k >= 2 * sigma - 1);
        assert_eq!(linear_rank(best.composition.support()), sigma);
    }
}

#[test]
fn non_negative_four_variable_box() {
    // polynomial g in four variables: no composition below ten terms
    let cfg = KminConfig {
        sigma: 4,
        lo: 0,
        hi: 1,
        h_max: 4,
        f_family: vec![UniPoly::monomial(2)],
        coeffs: vec![GaussianRational::from_int(1)],
    };
    let best = kmin_search(&cfg).unwrap().best.unwrap();
    assert!(best.k >= 10, "k={}", best.k);
}

#[test]
fn families_verify_up_to_fifty() {
    for f in FAMILIES {
        for p in f.min_param..=50 {
            let inst = family_instance(f.id, p).unwrap();
            assert!(inst.verified, "{} at {p}", f.id);
        }
    }
}

#[test]
fn search_solutions_have_clean_digits() {
    for x in [2, 3] {
        let cfg = DigitSearchConfig { x, d: 2, k: 5, m_max: 16, digit_set: vec![1] };
        let sols = exhaustive_search(&cfg).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            assert!(s.check(&cfg.digit_set));
            for (id, p) in &s.matches {
                assert_eq!(family_instance(id, *p).unwrap().m, s.m);
            }
        }
    }
    assert!(gap_condition(&[1, 2, 3, 4], GapSide::Leftmost, &rat(3, 4)));
}
