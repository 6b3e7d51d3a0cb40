use lacunary_core::coeffield::rat;
use lacunary_core::parser::parse_poly;
use lacunary_core::polycore::default_names;
use lacunary_core::{compose, ExponentVector, GaussianRational, SparsePoly, UniPoly};
use num_traits::Zero;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -3i64..=3).prop_map(|(n, d, im)| GaussianRational::new(rat(n, d), rat(im, 2)))
}

fn poly(nvars: usize, max_terms: usize) -> impl Strategy<Value = SparsePoly> {
    proptest::collection::vec((proptest::collection::vec(-3i64..=3, nvars), coeff()), 0..=max_terms)
        .prop_map(move |terms| SparsePoly::from_terms(nvars, terms.into_iter().map(|(e, c)| (ExponentVector(e), c))))
}

fn point(nvars: usize) -> impl Strategy<Value = Vec<GaussianRational>> {
    proptest::collection::vec(
        (1i64..=5, 1i64..=3, -2i64..=2).prop_map(|(n, d, im)| GaussianRational::new(rat(n, d), rat(im, 1))),
        nvars,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_support(p in poly(2, 6), q in poly(2, 6)) {
        for r in [p.add(&q).unwrap(), p.sub(&q).unwrap(), p.mul(&q).unwrap()] {
            prop_assert!(r.terms().all(|(_, c)| !c.is_zero()));
            prop_assert_eq!(r.term_count(), r.support().count());
        }
        prop_assert!(p.sub(&p).unwrap().is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly(2, 5), q in poly(2, 5), x in point(2)) {
        let (pv, qv) = (p.eval(&x).unwrap(), q.eval(&x).unwrap());
        prop_assert_eq!(p.add(&q).unwrap().eval(&x).unwrap(), &pv + &qv);
        prop_assert_eq!(p.mul(&q).unwrap().eval(&x).unwrap(), &pv * &qv);
    }

    #[test]
    fn power_laws(p in poly(2, 4), a in 0u32..4, b in 0u32..4) {
        prop_assert_eq!(p.pow(a + b).unwrap(), p.pow(a).unwrap().mul(&p.pow(b).unwrap()).unwrap());
        prop_assert_eq!(p.pow(a).unwrap().pow(b).unwrap(), p.pow(a * b).unwrap());
    }

    #[test]
    fn composition_commutes_with_evaluation(
        fc in proptest::collection::vec((0i64..=4, coeff()), 1..4),
        g in poly(2, 4),
        x in point(2),
    ) {
        let f = UniPoly::from_coeffs(fc);
        let fg = compose(&f, &g).unwrap();
        let gx = g.eval(&x).unwrap();
        prop_assert_eq!(fg.eval(&x).unwrap(), f.as_sparse().eval(&[gx]).unwrap());
    }

    #[test]
    fn render_parse_round_trip(p in poly(3, 6)) {
        let names = default_names(3);
        let text = p.render(&names);
        prop_assert_eq!(parse_poly(&text, &names).unwrap(), p);
    }
}

#[test]
fn documented_products() {
    let names = default_names(2);
    let p = |s: &str| parse_poly(s, &names).unwrap();
    assert_eq!(p("X1 + X2").mul(&p("X1 - X2")).unwrap(), p("X1^2 - X2^2"));
    assert_eq!(p("X1^-1").add(&p("X1^-1")).unwrap(), p("2*X1^-1"));
    let sq = p("X1 + X2 + X1^2*X2^-1").pow(2).unwrap();
    assert_eq!(sq, p("3*X1^2 + X2^2 + X1^4*X2^-2 + 2*X1*X2 + 2*X1^3*X2^-1"));
    assert_eq!(sq.term_count(), 5);
}
