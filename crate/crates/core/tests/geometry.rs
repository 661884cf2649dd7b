use condlin::algebra::{RationalFunction, Q};
use condlin::geometry::{
    complete, conditions_hold, curvature, gauge_search, geodesic_conditions, ChristoffelSet,
};
use condlin::linearize::RootCoefficients;
use condlin::parser::parse_rational;
use num_bigint::BigInt;
use proptest::prelude::*;

fn monomial() -> impl Strategy<Value = RationalFunction> {
    let lambda = prop_oneof![
        Just((1, 1)),
        Just((-1, 1)),
        Just((2, 1)),
        Just((-2, 1)),
        Just((1, 2)),
        Just((-1, 2)),
    ];
    prop_oneof![
        1 => Just(RationalFunction::zero()),
        3 => (lambda, -2i32..=2, -2i32..=2).prop_map(|((p, q), m, n)| {
            RationalFunction::laurent_monomial(Q::new(BigInt::from(p), BigInt::from(q)), m, n)
        }),
    ]
}

fn christoffel() -> impl Strategy<Value = ChristoffelSet> {
    [
        monomial(),
        monomial(),
        monomial(),
        monomial(),
        monomial(),
        monomial(),
    ]
    .prop_map(|[a, b, c, d, e, f]| ChristoffelSet::new(a, b, c, d, e, f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn components_match_conditions(cs in christoffel()) {
        let k = curvature(&cs);
        let r = geodesic_conditions(&cs);
        prop_assert_eq!(&k.r1_112, &r[0]);
        prop_assert_eq!(&k.r1_212, &r[1]);
        prop_assert_eq!(&k.r2_112, &r[2]);
        prop_assert_eq!(&k.r2_212, &-&(&r[0] + &r[3]));
        prop_assert_eq!(k.is_flat(), conditions_hold(&cs));
    }
}

#[test]
fn flat_sets_satisfy_both() {
    let p = |s: &str| parse_rational(s, &["k", "l"]).unwrap();
    for root in [
        RootCoefficients::new(p("x"), p("0"), p("2/x"), p("0")),
        RootCoefficients::new(p("0"), p("2/y"), p("k/2"), p("-l*y")),
        RootCoefficients::new(p("-x/y^2"), p("1/y"), p("2/x"), p("0")),
        RootCoefficients::zero(),
    ] {
        let cs = complete(&root, &gauge_search(&root, 2).unwrap());
        assert!(curvature(&cs).is_flat(), "{}", cs);
        assert!(conditions_hold(&cs), "{}", cs);
        assert_eq!(cs.root(), root);
    }
}

#[test]
fn y_only_quadratic_term_keeps_polar_root_flat() {
    let root = RootCoefficients::new(
        parse_rational("x", &[]).unwrap(),
        parse_rational("y^3", &[]).unwrap(),
        parse_rational("2/x", &[]).unwrap(),
        RationalFunction::zero(),
    );
    let (r1, r2) = condlin::linearize::tresse_criteria(&root);
    assert!(r1.is_zero() && r2.is_zero());
    let cs = complete(&root, &gauge_search(&root, 2).unwrap());
    assert!(curvature(&cs).is_flat());
}
