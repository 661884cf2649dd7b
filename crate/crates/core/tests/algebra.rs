use condlin::algebra::{antiderivative, gcd, Polynomial, RationalFunction, Symbol, Q};
use condlin::jet::JetPolynomial;
use condlin::linearize::{generate, FormClass, RootCoefficients};
use condlin::parser::{parse, parse_rational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-3i64..=3, 0i32..=3, 0i32..=3), 1..4).prop_map(|terms| {
        let mut p = RationalFunction::zero();
        for (k, m, n) in terms {
            p = &p + &RationalFunction::laurent_monomial(Q::from_integer(BigInt::from(k)), m, n);
        }
        p.numer().clone()
    })
}

fn nonzero_poly() -> impl Strategy<Value = Polynomial> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn rf() -> impl Strategy<Value = RationalFunction> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn monomial() -> impl Strategy<Value = RationalFunction> {
    let lambda = prop_oneof![Just(1), Just(-1), Just(2), Just(-3)];
    prop_oneof![
        1 => Just(RationalFunction::zero()),
        3 => (lambda, -2i32..=2, -2i32..=2)
            .prop_map(|(k, m, n)| RationalFunction::laurent_monomial(Q::from_integer(BigInt::from(k)), m, n)),
    ]
}

fn root() -> impl Strategy<Value = RootCoefficients> {
    (monomial(), monomial(), monomial(), monomial())
        .prop_map(|(c, g, h, d)| RootCoefficients::new(c, g, h, d))
}

fn jet() -> impl Strategy<Value = JetPolynomial> {
    prop::collection::vec((monomial(), 0u8..=2, 0u8..=1), 1..4).prop_map(|terms| {
        let mut j = JetPolynomial::zero();
        for (c, e1, e2) in terms {
            j.add_term([e1, e2, 0, 0], c);
        }
        j
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_keeps_common_factor(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let g = gcd(&(&a * &c), &(&b * &c));
        prop_assert!(RationalFunction::new(g.clone(), c.clone()).unwrap().is_polynomial());
        prop_assert!(RationalFunction::new(&a * &c, g.clone()).unwrap().is_polynomial());
        prop_assert!(RationalFunction::new(&b * &c, g).unwrap().is_polynomial());
    }

    #[test]
    fn field_operations_invert(p in rf(), q in rf()) {
        prop_assert_eq!(&(&p + &q) - &q, p.clone());
        if !q.is_zero() {
            prop_assert_eq!(&(&p * &q) / &q, p);
        }
    }

    #[test]
    fn canonical_form_is_unique(p in rf(), k in nonzero_poly()) {
        let scaled = RationalFunction::new(&p.numer().clone() * &k, &p.denom().clone() * &k).unwrap();
        prop_assert_eq!(&scaled, &p);
        prop_assert_eq!(scaled.to_string(), p.to_string());
    }

    #[test]
    fn printing_round_trips(p in rf()) {
        prop_assert_eq!(parse_rational(&p.to_string(), &[]).unwrap(), p);
    }

    #[test]
    fn leibniz_rule(p in rf(), q in rf()) {
        for v in [Symbol::X, Symbol::Y] {
            let lhs = (&p * &q).partial_derivative(v);
            let rhs = &(&p.partial_derivative(v) * &q) + &(&p * &q.partial_derivative(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn antiderivative_undoes_derivative(p in rf()) {
        let dp = p.partial_derivative(Symbol::X);
        let back = antiderivative(&dp, Symbol::X).unwrap();
        prop_assert_eq!(back.partial_derivative(Symbol::X), dp);
        prop_assert!((&back - &p).partial_derivative(Symbol::X).is_zero());
    }

    #[test]
    fn total_derivative_is_a_derivation(p in jet(), q in jet()) {
        let d = |j: &JetPolynomial| j.total_derivative().unwrap();
        prop_assert_eq!(d(&(&p * &q)), &(&d(&p) * &q) + &(&p * &d(&q)));
        prop_assert_eq!(d(&(&p + &q)), &d(&p) + &d(&q));
    }

    #[test]
    fn jet_printing_round_trips(p in jet()) {
        let q = &p + &JetPolynomial::u(3);
        prop_assert_eq!(parse(&q.to_string(), &[]).unwrap(), q);
    }

    #[test]
    fn exact_classes_differentiate_third_order_forms(r in root()) {
        let d = |k| generate(&r, k).total_derivative().unwrap();
        prop_assert_eq!(d(FormClass::Third14), generate(&r, FormClass::Fourth18));
        prop_assert_eq!(d(FormClass::Third10), generate(&r, FormClass::Fourth24));
    }
}
