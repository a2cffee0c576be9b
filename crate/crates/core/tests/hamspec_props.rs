use proptest::prelude::*;

use stellar_core::hamspec::{build_matrix, parse, Body, Coeff, HamiltonianExpr, PauliFactor, Sign, Term};

fn coeff() -> impl Strategy<Value = Coeff> {
    prop_oneof![
        (0.0..100.0f64).prop_map(Coeff::Decimal),
        (1u32..50, 1u32..50).prop_map(|(a, b)| Coeff::Ratio(a.into(), b.into())),
        (1u32..20).prop_map(|d| Coeff::InvSqrt(d.into())),
        (1u32..20).prop_map(|d| Coeff::Sqrt(d.into())),
    ]
}

fn body(arity: usize) -> BoxedStrategy<Body> {
    let factors = prop::collection::vec(prop::sample::select(PauliFactor::ALL.to_vec()), arity);
    let plain = prop_oneof![factors.clone().prop_map(Body::Product), factors.prop_map(Body::Sym)];
    if arity == 2 {
        prop_oneof![plain, (0u8..4, 0u8..4).prop_map(|(i, j)| Body::Pair(i, j))].boxed()
    } else {
        plain.boxed()
    }
}

fn term(arity: usize) -> impl Strategy<Value = Term> {
    (any::<bool>(), any::<bool>(), prop::option::of(coeff()), body(arity)).prop_map(|(minus, negated, coeff, body)| {
        Term { sign: if minus { Sign::Minus } else { Sign::Plus }, negated, coeff, body }
    })
}

fn expression() -> impl Strategy<Value = HamiltonianExpr> {
    (1usize..=4).prop_flat_map(|arity| prop::collection::vec(term(arity), 1..=4)).prop_map(|mut terms| {
        terms[0].sign = Sign::Plus;
        HamiltonianExpr { terms }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn printing_then_parsing_gives_the_same_tree(expr in expression()) {
        let printed = expr.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(&reparsed, &expr, "printed as {}", printed);
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn every_built_matrix_is_hermitian(expr in expression()) {
        let op = build_matrix(&expr).unwrap();
        prop_assert!(op.hermiticity_deficit() <= 1e-12);
        if expr.is_manifestly_symmetric() {
            prop_assert!(op.permutation_deficit() <= 1e-12);
        }
    }
}
