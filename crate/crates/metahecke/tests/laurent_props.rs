use metahecke::laurent::{
    exact_div, rf_normalize, GroupAlgebraElement, QLaurent, RationalFunction,
};
use num::BigRational;
use proptest::prelude::*;

fn element(rank: usize) -> impl Strategy<Value = GroupAlgebraElement> {
    prop::collection::vec(
        (prop::collection::vec(-2i64..=2, rank), -4i64..=4, -3i64..=3),
        0..4,
    )
    .prop_map(move |terms| {
        let mut x = GroupAlgebraElement::zero(rank);
        for (lambda, u, c) in terms {
            x.add_term(
                lambda,
                QLaurent::monomial(u, BigRational::from_integer(c.into())),
            );
        }
        x
    })
}

fn nonzero(rank: usize) -> impl Strategy<Value = GroupAlgebraElement> {
    element(rank).prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms(a in element(2), b in element(2), c in element(2)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &GroupAlgebraElement::one(2), a.clone());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in element(2), b in nonzero(2)) {
        prop_assert_eq!(exact_div(&(&a * &b), &b).unwrap(), a);
    }

    #[test]
    fn normalization_is_idempotent_and_canonical(a in nonzero(1), b in nonzero(1), c in nonzero(1)) {
        let r = rf_normalize(&a, &b).unwrap();
        let again = rf_normalize(r.numer(), r.denom()).unwrap();
        prop_assert_eq!(r.numer(), again.numer());
        prop_assert_eq!(r.denom(), again.denom());
        // Common factors cancel to the same canonical form.
        let scaled = rf_normalize(&(&a * &c), &(&b * &c)).unwrap();
        prop_assert_eq!(r.numer(), scaled.numer());
        prop_assert_eq!(r.denom(), scaled.denom());
    }

    #[test]
    fn field_operations(a in nonzero(1), b in nonzero(1), c in nonzero(1), d in nonzero(1)) {
        let x = RationalFunction::new(a, b).unwrap();
        let y = RationalFunction::new(c, d).unwrap();
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&(&x * &y) * &y.inv().unwrap(), x.clone());
    }
}
