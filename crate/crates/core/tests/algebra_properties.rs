use num_rational::BigRational;
use proptest::prelude::*;
use sg_core::jet_algebra::{Expr, Homogeneity, JetMonomial, Laurent, TrigMode};

fn laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-3i32..=3, -4i64..=4, 1i64..=3), 1..=2).prop_map(|terms| {
        terms
            .into_iter()
            .fold(Laurent::zero(), |acc, (z, n, d)| acc + Laurent::ratio(n, d, z))
    })
}

fn trig() -> impl Strategy<Value = TrigMode> {
    prop_oneof![
        Just(TrigMode::UNIT),
        (1u32..=2).prop_map(TrigMode::cos),
        (1u32..=2).prop_map(|m| TrigMode::sin(m).expect("positive mode")),
    ]
}

fn monomial() -> impl Strategy<Value = JetMonomial> {
    prop::collection::vec((1u32..=3, 1u32..=2), 0..=2).prop_map(JetMonomial::from_pairs)
}

fn expr() -> impl Strategy<Value = Expr> {
    prop::collection::vec((laurent(), monomial(), trig()), 0..=3).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, j, t)| Expr::term(c, j, t))
            .sum()
    })
}

fn trig_free_expr() -> impl Strategy<Value = Expr> {
    prop::collection::vec((laurent(), monomial()), 0..=3).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, j)| Expr::term(c, j, TrigMode::UNIT))
            .sum()
    })
}

fn homogeneous(degree: u32) -> impl Strategy<Value = Expr> {
    // φ_ξ^e₁ φ_ξξ^e₂ with e₁ + 2e₂ = degree, times arbitrary coefficients and trig factors.
    prop::collection::vec((laurent(), 0..=degree / 2, trig()), 1..=3).prop_map(move |terms| {
        terms
            .into_iter()
            .map(|(c, e2, t)| {
                let e1 = degree - 2 * e2;
                let mut pairs = Vec::new();
                if e1 > 0 {
                    pairs.push((1, e1));
                }
                if e2 > 0 {
                    pairs.push((2, e2));
                }
                Expr::term(c, JetMonomial::from_pairs(pairs), t)
            })
            .sum()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_laws(x in expr(), y in expr(), z in expr()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &Expr::one(), x.clone());
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn leibniz_rule_for_d_xi(x in expr(), y in expr()) {
        let lhs = (&x * &y).d_xi();
        let rhs = &x.d_xi() * &y + &x * &y.d_xi();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule_for_onshell_d_tau(x in trig_free_expr(), y in trig_free_expr()) {
        let lhs = (&x * &y).d_tau_onshell().unwrap();
        let rhs = &x.d_tau_onshell().unwrap() * &y + &x * &y.d_tau_onshell().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_is_additive(
        (dx, dy, x, y) in (0u32..=4, 0u32..=4)
            .prop_flat_map(|(dx, dy)| (Just(dx), Just(dy), homogeneous(dx), homogeneous(dy)))
    ) {
        let p = &x * &y;
        if !x.is_zero() {
            prop_assert_eq!(x.degree().unwrap(), Homogeneity::Homogeneous(u64::from(dx)));
        }
        if !p.is_zero() {
            prop_assert_eq!(p.degree().unwrap(), Homogeneity::Homogeneous(u64::from(dx + dy)));
        }
    }

    #[test]
    fn d_xi_raises_degree_by_one((d, x) in (0u32..=4).prop_flat_map(|d| (Just(d), homogeneous(d)))) {
        let dx = x.d_xi();
        if !dx.is_zero() {
            prop_assert_eq!(dx.degree().unwrap(), Homogeneity::Homogeneous(u64::from(d + 1)));
        }
    }

    #[test]
    fn json_round_trip(x in expr()) {
        let s = x.to_json();
        prop_assert_eq!(Expr::from_json(&s).unwrap(), x.clone());
        prop_assert_eq!(Expr::from_json(&s).unwrap().to_json(), s);
    }

    #[test]
    fn substituting_the_coupling_is_a_ring_map(x in expr(), y in expr(), v in 1i64..=3) {
        let v = BigRational::from_integer(v.into());
        let lhs = (&x * &y).substitute_coupling(&v).unwrap();
        let rhs = &x.substitute_coupling(&v).unwrap() * &y.substitute_coupling(&v).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = (&x + &y).substitute_coupling(&v).unwrap();
        let rhs = &x.substitute_coupling(&v).unwrap() + &y.substitute_coupling(&v).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn trig_products_reduce_to_modes() {
    // cos²(aφ) + sin²(aφ) = 1 after product-to-sum.
    let c = Expr::cos_a();
    let s = Expr::sin_a();
    assert_eq!(&(&c * &c) + &(&s * &s), Expr::one());
    // 2 sin cos = sin(2aφ).
    assert_eq!((&c * &s).scale_rational(&BigRational::from_integer(2.into())), Expr::sin_mode(2));
}
