use heisdyn::entropy::{entropy_trace_series, face_entropy_lower_bound};
use heisdyn::expansive::{invert_l1, is_lopsided};
use heisdyn::ring::{q_binomial, GroupAutomorphism};
use heisdyn::{GroupRingElement, LaurentPoly1, Monomial};
use proptest::prelude::*;

fn element(max_terms: usize, span: i64, coeff: i128) -> impl Strategy<Value = GroupRingElement> {
    prop::collection::vec(
        (-span..=span, -span..=span, -span..=span, -coeff..=coeff),
        0..=max_terms,
    )
    .prop_map(|ts| {
        GroupRingElement::from_terms(
            ts.into_iter()
                .map(|(k, l, m, c)| (Monomial::new(k, l, m), c)),
        )
        .unwrap()
    })
}

fn small() -> impl Strategy<Value = GroupRingElement> {
    element(5, 2, 6)
}

/// `c·1 + g` with `‖g‖₁ < |c|`, so lopsided at the identity.
fn lopsided() -> impl Strategy<Value = GroupRingElement> {
    (
        prop::collection::vec((-1i64..=1, -1i64..=1, -1i64..=1, -1i128..=1), 1..=3),
        any::<bool>(),
    )
        .prop_map(|(ts, neg)| {
            let g = GroupRingElement::from_terms(
                ts.into_iter()
                    .filter(|(k, l, m, _)| (*k, *l, *m) != (0, 0, 0))
                    .map(|(k, l, m, c)| (Monomial::new(k, l, m), c)),
            )
            .unwrap();
            let c = 2 * g.l1_norm().unwrap() + 1;
            g.add(&GroupRingElement::constant(if neg { -c } else { c }))
                .unwrap()
        })
}

fn automorphism() -> impl Strategy<Value = GroupAutomorphism> {
    prop::sample::select(vec![
        (1, 1, 0, 1),
        (1, 0, 1, 1),
        (0, 1, 1, 0),
        (0, -1, 1, 0),
        (2, 1, 1, 1),
        (1, -1, 0, 1),
    ])
    .prop_flat_map(|(a, b, c, d)| (Just((a, b, c, d)), -2i64..=2, -2i64..=2))
    .prop_map(|((a, b, c, d), r, s)| GroupAutomorphism::new(a, b, c, d, r, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multiplication_is_associative(a in small(), b in small(), c in small()) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn distributive_on_both_sides(a in small(), b in small(), c in small()) {
        let bc = b.add(&c).unwrap();
        prop_assert_eq!(
            a.mul(&bc).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            bc.mul(&a).unwrap(),
            b.mul(&a).unwrap().add(&c.mul(&a).unwrap()).unwrap()
        );
    }

    #[test]
    fn additive_group_and_unit(a in small(), b in small()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&GroupRingElement::one()).unwrap(), a.clone());
        prop_assert_eq!(GroupRingElement::one().mul(&a).unwrap(), a);
    }

    #[test]
    fn z_is_central(a in small()) {
        let z = GroupRingElement::z();
        prop_assert_eq!(z.mul(&a).unwrap(), a.mul(&z).unwrap());
    }

    #[test]
    fn star_is_an_involutive_anti_automorphism(a in small(), b in small()) {
        prop_assert_eq!(
            a.mul(&b).unwrap().star().unwrap(),
            b.star().unwrap().mul(&a.star().unwrap()).unwrap()
        );
        prop_assert_eq!(a.star().unwrap().star().unwrap(), a);
    }

    #[test]
    fn newton_polygon_of_product_is_minkowski_sum(a in small(), b in small()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let ab = a.mul(&b).unwrap();
        let sum = a.newton_polygon().minkowski_sum(&b.newton_polygon());
        prop_assert_eq!(ab.newton_polygon(), sum);
    }

    #[test]
    fn content_is_multiplicative(a in small(), b in small()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let cab = a.mul(&b).unwrap().content().unwrap();
        let prod = a.content().unwrap().mul(&b.content().unwrap()).unwrap();
        prop_assert_eq!(cab.normalized(), prod.normalized());
    }

    #[test]
    fn automorphisms_are_ring_maps(phi in automorphism(), a in small(), b in small()) {
        let image = phi.apply(&a.mul(&b).unwrap()).unwrap();
        let product = phi.apply(&a).unwrap().mul(&phi.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(image, product);
        let back = phi.inverse().unwrap().apply(&phi.apply(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn q_binomial_symmetry_and_specialization(n in 1u32..=12, k in 0u32..=12) {
        prop_assume!(k <= n);
        let p = q_binomial(n, k).unwrap();
        prop_assert_eq!(&p, &q_binomial(n, n - k).unwrap());
        let binom = (0..k).fold(1i128, |acc, j| acc * (n - j) as i128 / (j + 1) as i128);
        prop_assert_eq!(p.eval_int(1).unwrap(), binom);
        // Pascal: [n;k] = [n−1;k−1] + z^k [n−1;k]
        if n > 1 && k >= 1 && k < n {
            let rhs = q_binomial(n - 1, k - 1)
                .unwrap()
                .add(&q_binomial(n - 1, k).unwrap().shift(k as i64))
                .unwrap();
            prop_assert_eq!(p, rhs);
        }
    }

    #[test]
    fn laurent_gcd_divides(a in prop::collection::vec(-4i128..=4, 1..5),
                           b in prop::collection::vec(-4i128..=4, 1..5),
                           c in prop::collection::vec(-4i128..=4, 1..4)) {
        let (a, b, c) = (
            LaurentPoly1::from_coeffs(&a),
            LaurentPoly1::from_coeffs(&b),
            LaurentPoly1::from_coeffs(&c),
        );
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (ac, bc) = (a.mul(&c).unwrap(), b.mul(&c).unwrap());
        let g = ac.gcd(&bc).unwrap();
        prop_assert!(g.divides(&ac).unwrap() && g.divides(&bc).unwrap());
        prop_assert!(c.divides(&g).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lopsided_elements_invert(f in lopsided()) {
        prop_assert!(is_lopsided(&f).is_some());
        let inv = invert_l1(&f, 1e-8).unwrap();
        prop_assert!(inv.residual_f64() <= 1e-8);
    }

    #[test]
    fn entropy_is_automorphism_invariant(f in lopsided(), phi in automorphism()) {
        let g = phi.apply(&f).unwrap();
        let a = entropy_trace_series(&f, 1e-9).unwrap();
        let b = entropy_trace_series(&g, 1e-9).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error_bound + b.error_bound + 1e-12);
    }

    #[test]
    fn face_bound_below_entropy(f in lopsided()) {
        let h = entropy_trace_series(&f, 1e-9).unwrap();
        let face = face_entropy_lower_bound(&f, 256).unwrap();
        prop_assert!(face.bound <= h.value + h.error_bound + 1e-9,
            "{} > {}", face.bound, h.value);
    }
}
