use std::sync::Arc;

use iterstbc_core::presets;
use iterstbc_core::sampling::{a_element, d_element, stream};
use iterstbc_core::skew_poly::SkewPolyRing;
use iterstbc_core::{CyclicAlgebra, DElement, IteratedAlgebra, Variant};
use proptest::prelude::*;

fn quaternions_6x3() -> Arc<CyclicAlgebra> {
    Arc::new(presets::quaternion_over(presets::tower_6x3()))
}

/// RIGHT uses ω (in L); LEFT and MIDDLE use θ (in F) so that Λ lands in F.
fn algebra(variant: Variant) -> IteratedAlgebra {
    let d_alg = quaternions_6x3();
    let t = d_alg.tower().clone();
    let d = match variant {
        Variant::Right => d_alg.from_k(&presets::omega(&t)),
        _ => d_alg.from_k(&presets::theta(&t)),
    };
    IteratedAlgebra::new(d_alg, d, variant).unwrap()
}

fn variant_strategy() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Left), Just(Variant::Middle), Just(Variant::Right)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lambda_represents_left_multiplication(variant in variant_strategy(), seed: u64) {
        let a = algebra(variant);
        let mut rng = stream(seed, 0);
        let x = a_element(&mut rng, &a, 2);
        let y = a_element(&mut rng, &a, 2);
        let lhs = a.phi(&a.mul(&x, &y));
        let rhs = a.big_lambda(&x).unwrap().mul_vec(&a.phi(&y)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn m_matrix_represents_left_multiplication(variant in variant_strategy(), seed: u64) {
        let a = algebra(variant);
        let mut rng = stream(seed, 1);
        let x = a_element(&mut rng, &a, 2);
        let y = a_element(&mut rng, &a, 2);
        prop_assert_eq!(a.m_matrix(&x).apply(&a, &y), a.mul(&x, &y));
    }

    #[test]
    fn determinant_lands_in_the_claimed_field(variant in variant_strategy(), seed: u64) {
        let a = algebra(variant);
        let t = a.d_algebra().tower().clone();
        let x = a_element(&mut stream(seed, 2), &a, 2);
        let det = a.lambda_det(&x).unwrap();
        match variant {
            Variant::Right => prop_assert!(t.in_l(&det)),
            _ => prop_assert!(t.in_f(&det)),
        }
    }

    #[test]
    fn right_lambda_is_conjugate_to_its_twist(seed: u64) {
        let a = algebra(Variant::Right);
        let (p, p_inv) = a.conjugation_matrices().unwrap();
        let x = a_element(&mut stream(seed, 3), &a, 2);
        let lam = a.big_lambda(&x).unwrap();
        let twisted = lam.apply_aut(&a.twist());
        prop_assert_eq!(p.mul(&twisted).unwrap().mul(&p_inv).unwrap(), lam);
    }

    #[test]
    fn skew_quotient_matches_iterated_product(variant in variant_strategy(), seed: u64) {
        let a = algebra(variant);
        let ring = SkewPolyRing::for_iterated(&a);
        let f = ring.t_n_minus_d(a.n(), a.d());
        let mut rng = stream(seed, 4);
        let x = a_element(&mut rng, &a, 2);
        let y = a_element(&mut rng, &a, 2);
        let prod = ring.sf_mul(&ring.from_iterated(&x), &ring.from_iterated(&y), &f).unwrap();
        prop_assert_eq!(ring.to_iterated(&a, &prod).unwrap(), a.mul(&x, &y));
    }

    #[test]
    fn skew_quotient_matches_right_variant_for_any_d(seed: u64) {
        let d_alg = quaternions_6x3();
        let mut rng = stream(seed, 5);
        let d = d_element(&mut rng, &d_alg, 1);
        prop_assume!(!d_alg.norm(&d).is_zero());
        let a = IteratedAlgebra::new(d_alg, d, Variant::Right).unwrap();
        let ring = SkewPolyRing::for_iterated(&a);
        let f = ring.t_n_minus_d(a.n(), a.d());
        let x = a_element(&mut rng, &a, 1);
        let y = a_element(&mut rng, &a, 1);
        let prod = ring.sf_mul(&ring.from_iterated(&x), &ring.from_iterated(&y), &f).unwrap();
        prop_assert_eq!(ring.to_iterated(&a, &prod).unwrap(), a.mul(&x, &y));
    }

    #[test]
    fn right_division_recomposes(seed: u64) {
        let d_alg = quaternions_6x3();
        let ring = SkewPolyRing::new(d_alg.clone(), d_alg.tower().tau());
        let mut rng = stream(seed, 6);
        let g = ring.poly((0..5).map(|_| d_element(&mut rng, &d_alg, 2)).collect());
        let mut lead = d_element(&mut rng, &d_alg, 2);
        if lead.is_zero() {
            lead = d_alg.one();
        }
        let f = ring.poly(vec![d_element(&mut rng, &d_alg, 2), d_element(&mut rng, &d_alg, 2), lead]);
        let (q, r) = ring.right_divide(&g, &f).unwrap();
        prop_assert!(r.degree().is_none_or(|k| k < 2));
        prop_assert_eq!(ring.add(&ring.mul(&q, &f), &r), g);
    }

    #[test]
    fn skew_multiplication_is_associative(seed: u64) {
        let d_alg = quaternions_6x3();
        let ring = SkewPolyRing::new(d_alg.clone(), d_alg.tower().tau());
        let mut rng = stream(seed, 7);
        let mut poly = || ring.poly((0..3).map(|_| d_element(&mut rng, &d_alg, 1)).collect());
        let (p, q, r) = (poly(), poly(), poly());
        prop_assert_eq!(ring.mul(&ring.mul(&p, &q), &r), ring.mul(&p, &ring.mul(&q, &r)));
        if !p.is_zero() && !q.is_zero() {
            let deg = ring.mul(&p, &q).degree();
            prop_assert_eq!(deg, Some(p.degree().unwrap() + q.degree().unwrap()));
        }
    }
}

#[test]
fn identity_maps_to_identity_matrix() {
    for v in Variant::ALL {
        let a = algebra(v);
        let id = a.big_lambda(&a.one()).unwrap();
        let k = a.field();
        for r in 0..6 {
            for c in 0..6 {
                assert_eq!(id[(r, c)], if r == c { k.one() } else { k.zero() });
            }
        }
    }
}

#[test]
fn left_product_of_three_layers() {
    let a = algebra(Variant::Left);
    let dd = a.d_algebra().clone();
    let mut rng = stream(11, 0);
    let x = a_element(&mut rng, &a, 2);
    let y = a_element(&mut rng, &a, 2);
    let (u, v, w) = (&x.coords()[0], &x.coords()[1], &x.coords()[2]);
    let (u2, v2, w2) = (&y.coords()[0], &y.coords()[1], &y.coords()[2]);
    let d = a.d();
    let tt = |z: &DElement, j| dd.tau_tilde_pow(z, j);
    let m = |p: &DElement, q: &DElement| dd.mul(p, q);
    let c0 = dd.add(&dd.add(&m(u, u2), &m(&m(d, &tt(w, 1)), v2)), &m(&m(d, &tt(v, 2)), w2));
    let c1 = dd.add(&dd.add(&m(v, u2), &m(&tt(u, 1), v2)), &m(&m(d, &tt(w, 2)), w2));
    let c2 = dd.add(&dd.add(&m(w, u2), &m(&tt(v, 1), v2)), &m(&tt(u, 2), w2));
    assert_eq!(a.mul(&x, &y).coords(), &[c0, c1, c2]);
}

#[test]
fn skew_quotient_edge_cases() {
    let a = algebra(Variant::Right);
    let dd = a.d_algebra().clone();
    let ring = SkewPolyRing::for_iterated(&a);
    let f = ring.t_n_minus_d(3, a.d());
    let one = ring.monomial(&dd.one(), 0);
    let h = ring.poly(vec![dd.e(), dd.one()]);
    assert_eq!(ring.sf_mul(&one, &h, &f).unwrap(), h);
    let t2 = ring.monomial(&dd.one(), 2);
    let t = ring.monomial(&dd.one(), 1);
    assert_eq!(ring.sf_mul(&t2, &t, &f).unwrap(), ring.monomial(a.d(), 0));
    // (t − 1)(t² + t + 1) = t³ − 1 since the twist fixes 1.
    let lhs = ring.mul(&ring.poly(vec![dd.neg(&dd.one()), dd.one()]), &ring.poly(vec![dd.one(), dd.one(), dd.one()]));
    assert_eq!(lhs, ring.t_n_minus_d(3, &dd.one()));
    let (q, r) = ring.right_divide(&f, &f).unwrap();
    assert_eq!((q, r.is_zero()), (one, true));
    let (q, r) = ring.right_divide(&h, &f).unwrap();
    assert_eq!((q.is_zero(), r), (true, h));
}
