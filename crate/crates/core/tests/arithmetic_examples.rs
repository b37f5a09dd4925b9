use std::sync::Arc;

use iterstbc_core::presets;
use iterstbc_core::sampling::{d_element, stream};
use iterstbc_core::{Automorphism, CycloField, CyclicAlgebra};

#[test]
fn cyclotomic_reductions() {
    let k3 = CycloField::new(3).unwrap();
    let z = k3.zeta_pow(1);
    assert_eq!(&z * &z, &(-&k3.one()) - &z);
    assert_eq!((&k3.one() + &z).inv().unwrap(), -&z);
    assert_eq!(k3.from_int(2).inv().unwrap(), k3.from_rational(&num_rational::BigRational::new(1.into(), 2.into())));

    let k7 = CycloField::new(7).unwrap();
    let theta = &k7.zeta_pow(1) + &k7.zeta_pow(-1);
    let sq = &k7.zeta_pow(2) + &k7.zeta_pow(-2);
    assert_eq!(&theta * &theta, &sq + &k7.from_int(2));
    assert!((theta.embed().re - 1.246_979_603_717_467).abs() < 1e-12);
    assert_eq!(k7.zeta_pow(1).inv().unwrap(), k7.zeta_pow(6));
}

#[test]
fn automorphism_examples() {
    let t = presets::tower_6x3();
    let th = presets::theta(&t);
    let image = &(&th * &th) - &t.field().from_int(2);
    assert_eq!(t.tau().apply(&th), image);
    let k60 = CycloField::new(60).unwrap();
    let i = k60.zeta_pow(15);
    assert_eq!(Automorphism::new(59, 60).unwrap().apply(&i), -&i);
    assert_eq!(Automorphism::identity(60).apply(&i), i);
    let one = k60.one().embed();
    assert_eq!((one.re, one.im), (1.0, 0.0));
}

#[test]
fn tower_membership_and_norms() {
    let t = presets::tower_6x3();
    let (w, th) = (presets::omega(&t), presets::theta(&t));
    assert!(t.in_l(&w) && !t.in_l(&th));
    assert!(t.in_f0(&t.field().from_int(3)));
    assert!(!t.in_f0(&th) && !t.in_f0(&w));
    assert!(t.norm_k_l(&th).is_one());
    assert!(t.norm_k_l(&t.field().one()).is_one());
    let e = presets::tower_8x4();
    assert!(e.norm_k_f(&e.field().zeta_pow(15)).is_one());
}

#[test]
fn quaternion_examples() {
    let d = presets::quaternion_over(presets::tower_6x3());
    assert_eq!(d.mul(&d.e(), &d.e()), d.from_k(&d.field().from_int(-1)));
    assert_eq!(d.norm(&d.e()), -d.c());
    assert!(d.norm(&d.one()).is_one());
    let mut rng = stream(3, 0);
    let x = d_element(&mut rng, &d, 3);
    let y = d_element(&mut rng, &d, 3);
    assert_eq!(d.mul(&x, &d.one()), x);
    // (x₀ + e x₁)(u₀ + e u₁) expanded by hand.
    let s = d.tower().sigma();
    let (x0, x1) = (&x.coords()[0], &x.coords()[1]);
    let (u0, u1) = (&y.coords()[0], &y.coords()[1]);
    let c = d.c();
    let first = &(x0 * u0) + &(&(c * &s.apply(x1)) * u1);
    let second = &(x1 * u0) + &(&s.apply(x0) * u1);
    assert_eq!(d.mul(&x, &y).coords(), &[first, second]);
    // N(x₀ + e x₁) = x₀σ(x₀) + x₁σ(x₁) for c = −1.
    let expected = &(x0 * &s.apply(x0)) + &(x1 * &s.apply(x1));
    assert_eq!(d.norm(&x), expected);
    assert!(expected.embed().re > 0.0);
    let ey = d.lambda(&d.e()).mul_vec(y.coords()).unwrap();
    assert_eq!(ey, d.mul(&d.e(), &y).coords().to_vec());
    assert_eq!(d.tau_tilde(&d.one()), d.one());
}

#[test]
fn split_quaternions_are_not_recognized_as_division() {
    let t = Arc::new(presets::tower_6x3());
    let split = CyclicAlgebra::new(t.clone(), t.field().one()).unwrap();
    assert!(!split.is_division_quaternion_definite());
    let one_minus_e = split.sub(&split.one(), &split.e());
    let one_plus_e = split.add(&split.one(), &split.e());
    assert!(split.mul(&one_minus_e, &one_plus_e).is_zero());
    assert!(presets::quaternion_over(presets::tower_8x4()).is_division_quaternion_definite());
}
