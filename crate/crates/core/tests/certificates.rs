use std::sync::Arc;

use iterstbc_core::certificates::{
    cert_dm_not_in_f0, cert_left_factor, cert_norm_not_in_f0, cert_product_search, cert_quaternion_deg3, cert_tau_dm,
    certify, check_consistency, CertificateEntry, Consistency, SequentialSearcher, Verdict, Witness,
};
use iterstbc_core::presets;
use iterstbc_core::search::{default_support, twisted_orbit_product, zero_divisor_search, ZeroDivisorOutcome};
use iterstbc_core::tower::TowerSpec;
use iterstbc_core::{CycloElement, CyclicAlgebra, DElement, IteratedAlgebra, Variant};

fn algebra(tower: TowerSpec, variant: Variant, d: impl Fn(&CyclicAlgebra) -> DElement) -> IteratedAlgebra {
    let d_alg = Arc::new(presets::quaternion_over(tower));
    let dd = d(&d_alg);
    IteratedAlgebra::new(d_alg, dd, variant).unwrap()
}

fn scalar(tower: TowerSpec, variant: Variant, d: impl Fn(&TowerSpec) -> CycloElement) -> IteratedAlgebra {
    algebra(tower, variant, |dal| dal.from_k(&d(dal.tower())))
}

#[test]
fn theta_and_its_conjugate_are_proved_for_the_left_variant() {
    let a = scalar(presets::tower_6x3(), Variant::Left, presets::theta);
    assert_eq!(cert_dm_not_in_f0(&a).verdict, Verdict::Proved);
    assert_eq!(cert_tau_dm(&a).verdict, Verdict::Proved);
    let conj = scalar(presets::tower_6x3(), Variant::Left, |t| {
        let th = presets::theta(t);
        &(&th * &th) - &t.field().from_int(2)
    });
    assert_eq!(cert_dm_not_in_f0(&conj).verdict, Verdict::Proved);
    let rational = scalar(presets::tower_6x3(), Variant::Left, |t| t.field().from_int(3));
    assert!(matches!(cert_dm_not_in_f0(&rational).verdict, Verdict::Unknown { .. }));
}

#[test]
fn norm_criterion_for_the_right_variant() {
    let a = scalar(presets::tower_6x3(), Variant::Right, presets::theta);
    assert_eq!(cert_norm_not_in_f0(&a).verdict, Verdict::Proved);
    let one = scalar(presets::tower_6x3(), Variant::Right, |t| t.field().one());
    assert!(matches!(cert_norm_not_in_f0(&one).verdict, Verdict::Unknown { .. }));
    // N(i) = 1 in the 8x4 quaternions, so the criterion says nothing there.
    let i = scalar(presets::tower_8x4(), Variant::Right, |t| t.field().zeta_pow(15));
    assert!(matches!(cert_norm_not_in_f0(&i).verdict, Verdict::Inapplicable { .. } | Verdict::Unknown { .. }));
    // ω is fixed by τ, so the τ-moving criterion does not apply.
    let w = scalar(presets::tower_6x3(), Variant::Right, presets::omega);
    assert!(!cert_tau_dm(&w).verdict.claims_division());
}

#[test]
fn omega_rests_on_the_cited_non_norm() {
    let tower = presets::tower_6x3();
    let cited = presets::cited_non_norms(&tower);
    let a = scalar(tower, Variant::Right, presets::omega);
    let cert = cert_quaternion_deg3(&a, 1, &cited).unwrap();
    assert!(matches!(cert.verdict, Verdict::ProvedAssuming { cited: true, searched_box: 1, .. }), "{cert:?}");
    let uncited = cert_quaternion_deg3(&a, 1, &[]).unwrap();
    assert!(matches!(uncited.verdict, Verdict::ProvedAssuming { cited: false, .. }));
}

#[test]
fn norm_values_make_the_quaternion_criterion_inapplicable() {
    let one = scalar(presets::tower_6x3(), Variant::Right, |t| t.field().one());
    assert!(matches!(cert_quaternion_deg3(&one, 1, &[]).unwrap().verdict, Verdict::Inapplicable { witness: None, .. }));
    // N(ω + θ) = 3 − ω lies in L outside Q and is found as a norm at box 2.
    let target = scalar(presets::tower_6x3(), Variant::Right, |t| &t.field().from_int(3) - &presets::omega(t));
    let tower = target.d_algebra().tower().clone();
    let preimage = &presets::omega(&tower) + &presets::theta(&tower);
    assert_eq!(tower.norm_k_l(&preimage), *target.d().as_scalar().unwrap());
    let cert = cert_quaternion_deg3(&target, 2, &[]).unwrap();
    match cert.verdict {
        Verdict::Inapplicable { witness: Some(Witness::NormPreimage { x }), .. } => {
            assert_eq!(tower.norm_k_l(&x), *target.d().as_scalar().unwrap());
        }
        other => panic!("expected a norm preimage, got {other:?}"),
    }
}

#[test]
fn trivial_d_is_disproved_by_the_product_search() {
    let a = scalar(presets::tower_6x3(), Variant::Right, |t| t.field().one());
    let cert = cert_product_search(&a, 1, &SequentialSearcher).unwrap();
    let Verdict::Disproved(Witness::LinearFactor { z, factor }) = &cert.verdict else {
        panic!("expected a linear factor, got {:?}", cert.verdict);
    };
    assert_eq!(twisted_orbit_product(&a, z), *a.d());
    let zd = factor.zero_divisor.as_ref().expect("the factor transfers to A");
    assert!(a.mul(&zd.x, &zd.y).is_zero());
    assert!(matches!(cert_left_factor(&cert).verdict, Verdict::Inapplicable { .. }));
}

#[test]
fn constructed_product_is_found_for_n_two() {
    let tower = presets::tower_4x2();
    let d_alg = Arc::new(presets::quaternion_over(tower));
    let k = d_alg.tower().field().clone();
    // i√2 = ζ₈ + ζ₈³, moved by τ.
    let z = d_alg.add(&d_alg.from_k(&(&k.zeta_pow(1) + &k.zeta_pow(3))), &d_alg.e());
    let d = d_alg.mul(&z, &d_alg.tau_tilde(&z));
    let a = IteratedAlgebra::new(d_alg.clone(), d.clone(), Variant::Right).unwrap();
    let cert = cert_product_search(&a, 1, &SequentialSearcher).unwrap();
    let Verdict::Disproved(Witness::LinearFactor { z: found, .. }) = &cert.verdict else {
        panic!("expected a factor, got {:?}", cert.verdict);
    };
    let product = twisted_orbit_product(&a, found);
    assert_eq!(product, d);
    assert_eq!(d_alg.norm(&product), d_alg.norm(&d));
}

#[test]
fn larger_box_keeps_a_disproof() {
    let small = scalar(presets::tower_4x2(), Variant::Right, |t| t.field().one());
    for bound in 1..=2 {
        let cert = cert_product_search(&small, bound, &SequentialSearcher).unwrap();
        assert_eq!(cert.verdict.kind(), "disproved", "box {bound}");
    }
}

#[test]
fn omega_product_search_finds_nothing_at_box_one() {
    let a = scalar(presets::tower_6x3(), Variant::Right, presets::omega);
    let cert = cert_product_search(&a, 1, &SequentialSearcher).unwrap();
    assert_eq!(cert.verdict, Verdict::Unknown { bound: Some(1) });
    assert!(matches!(cert_left_factor(&cert).verdict, Verdict::Recorded { .. }));
}

#[test]
fn reports_are_consistent_and_deterministic() {
    let tower = presets::tower_6x3();
    let cited = presets::cited_non_norms(&tower);
    let a = scalar(tower, Variant::Right, presets::omega);
    let first = certify(&a, 1, &cited, &SequentialSearcher).unwrap();
    let second = certify(&a, 1, &cited, &SequentialSearcher).unwrap();
    assert_eq!(first, second);
    assert_eq!(first.consistency, Consistency::Consistent);
    assert!(matches!(first.cross_check, ZeroDivisorOutcome::NotFound { .. }));
    assert!(certify(&a, 0, &cited, &SequentialSearcher).is_err());

    let left = scalar(presets::tower_6x3(), Variant::Left, presets::theta);
    let report = certify(&left, 1, &[], &SequentialSearcher).unwrap();
    assert_eq!(report.entry("dm_not_in_f0").unwrap().verdict, Verdict::Proved);
    assert_eq!(report.consistency, Consistency::Consistent);
}

#[test]
fn a_claim_next_to_a_zero_divisor_is_inconsistent() {
    let a = scalar(presets::tower_6x3(), Variant::Right, |t| t.field().one());
    let report = certify(&a, 1, &[], &SequentialSearcher).unwrap();
    assert_eq!(report.consistency, Consistency::Consistent);
    assert!(report.cross_check.witness().is_some());
    let forged = CertificateEntry { name: "forged", criterion: "always division", verdict: Verdict::Proved, detail: String::new() };
    let mut entries = report.entries.clone();
    entries.push(forged);
    assert!(matches!(check_consistency(&entries, &report.cross_check), Consistency::Inconsistent(_)));
    // A disproof in the entries contradicts the claim even without a zero divisor.
    let w = scalar(presets::tower_6x3(), Variant::Right, presets::omega);
    let clean = zero_divisor_search(&w, 1, &default_support(&w)).unwrap();
    assert!(matches!(check_consistency(&entries, &clean), Consistency::Inconsistent(_)));
}
