//! Preset towers, algebras and codes.
//!
//! Automorphism exponents are not hard-coded: they are recovered by searching
//! the units modulo the conductor for the prescribed images of the generators.

use alloc::{sync::Arc, vec, vec::Vec};

use crate::certificates::CitedNonNorm;
use crate::codebook::{CodeSpec, ConstellationKind};
use crate::cyclic_algebra::CyclicAlgebra;
use crate::cyclotomic::{CycloElement, CycloField};
use crate::iterated::{IteratedAlgebra, Variant};
use crate::tower::{find_exponent, TowerSpec};

/// Names accepted by [`tower_by_name`].
pub const TOWER_NAMES: &[&str] = &["6x3", "8x4", "4x2"];

/// Names accepted by [`code_by_name`].
pub const CODE_NAMES: &[&str] = &["6x3-right", "6x3-left", "8x4-right"];

fn build(
    field: Arc<CycloField>,
    m: usize,
    n: usize,
    f_gen: CycloElement,
    f_gen_image: CycloElement,
    l_gen: CycloElement,
    l_gen_image: CycloElement,
) -> TowerSpec {
    let conductor = i64::from(field.conductor());
    // σ is complex conjugation; check it realizes the prescribed action.
    let sigma = conductor - 1;
    assert_eq!(l_gen.conj(), l_gen_image, "complex conjugation must act as sigma on L");
    assert_eq!(f_gen.conj(), f_gen, "complex conjugation must fix F");
    let tau = find_exponent(&field, &[(l_gen.clone(), l_gen.clone()), (f_gen.clone(), f_gen_image)])
        .expect("tau exists");
    TowerSpec::new(
        field,
        sigma,
        i64::from(tau),
        m,
        n,
        vec![l_gen.clone(), f_gen.clone()],
        vec![f_gen],
        vec![l_gen],
    )
    .expect("preset tower is valid")
}

/// `K = Q(ω, θ)` with θ = ζ₇ + ζ₇⁻¹ inside Q(ζ₂₁); `F = Q(θ)`, `L = Q(ω)`.
pub fn tower_6x3() -> TowerSpec {
    let k = CycloField::new(21).expect("valid conductor");
    let omega = k.zeta_pow(7);
    let theta = &k.zeta_pow(3) + &k.zeta_pow(-3);
    let theta_image = &k.zeta_pow(6) + &k.zeta_pow(-6);
    let omega_sq = &omega * &omega;
    build(k, 2, 3, theta, theta_image, omega, omega_sq)
}

/// `K = Q(i, θ)` with θ = ζ₁₅ + ζ₁₅⁻¹ inside Q(ζ₆₀); `F = Q(θ)`, `L = Q(i)`.
pub fn tower_8x4() -> TowerSpec {
    let k = CycloField::new(60).expect("valid conductor");
    let i = k.zeta_pow(15);
    let theta = &k.zeta_pow(4) + &k.zeta_pow(-4);
    let theta_image = &k.zeta_pow(8) + &k.zeta_pow(-8);
    let minus_i = -&i;
    build(k, 2, 4, theta, theta_image, i, minus_i)
}

/// `K = Q(i, √2) = Q(ζ₈)`; `F = Q(√2)`, `L = Q(i)`. A small tower with `n = 2`.
pub fn tower_4x2() -> TowerSpec {
    let k = CycloField::new(8).expect("valid conductor");
    let i = k.zeta_pow(2);
    let sqrt2 = &k.zeta_pow(1) + &k.zeta_pow(-1);
    let minus_sqrt2 = -&sqrt2;
    let minus_i = -&i;
    build(k, 2, 2, sqrt2, minus_sqrt2, i, minus_i)
}

pub fn tower_by_name(name: &str) -> Option<TowerSpec> {
    match name {
        "6x3" => Some(tower_6x3()),
        "8x4" => Some(tower_8x4()),
        "4x2" => Some(tower_4x2()),
        _ => None,
    }
}

/// The quaternion algebra `(K/F, σ, -1)` over a preset tower.
pub fn quaternion_over(tower: TowerSpec) -> CyclicAlgebra {
    let c = tower.field().from_int(-1);
    CyclicAlgebra::new(Arc::new(tower), c).expect("quaternion preset is valid")
}

/// The generator ω of L in the 6×3 tower.
pub fn omega(tower: &TowerSpec) -> CycloElement {
    tower.field().zeta_pow(i64::from(tower.conductor() / 3))
}

/// θ = ζ + ζ⁻¹ for the real-subfield generator used by the 6×3 and 8×4 towers.
pub fn theta(tower: &TowerSpec) -> CycloElement {
    tower.f_generators()[0].clone()
}

/// Non-norm facts quoted for preset towers; they are not verified here.
pub fn cited_non_norms(tower: &TowerSpec) -> Vec<CitedNonNorm> {
    let reference = tower_6x3();
    let same = tower.conductor() == reference.conductor()
        && tower.tau() == reference.tau()
        && tower.sigma() == reference.sigma()
        && tower.k_basis() == reference.k_basis()
        && tower.l_basis() == reference.l_basis();
    if !same {
        return Vec::new();
    }
    vec![CitedNonNorm {
        value: omega(tower),
        citation: "omega is not a norm from Q(omega, theta) to Q(omega), as asserted for the 6x3 code",
    }]
}

fn hex_basis(d: &CyclicAlgebra) -> Vec<CycloElement> {
    let t = d.tower();
    let one = t.field().one();
    let w = omega(t);
    let th = theta(t);
    let th2 = &th * &th;
    let one_plus_w = &one + &w;
    let m12w = &(-&one) - &(&w + &w);
    vec![
        &one_plus_w + &th,
        &m12w + &(&w * &th2),
        &(&m12w + &(&one_plus_w * &th)) + &(&one_plus_w * &th2),
    ]
}

fn qam_basis(d: &CyclicAlgebra) -> Vec<CycloElement> {
    let t = d.tower();
    let k = t.field();
    let i = k.zeta_pow(15);
    let th = theta(t);
    let th2 = &th * &th;
    let th3 = &th2 * &th;
    let alpha = &(&k.one() - &i.scale_int(3)) + &(&i * &th2);
    let a_th = &alpha * &th;
    vec![
        alpha.clone(),
        a_th.clone(),
        &a_th * &(&k.from_int(-3) + &th2),
        &alpha * &(&(&k.from_int(-1) - &th.scale_int(3)) + &(&th2 + &th3)),
    ]
}

/// The 6×3 code with `d = ω` and the RIGHT multiplication rule.
pub fn code_6x3_right() -> CodeSpec {
    let d_alg = Arc::new(quaternion_over(tower_6x3()));
    let d = d_alg.from_k(&omega(d_alg.tower()));
    let basis = hex_basis(&d_alg);
    let a = IteratedAlgebra::new(d_alg, d, Variant::Right).expect("valid preset");
    CodeSpec::new("6x3-right", a, basis, ConstellationKind::Hex).expect("valid preset")
}

/// The 6×3 code with `d = θ` and the LEFT multiplication rule.
pub fn code_6x3_left() -> CodeSpec {
    let d_alg = Arc::new(quaternion_over(tower_6x3()));
    let d = d_alg.from_k(&theta(d_alg.tower()));
    let basis = hex_basis(&d_alg);
    let a = IteratedAlgebra::new(d_alg, d, Variant::Left).expect("valid preset");
    CodeSpec::new("6x3-left", a, basis, ConstellationKind::Hex).expect("valid preset")
}

/// The 8×4 code with `d = i` and the RIGHT multiplication rule.
pub fn code_8x4_right() -> CodeSpec {
    let d_alg = Arc::new(quaternion_over(tower_8x4()));
    let d = d_alg.from_k(&d_alg.tower().field().zeta_pow(15));
    let basis = qam_basis(&d_alg);
    let a = IteratedAlgebra::new(d_alg, d, Variant::Right).expect("valid preset");
    CodeSpec::new("8x4-right", a, basis, ConstellationKind::Qam).expect("valid preset")
}

pub fn code_by_name(name: &str) -> Option<CodeSpec> {
    match name {
        "6x3-right" => Some(code_6x3_right()),
        "6x3-left" => Some(code_6x3_left()),
        "8x4-right" => Some(code_8x4_right()),
        _ => None,
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_automorphism_exponents() {
        let t = tower_6x3();
        assert_eq!((t.sigma().exponent(), t.tau().exponent()), (20, 16));
        assert_eq!(t.tau().order(), 3);
        let t = tower_8x4();
        assert_eq!((t.sigma().exponent(), t.tau().exponent()), (59, 13));
        assert_eq!(t.tau().order(), 4);
        let t = tower_4x2();
        assert_eq!((t.sigma().exponent(), t.tau().exponent()), (7, 5));
    }

    #[test]
    fn theta_minimal_polynomial() {
        // θ = 2cos(2π/7) is a root of x³ + x² − 2x − 1.
        let t = tower_6x3();
        let th = theta(&t);
        let k = t.field();
        let val = &(&(&th.pow(3) + &th.pow(2)) - &th.scale_int(2)) - &k.one();
        assert!(val.is_zero());
        assert!(t.norm_k_l(&th).is_one());
        assert_eq!(t.trace_k_l(&th), k.from_int(-1));
    }
}
