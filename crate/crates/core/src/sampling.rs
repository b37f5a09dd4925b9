//! Seeded random elements for property checks and surveys.
//!
//! Every draw comes from a ChaCha stream selected by `(seed, index)`, so the
//! `i`-th sample does not depend on how many samples were drawn before it or
//! on which thread draws it.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclic_algebra::{CyclicAlgebra, DElement};
use crate::cyclotomic::CycloElement;
use crate::iterated::{AElement, IteratedAlgebra};
use crate::tower::TowerSpec;

/// Generator for sample `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Integer combination of `basis` with coefficients in `[-bound, bound]`.
pub fn combination(rng: &mut impl Rng, basis: &[CycloElement], bound: i64) -> CycloElement {
    let field = basis[0].field().clone();
    basis.iter().fold(field.zero(), |acc, b| {
        let c = rng.random_range(-bound..=bound);
        if c == 0 {
            acc
        } else {
            &acc + &b.scale_int(c)
        }
    })
}

pub fn k_element(rng: &mut impl Rng, tower: &TowerSpec, bound: i64) -> CycloElement {
    combination(rng, tower.k_basis(), bound)
}

pub fn f_element(rng: &mut impl Rng, tower: &TowerSpec, bound: i64) -> CycloElement {
    combination(rng, tower.f_basis(), bound)
}

pub fn l_element(rng: &mut impl Rng, tower: &TowerSpec, bound: i64) -> CycloElement {
    combination(rng, tower.l_basis(), bound)
}

pub fn d_element(rng: &mut impl Rng, alg: &CyclicAlgebra, bound: i64) -> DElement {
    let coords = (0..alg.m()).map(|_| k_element(rng, alg.tower(), bound)).collect();
    alg.element_unchecked(coords)
}

pub fn a_element(rng: &mut impl Rng, alg: &IteratedAlgebra, bound: i64) -> AElement {
    let coords: Vec<DElement> = (0..alg.n()).map(|_| d_element(rng, alg.d_algebra(), bound)).collect();
    alg.element(coords).expect("coordinates lie in D")
}

/// Like [`a_element`] but never zero.
pub fn nonzero_a_element(rng: &mut impl Rng, alg: &IteratedAlgebra, bound: i64) -> AElement {
    loop {
        let x = a_element(rng, alg, bound);
        if !x.is_zero() {
            return x;
        }
    }
}
