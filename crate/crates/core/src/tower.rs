//! Cyclic Galois towers `F₀ ⊂ F, L ⊂ K` inside a cyclotomic field.
//!
//! `K/F` is cyclic of degree `m` generated by σ, `K/L` is cyclic of degree `n`
//! generated by τ, σ and τ commute, and `F₀ = F ∩ L`. Subfields are given by
//! generators; their Q-bases are found by closing under multiplication.

use alloc::{format, sync::Arc, vec::Vec};

use crate::cyclotomic::{Automorphism, CycloElement, CycloField, Rational};
use crate::error::{Error, Result};
use crate::linalg::{rational_solve, RationalSpan};

/// Q-basis of the subfield generated by `gens`, made of monomials in them.
pub fn field_basis(field: &Arc<CycloField>, gens: &[CycloElement]) -> Vec<CycloElement> {
    let mut span = RationalSpan::new();
    let one = field.one();
    span.insert(&one.coeffs());
    let mut basis = alloc::vec![one];
    let mut i = 0;
    while i < basis.len() {
        for g in gens {
            let p = &basis[i] * g;
            if span.insert(&p.coeffs()) {
                basis.push(p);
            }
        }
        i += 1;
    }
    basis
}

/// Smallest exponent `k` whose automorphism sends each `x` to its image.
pub fn find_exponent(field: &Arc<CycloField>, constraints: &[(CycloElement, CycloElement)]) -> Option<u32> {
    field.units().into_iter().find(|&k| {
        let aut = Automorphism::new(i64::from(k), field.conductor()).expect("unit exponent");
        constraints.iter().all(|(x, y)| aut.apply(x) == *y)
    })
}

/// `x · ρ(x) ⋯ ρ^(order-1)(x)`.
pub fn orbit_product(x: &CycloElement, rho: &Automorphism, order: usize) -> CycloElement {
    let mut acc = x.clone();
    let mut cur = x.clone();
    for _ in 1..order {
        cur = rho.apply(&cur);
        acc = &acc * &cur;
    }
    acc
}

/// `x + ρ(x) + ⋯ + ρ^(order-1)(x)`.
pub fn orbit_sum(x: &CycloElement, rho: &Automorphism, order: usize) -> CycloElement {
    let mut acc = x.clone();
    let mut cur = x.clone();
    for _ in 1..order {
        cur = rho.apply(&cur);
        acc = &acc + &cur;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct TowerSpec {
    field: Arc<CycloField>,
    sigma: Automorphism,
    tau: Automorphism,
    m: usize,
    n: usize,
    k_generators: Vec<CycloElement>,
    f_generators: Vec<CycloElement>,
    l_generators: Vec<CycloElement>,
    k_basis: Vec<CycloElement>,
    k_basis_coeffs: Vec<Vec<Rational>>,
    f_basis: Vec<CycloElement>,
    l_basis: Vec<CycloElement>,
}

impl TowerSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: Arc<CycloField>,
        sigma_exponent: i64,
        tau_exponent: i64,
        m: usize,
        n: usize,
        k_generators: Vec<CycloElement>,
        f_generators: Vec<CycloElement>,
        l_generators: Vec<CycloElement>,
    ) -> Result<Self> {
        let conductor = field.conductor();
        let sigma = Automorphism::new(sigma_exponent, conductor)?;
        let tau = Automorphism::new(tau_exponent, conductor)?;
        if m < 2 || n < 2 {
            return Err(Error::InvalidTower(format!("degrees must be at least 2, got m = {m}, n = {n}")));
        }
        for g in k_generators.iter().chain(&f_generators).chain(&l_generators) {
            if g.conductor() != conductor {
                return Err(Error::ConductorMismatch { left: conductor, right: g.conductor() });
            }
        }
        if sigma.compose(&tau) != tau.compose(&sigma) {
            return Err(Error::InvalidTower("sigma and tau do not commute".into()));
        }
        let k_basis = field_basis(&field, &k_generators);
        let f_basis = field_basis(&field, &f_generators);
        let l_basis = field_basis(&field, &l_generators);
        let k_basis_coeffs: Vec<Vec<Rational>> = k_basis.iter().map(CycloElement::coeffs).collect();
        let tower = Self {
            field,
            sigma,
            tau,
            m,
            n,
            k_generators,
            f_generators,
            l_generators,
            k_basis,
            k_basis_coeffs,
            f_basis,
            l_basis,
        };
        tower.validate()?;
        Ok(tower)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidTower(msg.into()));
        for g in self.f_generators.iter().chain(&self.l_generators) {
            if !self.in_k(g) {
                return bad("F and L must be subfields of K");
            }
        }
        for g in &self.k_generators {
            if !self.in_k(&self.sigma.apply(g)) || !self.in_k(&self.tau.apply(g)) {
                return bad("sigma and tau must map K to itself");
            }
        }
        if self.f_generators.iter().any(|g| self.sigma.apply(g) != *g) {
            return bad("sigma does not fix F");
        }
        if self.l_generators.iter().any(|g| self.tau.apply(g) != *g) {
            return bad("tau does not fix L");
        }
        let dim = self.k_basis.len();
        if dim != self.m * self.f_basis.len() {
            return Err(Error::InvalidTower(format!(
                "[K:Q] = {dim} but m·[F:Q] = {}",
                self.m * self.f_basis.len()
            )));
        }
        if dim != self.n * self.l_basis.len() {
            return Err(Error::InvalidTower(format!(
                "[K:Q] = {dim} but n·[L:Q] = {}",
                self.n * self.l_basis.len()
            )));
        }
        // σ^a τ^b must be nontrivial on K unless a = b = 0, so that the
        // group generated on K is C_m × C_n.
        for a in 0..self.m {
            for b in 0..self.n {
                let rho = self.sigma.pow(a as i64).compose(&self.tau.pow(b as i64));
                let trivial = self.k_generators.iter().all(|g| rho.apply(g) == *g);
                if trivial != (a == 0 && b == 0) {
                    return bad("sigma and tau must generate a group of order m·n on K");
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor()
    }

    pub fn sigma(&self) -> Automorphism {
        self.sigma
    }

    pub fn tau(&self) -> Automorphism {
        self.tau
    }

    /// `[K:F]`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `[K:L]`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_generators(&self) -> &[CycloElement] {
        &self.k_generators
    }

    pub fn f_generators(&self) -> &[CycloElement] {
        &self.f_generators
    }

    pub fn l_generators(&self) -> &[CycloElement] {
        &self.l_generators
    }

    pub fn k_basis(&self) -> &[CycloElement] {
        &self.k_basis
    }

    pub fn f_basis(&self) -> &[CycloElement] {
        &self.f_basis
    }

    pub fn l_basis(&self) -> &[CycloElement] {
        &self.l_basis
    }

    /// Coordinates of `x` on the Q-basis of K, or `None` if `x ∉ K`.
    pub fn k_coordinates(&self, x: &CycloElement) -> Option<Vec<Rational>> {
        rational_solve(&self.k_basis_coeffs, &x.coeffs())
    }

    pub fn in_k(&self, x: &CycloElement) -> bool {
        x.conductor() == self.conductor() && self.k_coordinates(x).is_some()
    }

    pub fn in_f(&self, x: &CycloElement) -> bool {
        self.in_k(x) && self.sigma.apply(x) == *x
    }

    pub fn in_l(&self, x: &CycloElement) -> bool {
        self.in_k(x) && self.tau.apply(x) == *x
    }

    pub fn in_f0(&self, x: &CycloElement) -> bool {
        self.in_f(x) && self.tau.apply(x) == *x
    }

    /// `N_{K/F}(x)`.
    pub fn norm_k_f(&self, x: &CycloElement) -> CycloElement {
        orbit_product(x, &self.sigma, self.m)
    }

    /// `N_{K/L}(x)`.
    pub fn norm_k_l(&self, x: &CycloElement) -> CycloElement {
        orbit_product(x, &self.tau, self.n)
    }

    /// `N_{F/F₀}(x)` for `x ∈ F`.
    pub fn norm_f_f0(&self, x: &CycloElement) -> CycloElement {
        orbit_product(x, &self.tau, self.n)
    }

    pub fn trace_k_l(&self, x: &CycloElement) -> CycloElement {
        orbit_sum(x, &self.tau, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn preset_towers_validate() {
        let t = presets::tower_6x3();
        assert_eq!((t.k_basis().len(), t.f_basis().len(), t.l_basis().len()), (6, 3, 2));
        let t = presets::tower_8x4();
        assert_eq!((t.k_basis().len(), t.f_basis().len(), t.l_basis().len()), (8, 4, 2));
        let t = presets::tower_4x2();
        assert_eq!((t.k_basis().len(), t.f_basis().len(), t.l_basis().len()), (4, 2, 2));
    }

    #[test]
    fn wrong_fixed_field_is_rejected() {
        let t = presets::tower_6x3();
        let omega = t.l_generators()[0].clone();
        let theta = t.f_generators()[0].clone();
        // L swapped with F: τ does not fix θ.
        let err = TowerSpec::new(
            t.field().clone(),
            20,
            16,
            2,
            3,
            t.k_generators().to_vec(),
            alloc::vec![theta.clone()],
            alloc::vec![theta],
        );
        assert!(matches!(err, Err(Error::InvalidTower(_))));
        // ζ ↦ ζ² moves ω.
        let err = TowerSpec::new(
            t.field().clone(),
            20,
            2,
            2,
            3,
            t.k_generators().to_vec(),
            t.f_generators().to_vec(),
            alloc::vec![omega],
        );
        assert!(matches!(err, Err(Error::InvalidTower(_))));
    }

    #[test]
    fn norms_land_in_fixed_fields() {
        let t = presets::tower_8x4();
        for (i, b) in t.k_basis().iter().enumerate() {
            let x = &t.field().from_int(i as i64 + 1) + b;
            assert!(t.in_l(&t.norm_k_l(&x)));
            assert!(t.in_f(&t.norm_k_f(&x)));
            assert!(t.in_f0(&t.norm_f_f0(&t.norm_k_f(&x))));
        }
    }
}
