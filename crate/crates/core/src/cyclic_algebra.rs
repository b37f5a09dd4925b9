//! The associative cyclic algebra `D = (K/F, σ, c)`.
//!
//! Elements are written `x = Σ e^k x_k` with `x_k ∈ K`, `e^m = c` and
//! `a e = e σ(a)`, which gives `(e^i a)(e^j b) = e^(i+j) σ^j(a) b`.

use alloc::{sync::Arc, vec, vec::Vec};

use crate::cyclotomic::{Automorphism, CycloElement, CycloField};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tower::TowerSpec;

/// An element of a cyclic algebra: coordinates on `1, e, …, e^(m-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DElement {
    coords: Vec<CycloElement>,
}

impl DElement {
    pub fn coords(&self) -> &[CycloElement] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<CycloElement> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(CycloElement::is_zero)
    }

    /// The K-component if only the constant coordinate is nonzero.
    pub fn as_scalar(&self) -> Option<&CycloElement> {
        self.coords[1..].iter().all(CycloElement::is_zero).then(|| &self.coords[0])
    }
}

#[derive(Clone, Debug)]
pub struct CyclicAlgebra {
    tower: Arc<TowerSpec>,
    c: CycloElement,
}

impl CyclicAlgebra {
    /// `c` must be a nonzero element of `F₀`, so it commutes with everything
    /// and is fixed by τ.
    pub fn new(tower: Arc<TowerSpec>, c: CycloElement) -> Result<Self> {
        if c.is_zero() || !tower.in_f0(&c) {
            return Err(Error::InvalidAlgebra("c must be a nonzero element of F0".into()));
        }
        Ok(Self { tower, c })
    }

    pub fn tower(&self) -> &Arc<TowerSpec> {
        &self.tower
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.tower.field()
    }

    pub fn c(&self) -> &CycloElement {
        &self.c
    }

    pub fn m(&self) -> usize {
        self.tower.m()
    }

    pub fn zero(&self) -> DElement {
        DElement { coords: vec![self.field().zero(); self.m()] }
    }

    pub fn one(&self) -> DElement {
        self.from_k(&self.field().one())
    }

    /// The generator `e`.
    pub fn e(&self) -> DElement {
        self.monomial(1, &self.field().one())
    }

    /// `e^k a`.
    pub fn monomial(&self, k: usize, a: &CycloElement) -> DElement {
        let mut x = self.zero();
        x.coords[k % self.m()] = a.clone();
        x
    }

    pub fn from_k(&self, a: &CycloElement) -> DElement {
        self.monomial(0, a)
    }

    /// Build an element, checking the coordinate count and that each
    /// coordinate lies in K.
    pub fn element(&self, coords: Vec<CycloElement>) -> Result<DElement> {
        if coords.len() != self.m() {
            return Err(Error::DimensionMismatch { expected: self.m(), got: coords.len() });
        }
        if coords.iter().any(|x| !self.tower.in_k(x)) {
            return Err(Error::InvalidInput("coordinate outside K".into()));
        }
        Ok(DElement { coords })
    }

    /// Build an element without the membership check.
    pub fn element_unchecked(&self, coords: Vec<CycloElement>) -> DElement {
        assert_eq!(coords.len(), self.m());
        DElement { coords }
    }

    fn check(&self, x: &DElement) -> Result<()> {
        if x.coords.len() != self.m() || x.coords[0].conductor() != self.tower.conductor() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, x: &DElement, y: &DElement) -> DElement {
        DElement { coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, x: &DElement, y: &DElement) -> DElement {
        DElement { coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self, x: &DElement) -> DElement {
        DElement { coords: x.coords.iter().map(|a| -a).collect() }
    }

    /// `x · a` for `a ∈ K`.
    pub fn mul_k_right(&self, x: &DElement, a: &CycloElement) -> DElement {
        DElement { coords: x.coords.iter().map(|b| b * a).collect() }
    }

    pub fn try_mul(&self, x: &DElement, y: &DElement) -> Result<DElement> {
        self.check(x)?;
        self.check(y)?;
        let m = self.m();
        let mut out = self.zero();
        for (j, yj) in y.coords.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let s = self.tower.sigma().pow(j as i64);
            for (i, xi) in x.coords.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                let mut term = &s.apply(xi) * yj;
                if i + j >= m {
                    term = &term * &self.c;
                }
                let k = (i + j) % m;
                out.coords[k] = &out.coords[k] + &term;
            }
        }
        Ok(out)
    }

    /// Product in D; panics if either element belongs to another algebra.
    pub fn mul(&self, x: &DElement, y: &DElement) -> DElement {
        self.try_mul(x, y).expect("elements of a different algebra")
    }

    /// Extend an automorphism of K fixing `c` to D coordinatewise.
    pub fn extend_aut(&self, x: &DElement, rho: &Automorphism) -> DElement {
        DElement { coords: x.coords.iter().map(|a| rho.apply(a)).collect() }
    }

    /// τ̃^j, the coordinatewise extension of τ^j.
    pub fn tau_tilde_pow(&self, x: &DElement, j: i64) -> DElement {
        self.extend_aut(x, &self.tower.tau().pow(j))
    }

    pub fn tau_tilde(&self, x: &DElement) -> DElement {
        self.tau_tilde_pow(x, 1)
    }

    /// Left regular representation: `λ(x) · coords(y) = coords(x y)`.
    pub fn lambda(&self, x: &DElement) -> Matrix<CycloElement> {
        let m = self.m();
        let sigma = self.tower.sigma();
        let pows: Vec<Automorphism> = (0..m).map(|j| sigma.pow(j as i64)).collect();
        Matrix::from_fn(m, m, |k, j| {
            let v = pows[j].apply(&x.coords[(k + m - j) % m]);
            if k < j {
                &v * &self.c
            } else {
                v
            }
        })
    }

    /// Reduced norm `N_{D/F}(x) = det λ(x)`, an element of F.
    pub fn norm(&self, x: &DElement) -> CycloElement {
        self.lambda(x).det().expect("square matrix")
    }

    pub fn inverse(&self, x: &DElement) -> Result<DElement> {
        let mut rhs = vec![self.field().zero(); self.m()];
        rhs[0] = self.field().one();
        let coords = self.lambda(x).solve(&rhs)?;
        Ok(DElement { coords })
    }

    /// Sufficient test that D is a division algebra: a quaternion algebra
    /// `(K/F, σ, c)` with σ acting as complex conjugation on K (so F is
    /// totally real and K totally imaginary) and `c` a negative rational.
    /// The reduced norm is then a positive definite form at every real place.
    pub fn is_division_quaternion_definite(&self) -> bool {
        if self.m() != 2 {
            return false;
        }
        let negative_rational = self.c.as_rational().is_some_and(|c| c < num_traits::Zero::zero());
        let conj_on_k = self.tower.k_generators().iter().all(|g| self.tower.sigma().apply(g) == g.conj());
        negative_rational && conj_on_k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use proptest::prelude::*;

    fn random_d(alg: &CyclicAlgebra, coeffs: &[i64]) -> DElement {
        let t = alg.tower();
        let kd = t.k_basis().len();
        let coords = (0..alg.m())
            .map(|k| {
                t.k_basis().iter().enumerate().fold(alg.field().zero(), |acc, (j, b)| {
                    &acc + &b.scale_int(coeffs[(k * kd + j) % coeffs.len()])
                })
            })
            .collect();
        alg.element_unchecked(coords)
    }

    #[test]
    fn generator_relations() {
        let d = presets::quaternion_over(presets::tower_6x3());
        let e = d.e();
        assert_eq!(d.mul(&e, &e), d.from_k(d.c()));
        assert_eq!(d.norm(&e), -d.c());
        let w = d.from_k(&presets::omega(d.tower()));
        // ω e = e σ(ω)
        let lhs = d.mul(&w, &e);
        let rhs = d.mul(&e, &d.extend_aut(&w, &d.tower().sigma()));
        assert_eq!(lhs, rhs);
        assert!(d.is_division_quaternion_definite());
        assert!(presets::quaternion_over(presets::tower_8x4()).is_division_quaternion_definite());
    }

    #[test]
    fn lambda_for_quaternions() {
        let d = presets::quaternion_over(presets::tower_6x3());
        let x = random_d(&d, &[1, -2, 0, 3, 1, 1, 2, 0, -1, 1, 0, 2]);
        let l = d.lambda(&x);
        let s = d.tower().sigma();
        assert_eq!(l[(0, 0)], x.coords()[0]);
        assert_eq!(l[(0, 1)], -s.apply(&x.coords()[1]));
        assert_eq!(l[(1, 0)], x.coords()[1]);
        assert_eq!(l[(1, 1)], s.apply(&x.coords()[0]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn associativity_and_norms(a in proptest::collection::vec(-3i64..=3, 12),
                                   b in proptest::collection::vec(-3i64..=3, 12),
                                   c in proptest::collection::vec(-3i64..=3, 12)) {
            let d = presets::quaternion_over(presets::tower_6x3());
            let (x, y, z) = (random_d(&d, &a), random_d(&d, &b), random_d(&d, &c));
            prop_assert_eq!(d.mul(&d.mul(&x, &y), &z), d.mul(&x, &d.mul(&y, &z)));
            let lhs = d.lambda(&x).mul_vec(y.coords()).unwrap();
            prop_assert_eq!(lhs, d.mul(&x, &y).coords().to_vec());
            let nx = d.norm(&x);
            prop_assert!(d.tower().in_f(&nx));
            prop_assert_eq!(d.norm(&d.mul(&x, &y)), &nx * &d.norm(&y));
            if !x.is_zero() {
                prop_assert!(!nx.is_zero());
                let inv = d.inverse(&x).unwrap();
                prop_assert_eq!(d.mul(&x, &inv), d.one());
                prop_assert_eq!(d.mul(&inv, &x), d.one());
            }
            let tt = d.tau_tilde(&d.mul(&x, &y));
            prop_assert_eq!(tt, d.mul(&d.tau_tilde(&x), &d.tau_tilde(&y)));
        }
    }
}
