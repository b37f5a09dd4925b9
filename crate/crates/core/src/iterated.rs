//! Iterated algebras `A = D ⊕ f D ⊕ ⋯ ⊕ f^(n-1) D` over a cyclic algebra D.
//!
//! Multiplication is `(f^i x)(f^j y) = f^(i+j) τ̃^j(x) y` for `i + j < n`.
//! When `i + j ≥ n` the result moves to `f^(i+j-n)` and `d` enters the
//! product on the left, in the middle or on the right depending on the
//! [`Variant`]. For every variant `f^n` equals `d`.

use alloc::{sync::Arc, vec, vec::Vec};

use crate::cyclic_algebra::{CyclicAlgebra, DElement};
use crate::cyclotomic::{Automorphism, CycloElement, CycloField};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Where `d` is inserted when a product wraps around.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `d · τ̃^j(x) · y`
    Left,
    /// `τ̃^j(x) · d · y`
    Middle,
    /// `τ̃^j(x) · y · d`
    Right,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Left, Variant::Middle, Variant::Right];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Left => "left",
            Variant::Middle => "middle",
            Variant::Right => "right",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" => Some(Variant::Left),
            "middle" => Some(Variant::Middle),
            "right" => Some(Variant::Right),
            _ => None,
        }
    }
}

/// An element `Σ f^i x_i` of an iterated algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AElement {
    coords: Vec<DElement>,
}

impl AElement {
    pub fn coords(&self) -> &[DElement] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(DElement::is_zero)
    }
}

/// The matrix `M(x)` with `M(x) · coords(y) = coords(x y)`.
///
/// For LEFT and MIDDLE the wrapped entries already contain `d`. For RIGHT,
/// `d` trails the coordinate of `y`, so wrapped entries act as
/// `y_j ↦ entry · y_j · d`; [`LeftMulMatrix::apply`] handles this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftMulMatrix {
    pub entries: Matrix<DElement>,
    pub trailing_d: Option<DElement>,
}

impl LeftMulMatrix {
    pub fn apply(&self, alg: &IteratedAlgebra, y: &AElement) -> AElement {
        let d = alg.d_algebra();
        let n = self.entries.rows();
        let coords = (0..n)
            .map(|k| {
                (0..n).fold(d.zero(), |acc, j| {
                    let mut t = d.mul(&self.entries[(k, j)], &y.coords[j]);
                    if let (Some(dd), true) = (&self.trailing_d, k < j) {
                        t = d.mul(&t, dd);
                    }
                    d.add(&acc, &t)
                })
            })
            .collect();
        AElement { coords }
    }
}

#[derive(Clone, Debug)]
pub struct IteratedAlgebra {
    d_alg: Arc<CyclicAlgebra>,
    d: DElement,
    variant: Variant,
    twist: Automorphism,
    n: usize,
}

impl IteratedAlgebra {
    /// Iterated algebra twisted by the tower's τ, so `n = [K:L]`.
    pub fn new(d_alg: Arc<CyclicAlgebra>, d: DElement, variant: Variant) -> Result<Self> {
        let tau = d_alg.tower().tau();
        Self::with_twist(d_alg, tau, d, variant)
    }

    /// Iterated algebra twisted by an arbitrary automorphism of K commuting
    /// with σ; `n` is its order on K. Powers `τ^s` give the subalgebras
    /// built from `τ^s`.
    pub fn with_twist(d_alg: Arc<CyclicAlgebra>, twist: Automorphism, d: DElement, variant: Variant) -> Result<Self> {
        let tower = d_alg.tower().clone();
        if twist.conductor() != tower.conductor() {
            return Err(Error::ConductorMismatch { left: tower.conductor(), right: twist.conductor() });
        }
        let gens = tower.k_generators();
        if !gens.iter().all(|g| tower.in_k(&twist.apply(g))) {
            return Err(Error::InvalidAlgebra("twist does not preserve K".into()));
        }
        if twist.apply(d_alg.c()) != *d_alg.c() {
            return Err(Error::InvalidAlgebra("twist must fix c".into()));
        }
        let n = (1..=twist.order() as usize)
            .find(|&j| gens.iter().all(|g| twist.pow(j as i64).apply(g) == *g))
            .expect("some power is the identity");
        if n < 2 {
            return Err(Error::InvalidAlgebra("twist acts trivially on K".into()));
        }
        if d.coords().len() != d_alg.m() || d.coords().iter().any(|x| !tower.in_k(x)) {
            return Err(Error::InvalidAlgebra("d must be an element of D".into()));
        }
        if d_alg.norm(&d).is_zero() {
            return Err(Error::InvalidAlgebra("d must be invertible".into()));
        }
        Ok(Self { d_alg, d, variant, twist, n })
    }

    pub fn d_algebra(&self) -> &Arc<CyclicAlgebra> {
        &self.d_alg
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.d_alg.field()
    }

    pub fn d(&self) -> &DElement {
        &self.d
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn twist(&self) -> Automorphism {
        self.twist
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.d_alg.m()
    }

    /// The same construction with another placement of `d`.
    pub fn with_variant(&self, variant: Variant) -> Self {
        Self { variant, ..self.clone() }
    }

    /// The same construction with another `d`.
    pub fn with_d(&self, d: DElement) -> Result<Self> {
        Self::with_twist(self.d_alg.clone(), self.twist, d, self.variant)
    }

    pub fn zero(&self) -> AElement {
        AElement { coords: vec![self.d_alg.zero(); self.n] }
    }

    pub fn one(&self) -> AElement {
        self.monomial(0, &self.d_alg.one())
    }

    /// The generator `f`.
    pub fn f(&self) -> AElement {
        self.monomial(1, &self.d_alg.one())
    }

    /// `f^i x`.
    pub fn monomial(&self, i: usize, x: &DElement) -> AElement {
        let mut a = self.zero();
        a.coords[i % self.n] = x.clone();
        a
    }

    pub fn element(&self, coords: Vec<DElement>) -> Result<AElement> {
        if coords.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: coords.len() });
        }
        if coords.iter().any(|c| c.coords().len() != self.m()) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(AElement { coords })
    }

    pub fn add(&self, x: &AElement, y: &AElement) -> AElement {
        AElement { coords: x.coords.iter().zip(&y.coords).map(|(a, b)| self.d_alg.add(a, b)).collect() }
    }

    pub fn sub(&self, x: &AElement, y: &AElement) -> AElement {
        AElement { coords: x.coords.iter().zip(&y.coords).map(|(a, b)| self.d_alg.sub(a, b)).collect() }
    }

    pub fn neg(&self, x: &AElement) -> AElement {
        AElement { coords: x.coords.iter().map(|a| self.d_alg.neg(a)).collect() }
    }

    /// `τ̃^j(x)` for the twist of this algebra.
    pub fn twist_pow(&self, x: &DElement, j: usize) -> DElement {
        self.d_alg.extend_aut(x, &self.twist.pow(j as i64))
    }

    /// Insert `d` into the wrapped product `a · b` (with `a = τ̃^j(x_i)`).
    fn wrapped(&self, a: &DElement, b: &DElement) -> DElement {
        let d = &self.d_alg;
        match self.variant {
            Variant::Left => d.mul(&d.mul(&self.d, a), b),
            Variant::Middle => d.mul(&d.mul(a, &self.d), b),
            Variant::Right => d.mul(&d.mul(a, b), &self.d),
        }
    }

    pub fn try_mul(&self, x: &AElement, y: &AElement) -> Result<AElement> {
        let n = self.n;
        if x.coords.len() != n || y.coords.len() != n {
            return Err(Error::AlgebraMismatch);
        }
        let d = &self.d_alg;
        let mut out = self.zero();
        for (j, yj) in y.coords.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (i, xi) in x.coords.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                let a = self.twist_pow(xi, j);
                let term = if i + j >= n { self.wrapped(&a, yj) } else { d.try_mul(&a, yj)? };
                let k = (i + j) % n;
                out.coords[k] = d.add(&out.coords[k], &term);
            }
        }
        Ok(out)
    }

    /// Product in A; panics on elements of another algebra.
    pub fn mul(&self, x: &AElement, y: &AElement) -> AElement {
        self.try_mul(x, y).expect("elements of a different algebra")
    }

    /// `(x y) z − x (y z)`.
    pub fn associator(&self, x: &AElement, y: &AElement, z: &AElement) -> AElement {
        self.sub(&self.mul(&self.mul(x, y), z), &self.mul(x, &self.mul(y, z)))
    }

    pub fn m_matrix(&self, x: &AElement) -> LeftMulMatrix {
        let n = self.n;
        let d = &self.d_alg;
        let entries = Matrix::from_fn(n, n, |k, j| {
            let a = self.twist_pow(&x.coords[(k + n - j) % n], j);
            if k >= j {
                return a;
            }
            match self.variant {
                Variant::Left => d.mul(&self.d, &a),
                Variant::Middle => d.mul(&a, &self.d),
                Variant::Right => a,
            }
        });
        let trailing_d = (self.variant == Variant::Right).then(|| self.d.clone());
        LeftMulMatrix { entries, trailing_d }
    }

    /// The scalar `d ∈ L` needed by the RIGHT representation.
    fn right_scalar(&self) -> Result<CycloElement> {
        match self.d.as_scalar() {
            Some(s) if self.twist.apply(s) == *s => Ok(s.clone()),
            _ => Err(Error::Precondition("the RIGHT matrix representation requires d in L".into())),
        }
    }

    /// `Λ(x)`, the `mn × mn` matrix over K with `Φ(x y) = Λ(x) Φ(y)`.
    pub fn big_lambda(&self, x: &AElement) -> Result<Matrix<CycloElement>> {
        let n = self.n;
        let d = &self.d_alg;
        let lambda_d = d.lambda(&self.d);
        let scalar = if self.variant == Variant::Right { Some(self.right_scalar()?) } else { None };
        let blocks: Vec<Vec<Matrix<CycloElement>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        let base = d.lambda(&self.twist_pow(&x.coords[(k + n - j) % n], j));
                        if k >= j {
                            return Ok(base);
                        }
                        match (self.variant, &scalar) {
                            (Variant::Left, _) => lambda_d.mul(&base),
                            (Variant::Middle, _) => base.mul(&lambda_d),
                            (Variant::Right, Some(s)) => Ok(base.scale(s)),
                            (Variant::Right, None) => unreachable!(),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Matrix::from_blocks(&blocks))
    }

    /// `det Λ(x)`.
    pub fn lambda_det(&self, x: &AElement) -> Result<CycloElement> {
        self.big_lambda(x)?.det()
    }

    /// Flatten to K-coordinates, `f`-index major and `e`-index minor.
    pub fn phi(&self, x: &AElement) -> Vec<CycloElement> {
        x.coords.iter().flat_map(|c| c.coords().iter().cloned()).collect()
    }

    /// Inverse of [`phi`](Self::phi).
    pub fn from_phi(&self, v: &[CycloElement]) -> Result<AElement> {
        let m = self.m();
        if v.len() != m * self.n {
            return Err(Error::DimensionMismatch { expected: m * self.n, got: v.len() });
        }
        let coords = v.chunks(m).map(|c| self.d_alg.element_unchecked(c.to_vec())).collect();
        Ok(AElement { coords })
    }

    /// The matrices `(P, P⁻¹)` with `Λ(x) = P · τ(Λ(x)) · P⁻¹` for the RIGHT
    /// variant: `P` has `d·I` in the top-right block and identities on the
    /// block subdiagonal.
    pub fn conjugation_matrices(&self) -> Result<(Matrix<CycloElement>, Matrix<CycloElement>)> {
        let s = self.right_scalar()?;
        let s_inv = s.inv()?;
        let (m, n) = (self.m(), self.n);
        let field = self.field().clone();
        let p = Matrix::from_fn(m * n, m * n, |r, c| {
            let (br, bc) = (r / m, c / m);
            if r % m != c % m {
                field.zero()
            } else if br == 0 && bc == n - 1 {
                s.clone()
            } else if br >= 1 && bc == br - 1 {
                field.one()
            } else {
                field.zero()
            }
        });
        let p_inv = Matrix::from_fn(m * n, m * n, |r, c| {
            let (br, bc) = (r / m, c / m);
            if r % m != c % m {
                field.zero()
            } else if br == n - 1 && bc == 0 {
                s_inv.clone()
            } else if bc == br + 1 {
                field.one()
            } else {
                field.zero()
            }
        });
        Ok((p, p_inv))
    }
}
