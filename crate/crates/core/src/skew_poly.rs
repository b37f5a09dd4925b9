//! Skew polynomials `D[t; φ]` with φ = τ̃⁻¹ and left coefficients.
//!
//! Multiplication follows `t a = φ(a) t`. For `f = t^n − d` the quotient
//! `S_f` (polynomials of degree `< n` multiplied modulo `f` on the right)
//! is the RIGHT iterated algebra under `Σ f^i x_i ↦ Σ φ^i(x_i) t^i`; for
//! `d ∈ F` every variant coincides with it.

use alloc::{sync::Arc, vec, vec::Vec};

use crate::cyclic_algebra::{CyclicAlgebra, DElement};
use crate::cyclotomic::Automorphism;
use crate::error::{Error, Result};
use crate::iterated::{AElement, IteratedAlgebra};

/// Polynomial `Σ a_i t^i`, trailing zero coefficients trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewPoly {
    coeffs: Vec<DElement>,
}

impl SkewPoly {
    pub fn coeffs(&self) -> &[DElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn trimmed(mut coeffs: Vec<DElement>) -> Self {
        while coeffs.last().is_some_and(DElement::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }
}

#[derive(Clone, Debug)]
pub struct SkewPolyRing {
    alg: Arc<CyclicAlgebra>,
    phi: Automorphism,
}

impl SkewPolyRing {
    /// The ring twisted by `tau⁻¹`.
    pub fn new(alg: Arc<CyclicAlgebra>, tau: Automorphism) -> Self {
        Self { phi: tau.inverse(), alg }
    }

    pub fn for_iterated(a: &IteratedAlgebra) -> Self {
        Self::new(a.d_algebra().clone(), a.twist())
    }

    pub fn algebra(&self) -> &Arc<CyclicAlgebra> {
        &self.alg
    }

    /// φ^k applied coordinatewise.
    pub fn phi_pow(&self, x: &DElement, k: i64) -> DElement {
        self.alg.extend_aut(x, &self.phi.pow(k))
    }

    pub fn poly(&self, coeffs: Vec<DElement>) -> SkewPoly {
        SkewPoly::trimmed(coeffs)
    }

    pub fn zero(&self) -> SkewPoly {
        SkewPoly { coeffs: Vec::new() }
    }

    /// `a t^k`.
    pub fn monomial(&self, a: &DElement, k: usize) -> SkewPoly {
        let mut coeffs = vec![self.alg.zero(); k + 1];
        coeffs[k] = a.clone();
        SkewPoly::trimmed(coeffs)
    }

    /// `t^n − d`.
    pub fn t_n_minus_d(&self, n: usize, d: &DElement) -> SkewPoly {
        let mut coeffs = vec![self.alg.zero(); n + 1];
        coeffs[0] = self.alg.neg(d);
        coeffs[n] = self.alg.one();
        SkewPoly::trimmed(coeffs)
    }

    pub fn add(&self, p: &SkewPoly, q: &SkewPoly) -> SkewPoly {
        let len = p.coeffs.len().max(q.coeffs.len());
        let zero = self.alg.zero();
        SkewPoly::trimmed(
            (0..len)
                .map(|i| self.alg.add(p.coeffs.get(i).unwrap_or(&zero), q.coeffs.get(i).unwrap_or(&zero)))
                .collect(),
        )
    }

    pub fn sub(&self, p: &SkewPoly, q: &SkewPoly) -> SkewPoly {
        let len = p.coeffs.len().max(q.coeffs.len());
        let zero = self.alg.zero();
        SkewPoly::trimmed(
            (0..len)
                .map(|i| self.alg.sub(p.coeffs.get(i).unwrap_or(&zero), q.coeffs.get(i).unwrap_or(&zero)))
                .collect(),
        )
    }

    /// `(Σ a_i t^i)(Σ b_j t^j) = Σ a_i φ^i(b_j) t^(i+j)`.
    pub fn mul(&self, p: &SkewPoly, q: &SkewPoly) -> SkewPoly {
        if p.is_zero() || q.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.alg.zero(); p.coeffs.len() + q.coeffs.len() - 1];
        for (i, a) in p.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in q.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = self.alg.mul(a, &self.phi_pow(b, i as i64));
                out[i + j] = self.alg.add(&out[i + j], &t);
            }
        }
        SkewPoly::trimmed(out)
    }

    /// `(q, r)` with `g = q f + r` and `deg r < deg f`.
    pub fn right_divide(&self, g: &SkewPoly, f: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
        let df = f.degree().ok_or(Error::InvalidInput("division by the zero polynomial".into()))?;
        let lead = f.coeffs[df].clone();
        let mut rem = g.clone();
        let mut quot = vec![self.alg.zero(); g.coeffs.len().saturating_sub(df)];
        while let Some(dr) = rem.degree() {
            if dr < df {
                break;
            }
            let k = dr - df;
            let shifted_lead = self.phi_pow(&lead, k as i64);
            let qk = self.alg.mul(&rem.coeffs[dr], &self.alg.inverse(&shifted_lead)?);
            let sub = self.mul(&self.monomial(&qk, k), f);
            rem = self.sub(&rem, &sub);
            if rem.degree() == Some(dr) {
                return Err(Error::Inconsistent("leading term did not cancel".into()));
            }
            quot[k] = self.alg.add(&quot[k], &qk);
        }
        Ok((SkewPoly::trimmed(quot), rem))
    }

    pub fn right_remainder(&self, g: &SkewPoly, f: &SkewPoly) -> Result<SkewPoly> {
        Ok(self.right_divide(g, f)?.1)
    }

    /// Whether `h` divides `f` on the right.
    pub fn right_divides(&self, h: &SkewPoly, f: &SkewPoly) -> Result<bool> {
        Ok(self.right_remainder(f, h)?.is_zero())
    }

    /// Product in `S_f`: `g h mod_r f`, for `f = t^n − d`.
    pub fn sf_mul(&self, g: &SkewPoly, h: &SkewPoly, f: &SkewPoly) -> Result<SkewPoly> {
        let n = f.degree().ok_or(Error::InvalidInput("f must be nonzero".into()))?;
        let monic = f.coeffs[n] == self.alg.one();
        let sparse = f.coeffs[1..n].iter().all(DElement::is_zero);
        if !monic || !sparse || n < 2 {
            return Err(Error::InvalidInput("f must have the form t^n - d with n >= 2".into()));
        }
        if g.coeffs.len() > n || h.coeffs.len() > n {
            return Err(Error::InvalidInput("operands must have degree below deg f".into()));
        }
        self.right_remainder(&self.mul(g, h), f)
    }

    /// Image of an iterated-algebra element: `Σ f^i x_i ↦ Σ φ^i(x_i) t^i`.
    pub fn from_iterated(&self, x: &AElement) -> SkewPoly {
        SkewPoly::trimmed(x.coords().iter().enumerate().map(|(i, c)| self.phi_pow(c, i as i64)).collect())
    }

    /// Inverse of [`from_iterated`](Self::from_iterated) for an algebra with
    /// `n` coordinates.
    pub fn to_iterated(&self, a: &IteratedAlgebra, p: &SkewPoly) -> Result<AElement> {
        if p.coeffs.len() > a.n() {
            return Err(Error::InvalidInput("degree too large".into()));
        }
        let coords = (0..a.n())
            .map(|i| p.coeffs.get(i).map_or_else(|| self.alg.zero(), |c| self.phi_pow(c, -(i as i64))))
            .collect();
        a.element(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn twist_rule() {
        let d = Arc::new(presets::quaternion_over(presets::tower_6x3()));
        let ring = SkewPolyRing::new(d.clone(), d.tower().tau());
        let th = d.from_k(&presets::theta(d.tower()));
        let t = ring.monomial(&d.one(), 1);
        let lhs = ring.mul(&t, &ring.monomial(&th, 0));
        let expected = ring.monomial(&d.tau_tilde_pow(&th, -1), 1);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn division_identity() {
        let d = Arc::new(presets::quaternion_over(presets::tower_6x3()));
        let ring = SkewPolyRing::new(d.clone(), d.tower().tau());
        let th = d.from_k(&presets::theta(d.tower()));
        let w = d.from_k(&presets::omega(d.tower()));
        let e = d.e();
        let g = ring.poly(vec![th.clone(), e.clone(), w.clone(), d.one(), th.clone()]);
        let f = ring.poly(vec![w.clone(), d.add(&e, &th)]);
        let (q, r) = ring.right_divide(&g, &f).unwrap();
        assert!(r.degree().is_none_or(|k| k < 1));
        assert_eq!(ring.add(&ring.mul(&q, &f), &r), g);
    }
}
