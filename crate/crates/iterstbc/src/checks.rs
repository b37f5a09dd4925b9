//! Randomized exact identity checks behind `algebra-check`.

use iterstbc_core::sampling::{a_element, d_element, stream};
use iterstbc_core::skew_poly::SkewPolyRing;
use iterstbc_core::{IteratedAlgebra, Variant};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `Φ(xy) = Λ(x) Φ(y)`.
    Representation,
    /// The `D`-block matrix of left multiplication reproduces `xy`.
    LeftMultiplication,
    /// `det Λ(x)` lies in F (LEFT, MIDDLE) or L (RIGHT).
    DetField,
    /// `Λ(x) = P τ(Λ(x)) P⁻¹` for RIGHT.
    Conjugation,
    /// The product in `S_f` for `f = t^n − d` matches the algebra product.
    SkewProduct,
    /// Associators with a `D` entry vanish.
    NucleusD,
    /// The twist extended to D has order n.
    TwistOrder,
    /// Multiplying by `d ∈ F` does not depend on the variant.
    VariantsCoincide,
    /// `f^(n-1) f = f f^(n-1) = d`.
    PowerWrap,
}

pub const ALL: [Check; 9] = [
    Check::Representation,
    Check::LeftMultiplication,
    Check::DetField,
    Check::Conjugation,
    Check::SkewProduct,
    Check::NucleusD,
    Check::TwistOrder,
    Check::VariantsCoincide,
    Check::PowerWrap,
];

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Representation => "representation",
            Check::LeftMultiplication => "left_multiplication",
            Check::DetField => "det_field",
            Check::Conjugation => "conjugation",
            Check::SkewProduct => "skew_product",
            Check::NucleusD => "nucleus_d",
            Check::TwistOrder => "twist_order",
            Check::VariantsCoincide => "variants_coincide",
            Check::PowerWrap => "power_wrap",
        }
    }

    fn tag(self) -> u64 {
        ALL.iter().position(|c| *c == self).expect("listed") as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub samples: u64,
    pub failures: u64,
    /// Sample indices that failed, at most ten.
    pub failed_samples: Vec<u64>,
    /// Why the check did not run.
    pub skipped: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn d_in_f(a: &IteratedAlgebra) -> bool {
    a.d().as_scalar().is_some_and(|s| a.d_algebra().tower().in_f(s))
}

fn d_in_l(a: &IteratedAlgebra) -> bool {
    a.d().as_scalar().is_some_and(|s| a.twist().apply(s) == *s)
}

fn skip_reason(a: &IteratedAlgebra, check: Check) -> Option<&'static str> {
    let right = a.variant() == Variant::Right;
    match check {
        Check::Representation | Check::DetField if right && !d_in_l(a) => Some("the RIGHT matrix form needs d in L"),
        Check::DetField if !right && !d_in_f(a) => Some("the LEFT and MIDDLE determinant statement needs d in F"),
        Check::Conjugation if !right => Some("only stated for the RIGHT variant"),
        Check::Conjugation if !d_in_l(a) => Some("the RIGHT matrix form needs d in L"),
        Check::SkewProduct if !right && !d_in_f(a) => Some("S_f matches LEFT and MIDDLE only for d in F"),
        Check::VariantsCoincide if !d_in_f(a) => Some("needs d in F"),
        _ => None,
    }
}

/// One sample of `check`; `Ok(false)` is a failed identity.
fn sample(a: &IteratedAlgebra, check: Check, seed: u64, index: u64, bound: i64) -> iterstbc_core::Result<bool> {
    let mut rng = stream(seed, index * ALL.len() as u64 + check.tag());
    let x = a_element(&mut rng, a, bound);
    let y = a_element(&mut rng, a, bound);
    Ok(match check {
        Check::Representation => a.phi(&a.mul(&x, &y)) == a.big_lambda(&x)?.mul_vec(&a.phi(&y))?,
        Check::LeftMultiplication => a.m_matrix(&x).apply(a, &y) == a.mul(&x, &y),
        Check::DetField => {
            let det = a.lambda_det(&x)?;
            let t = a.d_algebra().tower();
            if a.variant() == Variant::Right {
                t.in_l(&det)
            } else {
                t.in_f(&det)
            }
        }
        Check::Conjugation => {
            let (p, p_inv) = a.conjugation_matrices()?;
            let lam = a.big_lambda(&x)?;
            p.mul(&lam.apply_aut(&a.twist()))?.mul(&p_inv)? == lam
        }
        Check::SkewProduct => {
            let ring = SkewPolyRing::for_iterated(a);
            let f = ring.t_n_minus_d(a.n(), a.d());
            let prod = ring.sf_mul(&ring.from_iterated(&x), &ring.from_iterated(&y), &f)?;
            ring.to_iterated(a, &prod)? == a.mul(&x, &y)
        }
        Check::NucleusD => {
            let z = a.monomial(0, &d_element(&mut rng, a.d_algebra(), bound));
            if a.variant() == Variant::Middle {
                a.associator(&z, &x, &y).is_zero() && a.associator(&x, &y, &z).is_zero()
            } else {
                a.associator(&x, &z, &y).is_zero()
            }
        }
        Check::TwistOrder => {
            let u = d_element(&mut rng, a.d_algebra(), bound);
            a.twist_pow(&u, a.n()) == u
        }
        Check::VariantsCoincide => {
            let p = a.mul(&x, &y);
            Variant::ALL.iter().all(|v| a.with_variant(*v).mul(&x, &y) == p)
        }
        Check::PowerWrap => {
            let f = a.f();
            let head = (1..a.n()).fold(a.one(), |acc, _| a.mul(&acc, &f));
            let d = a.monomial(0, a.d());
            a.mul(&head, &f) == d && a.mul(&f, &head) == d
        }
    })
}

/// Runs `samples` seeded instances of `check` in parallel.
pub fn run(a: &IteratedAlgebra, check: Check, samples: u64, seed: u64, bound: i64) -> iterstbc_core::Result<CheckOutcome> {
    if let Some(reason) = skip_reason(a, check) {
        return Ok(CheckOutcome { check: check.name(), samples: 0, failures: 0, failed_samples: Vec::new(), skipped: Some(reason.into()) });
    }
    // The wrap identity has no randomness.
    let samples = if check == Check::PowerWrap { samples.min(1) } else { samples };
    let results = (0..samples)
        .into_par_iter()
        .map(|i| sample(a, check, seed, i, bound).map(|ok| (i, ok)))
        .collect::<iterstbc_core::Result<Vec<_>>>()?;
    let failed: Vec<u64> = results.iter().filter(|(_, ok)| !ok).map(|(i, _)| *i).collect();
    Ok(CheckOutcome {
        check: check.name(),
        samples,
        failures: failed.len() as u64,
        failed_samples: failed.into_iter().take(10).collect(),
        skipped: None,
    })
}

pub fn run_all(a: &IteratedAlgebra, samples: u64, seed: u64, bound: i64) -> iterstbc_core::Result<Vec<CheckOutcome>> {
    ALL.iter().map(|c| run(a, *c, samples, seed, bound)).collect()
}
