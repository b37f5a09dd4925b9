//! Division certificates for iterated algebras.
//!
//! Each certificate checks one sufficient (or necessary and sufficient)
//! condition for `A` to be a division algebra and returns a three-valued
//! [`Verdict`]. Conditions that are only semi-decidable, such as `d` not
//! being a norm, are searched in a bounded box and the bound is recorded.
//! [`certify`] collects every certificate and cross-checks positive verdicts
//! against a small zero-divisor search.

use alloc::{
    format,
    string::String,
    vec,
    vec::Vec,
};

use crate::cyclic_algebra::DElement;
use crate::cyclotomic::CycloElement;
use crate::error::{Error, Result};
use crate::iterated::{IteratedAlgebra, Variant};
use crate::search::{
    default_support, k_coordinate_basis, l_coordinate_basis, linear_factor_search, linear_factor_witness,
    norm_equation_search, quadratic_factor_search, quadratic_factor_witness, zero_divisor_search, FactorWitness,
    SearchSpace, ZeroDivisorOutcome, ZeroDivisorWitness,
};
use crate::tower::TowerSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `z τ̃(z) ⋯ τ̃^(n-1)(z) = d`.
    LinearFactor { z: DElement, factor: FactorWitness },
    /// `t² − u t − v` right-divides `t^n − d`.
    QuadraticFactor { u: DElement, v: DElement, factor: FactorWitness },
    /// `N_{K/L}(x) = d`.
    NormPreimage { x: CycloElement },
    ZeroDivisor(ZeroDivisorWitness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    /// Proved provided `assumption` holds; it was checked up to `searched_box`.
    ProvedAssuming { assumption: String, searched_box: u32, cited: bool },
    Disproved(Witness),
    /// The hypotheses of the criterion fail, so it says nothing.
    Inapplicable { reason: String, witness: Option<Witness> },
    /// No conclusion; `bound` is the box searched, if any.
    Unknown { bound: Option<u32> },
    /// Informational record that is not itself a division claim.
    Recorded { statement: String },
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Proved => "proved",
            Verdict::ProvedAssuming { .. } => "proved-assuming",
            Verdict::Disproved(_) => "disproved",
            Verdict::Inapplicable { .. } => "inapplicable",
            Verdict::Unknown { .. } => "unknown",
            Verdict::Recorded { .. } => "recorded",
        }
    }

    /// Whether the verdict asserts that A is a division algebra.
    pub fn claims_division(&self) -> bool {
        matches!(self, Verdict::Proved | Verdict::ProvedAssuming { .. })
    }

    fn inapplicable(reason: impl Into<String>) -> Self {
        Verdict::Inapplicable { reason: reason.into(), witness: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub name: &'static str,
    /// The condition being tested, in words.
    pub criterion: &'static str,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Inconsistent(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub entries: Vec<CertificateEntry>,
    pub cross_check: ZeroDivisorOutcome,
    pub consistency: Consistency,
}

impl CertificateReport {
    pub fn entry(&self, name: &str) -> Option<&CertificateEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Factor searches, replaceable by parallel drivers.
pub trait FactorSearcher {
    fn linear(&self, a: &IteratedAlgebra, space: &SearchSpace) -> Result<Option<DElement>>;
    fn quadratic(&self, a: &IteratedAlgebra, space: &SearchSpace) -> Result<Option<(DElement, DElement)>>;
}

/// Single-threaded searches from [`crate::search`].
pub struct SequentialSearcher;

impl FactorSearcher for SequentialSearcher {
    fn linear(&self, a: &IteratedAlgebra, space: &SearchSpace) -> Result<Option<DElement>> {
        linear_factor_search(a, space)
    }

    fn quadratic(&self, a: &IteratedAlgebra, space: &SearchSpace) -> Result<Option<(DElement, DElement)>> {
        quadratic_factor_search(a, space)
    }
}

/// Non-norms asserted for a tower by an external citation.
#[derive(Clone, Debug)]
pub struct CitedNonNorm {
    pub value: CycloElement,
    pub citation: &'static str,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

/// Whether F₀ contains a primitive `n`-th root of unity, for prime `n`.
/// Every root of unity in the ambient field is `±ζ^j`.
pub fn f0_has_primitive_root(tower: &TowerSpec, n: usize) -> bool {
    let field = tower.field();
    let one = field.one();
    (0..field.conductor() as i64).any(|j| {
        let z = field.zeta_pow(j);
        [z.clone(), -&z].into_iter().any(|w| w != one && w.pow(n as u32) == one && tower.in_f0(&w))
    })
}

/// The prime-degree hypothesis shared by several criteria.
fn prime_degree_hypothesis(tower: &TowerSpec, n: usize) -> core::result::Result<(), String> {
    if !is_prime(n) {
        return Err(format!("n = {n} is not prime"));
    }
    if n > 3 && !f0_has_primitive_root(tower, n) {
        return Err(format!("F0 has no primitive {n}-th root of unity"));
    }
    Ok(())
}

fn scalar_of(a: &IteratedAlgebra) -> Option<CycloElement> {
    a.d().as_scalar().cloned()
}

const DM_NOT_IN_F0: &str = "n prime (with a primitive n-th root of unity in F0 when n > 3), d in F outside F0 and d^m outside F0";
const TAU_DM: &str = "n prime (with a primitive n-th root of unity in F0 when n > 3), d in F (or d in K outside L for the right variant) and tau(d^m) != d^m";
const NORM_NOT_IN_F0: &str = "right variant, n prime (with a primitive n-th root of unity in F0 when n > 3) and N_{D/F}(d) outside F0";
const QUATERNION_DEG3: &str = "right variant, D a quaternion division algebra, [K:L] = 3, d in L outside F0 and d not a norm from K to L";
const PRODUCT_SEARCH: &str = "t^n - d has no right factor: d != z tau(z) ... tau^(n-1)(z) for all z in D (n prime), plus no quadratic right factor when n = 4";
const LEFT_FACTOR: &str = "if d != z tau(z) ... tau^(n-1)(z) for all z then no x0 + f x1 is a left zero divisor";

/// `d ∈ F∖F₀` with `d^m ∉ F₀`.
pub fn cert_dm_not_in_f0(a: &IteratedAlgebra) -> CertificateEntry {
    let tower = a.d_algebra().tower();
    let entry = |verdict, detail: String| CertificateEntry { name: "dm_not_in_f0", criterion: DM_NOT_IN_F0, verdict, detail };
    if let Err(reason) = prime_degree_hypothesis(tower, a.n()) {
        return entry(Verdict::inapplicable(reason), String::new());
    }
    let Some(d) = scalar_of(a).filter(|d| tower.in_f(d)) else {
        return entry(Verdict::inapplicable("d is not in F"), String::new());
    };
    if tower.in_f0(&d) {
        return entry(Verdict::Unknown { bound: None }, "d lies in F0".into());
    }
    let dm = d.pow(a.m() as u32);
    if tower.in_f0(&dm) {
        entry(Verdict::Unknown { bound: None }, "d^m lies in F0".into())
    } else {
        entry(Verdict::Proved, format!("d^m = {dm} is not fixed by tau"))
    }
}

/// `τ(d^m) ≠ d^m`.
pub fn cert_tau_dm(a: &IteratedAlgebra) -> CertificateEntry {
    let tower = a.d_algebra().tower();
    let entry = |verdict, detail: String| CertificateEntry { name: "tau_dm", criterion: TAU_DM, verdict, detail };
    if let Err(reason) = prime_degree_hypothesis(tower, a.n()) {
        return entry(Verdict::inapplicable(reason), String::new());
    }
    let Some(d) = scalar_of(a).filter(|d| tower.in_k(d)) else {
        return entry(Verdict::inapplicable("d is not an element of K"), String::new());
    };
    let allowed = tower.in_f(&d) || (a.variant() == Variant::Right && !tower.in_l(&d));
    if !allowed {
        let reason = match a.variant() {
            Variant::Right => "d lies in L",
            _ => "d is not in F",
        };
        return entry(Verdict::inapplicable(reason), String::new());
    }
    let dm = d.pow(a.m() as u32);
    if a.twist().apply(&dm) != dm {
        entry(Verdict::Proved, format!("tau moves d^m = {dm}"))
    } else {
        entry(Verdict::Unknown { bound: None }, "tau fixes d^m".into())
    }
}

/// `N_{D/F}(d) ∉ F₀`.
pub fn cert_norm_not_in_f0(a: &IteratedAlgebra) -> CertificateEntry {
    let tower = a.d_algebra().tower();
    let entry = |verdict, detail: String| CertificateEntry { name: "norm_not_in_f0", criterion: NORM_NOT_IN_F0, verdict, detail };
    if let Err(reason) = prime_degree_hypothesis(tower, a.n()) {
        return entry(Verdict::inapplicable(reason), String::new());
    }
    let d_in_f = scalar_of(a).is_some_and(|d| tower.in_f(&d));
    if a.variant() != Variant::Right && !d_in_f {
        return entry(Verdict::inapplicable("needs the right variant or d in F"), String::new());
    }
    let norm = a.d_algebra().norm(a.d());
    if tower.in_f0(&norm) {
        entry(Verdict::Unknown { bound: None }, format!("N(d) = {norm} lies in F0"))
    } else {
        entry(Verdict::Proved, format!("N(d) = {norm} is not in F0"))
    }
}

/// Quaternion criterion for `[K:L] = 3`: `d ∈ L∖F₀` not a norm from K.
pub fn cert_quaternion_deg3(a: &IteratedAlgebra, bound: u32, cited: &[CitedNonNorm]) -> Result<CertificateEntry> {
    let dal = a.d_algebra();
    let tower = dal.tower();
    let entry = |verdict, detail: String| CertificateEntry { name: "quaternion_deg3", criterion: QUATERNION_DEG3, verdict, detail };
    if dal.m() != 2 || a.n() != 3 || a.variant() != Variant::Right {
        return Ok(entry(Verdict::inapplicable("needs m = 2, n = 3 and the right variant"), String::new()));
    }
    if !dal.is_division_quaternion_definite() {
        return Ok(entry(Verdict::inapplicable("D is not recognized as a definite quaternion division algebra"), String::new()));
    }
    if a.twist() != tower.tau() {
        return Ok(entry(Verdict::inapplicable("the twist is not the tower's tau"), String::new()));
    }
    let Some(d) = scalar_of(a).filter(|d| tower.in_l(d) && !tower.in_f0(d)) else {
        return Ok(entry(Verdict::inapplicable("d is not in L outside F0"), String::new()));
    };
    if let Some(x) = norm_equation_search(dal, &d, bound)? {
        let detail = format!("d = N(x) for x = {x}");
        return Ok(entry(
            Verdict::Inapplicable { reason: "d is a norm from K to L".into(), witness: Some(Witness::NormPreimage { x }) },
            detail,
        ));
    }
    let citation = cited.iter().find(|c| c.value == d);
    let assumption = format!("{d} is not a norm from K to L");
    let detail = match citation {
        Some(c) => format!("no norm preimage with coordinates in [-{bound}, {bound}]; non-norm fact: {}", c.citation),
        None => format!("no norm preimage with coordinates in [-{bound}, {bound}]; non-norm status is assumed"),
    };
    Ok(entry(Verdict::ProvedAssuming { assumption, searched_box: bound, cited: citation.is_some() }, detail))
}

/// Whether `t^n − d` factorizations correspond to zero divisors of A.
fn skew_model_applies(a: &IteratedAlgebra) -> bool {
    let tower = a.d_algebra().tower();
    a.variant() == Variant::Right || scalar_of(a).is_some_and(|d| tower.in_f(&d))
}

/// Bounded search for right factors of `t^n − d`.
pub fn cert_product_search(a: &IteratedAlgebra, bound: u32, searcher: &dyn FactorSearcher) -> Result<CertificateEntry> {
    let n = a.n();
    let dal = a.d_algebra();
    let entry = |verdict, detail: String| CertificateEntry { name: "product_search", criterion: PRODUCT_SEARCH, verdict, detail };
    if !is_prime(n) && n != 4 {
        return Ok(entry(Verdict::inapplicable(format!("no criterion for n = {n}")), String::new()));
    }
    if !skew_model_applies(a) {
        return Ok(entry(Verdict::inapplicable("needs the right variant or d in F"), String::new()));
    }
    let linear_space = SearchSpace::new(bound, k_coordinate_basis(dal));
    if let Some(z) = searcher.linear(a, &linear_space)? {
        let factor = linear_factor_witness(a, &z)?;
        let detail = format!("z tau(z) ... tau^{}(z) = d for z with coordinates in [-{bound}, {bound}]", n - 1);
        return Ok(entry(Verdict::Disproved(Witness::LinearFactor { z, factor }), detail));
    }
    let mut detail = format!("no z with coordinates in [-{bound}, {bound}] on the K-basis of D ({} points)", linear_space.points());
    if n == 4 {
        let quad_space = SearchSpace::new(bound, l_coordinate_basis(dal));
        if let Some((u, v)) = searcher.quadratic(a, &quad_space)? {
            let factor = quadratic_factor_witness(a, &u, &v)?;
            return Ok(entry(
                Verdict::Disproved(Witness::QuadraticFactor { u, v, factor }),
                format!("t^2 - u t - v right-divides t^4 - d with u, v in [-{bound}, {bound}] on the L-basis of D"),
            ));
        }
        detail.push_str(&format!(
            "; no quadratic right factor t^2 - u t - v with u, v in [-{bound}, {bound}] on the L-basis of D ({} pairs)",
            quad_space.points() * quad_space.points()
        ));
        detail.push_str(&non_norm_powers(a, bound)?);
    }
    let hypotheses = match prime_degree_hypothesis(dal.tower(), n) {
        Ok(()) => "; the criterion is necessary and sufficient here, so this is a bounded absence of counterexamples",
        Err(_) => "",
    };
    detail.push_str(hypotheses);
    Ok(entry(Verdict::Unknown { bound: Some(bound) }, detail))
}

/// For `n = 4`, `d ∈ L∖F₀`: which of `d, d², d³` have norm preimages in the box.
fn non_norm_powers(a: &IteratedAlgebra, bound: u32) -> Result<String> {
    let dal = a.d_algebra();
    let tower = dal.tower();
    let Some(d) = scalar_of(a).filter(|d| tower.in_l(d) && !tower.in_f0(d)) else {
        return Ok(String::new());
    };
    let mut parts = Vec::new();
    for s in 1..=3u32 {
        let found = norm_equation_search(dal, &d.pow(s), bound)?;
        parts.push(format!("d^{s}: {}", if found.is_some() { "norm found" } else { "no norm preimage in box" }));
    }
    // The non-norm condition on d^s is read with s ranging over 1, 2, 3.
    Ok(format!("; powers of d as norms from K to L (exponents 1 to 3): {}", parts.join(", ")))
}

/// Records whether degree-one elements are known to be non-zero-divisors.
pub fn cert_left_factor(product: &CertificateEntry) -> CertificateEntry {
    let entry = |verdict, detail: String| CertificateEntry { name: "left_factor", criterion: LEFT_FACTOR, verdict, detail };
    match &product.verdict {
        Verdict::Unknown { bound: Some(b) } => entry(
            Verdict::Recorded {
                statement: format!("no x0 + f x1 is a left zero divisor, provided no z outside the box [-{b}, {b}] satisfies the product equation"),
            },
            String::new(),
        ),
        Verdict::Disproved(_) => entry(Verdict::inapplicable("a factor of t^n - d exists"), String::new()),
        _ => entry(Verdict::inapplicable("the product search did not run"), String::new()),
    }
}

/// A positive verdict next to a zero divisor, or next to a disproof, is a
/// contradiction in the implementation or in a cited fact.
pub fn check_consistency(entries: &[CertificateEntry], cross_check: &ZeroDivisorOutcome) -> Consistency {
    let claims: Vec<&str> = entries.iter().filter(|e| e.verdict.claims_division()).map(|e| e.name).collect();
    if claims.is_empty() {
        return Consistency::Consistent;
    }
    if cross_check.witness().is_some() {
        return Consistency::Inconsistent(format!("{} claim division but a zero divisor was found", claims.join(", ")));
    }
    if let Some(e) = entries.iter().find(|e| matches!(e.verdict, Verdict::Disproved(_))) {
        return Consistency::Inconsistent(format!("{} claim division but {} found a factor", claims.join(", "), e.name));
    }
    Consistency::Consistent
}

/// All certificates, the box-1 zero-divisor cross-check and consistency.
pub fn certify(a: &IteratedAlgebra, bound: u32, cited: &[CitedNonNorm], searcher: &dyn FactorSearcher) -> Result<CertificateReport> {
    if bound == 0 {
        return Err(Error::InvalidInput("the search box must be at least 1".into()));
    }
    let product = cert_product_search(a, bound, searcher)?;
    let left = cert_left_factor(&product);
    let entries = vec![
        cert_dm_not_in_f0(a),
        cert_tau_dm(a),
        cert_norm_not_in_f0(a),
        cert_quaternion_deg3(a, bound, cited)?,
        product,
        left,
    ];
    let cross_check = zero_divisor_search(a, 1, &default_support(a))?;
    let consistency = check_consistency(&entries, &cross_check);
    Ok(CertificateReport { entries, cross_check, consistency })
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Verdict::Proved => f.write_str("proved"),
            Verdict::ProvedAssuming { assumption, searched_box, .. } => {
                write!(f, "proved assuming {assumption} (checked to box {searched_box})")
            }
            Verdict::Disproved(_) => f.write_str("disproved"),
            Verdict::Inapplicable { reason, .. } => write!(f, "inapplicable: {reason}"),
            Verdict::Unknown { bound: Some(b) } => write!(f, "unknown (no counterexample within box {b})"),
            Verdict::Unknown { bound: None } => f.write_str("unknown"),
            Verdict::Recorded { statement } => f.write_str(statement),
        }
    }
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::LinearFactor { .. } => "linear-factor",
            Witness::QuadraticFactor { .. } => "quadratic-factor",
            Witness::NormPreimage { .. } => "norm-preimage",
            Witness::ZeroDivisor(_) => "zero-divisor",
        }
    }
}

impl CertificateEntry {
    pub fn summary(&self) -> String {
        format!("{}: {}", self.name, self.verdict)
    }
}
