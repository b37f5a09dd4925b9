//! Codewords `Λ(x)` built from complex information symbols.
//!
//! A code with `m = [K:F]` and `n = [K:L]` carries `m n²` symbols. Layer `k`
//! (the coordinate of `f^k`) uses symbols `k·mn .. (k+1)·mn`; inside a layer
//! the `e^j` coordinate is `Σ_i s[j·n + i] θ_i` for the code's L-basis
//! `θ_1, …, θ_n` of an ideal of the ring of integers of K.

use alloc::{format, string::String, vec, vec::Vec};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::cyclotomic::{CycloElement, Rational};
use crate::error::{Error, Result};
use crate::iterated::{AElement, IteratedAlgebra, Variant};
use crate::linalg::{complex_det, Matrix};
use crate::sampling;

/// A symbol `a + b·u` where `u` is `i` (QAM) or `ω` (HEX).
pub type Symbol = [i64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstellationKind {
    /// Gaussian integers.
    Qam,
    /// Eisenstein integers.
    Hex,
}

impl ConstellationKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConstellationKind::Qam => "qam",
            ConstellationKind::Hex => "hex",
        }
    }

    /// `|a + b u|²`.
    pub fn norm_sq(&self, s: Symbol) -> i64 {
        let [a, b] = s;
        match self {
            ConstellationKind::Qam => a * a + b * b,
            ConstellationKind::Hex => a * a - a * b + b * b,
        }
    }

    /// Order of the root of unity `u`.
    fn unit_order(&self) -> u32 {
        match self {
            ConstellationKind::Qam => 4,
            ConstellationKind::Hex => 3,
        }
    }
}

/// Square `M`-point constellation `{a + b u : a, b ∈ {±1, ±3, …, ±(k−1)}}`
/// with `M = k²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constellation {
    kind: ConstellationKind,
    side: u32,
}

impl Constellation {
    pub fn new(kind: ConstellationKind, size: u32) -> Result<Self> {
        let side = (1..=size).find(|k| k * k >= size).unwrap_or(0);
        if size < 4 || side * side != size || side % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "constellation size must be the square of an even number, got {size}"
            )));
        }
        Ok(Self { kind, side })
    }

    /// Parse names like `hex4` or `qam16`.
    pub fn parse(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        let (kind, rest) = if let Some(rest) = lower.strip_prefix("hex") {
            (ConstellationKind::Hex, rest)
        } else if let Some(rest) = lower.strip_prefix("qam") {
            (ConstellationKind::Qam, rest)
        } else {
            return Err(Error::InvalidInput(format!("unknown constellation {name:?}")));
        };
        let size = rest.parse().map_err(|_| Error::InvalidInput(format!("unknown constellation {name:?}")))?;
        Self::new(kind, size)
    }

    pub fn kind(&self) -> ConstellationKind {
        self.kind
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.kind.name(), self.size())
    }

    pub fn size(&self) -> usize {
        (self.side * self.side) as usize
    }

    fn levels(&self) -> impl Iterator<Item = i64> {
        let k = i64::from(self.side);
        (0..k).map(move |j| 2 * j - (k - 1))
    }

    /// Point `index`, ordered by real part then by the `u` part.
    pub fn point(&self, index: usize) -> Symbol {
        let side = self.side as usize;
        let k = i64::from(self.side);
        let level = |j: usize| 2 * j as i64 - (k - 1);
        [level(index / side), level(index % side)]
    }

    pub fn points(&self) -> Vec<Symbol> {
        (0..self.size()).map(|i| self.point(i)).collect()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s.iter().all(|c| self.levels().any(|l| l == *c))
    }

    /// Average energy `E = (1/M) Σ |s|²`.
    pub fn energy(&self) -> Rational {
        let total: i64 = self.points().iter().map(|&s| self.kind.norm_sq(s)).sum();
        BigRational::new(total.into(), (self.size() as i64).into())
    }

    /// Differences `s − s'` of points, including zero.
    pub fn differences(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        for a in self.points() {
            for b in self.points() {
                let d = [a[0] - b[0], a[1] - b[1]];
                if !out.contains(&d) {
                    out.push(d);
                }
            }
        }
        out.sort();
        out
    }
}

/// A matrix code: an iterated algebra, an L-basis and a symbol ring.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    name: String,
    alg: IteratedAlgebra,
    basis: Vec<CycloElement>,
    ring: ConstellationKind,
    unit: CycloElement,
}

impl CodeSpec {
    pub fn new(name: &str, alg: IteratedAlgebra, basis: Vec<CycloElement>, ring: ConstellationKind) -> Result<Self> {
        let tower = alg.d_algebra().tower().clone();
        let n = alg.n();
        if basis.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: basis.len() });
        }
        if basis.iter().any(|b| !tower.in_k(b)) {
            return Err(Error::InvalidInput("basis elements must lie in K".into()));
        }
        let conductor = tower.conductor();
        if !conductor.is_multiple_of(ring.unit_order()) {
            return Err(Error::InvalidInput(format!("{} symbols need a conductor divisible by {}", ring.name(), ring.unit_order())));
        }
        let unit = tower.field().zeta_pow(i64::from(conductor / ring.unit_order()));
        if !tower.in_l(&unit) {
            return Err(Error::InvalidInput("the symbol ring must lie in L".into()));
        }
        // Relative discriminant: the θ_i are L-independent iff det[τ^j(θ_i)] ≠ 0.
        let tau = alg.twist();
        let conj = Matrix::from_fn(n, n, |i, j| tau.pow(j as i64).apply(&basis[i]));
        if conj.det()?.is_zero() {
            return Err(Error::InvalidInput("basis is not linearly independent over L".into()));
        }
        Ok(Self { name: name.into(), alg, basis, ring, unit })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &IteratedAlgebra {
        &self.alg
    }

    pub fn basis(&self) -> &[CycloElement] {
        &self.basis
    }

    pub fn ring(&self) -> ConstellationKind {
        self.ring
    }

    /// `i` or `ω`.
    pub fn unit(&self) -> &CycloElement {
        &self.unit
    }

    /// `m n²`.
    pub fn symbol_count(&self) -> usize {
        self.alg.m() * self.alg.n() * self.alg.n()
    }

    /// Symbols per layer, `m n`.
    pub fn layer_size(&self) -> usize {
        self.alg.m() * self.alg.n()
    }

    /// Size of the square codeword matrices.
    pub fn matrix_size(&self) -> usize {
        self.layer_size()
    }

    pub fn symbol_value(&self, s: Symbol) -> CycloElement {
        let field = self.unit.field();
        &field.from_int(s[0]) + &self.unit.scale_int(s[1])
    }

    /// The algebra element carrying `symbols`; any ring symbols are allowed.
    pub fn element(&self, symbols: &[Symbol]) -> Result<AElement> {
        if symbols.len() != self.symbol_count() {
            return Err(Error::DimensionMismatch { expected: self.symbol_count(), got: symbols.len() });
        }
        let (m, n) = (self.alg.m(), self.alg.n());
        let d = self.alg.d_algebra();
        let field = self.alg.field();
        let layers = (0..n)
            .map(|k| {
                let coords = (0..m)
                    .map(|j| {
                        self.basis.iter().enumerate().fold(field.zero(), |acc, (i, th)| {
                            let s = symbols[k * m * n + j * n + i];
                            if s == [0, 0] {
                                acc
                            } else {
                                &acc + &(&self.symbol_value(s) * th)
                            }
                        })
                    })
                    .collect();
                d.element_unchecked(coords)
            })
            .collect();
        self.alg.element(layers)
    }

    /// Codeword for ring symbols, without constellation membership checks.
    /// Differences of codewords are encoded this way.
    pub fn encode_ring(&self, symbols: &[Symbol]) -> Result<Codeword> {
        let x = self.element(symbols)?;
        let exact = self.alg.big_lambda(&x)?;
        let complex = exact.embed();
        Ok(Codeword { symbols: symbols.to_vec(), exact, complex })
    }

    /// Codeword for symbols drawn from `constellation`.
    pub fn encode(&self, symbols: &[Symbol], constellation: &Constellation) -> Result<Codeword> {
        if constellation.kind() != self.ring {
            return Err(Error::InvalidInput(format!(
                "code {} takes {} symbols, got {}",
                self.name,
                self.ring.name(),
                constellation.name()
            )));
        }
        if let Some(bad) = symbols.iter().find(|s| !constellation.contains(**s)) {
            return Err(Error::InvalidInput(format!("symbol {bad:?} is not in {}", constellation.name())));
        }
        self.encode_ring(symbols)
    }

    /// Whether determinants are claimed to lie in L (RIGHT) or in F.
    pub fn det_field(&self) -> DetField {
        match self.alg.variant() {
            Variant::Right => DetField::L,
            Variant::Left | Variant::Middle => DetField::F,
        }
    }

    /// Exact determinant with its membership checks.
    pub fn det_report(&self, w: &Codeword) -> Result<DetReport> {
        let det = w.exact.det()?;
        let tower = self.alg.d_algebra().tower();
        let in_claimed_field = match self.det_field() {
            DetField::L => tower.in_l(&det),
            DetField::F => tower.in_f(&det),
        };
        let abs_sq = &det * &det.conj();
        let float_det = complex_det(&w.complex);
        let exact_abs = det.embed().norm();
        let rel_error = if exact_abs == 0.0 {
            float_det.norm()
        } else {
            (float_det.norm() - exact_abs).abs() / exact_abs
        };
        Ok(DetReport {
            integral: det.is_integral(),
            abs_sq_f64: abs_sq.embed().re,
            det,
            abs_sq,
            in_claimed_field,
            rel_error,
        })
    }

    /// Symbols of survey entry `index`.
    pub fn survey_symbols(&self, constellation: &Constellation, mode: &SurveyMode, index: u64) -> Vec<Symbol> {
        match *mode {
            SurveyMode::Sample { seed, .. } => {
                let mut rng = sampling::stream(seed, index);
                (0..self.symbol_count()).map(|_| constellation.point(rng.random_range(0..constellation.size()))).collect()
            }
            SurveyMode::ExhaustiveLayer => {
                let mut out = vec![[0, 0]; self.symbol_count()];
                let size = constellation.size() as u64;
                let mut rest = index;
                for slot in out.iter_mut().take(self.layer_size()).rev() {
                    *slot = constellation.point((rest % size) as usize);
                    rest /= size;
                }
                out
            }
        }
    }

    /// Number of entries a survey visits.
    pub fn survey_len(&self, constellation: &Constellation, mode: &SurveyMode) -> Result<u64> {
        match *mode {
            SurveyMode::Sample { count, .. } => {
                if count == 0 {
                    return Err(Error::InvalidInput("the survey needs at least one sample".into()));
                }
                Ok(count)
            }
            SurveyMode::ExhaustiveLayer => {
                if constellation.size() > 4 {
                    return Err(Error::InvalidInput("exhaustive surveys need a constellation with at most 4 points".into()));
                }
                Ok((constellation.size() as u64).pow(self.layer_size() as u32))
            }
        }
    }

    /// Determinant report for survey entry `index`.
    pub fn survey_entry(&self, constellation: &Constellation, mode: &SurveyMode, index: u64) -> Result<SurveyEntry> {
        let symbols = self.survey_symbols(constellation, mode, index);
        let w = match mode {
            SurveyMode::Sample { .. } => self.encode(&symbols, constellation)?,
            // Layers past the first carry the zero symbol, which is not a
            // constellation point.
            SurveyMode::ExhaustiveLayer => {
                if let Some(bad) = symbols[..self.layer_size()].iter().find(|s| !constellation.contains(**s)) {
                    return Err(Error::InvalidInput(format!("symbol {bad:?} is not in {}", constellation.name())));
                }
                self.encode_ring(&symbols)?
            }
        };
        let report = self.det_report(&w)?;
        Ok(SurveyEntry { index, symbols, report })
    }

    /// Normalized minimum determinant `δ / (28 E)^(mn)`, the effect of
    /// scaling every codeword by `1/√(28E)`. Only defined for HEX codes of
    /// size 6.
    pub fn normalized_min_det(&self, min_abs_sq: &Rational, energy: &Rational) -> Option<Rational> {
        if self.ring != ConstellationKind::Hex || self.matrix_size() != 6 {
            return None;
        }
        let scale = BigRational::from_integer(28.into()) * energy;
        Some(min_abs_sq / num_traits::pow(scale, self.matrix_size()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetField {
    F,
    L,
}

#[derive(Clone, Debug)]
pub struct Codeword {
    pub symbols: Vec<Symbol>,
    pub exact: Matrix<CycloElement>,
    pub complex: Matrix<Complex64>,
}

#[derive(Clone, Debug)]
pub struct DetReport {
    pub det: CycloElement,
    /// `det · conj(det)`.
    pub abs_sq: CycloElement,
    pub abs_sq_f64: f64,
    pub in_claimed_field: bool,
    /// Power-basis coefficients are integers.
    pub integral: bool,
    /// Relative gap between the floating and exact `|det|`.
    pub rel_error: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurveyMode {
    /// Uniform symbols, entry `i` drawn from stream `i` of `seed`.
    Sample { count: u64, seed: u64 },
    /// Every symbol vector supported on the first layer.
    ExhaustiveLayer,
}

#[derive(Clone, Debug)]
pub struct SurveyEntry {
    pub index: u64,
    pub symbols: Vec<Symbol>,
    pub report: DetReport,
}

/// Folds survey entries in index order.
#[derive(Clone, Debug, Default)]
pub struct SurveyStats {
    pub codewords: u64,
    pub min_abs_sq: Option<CycloElement>,
    pub min_abs_sq_f64: f64,
    pub argmin: Option<u64>,
    pub argmin_symbols: Vec<Symbol>,
    pub zero_dets: u64,
    pub field_violations: u64,
    pub integrality_violations: u64,
    pub max_rel_error: f64,
}

impl SurveyStats {
    pub fn push(&mut self, entry: &SurveyEntry) {
        let r = &entry.report;
        self.codewords += 1;
        if r.det.is_zero() {
            self.zero_dets += 1;
        }
        if !r.in_claimed_field {
            self.field_violations += 1;
        }
        if !r.integral {
            self.integrality_violations += 1;
        }
        if r.rel_error > self.max_rel_error {
            self.max_rel_error = r.rel_error;
        }
        let smaller = match &self.min_abs_sq {
            None => true,
            Some(cur) => match (r.abs_sq.as_rational(), cur.as_rational()) {
                (Some(a), Some(b)) => a < b,
                _ => r.abs_sq_f64 < self.min_abs_sq_f64,
            },
        };
        if smaller {
            self.min_abs_sq = Some(r.abs_sq.clone());
            self.min_abs_sq_f64 = r.abs_sq_f64;
            self.argmin = Some(entry.index);
            self.argmin_symbols = entry.symbols.clone();
        }
    }

    /// Exact minimum `|det|²` when it is rational.
    pub fn min_abs_sq_rational(&self) -> Option<Rational> {
        self.min_abs_sq.as_ref().and_then(CycloElement::as_rational)
    }
}

/// Minimum `|det|²` over the codewords visited by `mode`.
pub fn min_det_survey(spec: &CodeSpec, constellation: &Constellation, mode: &SurveyMode) -> Result<SurveyStats> {
    let len = spec.survey_len(constellation, mode)?;
    let mut stats = SurveyStats::default();
    for i in 0..len {
        stats.push(&spec.survey_entry(constellation, mode, i)?);
    }
    Ok(stats)
}

/// A positive monomial `c · E^k`, stored as `(c², k)` so that square roots
/// stay exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyMonomial {
    pub coeff_sq: Rational,
    pub exponent: Rational,
}

impl EnergyMonomial {
    pub fn constant(c: i64) -> Self {
        assert!(c > 0, "coefficients must be positive");
        let c = BigRational::from_integer(c.into());
        Self { coeff_sq: &c * &c, exponent: Rational::zero() }
    }

    /// `E` itself.
    pub fn energy() -> Self {
        Self { coeff_sq: Rational::one(), exponent: Rational::one() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { coeff_sq: &self.coeff_sq * &other.coeff_sq, exponent: &self.exponent + &other.exponent }
    }

    pub fn pow(&self, k: i32) -> Self {
        let coeff_sq = if k >= 0 {
            num_traits::pow(self.coeff_sq.clone(), k as usize)
        } else {
            num_traits::pow(self.coeff_sq.recip(), k.unsigned_abs() as usize)
        };
        Self { coeff_sq, exponent: &self.exponent * BigRational::from_integer(k.into()) }
    }

    pub fn recip(&self) -> Self {
        self.pow(-1)
    }

    /// `√c · E^(k/2)`; its stored square is `c`, so `c²` must be a rational square.
    pub fn sqrt(&self) -> Self {
        let num = self.coeff_sq.numer().sqrt();
        let den = self.coeff_sq.denom().sqrt();
        assert!(
            &num * &num == *self.coeff_sq.numer() && &den * &den == *self.coeff_sq.denom(),
            "coefficient is not rational"
        );
        let half = BigRational::new(1.into(), 2.into());
        Self { coeff_sq: BigRational::new(num, den), exponent: &self.exponent * half }
    }

    /// Value at a concrete energy.
    pub fn eval(&self, energy: f64) -> f64 {
        let c = libm::sqrt(self.coeff_sq.to_f64().unwrap_or(f64::NAN));
        c * libm::pow(energy, self.exponent.to_f64().unwrap_or(f64::NAN))
    }

    pub fn is_positive(&self) -> bool {
        self.coeff_sq.is_positive()
    }
}

/// Both sides of `49 (2/√(28E))^18 = 1/(7^7 E^9)`.
pub fn normalization_identity() -> (EnergyMonomial, EnergyMonomial) {
    let scale = EnergyMonomial::constant(28).mul(&EnergyMonomial::energy()).sqrt().recip();
    let lhs = EnergyMonomial::constant(49).mul(&EnergyMonomial::constant(2).mul(&scale).pow(18));
    let rhs = EnergyMonomial::constant(7).pow(7).mul(&EnergyMonomial::energy().pow(9)).recip();
    (lhs, rhs)
}

/// Nonzero codewords with vanishing determinant found by [`diversity_evidence`].
#[derive(Clone, Debug, Default)]
pub struct DiversityReport {
    /// Random codeword differences checked.
    pub sampled: u64,
    /// Structured differences checked.
    pub swept: u64,
    pub violations: Vec<Vec<Symbol>>,
}

/// Checks that sampled codeword differences are nonsingular.
///
/// Besides `sample` random differences, every difference supported on a
/// single symbol slot in at most two layers is checked; this covers the
/// singular codewords coming from factors `t − z` of `t^n − d`.
pub fn diversity_evidence(spec: &CodeSpec, constellation: &Constellation, sample: u64, seed: u64) -> Result<DiversityReport> {
    let mut report = DiversityReport::default();
    for symbols in diversity_sample(spec, constellation, sample, seed) {
        report.sampled += 1;
        if is_singular(spec, &symbols)? {
            report.violations.push(symbols);
        }
    }
    for symbols in slot_sweep(spec, constellation) {
        report.swept += 1;
        if is_singular(spec, &symbols)? {
            report.violations.push(symbols);
        }
    }
    Ok(report)
}

fn is_singular(spec: &CodeSpec, symbols: &[Symbol]) -> Result<bool> {
    Ok(spec.encode_ring(symbols)?.exact.det()?.is_zero())
}

/// Nonzero differences of random codeword pairs.
pub fn diversity_sample(spec: &CodeSpec, constellation: &Constellation, sample: u64, seed: u64) -> Vec<Vec<Symbol>> {
    (0..sample)
        .filter_map(|i| {
            let mut rng = sampling::stream(seed, i);
            let diff: Vec<Symbol> = (0..spec.symbol_count())
                .map(|_| {
                    let a = constellation.point(rng.random_range(0..constellation.size()));
                    let b = constellation.point(rng.random_range(0..constellation.size()));
                    [a[0] - b[0], a[1] - b[1]]
                })
                .collect();
            diff.iter().any(|s| *s != [0, 0]).then_some(diff)
        })
        .collect()
}

/// Nonzero differences supported on one slot of at most two layers.
pub fn slot_sweep(spec: &CodeSpec, constellation: &Constellation) -> Vec<Vec<Symbol>> {
    let diffs: Vec<Symbol> = constellation.differences().into_iter().filter(|s| *s != [0, 0]).collect();
    let (n, width) = (spec.algebra().n(), spec.layer_size());
    let mut out = Vec::new();
    for slot in 0..width {
        for a in 0..n {
            for da in &diffs {
                let mut base = vec![[0, 0]; spec.symbol_count()];
                base[a * width + slot] = *da;
                out.push(base.clone());
                for b in a + 1..n {
                    for db in &diffs {
                        let mut v = base.clone();
                        v[b * width + slot] = *db;
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}
