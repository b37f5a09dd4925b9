//! Coherent MIMO channel `Y = √ρ H κ S + N` over small subcodes.
//!
//! `H` (`n_r × n_t`) and `N` (`n_r × T`) have i.i.d. unit-variance circular
//! Gaussian entries. κ scales the codebook to average total transmit power 1
//! per channel use, so ρ is the mean SNR at each receive antenna. Each trial
//! draws from its own ChaCha stream, so results do not depend on trial order
//! or thread count, and changing ρ rescales the same draws.

use alloc::{vec, vec::Vec};
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::codebook::{CodeSpec, Constellation, Symbol};
use crate::decodability::unit_symbols;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::sampling;

/// Largest codebook decoded exhaustively.
pub const MAX_EXHAUSTIVE: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Exhaustive,
    Sphere,
}

impl DecoderKind {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::Exhaustive => "exhaustive",
            DecoderKind::Sphere => "sphere",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exhaustive" | "ml" => Some(DecoderKind::Exhaustive),
            "sphere" => Some(DecoderKind::Sphere),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelConfig {
    pub receive_antennas: usize,
    /// Linear SNR.
    pub rho: f64,
    pub trials: u64,
    pub seed: u64,
    /// Multiplies the noise; 0 gives noiseless transmission.
    pub noise_scale: f64,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.receive_antennas == 0 {
            return Err(Error::InvalidInput("at least one receive antenna is required".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidInput("at least one trial is required".into()));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidInput("rho must be positive and finite".into()));
        }
        if !(self.noise_scale >= 0.0 && self.noise_scale.is_finite()) {
            return Err(Error::InvalidInput("noise scale must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Outcome of one transmission.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub sent: usize,
    pub decoded: usize,
}

impl TrialOutcome {
    pub fn is_error(&self) -> bool {
        self.sent != self.decoded
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub decoder: DecoderKind,
    pub trials: u64,
    pub errors: u64,
}

impl SimResult {
    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }
}

/// Standard circular Gaussian via Box-Muller.
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = libm::sqrt(-libm::log(u1));
    let (s, c) = libm::sincos(2.0 * PI * u2);
    Complex64::new(r * c, r * s)
}

/// A subcode using the first `layers` layers, as a real lattice code.
#[derive(Clone, Debug)]
pub struct Subcode {
    /// Real symbol alphabet per coordinate.
    levels: Vec<i64>,
    constellation: Constellation,
    /// One complex matrix per real symbol.
    basis: Vec<Matrix<Complex64>>,
    n_t: usize,
    kappa: f64,
}

impl Subcode {
    pub fn new(spec: &CodeSpec, constellation: &Constellation, layers: usize) -> Result<Self> {
        if constellation.kind() != spec.ring() {
            return Err(Error::InvalidInput("constellation does not match the code's symbol ring".into()));
        }
        if layers == 0 || layers > spec.algebra().n() {
            return Err(Error::InvalidInput("layer count out of range".into()));
        }
        let slots = layers * spec.layer_size();
        let mut basis = Vec::with_capacity(2 * slots);
        for slot in 0..slots {
            for part in 0..2 {
                basis.push(spec.encode_ring(&unit_symbols(spec, slot, part))?.complex);
            }
        }
        let mut levels: Vec<i64> = constellation.points().iter().map(|p| p[0]).collect();
        levels.dedup();
        let n_t = spec.matrix_size();
        let mut sub = Self { levels, constellation: constellation.clone(), basis, n_t, kappa: 1.0 };
        sub.kappa = libm::sqrt(n_t as f64 / sub.mean_energy());
        Ok(sub)
    }

    /// Exact average of `‖S‖²` over uniform symbols: the symbols are
    /// independent with zero mean, so cross terms vanish.
    fn mean_energy(&self) -> f64 {
        let second_moment = self.levels.iter().map(|l| (l * l) as f64).sum::<f64>() / self.levels.len() as f64;
        self.basis.iter().map(|b| b.data().iter().map(Complex64::norm_sqr).sum::<f64>()).sum::<f64>() * second_moment
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn transmit_antennas(&self) -> usize {
        self.n_t
    }

    pub fn real_dimension(&self) -> usize {
        self.basis.len()
    }

    /// `M^(symbols)`, or `None` on overflow.
    pub fn codebook_size(&self) -> Option<usize> {
        let m = self.constellation.size();
        (0..self.basis.len() / 2).try_fold(1usize, |acc, _| acc.checked_mul(m))
    }

    /// Complex symbols of codeword `index` (most significant slot first).
    pub fn symbols(&self, index: usize) -> Vec<Symbol> {
        let m = self.constellation.size();
        let slots = self.basis.len() / 2;
        let mut out = vec![[0, 0]; slots];
        let mut rest = index;
        for s in out.iter_mut().rev() {
            *s = self.constellation.point(rest % m);
            rest /= m;
        }
        out
    }

    pub fn index_of(&self, symbols: &[Symbol]) -> Option<usize> {
        let points = self.constellation.points();
        symbols.iter().try_fold(0usize, |acc, s| Some(acc * points.len() + points.iter().position(|p| p == s)?))
    }

    /// `Σ g_k B_k` for real symbols `g`.
    fn combine(&self, mats: &[Matrix<Complex64>], real: &[i64]) -> Matrix<Complex64> {
        let (r, c) = (mats[0].rows(), mats[0].cols());
        let mut out = Matrix::from_fn(r, c, |_, _| Complex64::new(0.0, 0.0));
        for (g, m) in real.iter().zip(mats) {
            if *g != 0 {
                for i in 0..r {
                    for j in 0..c {
                        out[(i, j)] += m[(i, j)] * (*g as f64);
                    }
                }
            }
        }
        out
    }

    fn real_symbols(symbols: &[Symbol]) -> Vec<i64> {
        symbols.iter().flat_map(|s| s.iter().copied()).collect()
    }

    /// Unscaled codeword matrix.
    pub fn codeword(&self, index: usize) -> Matrix<Complex64> {
        self.combine(&self.basis, &Self::real_symbols(&self.symbols(index)))
    }

    /// Draws `(sent index, H, Y)` for one trial.
    pub fn channel_use(&self, cfg: &ChannelConfig, trial: u64) -> Result<(usize, Matrix<Complex64>, Matrix<Complex64>)> {
        let size = self.codebook_size().ok_or(Error::InvalidInput("codebook too large".into()))?;
        let mut rng = sampling::stream(cfg.seed, trial);
        let sent = rng.random_range(0..size);
        let h = Matrix::from_fn(cfg.receive_antennas, self.n_t, |_, _| complex_gaussian(&mut rng));
        let noise = Matrix::from_fn(cfg.receive_antennas, self.n_t, |_, _| complex_gaussian(&mut rng));
        let gain = libm::sqrt(cfg.rho) * self.kappa;
        let hs = cmul(&h, &self.codeword(sent));
        let y = Matrix::from_fn(cfg.receive_antennas, self.n_t, |i, j| hs[(i, j)] * gain + noise[(i, j)] * cfg.noise_scale);
        Ok((sent, h, y))
    }

    /// `√ρ κ H B_k` for every basis matrix.
    fn effective_basis(&self, h: &Matrix<Complex64>, rho: f64) -> Vec<Matrix<Complex64>> {
        let gain = libm::sqrt(rho) * self.kappa;
        self.basis.iter().map(|b| cmul(h, b).map(|z| z * gain)).collect()
    }

    /// Index minimizing `‖Y − √ρ H κ S‖²`, lowest index on ties.
    pub fn ml_decode_exhaustive(&self, y: &Matrix<Complex64>, h: &Matrix<Complex64>, rho: f64) -> Result<usize> {
        let size = self.codebook_size().filter(|&s| s <= MAX_EXHAUSTIVE).ok_or(Error::InvalidInput(
            alloc::format!("exhaustive decoding is limited to {MAX_EXHAUSTIVE} codewords"),
        ))?;
        let eff = self.effective_basis(h, rho);
        let mut best = (f64::INFINITY, 0);
        for idx in 0..size {
            let hs = self.combine(&eff, &Self::real_symbols(&self.symbols(idx)));
            let metric: f64 = y.data().iter().zip(hs.data()).map(|(a, b)| (a - b).norm_sqr()).sum();
            if metric < best.0 {
                best = (metric, idx);
            }
        }
        Ok(best.1)
    }

    /// Sphere decoding of the real lattice model `y = G g + n`.
    pub fn sphere_decode(&self, y: &Matrix<Complex64>, h: &Matrix<Complex64>, rho: f64) -> Result<usize> {
        let eff = self.effective_basis(h, rho);
        let yv = realify(y.data());
        let cols: Vec<Vec<f64>> = eff.iter().map(|m| realify(m.data())).collect();
        let g = sphere_decode(&yv, &cols, &self.levels, None)?;
        let symbols: Vec<Symbol> = g.chunks(2).map(|c| [c[0], c[1]]).collect();
        self.index_of(&symbols).ok_or(Error::Inconsistent("sphere decoder left the alphabet".into()))
    }

    pub fn decode(&self, kind: DecoderKind, y: &Matrix<Complex64>, h: &Matrix<Complex64>, rho: f64) -> Result<usize> {
        match kind {
            DecoderKind::Exhaustive => self.ml_decode_exhaustive(y, h, rho),
            DecoderKind::Sphere => self.sphere_decode(y, h, rho),
        }
    }

    pub fn trial(&self, cfg: &ChannelConfig, kind: DecoderKind, trial: u64) -> Result<TrialOutcome> {
        let (sent, h, y) = self.channel_use(cfg, trial)?;
        Ok(TrialOutcome { sent, decoded: self.decode(kind, &y, &h, cfg.rho)? })
    }

    /// Sequential simulation; the std crate runs trials in parallel.
    pub fn simulate(&self, cfg: &ChannelConfig, kind: DecoderKind) -> Result<SimResult> {
        cfg.validate()?;
        let mut errors = 0;
        for t in 0..cfg.trials {
            errors += u64::from(self.trial(cfg, kind, t)?.is_error());
        }
        Ok(SimResult { decoder: kind, trials: cfg.trials, errors })
    }
}

fn cmul(a: &Matrix<Complex64>, b: &Matrix<Complex64>) -> Matrix<Complex64> {
    Matrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
}

fn realify(v: &[Complex64]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Minimizes `‖y − Σ g_k c_k‖²` over `g ∈ levels^K`.
///
/// Columns are triangularized by modified Gram-Schmidt and the tree is
/// explored in Schnorr-Euchner order. The initial radius is the residual of
/// the Babai point and doubles while no point is found; `Some(r²)` overrides
/// it (use `f64::INFINITY` for a brute-force equivalent).
pub fn sphere_decode(y: &[f64], columns: &[Vec<f64>], levels: &[i64], radius_sq: Option<f64>) -> Result<Vec<i64>> {
    let k = columns.len();
    if k == 0 || levels.is_empty() {
        return Err(Error::InvalidInput("empty lattice or alphabet".into()));
    }
    let dim = y.len();
    if columns.iter().any(|c| c.len() != dim) || dim < k {
        return Err(Error::DimensionMismatch { expected: dim, got: columns.iter().map(Vec::len).max().unwrap_or(0) });
    }
    let (q, r) = qr(columns);
    // z = Qᵀ y; the part of y outside span(Q) adds a constant to every metric.
    let z: Vec<f64> = q.iter().map(|qc| dot(qc, y)).collect();
    let mut sorted = levels.to_vec();
    sorted.sort_unstable();
    let babai = babai(&z, &r, &sorted);
    let mut radius = radius_sq.unwrap_or_else(|| partial_metric(&z, &r, &babai) * (1.0 + 1e-9) + 1e-12);
    loop {
        if let Some(best) = enumerate(&z, &r, &sorted, radius) {
            return Ok(best);
        }
        if !radius.is_finite() {
            return Err(Error::Inconsistent("no lattice point at infinite radius".into()));
        }
        radius = if radius == 0.0 { 1.0 } else { radius * 2.0 };
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Thin QR of the column list: returns Q columns and upper-triangular R (row major).
fn qr(columns: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let k = columns.len();
    let mut q: Vec<Vec<f64>> = columns.to_vec();
    let mut r = vec![vec![0.0; k]; k];
    for j in 0..k {
        for i in 0..j {
            let p = dot(&q[i], &q[j]);
            r[i][j] = p;
            let qi = q[i].clone();
            for (x, y) in q[j].iter_mut().zip(&qi) {
                *x -= p * y;
            }
        }
        let norm = libm::sqrt(dot(&q[j], &q[j]));
        r[j][j] = norm;
        if norm > 0.0 {
            for x in q[j].iter_mut() {
                *x /= norm;
            }
        }
    }
    (q, r)
}

fn nearest(levels: &[i64], x: f64) -> i64 {
    *levels.iter().min_by(|a, b| (**a as f64 - x).abs().total_cmp(&(**b as f64 - x).abs())).expect("nonempty")
}

fn babai(z: &[f64], r: &[Vec<f64>], levels: &[i64]) -> Vec<i64> {
    let k = z.len();
    let mut g = vec![0i64; k];
    for i in (0..k).rev() {
        let rest: f64 = (i + 1..k).map(|j| r[i][j] * g[j] as f64).sum();
        let c = if r[i][i] != 0.0 { (z[i] - rest) / r[i][i] } else { 0.0 };
        g[i] = nearest(levels, c);
    }
    g
}

fn partial_metric(z: &[f64], r: &[Vec<f64>], g: &[i64]) -> f64 {
    let k = z.len();
    (0..k)
        .map(|i| {
            let v: f64 = (i..k).map(|j| r[i][j] * g[j] as f64).sum();
            (z[i] - v) * (z[i] - v)
        })
        .sum()
}

/// Depth-first Schnorr-Euchner enumeration; best point within `radius`.
fn enumerate(z: &[f64], r: &[Vec<f64>], levels: &[i64], radius: f64) -> Option<Vec<i64>> {
    let k = z.len();
    let mut best: Option<(f64, Vec<i64>)> = None;
    let mut bound = radius;
    let mut g = vec![0i64; k];
    // Candidates at each level, ordered by distance to the centre.
    let mut cands: Vec<Vec<(f64, i64)>> = vec![Vec::new(); k];
    let mut pos = vec![0usize; k];
    let mut acc = vec![0.0f64; k + 1];
    let expand = |i: usize, g: &[i64]| -> Vec<(f64, i64)> {
        let rest: f64 = (i + 1..k).map(|j| r[i][j] * g[j] as f64).sum();
        let mut c: Vec<(f64, i64)> = levels
            .iter()
            .map(|&l| {
                let e = z[i] - rest - r[i][i] * l as f64;
                (e * e, l)
            })
            .collect();
        c.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        c
    };
    let mut i = k - 1;
    cands[i] = expand(i, &g);
    pos[i] = 0;
    loop {
        if pos[i] < cands[i].len() && acc[i + 1] + cands[i][pos[i]].0 <= bound {
            let (cost, l) = cands[i][pos[i]];
            pos[i] += 1;
            g[i] = l;
            acc[i] = acc[i + 1] + cost;
            if i == 0 {
                let better = best.as_ref().is_none_or(|(m, _)| acc[0] < *m);
                if better {
                    bound = acc[0];
                    best = Some((acc[0], g.clone()));
                }
            } else {
                i -= 1;
                cands[i] = expand(i, &g);
                pos[i] = 0;
            }
        } else {
            i += 1;
            if i == k {
                break;
            }
        }
    }
    best.map(|(_, g)| g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_matches_brute_force_on_a_small_lattice() {
        let cols = vec![vec![1.0, 0.2, 0.0], vec![0.3, 1.0, 0.5]];
        let levels = [-1, 1];
        let y = [0.9, -0.7, 0.1];
        let mut best = (f64::INFINITY, vec![]);
        for a in levels {
            for b in levels {
                let e: f64 = (0..3).map(|t| y[t] - a as f64 * cols[0][t] - b as f64 * cols[1][t]).map(|x| x * x).sum();
                if e < best.0 {
                    best = (e, vec![a, b]);
                }
            }
        }
        assert_eq!(sphere_decode(&y, &cols, &levels, None).unwrap(), best.1);
        assert_eq!(sphere_decode(&y, &cols, &levels, Some(f64::INFINITY)).unwrap(), best.1);
    }

    #[test]
    fn gaussian_moments() {
        let mut rng = sampling::stream(3, 0);
        let n = 20000;
        let (mut m, mut v) = (Complex64::new(0.0, 0.0), 0.0);
        for _ in 0..n {
            let z = complex_gaussian(&mut rng);
            m += z;
            v += z.norm_sqr();
        }
        assert!((m / n as f64).norm() < 0.03);
        assert!((v / n as f64 - 1.0).abs() < 0.05);
    }
}
