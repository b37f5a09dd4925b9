//! Bounded exhaustive searches: zero divisors, norm equations and skew
//! polynomial factors.
//!
//! Candidates are screened with modular fingerprints and every hit is
//! confirmed with exact arithmetic before it is reported. Search points are
//! integer coordinate vectors in `[-bound, bound]^s` on a fixed basis.

use alloc::{vec, vec::Vec};
use core::ops::Range;

use crate::cyclic_algebra::{CyclicAlgebra, DElement};
use crate::cyclotomic::{Automorphism, CycloElement};
use crate::error::{Error, Result};
use crate::fingerprint::{DLanes, LaneAlgebra, LanePerm, ModField, MAX_M};
use crate::iterated::{AElement, IteratedAlgebra};
use crate::skew_poly::{SkewPoly, SkewPolyRing};

/// Default cap on the number of points a single search may visit.
pub const DEFAULT_POINT_LIMIT: u128 = 200_000_000;

/// `(2·bound + 1)^dim`.
pub fn point_count(bound: u32, dim: usize) -> u128 {
    u128::from(2 * bound + 1).saturating_pow(dim as u32)
}

fn check_size(bound: u32, dim: usize, limit: u128) -> Result<u128> {
    let points = point_count(bound, dim);
    if points > limit {
        return Err(Error::SearchTooLarge { points, limit });
    }
    Ok(points)
}

/// Coefficient vector of the point with the given odometer index; the first
/// coordinate is the most significant digit.
pub fn point_coords(index: u128, bound: u32, dim: usize) -> Vec<i64> {
    let base = u128::from(2 * bound + 1);
    let mut out = vec![0i64; dim];
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = (rest % base) as i64 - i64::from(bound);
        rest /= base;
    }
    out
}

/// Nonzero integer vectors in `[-bound, bound]^dim` ordered by number of
/// nonzero entries, then lexicographically by support, then by values in the
/// order `1, -1, 2, -2, …`.
#[derive(Clone, Debug)]
pub struct GradedVectors {
    dim: usize,
    bound: u32,
    positions: Vec<usize>,
    digits: Vec<u32>,
    started: bool,
}

impl GradedVectors {
    pub fn new(dim: usize, bound: u32) -> Self {
        Self { dim, bound, positions: Vec::new(), digits: Vec::new(), started: false }
    }

    fn value(d: u32) -> i64 {
        let mag = i64::from(d / 2 + 1);
        if d.is_multiple_of(2) {
            mag
        } else {
            -mag
        }
    }

    fn next_combination(&mut self) -> bool {
        let w = self.positions.len();
        for i in (0..w).rev() {
            if self.positions[i] < self.dim - w + i {
                self.positions[i] += 1;
                for j in i + 1..w {
                    self.positions[j] = self.positions[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            if self.dim == 0 || self.bound == 0 {
                return false;
            }
            self.positions = vec![0];
            self.digits = vec![0];
            return true;
        }
        let top = 2 * self.bound;
        for i in (0..self.digits.len()).rev() {
            if self.digits[i] + 1 < top {
                self.digits[i] += 1;
                for d in &mut self.digits[i + 1..] {
                    *d = 0;
                }
                return true;
            }
        }
        for d in &mut self.digits {
            *d = 0;
        }
        if self.next_combination() {
            return true;
        }
        let w = self.positions.len() + 1;
        if w > self.dim {
            return false;
        }
        self.positions = (0..w).collect();
        self.digits = vec![0; w];
        true
    }
}

impl Iterator for GradedVectors {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if !self.advance() {
            return None;
        }
        let mut v = vec![0i64; self.dim];
        for (p, d) in self.positions.iter().zip(&self.digits) {
            v[*p] = Self::value(*d);
        }
        Some(v)
    }
}

/// Exact `Σ c_i support_i`.
pub fn combine_a(a: &IteratedAlgebra, support: &[AElement], coeffs: &[i64]) -> AElement {
    let d = a.d_algebra();
    support.iter().zip(coeffs).fold(a.zero(), |acc, (b, &c)| {
        if c == 0 {
            return acc;
        }
        let coords = b.coords().iter().map(|x| combine_d(d, core::slice::from_ref(x), &[c])).collect();
        a.add(&acc, &a.element(coords).expect("same shape"))
    })
}

/// `f^i e^k` for all `i < n`, `k < m`, in `Φ` order.
pub fn default_support(a: &IteratedAlgebra) -> Vec<AElement> {
    let d = a.d_algebra();
    let one = a.field().one();
    (0..a.n()).flat_map(|i| (0..a.m()).map(move |k| (i, k))).map(|(i, k)| a.monomial(i, &d.monomial(k, &one))).collect()
}

/// A pair with `x y = 0`, both nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroDivisorWitness {
    pub x: AElement,
    pub y: AElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroDivisorOutcome {
    Found(ZeroDivisorWitness),
    NotFound { bound: u32, support_size: usize, points_checked: u64 },
}

impl ZeroDivisorOutcome {
    pub fn witness(&self) -> Option<&ZeroDivisorWitness> {
        match self {
            Self::Found(w) => Some(w),
            Self::NotFound { .. } => None,
        }
    }
}

/// Search for `x, y ≠ 0` with integer coordinates on `support`, bounded by
/// `bound`, such that `x y = 0`. Points `x` are visited in
/// [`GradedVectors`] order and the first exact witness is returned.
///
/// Each `x` is screened by the rank of the map `y ↦ x y` reduced modulo a
/// large prime: full rank rules out every nonzero `y` in the box.
pub fn zero_divisor_search(a: &IteratedAlgebra, bound: u32, support: &[AElement]) -> Result<ZeroDivisorOutcome> {
    let s = support.len();
    check_size(bound, s, DEFAULT_POINT_LIMIT)?;
    let mf = ModField::new(a.field().conductor(), &[], 0)?;
    let dim = a.m() * a.n();
    // table[i][j] = lane image of Φ(b_i b_j).
    let table: Vec<Vec<Vec<u64>>> = support
        .iter()
        .map(|bi| {
            support
                .iter()
                .map(|bj| {
                    a.phi(&a.mul(bi, bj))
                        .iter()
                        .map(|k| mf.embed_lane(k, 0).ok_or_else(|| Error::Inconsistent("denominator vanishes mod p".into())))
                        .collect::<Result<Vec<u64>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let scalars: Vec<u64> = (-(i64::from(bound))..=i64::from(bound)).map(|c| mf.from_i64(c)).collect();
    let lane_of = |c: i64| scalars[(c + i64::from(bound)) as usize];
    let mut checked = 0u64;
    for xc in GradedVectors::new(s, bound) {
        checked += 1;
        // Columns indexed by j: Σ_i c_i table[i][j].
        let mut cols = vec![vec![0u64; dim]; s];
        for (i, &c) in xc.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let lc = lane_of(c);
            for (j, col) in cols.iter_mut().enumerate() {
                for (r, slot) in col.iter_mut().enumerate() {
                    let t = mf.mul_scalar(lc, table[i][j][r]);
                    *slot = add_mod(*slot, t, mf.prime());
                }
            }
        }
        if column_rank(&mf, &cols) == s {
            continue;
        }
        let x = combine_a(a, support, &xc);
        for yc in GradedVectors::new(s, bound) {
            let mut image = vec![0u64; dim];
            for (j, &c) in yc.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let lc = lane_of(c);
                for (slot, v) in image.iter_mut().zip(&cols[j]) {
                    *slot = add_mod(*slot, mf.mul_scalar(lc, *v), mf.prime());
                }
            }
            if image.iter().any(|&v| v != 0) {
                continue;
            }
            let y = combine_a(a, support, &yc);
            if a.mul(&x, &y).is_zero() {
                return Ok(ZeroDivisorOutcome::Found(ZeroDivisorWitness { x, y }));
            }
        }
    }
    Ok(ZeroDivisorOutcome::NotFound { bound, support_size: s, points_checked: checked })
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

/// Rank of the matrix whose columns are given, over F_p.
fn column_rank(mf: &ModField, cols: &[Vec<u64>]) -> usize {
    let p = mf.prime();
    let mut rows: Vec<Vec<u64>> = cols.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(piv, rank);
        let inv = mf.inv(rows[rank][c]);
        for r in rank + 1..rows.len() {
            if rows[r][c] == 0 {
                continue;
            }
            let f = mf.mul_scalar(rows[r][c], inv);
            for k in c..width {
                let t = mf.mul_scalar(f, rows[rank][k]);
                rows[r][k] = if rows[r][k] >= t { rows[r][k] - t } else { rows[r][k] + p - t };
            }
        }
        rank += 1;
    }
    rank
}

/// `e^k β` for every `k < m` and every Q-basis element `β` of K.
pub fn k_coordinate_basis(alg: &CyclicAlgebra) -> Vec<DElement> {
    (0..alg.m()).flat_map(|k| alg.tower().k_basis().iter().map(move |b| alg.monomial(k, b))).collect()
}

/// `e^k ℓ` for every `k < m` and every Q-basis element `ℓ` of L.
pub fn l_coordinate_basis(alg: &CyclicAlgebra) -> Vec<DElement> {
    (0..alg.m()).flat_map(|k| alg.tower().l_basis().iter().map(move |b| alg.monomial(k, b))).collect()
}

/// Exact `Σ c_i basis_i`.
pub fn combine_d(alg: &CyclicAlgebra, basis: &[DElement], coeffs: &[i64]) -> DElement {
    basis.iter().zip(coeffs).fold(alg.zero(), |acc, (b, &c)| {
        if c == 0 {
            acc
        } else {
            alg.add(&acc, &alg.element_unchecked(b.coords().iter().map(|k| k.scale_int(c)).collect()))
        }
    })
}

/// Walk the points with odometer indices in `range`, keeping the lane image
/// of `Σ c_i basis_i` up to date incrementally. `visit` returns `true` to stop;
/// the index where it stopped is returned.
pub fn odometer_walk(
    lanes: &LaneAlgebra,
    basis: &[DLanes],
    bound: u32,
    range: Range<u128>,
    mut visit: impl FnMut(u128, &DLanes) -> bool,
) -> Option<u128> {
    if range.is_empty() {
        return None;
    }
    let s = basis.len();
    let top = 2 * bound;
    let mut digits: Vec<u32> =
        point_coords(range.start, bound, s).iter().map(|&v| (v + i64::from(bound)) as u32).collect();
    let span: Vec<DLanes> = basis.iter().map(|b| lanes.scale(b, lanes.field.from_i64(i64::from(top)))).collect();
    let mut z = [crate::fingerprint::Lanes::ZERO; MAX_M];
    for (i, &d) in digits.iter().enumerate() {
        let c = i64::from(d) - i64::from(bound);
        if c != 0 {
            z = lanes.add(&z, &lanes.scale(&basis[i], lanes.field.from_i64(c)));
        }
    }
    let mut index = range.start;
    loop {
        if visit(index, &z) {
            return Some(index);
        }
        index += 1;
        if index >= range.end {
            return None;
        }
        let mut i = s;
        loop {
            i -= 1;
            if digits[i] < top {
                digits[i] += 1;
                z = lanes.add(&z, &basis[i]);
                break;
            }
            digits[i] = 0;
            z = lanes.sub(&z, &span[i]);
        }
    }
}

/// Shared setup for searches over D with a twist.
struct TwistedLanes {
    lanes: LaneAlgebra,
    twist_pows: Vec<LanePerm>,
}

impl TwistedLanes {
    fn new(alg: &CyclicAlgebra, twist: Automorphism, n: usize, prime_index: usize) -> Result<Self> {
        let lanes = LaneAlgebra::new(alg, &[twist], prime_index)?;
        let twist_pows = (0..n).map(|j| lanes.field.perm(&twist.pow(j as i64))).collect::<Result<Vec<_>>>()?;
        Ok(Self { lanes, twist_pows })
    }

    fn embed(&self, x: &DElement) -> Result<DLanes> {
        self.lanes.embed(x).ok_or_else(|| Error::Inconsistent("denominator vanishes mod p".into()))
    }

    /// `z τ̃(z) ⋯ τ̃^(n-1)(z)` on the lanes.
    fn orbit_product(&self, z: &DLanes) -> DLanes {
        let mut acc = *z;
        for perm in &self.twist_pows[1..] {
            acc = self.lanes.mul(&acc, &self.lanes.apply(perm, z));
        }
        acc
    }
}

/// Exact `z τ̃(z) ⋯ τ̃^(n-1)(z)` for the twist of `a`.
pub fn twisted_orbit_product(a: &IteratedAlgebra, z: &DElement) -> DElement {
    let d = a.d_algebra();
    (1..a.n()).fold(z.clone(), |acc, j| d.mul(&acc, &a.twist_pow(z, j)))
}

/// Search configuration shared by the factor searches.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    pub bound: u32,
    pub basis: Vec<DElement>,
    pub point_limit: u128,
}

impl SearchSpace {
    pub fn new(bound: u32, basis: Vec<DElement>) -> Self {
        Self { bound, basis, point_limit: DEFAULT_POINT_LIMIT }
    }

    pub fn points(&self) -> u128 {
        point_count(self.bound, self.basis.len())
    }
}

/// Candidate indices for [`linear_factor_search`] cover the points whose
/// first nonzero coordinate is positive; the opposite point is covered by
/// symmetry.
pub fn linear_factor_range(space: &SearchSpace) -> Range<u128> {
    let total = space.points();
    (total / 2 + 1)..total
}

/// Search `z` in the box with `z τ̃(z) ⋯ τ̃^(n-1)(z) = d`, over the odometer
/// indices in `range` (a subrange of [`linear_factor_range`]).
pub fn linear_factor_search_range(
    a: &IteratedAlgebra,
    space: &SearchSpace,
    range: Range<u128>,
) -> Result<Option<(u128, DElement)>> {
    check_size(space.bound, space.basis.len(), space.point_limit)?;
    let tl = TwistedLanes::new(a.d_algebra(), a.twist(), a.n(), 0)?;
    let basis: Vec<DLanes> = space.basis.iter().map(|b| tl.embed(b)).collect::<Result<_>>()?;
    let target = tl.embed(a.d())?;
    let neg_target = tl.lanes.sub(&[crate::fingerprint::Lanes::ZERO; MAX_M], &target);
    let odd = a.n() % 2 == 1;
    let mut found = None;
    odometer_walk(&tl.lanes, &basis, space.bound, range, |index, z| {
        let p = tl.orbit_product(z);
        let sign = if tl.lanes.eq(&p, &target) {
            1
        } else if odd && tl.lanes.eq(&p, &neg_target) {
            -1
        } else {
            return false;
        };
        let coeffs: Vec<i64> =
            point_coords(index, space.bound, space.basis.len()).into_iter().map(|c| c * sign).collect();
        let z = combine_d(a.d_algebra(), &space.basis, &coeffs);
        if twisted_orbit_product(a, &z) == *a.d() {
            found = Some((index, z));
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Full [`linear_factor_search_range`] over the box.
pub fn linear_factor_search(a: &IteratedAlgebra, space: &SearchSpace) -> Result<Option<DElement>> {
    Ok(linear_factor_search_range(a, space, linear_factor_range(space))?.map(|(_, z)| z))
}

/// Remainder `(r1, r0)` of `t^n` right-divided by `t² − u t − v` in the ring
/// twisted by `φ`, from `t^(k+1) ≡ (φ(a) u + φ(b)) t + φ(a) v` when
/// `t^k ≡ a t + b`.
fn quadratic_remainder<T: Clone>(
    n: usize,
    u: &T,
    v: &T,
    phi: impl Fn(&T) -> T,
    mul: impl Fn(&T, &T) -> T,
    add: impl Fn(&T, &T) -> T,
) -> (T, T) {
    let (mut a, mut b) = (u.clone(), v.clone());
    for _ in 2..n {
        let pa = phi(&a);
        let na = add(&mul(&pa, u), &phi(&b));
        let nb = mul(&pa, v);
        a = na;
        b = nb;
    }
    (a, b)
}

/// Exact remainder of `t^n − d` right-divided by `t² − u t − v`, as `(r1, r0)`
/// with the remainder `r1 t + r0`.
pub fn quadratic_factor_remainder(a: &IteratedAlgebra, u: &DElement, v: &DElement) -> (DElement, DElement) {
    let d = a.d_algebra();
    let phi = a.twist().inverse();
    let (r1, r0) =
        quadratic_remainder(a.n(), u, v, |x| d.extend_aut(x, &phi), |x, y| d.mul(x, y), |x, y| d.add(x, y));
    (r1, d.sub(&r0, a.d()))
}

/// Search `(u, v)` in the box squared with `t² − u t − v` a right factor of
/// `t^n − d`. The outer coordinate `u` runs over `u_range` (odometer indices).
pub fn quadratic_factor_search_range(
    a: &IteratedAlgebra,
    space: &SearchSpace,
    u_range: Range<u128>,
) -> Result<Option<(DElement, DElement)>> {
    let s = space.basis.len();
    let single = check_size(space.bound, s, space.point_limit)?;
    if single.saturating_mul(single) > space.point_limit {
        return Err(Error::SearchTooLarge { points: single.saturating_mul(single), limit: space.point_limit });
    }
    if a.n() < 3 {
        return Ok(None);
    }
    let tl = TwistedLanes::new(a.d_algebra(), a.twist(), a.n(), 0)?;
    let phi = tl.lanes.field.perm(&a.twist().inverse())?;
    let basis: Vec<DLanes> = space.basis.iter().map(|b| tl.embed(b)).collect::<Result<_>>()?;
    let target = tl.embed(a.d())?;
    let l = &tl.lanes;
    let mut found = None;
    odometer_walk(l, &basis, space.bound, u_range, |ui, u| {
        let hit = odometer_walk(l, &basis, space.bound, 0..single, |_, v| {
            let (r1, r0) = quadratic_remainder(a.n(), u, v, |x| l.apply(&phi, x), |x, y| l.mul(x, y), |x, y| l.add(x, y));
            l.is_zero(&r1) && l.eq(&r0, &target)
        });
        let Some(vi) = hit else {
            return false;
        };
        let uu = combine_d(a.d_algebra(), &space.basis, &point_coords(ui, space.bound, s));
        let vv = combine_d(a.d_algebra(), &space.basis, &point_coords(vi, space.bound, s));
        let (r1, r0) = quadratic_factor_remainder(a, &uu, &vv);
        if r1.is_zero() && r0.is_zero() {
            found = Some((uu, vv));
            true
        } else {
            false
        }
    });
    Ok(found)
}

pub fn quadratic_factor_search(a: &IteratedAlgebra, space: &SearchSpace) -> Result<Option<(DElement, DElement)>> {
    let total = space.points();
    quadratic_factor_search_range(a, space, 0..total)
}

/// Search `x ∈ K` with integer coordinates on the Q-basis of K, bounded by
/// `bound`, such that `N_{K/L}(x) = target`.
pub fn norm_equation_search(alg: &CyclicAlgebra, target: &CycloElement, bound: u32) -> Result<Option<CycloElement>> {
    let tower = alg.tower();
    let basis: Vec<DElement> = tower.k_basis().iter().map(|b| alg.from_k(b)).collect();
    let total = check_size(bound, basis.len(), DEFAULT_POINT_LIMIT)?;
    let tl = TwistedLanes::new(alg, tower.tau(), tower.n(), 0)?;
    let lanes_basis: Vec<DLanes> = basis.iter().map(|b| tl.embed(b)).collect::<Result<_>>()?;
    let goal = tl.embed(&alg.from_k(target))?;
    let mut found = None;
    odometer_walk(&tl.lanes, &lanes_basis, bound, 0..total, |index, x| {
        if !tl.lanes.eq(&tl.orbit_product(x), &goal) {
            return false;
        }
        let xx = combine_d(alg, &basis, &point_coords(index, bound, basis.len()));
        let k = xx.coords()[0].clone();
        if tower.norm_k_l(&k) == *target {
            found = Some(k);
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// A right factor of `t^n − d` and the zero-divisor pair it produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorWitness {
    /// The right factor `h`.
    pub factor: SkewPoly,
    /// The cofactor `q` with `t^n − d = q h`.
    pub cofactor: SkewPoly,
    /// `(x, y)` in A with `x y = 0`, when the pair transfers to A.
    pub zero_divisor: Option<ZeroDivisorWitness>,
}

/// Turn a right factor `h` of `f = t^n − d` into a witness, transferring the
/// pair `(q, h)` to A and confirming `x y = 0` exactly.
pub fn factor_witness(a: &IteratedAlgebra, h: SkewPoly) -> Result<FactorWitness> {
    let ring = SkewPolyRing::for_iterated(a);
    let f = ring.t_n_minus_d(a.n(), a.d());
    let (q, r) = ring.right_divide(&f, &h)?;
    if !r.is_zero() {
        return Err(Error::Inconsistent("claimed factor does not divide t^n - d".into()));
    }
    let x = ring.to_iterated(a, &q)?;
    let y = ring.to_iterated(a, &h)?;
    let zero_divisor = a.mul(&x, &y).is_zero().then_some(ZeroDivisorWitness { x, y });
    Ok(FactorWitness { factor: h, cofactor: q, zero_divisor })
}

/// Witness from `z` with `z τ̃(z) ⋯ τ̃^(n-1)(z) = d`: the factor is `t − τ̃^(n-1)(z)`.
pub fn linear_factor_witness(a: &IteratedAlgebra, z: &DElement) -> Result<FactorWitness> {
    let d = a.d_algebra();
    let root = a.twist_pow(z, a.n() - 1);
    let ring = SkewPolyRing::for_iterated(a);
    factor_witness(a, ring.poly(vec![d.neg(&root), d.one()]))
}

/// Witness from a quadratic right factor `t² − u t − v`.
pub fn quadratic_factor_witness(a: &IteratedAlgebra, u: &DElement, v: &DElement) -> Result<FactorWitness> {
    let d = a.d_algebra();
    let ring = SkewPolyRing::for_iterated(a);
    factor_witness(a, ring.poly(vec![d.neg(v), d.neg(u), d.one()]))
}
