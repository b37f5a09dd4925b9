//! Modular fingerprints of cyclotomic elements.
//!
//! For a prime `p ≡ 1 (mod N)` and an element `g` of exact order `N` in
//! `F_p`, each map `ζ ↦ g^h` (h a unit) is a ring homomorphism
//! `Z[ζ] → F_p`. Evaluating on the lanes `h ∈ H`, for a subgroup `H` of
//! units, turns multiplication into lanewise products and an automorphism
//! `ζ ↦ ζ^k` with `k ∈ H` into a permutation of lanes. A nonzero lane proves
//! the exact element is nonzero; equal fingerprints only suggest equality, so
//! every hit must be confirmed exactly.

use alloc::{vec, vec::Vec};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::cyclic_algebra::{CyclicAlgebra, DElement};
use crate::cyclotomic::{Automorphism, CycloElement};
use crate::error::{Error, Result};

/// Largest supported lane count.
pub const MAX_LANES: usize = 16;
/// Largest supported `[K:F]` for lane arithmetic in D.
pub const MAX_M: usize = 4;

/// Fingerprint values, one per lane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lanes(pub [u64; MAX_LANES]);

impl Lanes {
    pub const ZERO: Lanes = Lanes([0; MAX_LANES]);
}

/// Lane permutation realizing an automorphism: `out[l] = in[perm[l]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LanePerm([u8; MAX_LANES]);

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Evaluation of Q(ζ_N) at the lanes of a subgroup of units modulo a prime.
#[derive(Clone, Debug)]
pub struct ModField {
    p: u64,
    /// `-p⁻¹ mod 2^64`, for Montgomery reduction.
    p_neg_inv: u64,
    /// `2^128 mod p`.
    r2: u64,
    conductor: u32,
    lanes: Vec<u32>,
    lane_index: Vec<Option<u8>>,
    /// `zeta_pows[l][j]` is the image of ζ^j on lane `l`.
    zeta_pows: Vec<Vec<u64>>,
}

impl ModField {
    /// Lanes are the subgroup of units generated by `generators`. The
    /// `prime_index`-th prime `p ≡ 1 (mod N)` below `2^62` (counting down) is
    /// used, so different indices give independent fingerprints.
    pub fn new(conductor: u32, generators: &[Automorphism], prime_index: usize) -> Result<Self> {
        let n = u64::from(conductor);
        let mut lanes = vec![1u32];
        let mut i = 0;
        while i < lanes.len() {
            for g in generators {
                let h = ((u64::from(lanes[i]) * u64::from(g.exponent())) % n.max(1)) as u32;
                let h = if conductor == 1 { 1 } else { h };
                if !lanes.contains(&h) {
                    lanes.push(h);
                }
            }
            i += 1;
        }
        if lanes.len() > MAX_LANES {
            return Err(Error::InvalidInput("automorphism group too large for lane arithmetic".into()));
        }
        let mut candidate = (1u64 << 62) - 1;
        candidate -= (candidate - 1) % n;
        let mut found = 0;
        let p = loop {
            if is_prime_u64(candidate) {
                if found == prime_index {
                    break candidate;
                }
                found += 1;
            }
            candidate -= n;
        };
        let factors = prime_factors(n);
        let g = (2..)
            .map(|a| pow_mod(a, (p - 1) / n, p))
            .find(|&g| factors.iter().all(|&q| pow_mod(g, n / q, p) != 1))
            .expect("a primitive N-th root of unity exists");
        let mut p_neg_inv = 1u64;
        for _ in 0..6 {
            p_neg_inv = p_neg_inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(p_neg_inv)));
        }
        let p_neg_inv = p_neg_inv.wrapping_neg();
        let r = ((1u128 << 64) % u128::from(p)) as u64;
        let r2 = mul_mod(r, r, p);
        let mut lane_index = vec![None; conductor as usize];
        for (l, &h) in lanes.iter().enumerate() {
            lane_index[(h % conductor) as usize] = Some(l as u8);
        }
        let mut out = Self { p, p_neg_inv, r2, conductor, lanes, lane_index, zeta_pows: Vec::new() };
        out.zeta_pows = out
            .lanes
            .iter()
            .map(|&h| {
                let base = pow_mod(g, u64::from(h), p);
                let mut row = Vec::with_capacity(conductor as usize);
                let mut acc = 1u64;
                for _ in 0..conductor {
                    row.push(out.to_mont(acc));
                    acc = mul_mod(acc, base, p);
                }
                row
            })
            .collect();
        Ok(out)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn lane_count(&self) -> usize {
        self.lanes.len()
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_neg_inv);
        let r = ((t + u128::from(m) * u128::from(self.p)) >> 64) as u64;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    /// Montgomery product; all lane values are kept in Montgomery form.
    #[inline]
    pub fn mul_scalar(&self, a: u64, b: u64) -> u64 {
        self.redc(u128::from(a) * u128::from(b))
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul_scalar(a % self.p, self.r2)
    }

    /// Canonical residue of a lane value.
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(u128::from(a))
    }

    fn reduce_big(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.p));
        self.to_mont(r.to_u64().expect("reduced below p"))
    }

    /// Lane value of a small integer.
    pub fn from_i64(&self, x: i64) -> u64 {
        self.to_mont(x.rem_euclid(self.p as i64) as u64)
    }

    /// Image of `x` on one lane, or `None` if its denominator vanishes mod p.
    pub fn embed_lane(&self, x: &CycloElement, lane: usize) -> Option<u64> {
        let den = self.reduce_big(x.denominator());
        if den == 0 {
            return None;
        }
        let row = &self.zeta_pows[lane];
        let mut acc = 0u64;
        for (j, c) in x.numerators().iter().enumerate() {
            if !c.is_zero() {
                acc += self.mul_scalar(self.reduce_big(c), row[j]);
                if acc >= self.p {
                    acc -= self.p;
                }
            }
        }
        Some(self.mul_scalar(acc, self.inv(den)))
    }

    pub fn embed(&self, x: &CycloElement) -> Option<Lanes> {
        if x.conductor() != self.conductor {
            return None;
        }
        let mut out = Lanes::ZERO;
        for l in 0..self.lanes.len() {
            out.0[l] = self.embed_lane(x, l)?;
        }
        Some(out)
    }

    /// Lane permutation of an automorphism whose exponent lies in the lane group.
    pub fn perm(&self, aut: &Automorphism) -> Result<LanePerm> {
        let mut perm = [0u8; MAX_LANES];
        for (l, &h) in self.lanes.iter().enumerate() {
            let target = ((u64::from(h) * u64::from(aut.exponent())) % u64::from(self.conductor)) as usize;
            perm[l] = self.lane_index[target]
                .ok_or_else(|| Error::InvalidInput("automorphism outside the lane group".into()))?;
        }
        Ok(LanePerm(perm))
    }

    #[inline]
    pub fn apply(&self, perm: &LanePerm, x: &Lanes) -> Lanes {
        let mut out = Lanes::ZERO;
        for l in 0..self.lanes.len() {
            out.0[l] = x.0[perm.0[l] as usize];
        }
        out
    }

    #[inline]
    pub fn add(&self, a: &Lanes, b: &Lanes) -> Lanes {
        let mut out = Lanes::ZERO;
        for l in 0..self.lanes.len() {
            let s = a.0[l] + b.0[l];
            out.0[l] = if s >= self.p { s - self.p } else { s };
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: &Lanes, b: &Lanes) -> Lanes {
        let mut out = Lanes::ZERO;
        for l in 0..self.lanes.len() {
            out.0[l] = if a.0[l] >= b.0[l] { a.0[l] - b.0[l] } else { a.0[l] + self.p - b.0[l] };
        }
        out
    }

    #[inline]
    pub fn mul(&self, a: &Lanes, b: &Lanes) -> Lanes {
        let mut out = Lanes::ZERO;
        for l in 0..self.lanes.len() {
            out.0[l] = self.mul_scalar(a.0[l], b.0[l]);
        }
        out
    }

    #[inline]
    pub fn scale(&self, a: &Lanes, k: u64) -> Lanes {
        let mut out = Lanes::ZERO;
        for l in 0..self.lanes.len() {
            out.0[l] = self.mul_scalar(a.0[l], k);
        }
        out
    }

    pub fn neg(&self, a: &Lanes) -> Lanes {
        self.sub(&Lanes::ZERO, a)
    }

    /// Inverse of a nonzero lane value.
    pub fn inv(&self, a: u64) -> u64 {
        let mut e = self.p - 2;
        let mut acc = self.to_mont(1);
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_scalar(acc, base);
            }
            base = self.mul_scalar(base, base);
            e >>= 1;
        }
        acc
    }

    /// Determinant of lane values over F_p, as a lane value; destroys the
    /// input.
    pub fn det(&self, a: &mut [Vec<u64>]) -> u64 {
        let n = a.len();
        let p = self.p;
        let mut det = self.to_mont(1);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
                return 0;
            };
            if piv != col {
                a.swap(piv, col);
                det = (p - det) % p;
            }
            det = self.mul_scalar(det, a[col][col]);
            let inv = self.inv(a[col][col]);
            for r in col + 1..n {
                if a[r][col] == 0 {
                    continue;
                }
                let f = self.mul_scalar(a[r][col], inv);
                for c in col..n {
                    let t = self.mul_scalar(f, a[col][c]);
                    a[r][c] = if a[r][c] >= t { a[r][c] - t } else { a[r][c] + p - t };
                }
            }
        }
        det
    }
}

/// An element of D on the lanes: one [`Lanes`] per coordinate.
pub type DLanes = [Lanes; MAX_M];

/// Lane arithmetic for a cyclic algebra together with one more automorphism
/// group generator (typically τ).
#[derive(Clone, Debug)]
pub struct LaneAlgebra {
    pub field: ModField,
    m: usize,
    sigma_pows: Vec<LanePerm>,
    c: Lanes,
}

impl LaneAlgebra {
    /// Lanes cover the group generated by σ and `extra`.
    pub fn new(alg: &CyclicAlgebra, extra: &[Automorphism], prime_index: usize) -> Result<Self> {
        let m = alg.m();
        if m > MAX_M {
            return Err(Error::InvalidInput("[K:F] too large for lane arithmetic".into()));
        }
        let tower = alg.tower();
        let mut gens = vec![tower.sigma()];
        gens.extend_from_slice(extra);
        let field = ModField::new(tower.conductor(), &gens, prime_index)?;
        let sigma_pows =
            (0..m).map(|j| field.perm(&tower.sigma().pow(j as i64))).collect::<Result<Vec<_>>>()?;
        let c = field.embed(alg.c()).ok_or_else(|| Error::Inconsistent("c vanishes modulo p".into()))?;
        Ok(Self { field, m, sigma_pows, c })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn embed(&self, x: &DElement) -> Option<DLanes> {
        let mut out = [Lanes::ZERO; MAX_M];
        for (k, a) in x.coords().iter().enumerate() {
            out[k] = self.field.embed(a)?;
        }
        Some(out)
    }

    pub fn add(&self, a: &DLanes, b: &DLanes) -> DLanes {
        let mut out = [Lanes::ZERO; MAX_M];
        for k in 0..self.m {
            out[k] = self.field.add(&a[k], &b[k]);
        }
        out
    }

    pub fn sub(&self, a: &DLanes, b: &DLanes) -> DLanes {
        let mut out = [Lanes::ZERO; MAX_M];
        for k in 0..self.m {
            out[k] = self.field.sub(&a[k], &b[k]);
        }
        out
    }

    pub fn scale(&self, a: &DLanes, k: u64) -> DLanes {
        let mut out = [Lanes::ZERO; MAX_M];
        for i in 0..self.m {
            out[i] = self.field.scale(&a[i], k);
        }
        out
    }

    pub fn mul(&self, x: &DLanes, y: &DLanes) -> DLanes {
        let f = &self.field;
        let m = self.m;
        let mut out = [Lanes::ZERO; MAX_M];
        for j in 0..m {
            for i in 0..m {
                let mut t = f.mul(&f.apply(&self.sigma_pows[j], &x[i]), &y[j]);
                if i + j >= m {
                    t = f.mul(&t, &self.c);
                }
                let k = (i + j) % m;
                out[k] = f.add(&out[k], &t);
            }
        }
        out
    }

    pub fn apply(&self, perm: &LanePerm, x: &DLanes) -> DLanes {
        let mut out = [Lanes::ZERO; MAX_M];
        for k in 0..self.m {
            out[k] = self.field.apply(perm, &x[k]);
        }
        out
    }

    pub fn is_zero(&self, x: &DLanes) -> bool {
        x[..self.m].iter().all(|l| *l == Lanes::ZERO)
    }

    pub fn eq(&self, x: &DLanes, y: &DLanes) -> bool {
        x[..self.m] == y[..self.m]
    }
}
