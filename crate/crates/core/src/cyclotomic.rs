//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! Elements are stored on the power basis `1, ζ, …, ζ^(φ(N)-1)` as a vector of
//! integer numerators over one positive common denominator. The representation
//! is kept canonical (numerators and denominator coprime), so structural
//! equality is field equality.

use alloc::{sync::Arc, vec, vec::Vec};
use core::{
    fmt,
    hash::{Hash, Hasher},
    ops,
};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n > 0, "cyclotomic polynomial of index 0");
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            rem[k + i] -= &c * bi;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// The field Q(ζ_N) together with its reduction tables.
pub struct CycloField {
    conductor: u32,
    degree: usize,
    min_poly: Vec<BigInt>,
    /// `high_powers[j]` is ζ^(degree + j) on the power basis.
    high_powers: Vec<Vec<BigInt>>,
    /// `(cos, sin)` of `2πj/N` for `j < N`.
    roots: Vec<(f64, f64)>,
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.conductor)
    }
}

impl CycloField {
    pub fn new(conductor: u32) -> Result<Arc<Self>> {
        if conductor == 0 || conductor > 10_000 {
            return Err(Error::InvalidConductor(conductor));
        }
        let min_poly = cyclotomic_polynomial(conductor);
        let degree = min_poly.len() - 1;
        let mut high_powers = Vec::with_capacity(conductor as usize - degree);
        let top: Vec<BigInt> = min_poly[..degree].iter().map(|c| -c).collect();
        let mut current = top.clone();
        for _ in degree..conductor as usize {
            high_powers.push(current.clone());
            let carry = current[degree - 1].clone();
            for k in (1..degree).rev() {
                current[k] = current[k - 1].clone();
            }
            current[0] = BigInt::zero();
            if !carry.is_zero() {
                for (k, t) in top.iter().enumerate() {
                    current[k] += &carry * t;
                }
            }
        }
        let roots = (0..conductor)
            .map(|j| {
                let angle = 2.0 * core::f64::consts::PI * f64::from(j) / f64::from(conductor);
                (libm::cos(angle), libm::sin(angle))
            })
            .collect();
        Ok(Arc::new(Self { conductor, degree, min_poly, high_powers, roots }))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Degree φ(N) of the field over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The minimal polynomial Φ_N of ζ, lowest degree first.
    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    /// Exponents `k` in `1..N` coprime to `N`, in increasing order.
    pub fn units(&self) -> Vec<u32> {
        (1..=self.conductor)
            .filter(|k| k.gcd(&self.conductor) == 1)
            .map(|k| k % self.conductor)
            .collect()
    }

    pub fn zero(self: &Arc<Self>) -> CycloElement {
        CycloElement { field: self.clone(), num: vec![BigInt::zero(); self.degree], den: BigInt::one() }
    }

    pub fn one(self: &Arc<Self>) -> CycloElement {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, value: i64) -> CycloElement {
        self.from_bigint(BigInt::from(value))
    }

    pub fn from_bigint(self: &Arc<Self>, value: BigInt) -> CycloElement {
        let mut e = self.zero();
        e.num[0] = value;
        e
    }

    pub fn from_rational(self: &Arc<Self>, value: &Rational) -> CycloElement {
        let mut e = self.zero();
        e.num[0] = value.numer().clone();
        e.den = value.denom().clone();
        e
    }

    /// ζ^j for any integer `j`.
    pub fn zeta_pow(self: &Arc<Self>, j: i64) -> CycloElement {
        let mut buf = vec![BigInt::zero(); self.conductor as usize];
        buf[j.rem_euclid(i64::from(self.conductor)) as usize] = BigInt::one();
        CycloElement::from_parts(self.clone(), self.reduce(buf), BigInt::one())
    }

    /// Element with the given power-basis coefficients; missing trailing
    /// coefficients are zero.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[Rational]) -> Result<CycloElement> {
        if coeffs.len() > self.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got: coeffs.len() });
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num = vec![BigInt::zero(); self.degree];
        for (slot, c) in num.iter_mut().zip(coeffs) {
            *slot = c.numer() * (&den / c.denom());
        }
        Ok(CycloElement::from_parts(self.clone(), num, den))
    }

    pub fn from_int_coeffs(self: &Arc<Self>, coeffs: &[i64]) -> Result<CycloElement> {
        if coeffs.len() > self.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got: coeffs.len() });
        }
        let mut num = vec![BigInt::zero(); self.degree];
        for (slot, c) in num.iter_mut().zip(coeffs) {
            *slot = BigInt::from(*c);
        }
        Ok(CycloElement::from_parts(self.clone(), num, BigInt::one()))
    }

    /// Fold a length-N vector indexed by exponents of ζ onto the power basis.
    fn reduce(&self, mut buf: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree;
        let (low, high) = buf.split_at_mut(d);
        for (row, c) in self.high_powers.iter().zip(high.iter()) {
            if c.is_zero() {
                continue;
            }
            for (slot, r) in low.iter_mut().zip(row) {
                if !r.is_zero() {
                    *slot += c * r;
                }
            }
        }
        buf.truncate(d);
        buf
    }
}

/// Galois automorphism ζ ↦ ζ^k of Q(ζ_N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    exponent: u32,
    conductor: u32,
}

impl Automorphism {
    pub fn new(exponent: i64, conductor: u32) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::InvalidConductor(conductor));
        }
        let k = exponent.rem_euclid(i64::from(conductor)) as u32;
        let k = if conductor == 1 { 1 } else { k };
        if k.gcd(&conductor) != 1 {
            return Err(Error::InvalidExponent { exponent, conductor });
        }
        Ok(Self { exponent: k, conductor })
    }

    pub fn identity(conductor: u32) -> Self {
        Self { exponent: 1 % conductor.max(2), conductor }
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.conductor, other.conductor, "automorphisms of different fields");
        let k = (u64::from(self.exponent) * u64::from(other.exponent)) % u64::from(self.conductor.max(1));
        Self { exponent: if self.conductor == 1 { 1 } else { k as u32 }, conductor: self.conductor }
    }

    pub fn inverse(&self) -> Self {
        self.pow(i64::from(self.order()) - 1)
    }

    pub fn pow(&self, e: i64) -> Self {
        let ord = i64::from(self.order());
        let mut e = e.rem_euclid(ord);
        let mut acc = Self::identity(self.conductor);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Order in (Z/NZ)^×.
    pub fn order(&self) -> u32 {
        if self.conductor <= 2 {
            return 1;
        }
        let mut k = self.exponent;
        let mut ord = 1;
        while k != 1 {
            k = ((u64::from(k) * u64::from(self.exponent)) % u64::from(self.conductor)) as u32;
            ord += 1;
        }
        ord
    }

    pub fn try_apply(&self, x: &CycloElement) -> Result<CycloElement> {
        if self.conductor != x.conductor() {
            return Err(Error::ConductorMismatch { left: self.conductor, right: x.conductor() });
        }
        if self.exponent == 1 || x.is_rational() {
            return Ok(x.clone());
        }
        let n = self.conductor as u64;
        let mut buf = vec![BigInt::zero(); self.conductor as usize];
        for (i, c) in x.num.iter().enumerate() {
            if !c.is_zero() {
                buf[((i as u64 * u64::from(self.exponent)) % n) as usize] += c;
            }
        }
        Ok(CycloElement::from_parts(x.field.clone(), x.field.reduce(buf), x.den.clone()))
    }

    /// Apply to an element; panics on a conductor mismatch.
    pub fn apply(&self, x: &CycloElement) -> CycloElement {
        self.try_apply(x).expect("automorphism applied to element of another field")
    }
}

/// An element of Q(ζ_N).
#[derive(Clone)]
pub struct CycloElement {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloElement {
    fn from_parts(field: Arc<CycloField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if num.iter().all(Zero::is_zero) {
            return Self { field, num, den: BigInt::one() };
        }
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        if !den.is_one() {
            let g = num.iter().fold(den.clone(), |g, c| if c.is_zero() { g } else { g.gcd(c) });
            if !g.is_one() {
                den /= &g;
                for c in &mut num {
                    *c /= &g;
                }
            }
        }
        Self { field, num, den }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    /// Integer numerators on the power basis.
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    /// Common positive denominator.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coeff(&self, i: usize) -> Rational {
        Rational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeff(0))
    }

    /// Whether the element lies in Z[ζ_N], the ring of integers.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.conductor() == other.conductor() {
            Ok(())
        } else {
            Err(Error::ConductorMismatch { left: self.conductor(), right: other.conductor() })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_sub(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_sub(other, true))
    }

    fn add_sub(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        let combine = |a: &BigInt, b: BigInt| if negate { a - b } else { a + b };
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| combine(a, b.clone())).collect();
            return Self::from_parts(self.field.clone(), num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| combine(&(a * &other.den), b * &self.den))
            .collect();
        Self::from_parts(self.field.clone(), num, &self.den * &other.den)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.field.zero());
        }
        if self.is_rational() {
            return Ok(other.scale_parts(&self.num[0], &self.den));
        }
        if other.is_rational() {
            return Ok(self.scale_parts(&other.num[0], &other.den));
        }
        let n = self.field.conductor as usize;
        let mut buf = vec![BigInt::zero(); n];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    buf[(i + j) % n] += a * b;
                }
            }
        }
        let num = self.field.reduce(buf);
        Ok(Self::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    fn scale_parts(&self, num: &BigInt, den: &BigInt) -> Self {
        let scaled = self.num.iter().map(|c| c * num).collect();
        Self::from_parts(self.field.clone(), scaled, &self.den * den)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.scale_parts(r.numer(), r.denom())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale_parts(&BigInt::from(k), &BigInt::one())
    }

    /// Multiplicative inverse, computed by the extended Euclidean algorithm
    /// against Φ_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.field.from_rational(&r.recip()));
        }
        let a: Vec<Rational> = self.num.iter().map(|c| Rational::from_integer(c.clone())).collect();
        let m: Vec<Rational> = self.field.min_poly.iter().map(|c| Rational::from_integer(c.clone())).collect();
        let s = poly_inverse_mod(&a, &m).ok_or(Error::NotInvertible)?;
        // s inverts the numerator polynomial; restore the denominator.
        let den_r = Rational::from_integer(self.den.clone());
        let coeffs: Vec<Rational> = s.into_iter().map(|c| c * &den_r).collect();
        self.field.from_coeffs(&coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Complex conjugation ζ ↦ ζ^(-1).
    pub fn conj(&self) -> Self {
        Automorphism::new(-1, self.conductor()).expect("-1 is a unit").apply(self)
    }

    /// Complex embedding at ζ = exp(2πi/N) in double precision (53-bit
    /// mantissa). The absolute error is a small multiple of 2^-53 times the
    /// sum of the coefficient magnitudes.
    pub fn embed(&self) -> Complex64 {
        let den = Rational::from_integer(self.den.clone());
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = if self.den.is_one() {
                c.to_f64().unwrap_or(f64::NAN)
            } else {
                (Rational::from_integer(c.clone()) / &den).to_f64().unwrap_or(f64::NAN)
            };
            let (re, im) = self.field.roots[i];
            acc += Complex64::new(v * re, v * im);
        }
        acc
    }
}

/// Inverse of `a` modulo `m` in Q[x], or `None` when they share a factor.
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Option<Vec<Rational>> {
    let mut r0 = trim(m.to_vec());
    let mut r1 = trim(a.to_vec());
    let mut s0: Vec<Rational> = Vec::new();
    let mut s1: Vec<Rational> = vec![Rational::one()];
    while r1.len() > 1 {
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
    }
    let c = r1.first()?.clone();
    if c.is_zero() {
        return None;
    }
    let inv_c = c.recip();
    let (_, s) = poly_divmod(&s1, &trim(m.to_vec()));
    Some(s.into_iter().map(|x| x * &inv_c).collect())
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        return (Vec::new(), trim(rem));
    }
    let lead_inv = b[db].recip();
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            rem[k + i] -= &c * bi;
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.conductor() == other.conductor() && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloElement {}

impl Hash for CycloElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor().hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{i}")?,
            }
        }
        write!(f, " [N={}]", self.conductor())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl ops::$trait<&CycloElement> for &CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: &CycloElement) -> CycloElement {
                self.$checked(rhs).expect("cyclotomic elements of different conductors")
            }
        }
        impl ops::$trait<CycloElement> for CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: CycloElement) -> CycloElement {
                (&self).$method(&rhs)
            }
        }
        impl ops::$trait<&CycloElement> for CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: &CycloElement) -> CycloElement {
                (&self).$method(rhs)
            }
        }
        impl ops::$trait<CycloElement> for &CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: CycloElement) -> CycloElement {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl ops::Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl ops::Neg for CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        -&self
    }
}
