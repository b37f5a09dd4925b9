//! Dense matrices, with exact routines over cyclotomic fields and over Q.

use alloc::{sync::Arc, vec, vec::Vec};
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::cyclotomic::{Automorphism, CycloElement, CycloField, Rational};
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    /// Assemble a matrix from a square grid of equally sized blocks.
    pub fn from_blocks(blocks: &[Vec<Matrix<T>>]) -> Self {
        let br = blocks[0][0].rows;
        let bc = blocks[0][0].cols;
        Self::from_fn(blocks.len() * br, blocks[0].len() * bc, |i, j| {
            blocks[i / br][j / bc][(i % br, j % bc)].clone()
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix<CycloElement> {
    pub fn zeros(field: &Arc<CycloField>, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| field.zero())
    }

    pub fn identity(field: &Arc<CycloField>, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.data[0].field()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let field = self.field().clone();
        let mut out = Self::zeros(&field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a.checked_mul(b)?;
                        out[(i, j)] = &out[(i, j)] + &prod;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&CycloElement, &CycloElement) -> CycloElement) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, got: other.rows * other.cols });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)], &other[(i, j)])))
    }

    pub fn scale(&self, x: &CycloElement) -> Self {
        self.map(|a| a * x)
    }

    pub fn mul_vec(&self, v: &[CycloElement]) -> Result<Vec<CycloElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let field = self.field().clone();
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(field.zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        &acc + &(a * b)
                    }
                })
            })
            .collect())
    }

    /// Apply a field automorphism entrywise.
    pub fn apply_aut(&self, aut: &Automorphism) -> Self {
        self.map(|a| aut.apply(a))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycloElement::is_zero)
    }

    pub fn embed(&self) -> Matrix<Complex64> {
        self.map(CycloElement::embed)
    }

    /// Row-reduce in place; returns the determinant factor and pivot columns.
    fn eliminate(&mut self, rhs: Option<&mut Vec<CycloElement>>) -> Result<CycloElement> {
        let n = self.rows;
        let field = self.field().clone();
        let mut det = field.one();
        let mut rhs = rhs;
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !self[(r, col)].is_zero())
                .min_by_key(|&r| if self[(r, col)].is_rational() { 0 } else { 1 });
            let Some(p) = pivot else {
                return Ok(field.zero());
            };
            if p != col {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, col * self.cols + j);
                }
                if let Some(b) = rhs.as_deref_mut() {
                    b.swap(p, col);
                }
                det = -det;
            }
            let piv = self[(col, col)].clone();
            det = &det * &piv;
            let piv_inv = piv.inv()?;
            for r in col + 1..n {
                if self[(r, col)].is_zero() {
                    continue;
                }
                let factor = &self[(r, col)] * &piv_inv;
                for j in col..self.cols {
                    if !self[(col, j)].is_zero() {
                        let t = &factor * &self[(col, j)];
                        self[(r, j)] = &self[(r, j)] - &t;
                    }
                }
                if let Some(b) = rhs.as_deref_mut() {
                    let t = &factor * &b[col];
                    b[r] = &b[r] - &t;
                }
            }
        }
        Ok(det)
    }

    pub fn det(&self) -> Result<CycloElement> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        if self.rows == 0 {
            return Err(Error::InvalidInput("determinant of an empty matrix".into()));
        }
        if self.rows <= MINOR_EXPANSION_MAX {
            return Ok(self.det_by_minors());
        }
        let mut work = self.clone();
        work.eliminate(None)
    }

    /// Division-free expansion: `minors[S]` is the determinant of the first
    /// `|S|` rows restricted to the columns in `S`, built up by expanding
    /// along the last of those rows.
    fn det_by_minors(&self) -> CycloElement {
        let n = self.rows;
        let field = self.field().clone();
        let mut minors = vec![field.zero(); 1 << n];
        minors[0] = field.one();
        for mask in 1usize..(1 << n) {
            let row = mask.count_ones() as usize - 1;
            let mut acc = field.zero();
            let mut greater = 0;
            for j in (0..n).rev() {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let sub = &minors[mask ^ (1 << j)];
                let entry = &self[(row, j)];
                if !entry.is_zero() && !sub.is_zero() {
                    let t = entry * sub;
                    acc = if greater % 2 == 0 { &acc + &t } else { &acc - &t };
                }
                greater += 1;
            }
            minors[mask] = acc;
        }
        minors[(1 << n) - 1].clone()
    }

    /// Solve `self · x = b` for square invertible `self`.
    pub fn solve(&self, b: &[CycloElement]) -> Result<Vec<CycloElement>> {
        if self.rows != self.cols || b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let mut work = self.clone();
        let mut rhs = b.to_vec();
        let det = work.eliminate(Some(&mut rhs))?;
        if det.is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let mut x = vec![self.field().zero(); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i].clone();
            for j in i + 1..n {
                if !work[(i, j)].is_zero() {
                    acc = &acc - &(&work[(i, j)] * &x[j]);
                }
            }
            x[i] = &acc * &work[(i, i)].inv()?;
        }
        Ok(x)
    }
}

/// Largest size whose determinant uses [`Matrix::det_by_minors`].
const MINOR_EXPANSION_MAX: usize = 10;

/// Determinant of a complex matrix by elimination with partial pivoting.
pub fn complex_det(m: &Matrix<Complex64>) -> Complex64 {
    let n = m.rows();
    assert_eq!(n, m.cols(), "square matrix expected");
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let p = (col..n)
            .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
            .expect("nonempty range");
        if a[(p, col)].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != col {
            for j in 0..n {
                a.data.swap(p * n + j, col * n + j);
            }
            det = -det;
        }
        let piv = a[(col, col)];
        det *= piv;
        for r in col + 1..n {
            let factor = a[(r, col)] / piv;
            for j in col..n {
                let t = factor * a[(col, j)];
                a[(r, j)] -= t;
            }
        }
    }
    det
}

/// Express `target` as a rational combination of `vectors`, if possible.
pub fn rational_solve(vectors: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = vectors.len();
    let dim = target.len();
    // Augmented system: rows are coordinates, columns are the vectors.
    let mut a: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rational> = vectors.iter().map(|v| v[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..dim).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let inv = a[row][col].recip();
        for v in &mut a[row] {
            *v *= &inv;
        }
        for r in 0..dim {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=k {
                    let t = &f * &a[row][c];
                    a[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = a[i][k].clone();
    }
    Some(x)
}

/// Incrementally maintained row-echelon basis of a subspace of Q^d.
#[derive(Clone, Debug, Default)]
pub struct RationalSpan {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RationalSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Add `v`; returns whether it was independent of the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in &mut r {
            *x *= &inv;
        }
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// Determinant of a small square matrix over Q.
pub fn rational_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    det
}
