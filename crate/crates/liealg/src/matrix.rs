//! Dense matrices over an exact scalar ring.
//!
//! Two algorithm families live here: ordinary Gauss-Jordan elimination for
//! matrices over a [`Field`], and fraction-free (Bareiss) elimination for
//! integer matrices, which keeps every intermediate value an exact minor of
//! the input and only introduces rationals during back-substitution.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{LieError, Result};
use crate::scalar::{Field, Fq, Rat, Scalar};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> S {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        let mut t = S::zero();
        for i in 0..self.rows {
            t = t + self[(i, i)].clone();
        }
        t
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                    out[(i, j)] = t;
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert_eq!(self.rows, self.cols, "pow of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
            }
        }
        acc
    }

    /// Smallest `k >= 1` with `self^k = 0`, or `None` if `self` is not
    /// nilpotent (detected by exceeding the matrix size).
    pub fn nilpotency_degree(&self) -> Option<usize> {
        assert_eq!(self.rows, self.cols);
        let mut power = self.clone();
        for k in 1..=self.rows.max(1) {
            if power.is_zero_matrix() {
                return Some(k);
            }
            power = power.matmul(self);
        }
        if power.is_zero_matrix() {
            Some(self.rows.max(1))
        } else {
            None
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for &Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: &Mat<S>) -> Mat<S> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: &Mat<S>) -> Mat<S> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &Mat<S> {
    type Output = Mat<S>;
    fn neg(self) -> Mat<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> Mul for &Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: &Mat<S>) -> Mat<S> {
        self.matmul(rhs)
    }
}

impl<S: Scalar> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Field elimination
// ---------------------------------------------------------------------------

impl<S: Field> Mat<S> {
    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m[(r, c)].inverse().expect("nonzero pivot must invert");
            for j in c..m.cols {
                let t = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = t;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let t = m[(i, j)].clone() - factor.clone() * m[(r, j)].clone();
                    m[(i, j)] = t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = S::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return S::zero();
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = -det;
            }
            det = det * m[(c, c)].clone();
            let inv = m[(c, c)].inverse().unwrap();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let t = m[(i, j)].clone() - factor.clone() * m[(c, j)].clone();
                    m[(i, j)] = t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| red[(i, j + n)].clone()))
    }

    /// Unique solution of `self * x = b`, erring on inconsistency or a
    /// nontrivial kernel.
    pub fn solve_unique(&self, b: &[S]) -> Result<Vec<S>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(LieError::Inconsistent);
        }
        if pivots.len() < self.cols {
            return Err(LieError::NotInjective);
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red[(r, self.cols)].clone();
        }
        Ok(x)
    }

    /// Canonical kernel basis: one vector per free column of the RREF, with a
    /// `1` in the free position.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (red, pivots) = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -red[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }
}

// ---------------------------------------------------------------------------
// Fraction-free integer elimination (Bareiss)
// ---------------------------------------------------------------------------

fn exact_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    assert!(r.is_zero(), "fraction-free elimination produced a non-exact division");
    q
}

/// Forward fraction-free elimination in place.  Returns the pivot positions
/// `(row, col)` in order and the sign of the row permutation.
fn bareiss_forward(m: &mut Mat<BigInt>) -> (Vec<(usize, usize)>, i32) {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut sign = 1;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if pr != r {
            m.swap_rows(r, pr);
            sign = -sign;
        }
        let pivot = m[(r, c)].clone();
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &pivot * &m[(i, j)] - &m[(i, c)] * &m[(r, j)];
                m[(i, j)] = exact_div(&num, &prev);
            }
            m[(i, c)] = BigInt::zero();
        }
        prev = pivot;
        pivots.push((r, c));
        r += 1;
    }
    (pivots, sign)
}

impl Mat<BigInt> {
    /// Rank over the rationals, computed without leaving the integers.
    pub fn int_rank(&self) -> usize {
        let mut m = self.clone();
        bareiss_forward(&mut m).0.len()
    }

    /// Determinant via fraction-free elimination.
    pub fn int_det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let (pivots, sign) = bareiss_forward(&mut m);
        if pivots.len() < self.rows {
            return BigInt::zero();
        }
        let (r, c) = *pivots.last().unwrap();
        let d = m[(r, c)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Unique rational solution of `self * x = b`; the elimination stays in
    /// the integers and rationals appear only in back-substitution.
    pub fn int_solve_unique(&self, b: &[BigInt]) -> Result<Vec<Rat>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (pivots, _) = bareiss_forward(&mut aug);
        if pivots.iter().any(|&(_, c)| c == self.cols) {
            return Err(LieError::Inconsistent);
        }
        // Rows past the last pivot are zero in the coefficient part; their
        // right-hand entries must vanish for the system to be consistent.
        for i in pivots.len()..self.rows {
            if !aug[(i, self.cols)].is_zero() {
                return Err(LieError::Inconsistent);
            }
        }
        if pivots.len() < self.cols {
            return Err(LieError::NotInjective);
        }
        let mut x = vec![Rat::zero(); self.cols];
        for &(r, c) in pivots.iter().rev() {
            let mut acc = Rat::from_integer(aug[(r, self.cols)].clone());
            for j in c + 1..self.cols {
                acc -= Rat::from_integer(aug[(r, j)].clone()) * x[j].clone();
            }
            x[c] = acc / Rat::from_integer(aug[(r, c)].clone());
        }
        Ok(x)
    }
}

/// Reduces an integer matrix entrywise into the prime field `F_p`.
pub fn mat_mod_p(m: &Mat<BigInt>, p: u64) -> Result<Mat<Fq>> {
    if !crate::scalar::is_prime(p) {
        return Err(LieError::NotPrime(p));
    }
    let pb = BigInt::from(p);
    let mut out = Mat::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let r = i64::try_from(&m[(i, j)].mod_floor(&pb)).unwrap();
            out[(i, j)] = Fq::prime(p, r)?;
        }
    }
    Ok(out)
}

/// Clears denominators row by row, returning an integer matrix with the same
/// row space, kernel, and rank.
pub fn clear_denominators(m: &Mat<Rat>) -> Mat<BigInt> {
    let mut out = Mat::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        let mut lcm = BigInt::one();
        for j in 0..m.cols() {
            lcm = lcm.lcm(m[(i, j)].denom());
        }
        for j in 0..m.cols() {
            let scaled = m[(i, j)].clone() * Rat::from_integer(lcm.clone());
            assert!(scaled.is_integer());
            out[(i, j)] = scaled.to_integer();
        }
    }
    out
}
