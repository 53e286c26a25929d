//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] / [`BigRational`], so no operation
//! can overflow. The kernels are small and dense: the configurations this
//! crate handles have a handful of rows and at most a few dozen columns.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A dense integer vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn zeros(len: usize) -> Self {
        IntVector(vec![BigInt::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.0.iter()
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        assert_eq!(self.len(), other.len(), "dot product of vectors of different length");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v.into_iter().map(BigInt::from).collect())
    }
}

impl From<Vec<BigInt>> for IntVector {
    fn from(v: Vec<BigInt>) -> Self {
        IntVector(v)
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;

    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are ragged.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[IntVector]) -> Self {
        let rows = cols.first().map_or(0, IntVector::len);
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix columns");
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &IntVector) -> Result<IntVector, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(IntVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
                .collect(),
        ))
    }

    /// Submatrix made of the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(rows.len(), self.cols);
        for (r, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out[(r, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Submatrix made of the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (c, &j) in cols.iter().enumerate() {
                out[(i, c)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_column(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = -x;
        }
    }

    /// `col[dst] -= q * col[src]`
    fn sub_column_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = q * &self[(i, src)];
            self[(i, dst)] -= delta;
        }
    }

    /// Replaces columns `p` and `q` by `(s*p + t*q, x*p + y*q)`.
    fn combine_columns(&mut self, p: usize, q: usize, [s, t, x, y]: [&BigInt; 4]) {
        for i in 0..self.rows {
            let a = self[(i, p)].clone();
            let b = self[(i, q)].clone();
            self[(i, p)] = s * &a + t * &b;
            self[(i, q)] = x * &a + y * &b;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Column-style Hermite normal form.
///
/// Returns `(h, u)` with `h = m * u`, `u` unimodular and `h` lower
/// triangular in echelon form: pivots are positive, entries to the left of a
/// pivot are reduced into `[0, pivot)`, and every column after the last pivot
/// is zero.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, u, _) = hnf_with_rank(m);
    (h, u)
}

fn hnf_with_rank(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols());
    let mut pivot = 0;

    for r in 0..m.rows() {
        if pivot == m.cols() {
            break;
        }
        // Move a nonzero entry into the pivot column, then fold every other
        // entry of this row into it by extended-gcd column operations.
        let Some(first) = (pivot..m.cols()).find(|&j| !h[(r, j)].is_zero()) else {
            continue;
        };
        h.swap_columns(pivot, first);
        u.swap_columns(pivot, first);

        for j in pivot + 1..m.cols() {
            if h[(r, j)].is_zero() {
                continue;
            }
            let a = h[(r, pivot)].clone();
            let b = h[(r, j)].clone();
            let ext = a.extended_gcd(&b);
            let (g, s, t) = (ext.gcd, ext.x, ext.y);
            // [[s, -b/g], [t, a/g]] has determinant (s*a + t*b)/g = 1.
            let x = -(&b / &g);
            let y = &a / &g;
            let coeffs = [&s, &t, &x, &y];
            h.combine_columns(pivot, j, coeffs);
            u.combine_columns(pivot, j, coeffs);
            debug_assert!(h[(r, j)].is_zero());
        }

        if h[(r, pivot)].is_negative() {
            h.negate_column(pivot);
            u.negate_column(pivot);
        }
        let p = h[(r, pivot)].clone();
        for j in 0..pivot {
            let q = h[(r, j)].div_floor(&p);
            h.sub_column_multiple(j, pivot, &q);
            u.sub_column_multiple(j, pivot, &q);
        }
        pivot += 1;
    }
    (h, u, pivot)
}

/// A lattice basis of `{z in Z^cols : m z = 0}`.
///
/// The basis comes from the trailing columns of the unimodular transform of
/// the Hermite normal form and is then size-reduced pairwise, which keeps
/// entries (and hence binomial degrees downstream) small.
pub fn integer_kernel(m: &IntMatrix) -> Vec<IntVector> {
    let (_, u, rank) = hnf_with_rank(m);
    let mut basis: Vec<IntVector> = (rank..m.cols()).map(|j| u.column(j)).collect();
    size_reduce(&mut basis);
    for v in &mut basis {
        // Sign convention: first nonzero entry positive.
        if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
            v.0.iter_mut().for_each(|x| *x = -std::mem::take(x));
        }
    }
    basis
}

/// Greedy pairwise Gauss reduction; every step is unimodular.
fn size_reduce(basis: &mut [IntVector]) {
    let norm = |v: &IntVector| v.dot(v);
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let nj = norm(&basis[j]);
                if nj.is_zero() {
                    continue;
                }
                let ip = basis[i].dot(&basis[j]);
                // q = round(ip / nj)
                let q = (BigInt::from(2) * &ip + &nj).div_floor(&(BigInt::from(2) * &nj));
                if q.is_zero() {
                    continue;
                }
                let candidate = IntVector(basis[i].iter().zip(basis[j].iter()).map(|(a, b)| a - &q * b).collect());
                if norm(&candidate) < norm(&basis[i]) {
                    basis[i] = candidate;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).0).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    hnf_with_rank(m).2
}

/// Index of the column lattice of `m` in `Z^rows`, or `None` when the
/// columns do not span. This is the gcd of the maximal minors.
pub fn lattice_index(m: &IntMatrix) -> Option<BigInt> {
    let (h, _, rank) = hnf_with_rank(m);
    // Full row rank puts every pivot on the diagonal.
    (rank == m.rows()).then(|| (0..rank).map(|k| h[(k, k)].clone()).product())
}

/// Solves `m x = b` exactly over the rationals.
///
/// Returns `Ok(None)` when the system is inconsistent. For underdetermined
/// systems the free variables are set to zero, so the answer is canonical.
pub fn solve_rational(m: &IntMatrix, b: &IntVector) -> Result<Option<Vec<BigRational>>, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| BigRational::from_integer(m[(i, j)].clone()))
                .chain(std::iter::once(BigRational::from_integer(b[i].clone())))
                .collect()
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let pivot_row = a[r].clone();
            for (x, p) in a[i].iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols].clone();
    }
    Ok(Some(x))
}
