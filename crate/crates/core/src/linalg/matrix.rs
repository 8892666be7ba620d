//! Storage types: a column-major dense matrix, a packed lower-triangular
//! factor and a row permutation.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};

/// Real matrix stored in column-major order.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from column-major data, rejecting empty shapes and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "matrix shape must be non-empty, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: k % rows,
                col: k / rows,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for j in 0..ncols {
            data.extend(rows.iter().map(|r| r[j]));
        }
        Self::new(nrows, ncols, data)
    }

    /// Builds a matrix by evaluating `f(i, j)` for every entry.
    ///
    /// Panics on an empty shape or a non-finite value.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be non-empty");
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                let v = f(i, j);
                assert!(v.is_finite(), "non-finite entry at ({i}, {j})");
                data.push(v);
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be non-empty");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Column-major backing storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Copy of the block starting at `(r0, c0)` with the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| c * self[(i, j)])
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let bj = other.col(j);
            let oj = out.col_mut(j);
            for (k, &b) in bj.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let ak = &self.data[k * self.rows..(k + 1) * self.rows];
                for (o, &a) in oj.iter_mut().zip(ak) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self * selfᵀ`, symmetric by construction.
    pub fn gram(&self) -> Self {
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for k in 0..self.cols {
            let c = self.col(k);
            for j in 0..n {
                let cj = c[j];
                if cj == 0.0 {
                    continue;
                }
                for i in j..n {
                    out.data[j * n + i] += c[i] * cj;
                }
            }
        }
        for j in 0..n {
            for i in (j + 1)..n {
                out.data[i * n + j] = out.data[j * n + i];
            }
        }
        out
    }

    /// `self * diag(d) * selfᵀ`.
    pub fn weighted_gram(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.cols);
        let scaled = Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * d[j].sqrt());
        scaled.gram()
    }

    /// Largest `|a_ij - a_ji|` relative to the largest absolute entry.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for j in 0..self.cols {
            for i in (j + 1)..self.rows {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst / scale
    }

    /// `(A + Aᵀ) / 2`.
    pub fn symmetrize(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            0.5 * (self[(i, j)] + self[(j, i)])
        })
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>12.6} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Square lower-triangular matrix in packed row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular {
    dim: usize,
    data: Vec<f64>,
}

impl LowerTriangular {
    #[inline]
    fn offset(i: usize, j: usize) -> usize {
        i * (i + 1) / 2 + j
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            data: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut l = Self::zeros(dim);
        for i in 0..dim {
            l.set(i, i, 1.0);
        }
        l
    }

    /// Takes the lower triangle of the leading `dim x dim` block of `m`.
    pub fn from_dense(m: &DenseMatrix, dim: usize) -> Self {
        assert!(dim <= m.rows() && dim <= m.cols());
        let mut l = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                l.set(i, j, m[(i, j)]);
            }
        }
        l
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)`, zero above the diagonal.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.data[Self::offset(i, j)]
        }
    }

    /// Sets entry `(i, j)` with `j <= i`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            j <= i && i < self.dim,
            "({i}, {j}) is not in the lower triangle"
        );
        self.data[Self::offset(i, j)] = v;
    }

    /// Row `i` up to and including the diagonal.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[Self::offset(i, 0)..Self::offset(i, i) + 1]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn has_positive_diagonal(&self) -> bool {
        (0..self.dim).all(|i| self.get(i, i) > 0.0)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// Trailing diagonal block starting at `start`, itself lower triangular.
    pub fn trailing_block(&self, start: usize) -> Self {
        assert!(start < self.dim);
        let dim = self.dim - start;
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                out.set(i, j, self.get(start + i, start + j));
            }
        }
        out
    }

    /// `L Lᵀ`.
    pub fn gram(&self) -> DenseMatrix {
        self.to_dense().gram()
    }

    /// `sum_i log L_ii`, i.e. half the log-determinant of `L Lᵀ`.
    pub fn log_diag_sum(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).ln()).sum()
    }
}

/// Row permutation stored as `order[i]` = original index placed at position `i`.
///
/// Applied to a `p x n` matrix `X` it yields `Πᵀ X`, whose row `i` is row
/// `order[i]` of `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    /// Validates that `order` is a bijection on `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &k in &order {
            if k >= order.len() || seen[k] {
                return Err(Error::Domain(format!(
                    "{order:?} is not a permutation of 0..{}",
                    order.len()
                )));
            }
            seen[k] = true;
        }
        Ok(Self { order })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &k)| i == k)
    }

    /// `Πᵀ X`: row `i` of the result is row `order[i]` of `x`.
    pub fn permute_rows(&self, x: &DenseMatrix) -> DenseMatrix {
        assert_eq!(x.rows(), self.len());
        DenseMatrix::from_fn(x.rows(), x.cols(), |i, j| x[(self.order[i], j)])
    }

    /// `Πᵀ A Π` for a square `a`.
    pub fn congruence(&self, a: &DenseMatrix) -> DenseMatrix {
        assert!(a.is_square() && a.rows() == self.len());
        DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(self.order[i], self.order[j])])
    }

    /// `Π Y Πᵀ`, the inverse of [`Permutation::congruence`].
    pub fn uncongruence(&self, y: &DenseMatrix) -> DenseMatrix {
        assert!(y.is_square() && y.rows() == self.len());
        let mut out = DenseMatrix::zeros(y.rows(), y.cols());
        for j in 0..y.cols() {
            for i in 0..y.rows() {
                out[(self.order[i], self.order[j])] = y[(i, j)];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_reject_bad_input() {
        assert!(DenseMatrix::new(0, 2, vec![]).is_err());
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
        assert_eq!(
            DenseMatrix::new(2, 2, vec![1.0, f64::NAN, 0.0, 1.0]),
            Err(Error::NonFinite { row: 1, col: 0 })
        );
        assert!(DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0]]).is_err());
    }

    #[test]
    fn from_rows_is_column_major() {
        let m = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_eq!(m.as_slice(), &[1.0, 3.0, 2.0, 4.0]);
        assert_eq!(m[(0, 1)], 2.0);
    }

    #[test]
    fn products() {
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, -1.0]]).unwrap();
        let b = a.transpose();
        assert_eq!(a.matmul(&b), a.gram());
        assert_eq!(
            a.gram(),
            DenseMatrix::from_rows(&[&[5.0, 2.0], &[2.0, 2.0]]).unwrap()
        );
        let w = a.weighted_gram(&[4.0, 1.0, 1.0]);
        assert!((w[(0, 0)] - 8.0).abs() < 1e-14);
    }

    #[test]
    fn packed_lower_triangular() {
        let m = DenseMatrix::from_rows(&[&[1.0, 9.0, 9.0], &[2.0, 3.0, 9.0], &[4.0, 5.0, 6.0]])
            .unwrap();
        let l = LowerTriangular::from_dense(&m, 3);
        assert_eq!(l.get(0, 2), 0.0);
        assert_eq!(l.row(2), &[4.0, 5.0, 6.0]);
        let t = l.trailing_block(1);
        assert_eq!(
            t.to_dense(),
            DenseMatrix::from_rows(&[&[3.0, 0.0], &[5.0, 6.0]]).unwrap()
        );
    }

    #[test]
    fn permutation_roundtrip() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        let perm = Permutation::new(vec![2, 0, 1]).unwrap();
        let a = DenseMatrix::from_fn(3, 3, |i, j| (3 * i + j) as f64);
        let x = perm.permute_rows(&a);
        assert_eq!(x[(0, 0)], 6.0);
        let c = perm.congruence(&a);
        assert_eq!(perm.uncongruence(&c), a);
    }
}
