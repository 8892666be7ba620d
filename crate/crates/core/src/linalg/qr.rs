//! Householder QR of the transposed data matrix, with optional column
//! pivoting.
//!
//! For a `p x n` data matrix `X` (`n <= p`) the pivoted factorization is
//! `Xᵀ Π = Q Hᵀ` with `Q` an `n x n` orthogonal matrix and `H` a `p x n`
//! lower-trapezoidal matrix whose diagonal is positive and non-increasing.
//! Since `Πᵀ X Xᵀ Π = H Hᵀ`, `H` is the (partial) Cholesky factor of the
//! permuted scatter matrix, obtained without ever forming `X Xᵀ`.

use super::matrix::{DenseMatrix, Permutation};
use crate::error::{Error, Result};

/// Result of a QR factorization of `Xᵀ`, seen from the side of `X`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    q: DenseMatrix,
    h: DenseMatrix,
    perm: Permutation,
}

impl PivotedQr {
    /// `n x n` orthogonal factor.
    pub fn q(&self) -> &DenseMatrix {
        &self.q
    }

    /// `p x n` lower-trapezoidal factor with positive diagonal.
    pub fn h(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn into_parts(self) -> (DenseMatrix, DenseMatrix, Permutation) {
        (self.q, self.h, self.perm)
    }
}

/// Column-pivoted QR of `xᵀ`: at each step the remaining row of `x` with the
/// largest residual norm is moved forward (ties go to the lowest original
/// index), so the diagonal of `H` is non-increasing.
///
/// Fails with [`Error::RankDeficient`] when a diagonal entry of `H` drops to
/// `n * eps * H(0,0)` or below.
pub fn pivoted_qr_of_transpose(x: &DenseMatrix) -> Result<PivotedQr> {
    qr_of_transpose_impl(x, true)
}

/// Unpivoted QR of `xᵀ`; `perm` is the identity and `H` is the plain
/// Cholesky factor of `x xᵀ`.
pub fn qr_of_transpose(x: &DenseMatrix) -> Result<PivotedQr> {
    qr_of_transpose_impl(x, false)
}

fn qr_of_transpose_impl(x: &DenseMatrix, pivot: bool) -> Result<PivotedQr> {
    let (p, n) = x.shape();
    if n > p {
        return Err(Error::Dimension(format!(
            "need at most as many samples as dimensions, got n={n} > p={p}"
        )));
    }
    let a = x.transpose();
    let scale = if pivot {
        None
    } else {
        Some((0..p).map(|j| norm(a.col(j))).fold(0.0, f64::max))
    };
    let f = householder(a, pivot);

    let lead = f.r[(0, 0)];
    let reference = scale.unwrap_or(lead);
    let threshold = n as f64 * f64::EPSILON * reference;
    for k in 0..n {
        let v = f.r[(k, k)];
        if !(v > threshold) {
            return Err(Error::RankDeficient {
                index: k,
                value: v,
                threshold,
            });
        }
    }
    Ok(PivotedQr {
        q: f.q,
        h: f.r.transpose(),
        perm: Permutation::new(f.order).expect("pivot order is a permutation"),
    })
}

/// Orthogonal factor of the QR decomposition of a square matrix, with signs
/// chosen so that `R` has a non-negative diagonal.
///
/// Applied to a matrix of i.i.d. standard normals this is a Haar-distributed
/// orthogonal matrix.
pub fn orthogonal_factor(a: &DenseMatrix) -> DenseMatrix {
    assert!(a.is_square(), "orthogonal_factor needs a square matrix");
    householder(a.clone(), false).q
}

struct Householder {
    q: DenseMatrix,
    r: DenseMatrix,
    order: Vec<usize>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Householder QR `A Π = Q R` of an `m x k` matrix, with `R` made to have a
/// non-negative diagonal.
fn householder(mut w: DenseMatrix, pivot: bool) -> Householder {
    let (m, k) = w.shape();
    let steps = m.min(k);
    let mut order: Vec<usize> = (0..k).collect();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(steps);

    for s in 0..steps {
        if pivot {
            let mut best = s;
            let mut best_norm = norm(&w.col(s)[s..]);
            for c in (s + 1)..k {
                let nc = norm(&w.col(c)[s..]);
                if nc > best_norm || (nc == best_norm && order[c] < order[best]) {
                    best = c;
                    best_norm = nc;
                }
            }
            if best != s {
                swap_cols(&mut w, s, best);
                order.swap(s, best);
            }
        }

        let x = &w.col(s)[s..];
        let xnorm = norm(x);
        let mut v = x.to_vec();
        if xnorm == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        let alpha = if x[0] >= 0.0 { -xnorm } else { xnorm };
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|t| t * t).sum();
        if vv == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        for c in s..k {
            let col = &mut w.col_mut(c)[s..];
            let t = 2.0 * v.iter().zip(col.iter()).map(|(a, b)| a * b).sum::<f64>() / vv;
            for (ci, vi) in col.iter_mut().zip(&v) {
                *ci -= t * vi;
            }
        }
        // Exact zeros below the diagonal.
        w[(s, s)] = alpha;
        for i in (s + 1)..m {
            w[(i, s)] = 0.0;
        }
        let scale = (2.0 / vv).sqrt();
        v.iter_mut().for_each(|t| *t *= scale);
        reflectors.push(v);
    }

    // Q = H_0 H_1 ... H_{steps-1}, accumulated backwards onto the identity.
    let mut q = DenseMatrix::identity(m);
    for (s, v) in reflectors.iter().enumerate().rev() {
        if v.is_empty() {
            continue;
        }
        for c in s..m {
            let col = &mut q.col_mut(c)[s..];
            let t: f64 = v.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
            for (ci, vi) in col.iter_mut().zip(v) {
                *ci -= t * vi;
            }
        }
    }

    let mut r = DenseMatrix::zeros(m, k);
    for j in 0..k {
        for i in 0..=j.min(m - 1) {
            r[(i, j)] = w[(i, j)];
        }
    }
    for s in 0..steps {
        if r[(s, s)] < 0.0 {
            for j in s..k {
                r[(s, j)] = -r[(s, j)];
            }
            for x in q.col_mut(s) {
                *x = -*x;
            }
        }
    }
    Householder { q, r, order }
}

fn swap_cols(w: &mut DenseMatrix, a: usize, b: usize) {
    for i in 0..w.rows() {
        let t = w[(i, a)];
        w[(i, a)] = w[(i, b)];
        w[(i, b)] = t;
    }
}
