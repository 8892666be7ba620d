use super::matrix::{DenseMatrix, LowerTriangular};
use crate::error::{Error, Result};

/// Relative asymmetry accepted by [`cholesky`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Cholesky factor `L` (positive diagonal) with `L Lᵀ = a`.
///
/// A pivot at or below `dim * eps * max(diag(a))` is reported as
/// [`Error::NotPositiveDefinite`].
pub fn cholesky(a: &DenseMatrix) -> Result<LowerTriangular> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "cholesky needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let asym = a.asymmetry();
    if asym > SYMMETRY_TOLERANCE {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let n = a.rows();
    let max_diag = a.diagonal().into_iter().fold(0.0f64, f64::max);
    let threshold = n as f64 * f64::EPSILON * max_diag;

    let mut l = LowerTriangular::zeros(n);
    for j in 0..n {
        let lj = l.row(j);
        let pivot = a[(j, j)] - dot(&lj[..j], &lj[..j]);
        if !(pivot > threshold) {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let d = pivot.sqrt();
        l.set(j, j, d);
        for i in (j + 1)..n {
            let s = a[(i, j)] - dot(&l.row(i)[..j], &l.row(j)[..j]);
            l.set(i, j, s / d);
        }
    }
    Ok(l)
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
