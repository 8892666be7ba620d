use super::cholesky::dot;
use super::matrix::{DenseMatrix, LowerTriangular};
use crate::error::{Error, Result};

/// Solves `L Z = B` by forward substitution, column by column.
pub fn tri_solve_lower(l: &LowerTriangular, b: &DenseMatrix) -> Result<DenseMatrix> {
    let n = l.dim();
    if b.rows() != n {
        return Err(Error::Dimension(format!(
            "triangular system of order {n} with right-hand side of {} rows",
            b.rows()
        )));
    }
    if !l.has_positive_diagonal() {
        return Err(Error::Domain(
            "triangular factor must have a positive diagonal".into(),
        ));
    }
    let mut z = b.clone();
    for c in 0..b.cols() {
        forward_substitute(l, z.col_mut(c));
    }
    if let Some(k) = z.as_slice().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: k % n,
            col: k / n,
        });
    }
    Ok(z)
}

/// In-place forward substitution on a single vector.
pub(crate) fn forward_substitute(l: &LowerTriangular, x: &mut [f64]) {
    for i in 0..l.dim() {
        let row = l.row(i);
        let s = x[i] - dot(&row[..i], &x[..i]);
        x[i] = s / row[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_passes_through() {
        let b = DenseMatrix::from_fn(3, 2, |i, j| (i as f64) - 2.0 * j as f64 + 0.5);
        let z = tri_solve_lower(&LowerTriangular::identity(3), &b).unwrap();
        assert_eq!(z, b);
    }

    #[test]
    fn hand_forward_substitution() {
        let l = LowerTriangular::from_dense(
            &DenseMatrix::from_rows(&[&[2.0, 0.0], &[1.0, 2.0]]).unwrap(),
            2,
        );
        let b = DenseMatrix::from_rows(&[&[4.0], &[5.0]]).unwrap();
        let z = tri_solve_lower(&l, &b).unwrap();
        assert_eq!(z.col(0), &[2.0, 1.5]);
        let back = l.to_dense().matmul(&z);
        assert!(back.sub(&b).frobenius_norm() <= 1e-10 * b.frobenius_norm());
    }

    #[test]
    fn diagonal_inverse() {
        let d = DenseMatrix::from_diagonal(&[2.0, 4.0]);
        let l = LowerTriangular::from_dense(&d, 2);
        assert_eq!(tri_solve_lower(&l, &d).unwrap(), DenseMatrix::identity(2));
    }

    #[test]
    fn rejects_mismatch_and_zero_diagonal() {
        let l = LowerTriangular::zeros(2);
        assert!(tri_solve_lower(&l, &DenseMatrix::zeros(2, 1)).is_err());
        let l = LowerTriangular::identity(2);
        assert!(tri_solve_lower(&l, &DenseMatrix::zeros(3, 1)).is_err());
    }
}
