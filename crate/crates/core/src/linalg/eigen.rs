use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// Orthogonal; column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: DenseMatrix,
}

impl SymmetricEigen {
    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Cyclic Jacobi eigensolver.
pub fn sym_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigensolver needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut m = a.symmetrize();
    let mut v = DenseMatrix::identity(n);
    let total = m.frobenius_norm();
    let target = f64::EPSILON * total;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > target {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let eigenvalues = idx.iter().map(|&i| m[(i, i)]).collect();
    let eigenvectors = DenseMatrix::from_fn(n, n, |i, k| v[(i, idx[k])]);
    Ok(SymmetricEigen {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &DenseMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += m[(i, j)] * m[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Applies the rotation `Jᵀ M J` zeroing `m[(p, q)]` and accumulates `V J`.
fn rotate(m: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &DenseMatrix, e: &SymmetricEigen) -> f64 {
        let av = a.matmul(&e.eigenvectors);
        let vl = e
            .eigenvectors
            .matmul(&DenseMatrix::from_diagonal(&e.eigenvalues));
        av.sub(&vl).frobenius_norm() / a.frobenius_norm()
    }

    #[test]
    fn diagonal_input() {
        let a = DenseMatrix::from_diagonal(&[1.0, 3.0]);
        let e = sym_eigen(&a).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, 1.0]);
        assert_eq!(e.eigenvectors[(1, 0)].abs(), 1.0);
        assert_eq!(e.eigenvectors[(0, 1)].abs(), 1.0);
    }

    #[test]
    fn two_by_two() {
        let a = DenseMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let e = sym_eigen(&a).unwrap();
        // roots of t^2 - 4t + 3
        assert!((e.eigenvalues[0] - 3.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(residual(&a, &e) <= 1e-8);
    }

    #[test]
    fn identity_spectrum() {
        let e = sym_eigen(&DenseMatrix::identity(4)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0; 4]);
    }

    #[test]
    fn dense_residual_and_orthogonality() {
        let a = DenseMatrix::from_fn(7, 7, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let e = sym_eigen(&a).unwrap();
        assert!(residual(&a, &e) <= 1e-8);
        let vtv = e.eigenvectors.transpose().matmul(&e.eigenvectors);
        assert!(vtv.sub(&DenseMatrix::identity(7)).frobenius_norm() < 1e-12);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }
}
