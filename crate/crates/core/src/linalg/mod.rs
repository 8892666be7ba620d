//! Dense real linear algebra used by the estimators: Cholesky, Householder
//! QR of the transposed data matrix, forward substitution, a Jacobi
//! eigensolver and the digamma function.

mod cholesky;
mod eigen;
mod matrix;
mod qr;
mod special;
mod triangular;

pub use cholesky::{cholesky, SYMMETRY_TOLERANCE};
pub use eigen::{sym_eigen, SymmetricEigen};
pub use matrix::{DenseMatrix, LowerTriangular, Permutation};
pub use qr::{orthogonal_factor, pivoted_qr_of_transpose, qr_of_transpose, PivotedQr};
pub use special::{digamma, expected_log_chi_square};
pub use triangular::tri_solve_lower;

pub(crate) use triangular::forward_substitute;
