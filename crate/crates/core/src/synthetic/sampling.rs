use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use super::population::PopulationModel;
use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Degrees of freedom up to which χ² draws are exact sums of squared normals.
const CHI_SQUARE_DIRECT_MAX: usize = 30;

/// One χ²_dof draw.
pub fn chi_square(dof: usize, rng: &mut RngStream) -> f64 {
    assert!(dof > 0, "chi-square needs at least one degree of freedom");
    if dof <= CHI_SQUARE_DIRECT_MAX {
        (0..dof)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                z * z
            })
            .sum()
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive degrees of freedom")
            .sample(rng)
    }
}

/// `p x n` zero-mean Gaussian data `X = L Z` with columns distributed as
/// `N(0, Σ)`.
pub fn sample_data(model: &PopulationModel, n: usize, rng: &mut RngStream) -> Result<DenseMatrix> {
    let p = model.dim();
    if n == 0 || n >= p {
        return Err(Error::Dimension(format!(
            "sampling needs 1 <= n < p, got n={n}, p={p}"
        )));
    }
    let z = DenseMatrix::from_fn(p, n, |_, _| rng.sample(StandardNormal));
    let l = model.chol_l();
    let mut x = DenseMatrix::zeros(p, n);
    for c in 0..n {
        let zc = z.col(c);
        let xc = x.col_mut(c);
        for (i, xi) in xc.iter_mut().enumerate() {
            *xi = l.row(i).iter().zip(zc).map(|(a, b)| a * b).sum();
        }
    }
    Ok(x)
}

/// Bartlett factor of a singular standard Wishart matrix: a `p x n`
/// lower-trapezoidal matrix with independent entries, `sqrt(χ²_{n-j})` on
/// the (0-based) diagonal position `j` and `N(0, 1)` below it.
pub fn sample_bartlett_factor(p: usize, n: usize, rng: &mut RngStream) -> Result<DenseMatrix> {
    if n == 0 || n >= p {
        return Err(Error::Dimension(format!(
            "Bartlett factor needs 1 <= n < p, got n={n}, p={p}"
        )));
    }
    let mut g = DenseMatrix::zeros(p, n);
    for j in 0..n {
        g[(j, j)] = chi_square(n - j, rng).sqrt();
        for i in (j + 1)..p {
            g[(i, j)] = rng.sample(StandardNormal);
        }
    }
    Ok(g)
}
