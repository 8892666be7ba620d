//! Population covariance matrices with a two-band spectrum.

use rand::Rng;
use rand_distr::StandardNormal;

use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, orthogonal_factor, sym_eigen, DenseMatrix, LowerTriangular};

/// Lower edge of the band holding the small eigenvalues.
pub const SMALL_BAND_LOW: f64 = 0.5;
/// Upper edge of the band holding the small eigenvalues.
pub const SMALL_BAND_HIGH: f64 = 1.0;

/// Spectrum design: `round(eta * p)` eigenvalues uniform on
/// `[lambda_max / 2, lambda_max]`, the rest uniform on `[0.5, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSpec {
    p: usize,
    eta: f64,
    lambda_max: f64,
}

impl SpectrumSpec {
    pub fn new(p: usize, eta: f64, lambda_max: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::Dimension("dimension must be positive".into()));
        }
        if !(0.0..1.0).contains(&eta) {
            return Err(Error::Domain(format!("eta must lie in [0, 1), got {eta}")));
        }
        if !(lambda_max >= 2.0) || !lambda_max.is_finite() {
            return Err(Error::Domain(format!(
                "lambda_max must be at least 2, got {lambda_max}"
            )));
        }
        let spec = Self { p, eta, lambda_max };
        if spec.large_count() >= p {
            return Err(Error::Domain(format!(
                "eta = {eta} leaves no small eigenvalue at p = {p}"
            )));
        }
        Ok(spec)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// Number of eigenvalues in the large band, `round(eta * p)`.
    pub fn large_count(&self) -> usize {
        (self.eta * self.p as f64).round() as usize
    }

    /// Draws the spectrum, sorted in descending order.
    pub fn draw_eigenvalues(&self, rng: &mut RngStream) -> Vec<f64> {
        let k = self.large_count();
        let half = 0.5 * self.lambda_max;
        let mut lambda = Vec::with_capacity(self.p);
        for _ in 0..k {
            lambda.push(half + half * rng.random::<f64>());
        }
        for _ in k..self.p {
            lambda.push(SMALL_BAND_LOW + (SMALL_BAND_HIGH - SMALL_BAND_LOW) * rng.random::<f64>());
        }
        lambda.sort_by(|a, b| b.total_cmp(a));
        lambda
    }
}

/// `lambda_max` giving a nominal condition number `target_cond`, i.e. the
/// ratio of the top of the large band to the bottom of the small band.
pub fn lambda_max_for_cond(target_cond: f64) -> Result<f64> {
    if !(target_cond >= 2.0) || !target_cond.is_finite() {
        return Err(Error::Domain(format!(
            "target condition number must be at least 2, got {target_cond}"
        )));
    }
    Ok(SMALL_BAND_LOW * target_cond)
}

/// A true covariance matrix together with its Cholesky factor.
#[derive(Debug, Clone)]
pub struct PopulationModel {
    sigma: DenseMatrix,
    chol_l: LowerTriangular,
    spectrum: Option<SpectrumSpec>,
    eigenvalues: Vec<f64>,
    cond: f64,
}

impl PopulationModel {
    /// Wraps an arbitrary SPD matrix; the spectrum is computed numerically.
    pub fn from_sigma(sigma: DenseMatrix) -> Result<Self> {
        let chol_l = cholesky(&sigma)?;
        let eig = sym_eigen(&sigma)?;
        let cond = eig.max() / eig.min();
        Ok(Self {
            sigma,
            chol_l,
            spectrum: None,
            eigenvalues: eig.eigenvalues,
            cond,
        })
    }

    pub fn sigma(&self) -> &DenseMatrix {
        &self.sigma
    }

    /// Lower Cholesky factor `L` of `sigma`.
    pub fn chol_l(&self) -> &LowerTriangular {
        &self.chol_l
    }

    pub fn spectrum(&self) -> Option<&SpectrumSpec> {
        self.spectrum.as_ref()
    }

    /// Eigenvalues of `sigma`, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Realized condition number `λ_1 / λ_p`.
    pub fn cond(&self) -> f64 {
        self.cond
    }

    pub fn dim(&self) -> usize {
        self.sigma.rows()
    }

    /// Schur complement `Σ22 - Σ21 Σ11⁻¹ Σ12` of the leading `n x n` block,
    /// computed as `L22 L22ᵀ`.
    pub fn schur_complement(&self, n: usize) -> Result<DenseMatrix> {
        let p = self.dim();
        if n == 0 || n >= p {
            return Err(Error::Dimension(format!(
                "Schur complement split needs 1 <= n < p, got n={n}, p={p}"
            )));
        }
        Ok(self.chol_l.trailing_block(n).gram())
    }

    /// Lower-triangular factor of the Schur complement at split `n`.
    pub fn schur_factor(&self, n: usize) -> Result<LowerTriangular> {
        let p = self.dim();
        if n == 0 || n >= p {
            return Err(Error::Dimension(format!(
                "Schur complement split needs 1 <= n < p, got n={n}, p={p}"
            )));
        }
        Ok(self.chol_l.trailing_block(n))
    }
}

/// Draws `Σ = V diag(λ) Vᵀ` with `λ` from `spec` and `V` Haar-distributed.
pub fn build_population(spec: SpectrumSpec, rng: &mut RngStream) -> Result<PopulationModel> {
    let p = spec.p();
    let lambda = spec.draw_eigenvalues(rng);
    let gauss = DenseMatrix::from_fn(p, p, |_, _| rng.sample(StandardNormal));
    let v = orthogonal_factor(&gauss);
    let scaled = DenseMatrix::from_fn(p, p, |i, j| v[(i, j)] * lambda[j]);
    let sigma = scaled.matmul(&v.transpose()).symmetrize();
    let chol_l = cholesky(&sigma)?;
    let cond = lambda[0] / lambda[p - 1];
    Ok(PopulationModel {
        sigma,
        chol_l,
        spectrum: Some(spec),
        eigenvalues: lambda,
        cond,
    })
}
