//! Cholesky-form covariance estimators for `n < p` and a linear-shrinkage
//! baseline.
//!
//! The Cholesky-form estimators share the shape
//!
//! ```text
//! Σ̂ = [G11  0  ] [D1 0 ] [G11  0  ]ᵀ
//!     [G21 G̃22] [0  D2] [G21 G̃22]
//! ```
//!
//! where `[G11; G21]` is the `p x n` partial Cholesky factor of `X Xᵀ` and
//! only the trailing block `G̃22 D2 G̃22ᵀ` has to be invented, since the data
//! carry no information about it. Because `Σ̂` depends on that block only
//! through the product, FSOPT and Oracle fill it with the true Schur
//! complement `Σ₂.₁` directly (`D2 = I`, `G̃22 = chol(Σ₂.₁)`).
//!
//! * FSOPT minimizes Stein's loss for the realized data: `d_j = 1 / g_jᵀ Σ⁻¹ g_j`.
//! * Oracle minimizes the expected loss: `d_j = 1 / (p + n - 2j + 1)`.
//! * RCF is the data-only estimator. It factors the data with row pivoting so
//!   the diagonal of the factor decreases, uses the Oracle `D1`, and fills
//!   the trailing block with `α I` and `β I`, where `α` is the last diagonal
//!   entry of `H11` and `β = 1 / (p - n + 1)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{
    cholesky, forward_substitute, pivoted_qr_of_transpose, qr_of_transpose, DenseMatrix,
    LowerTriangular, Permutation,
};
use crate::synthetic::PopulationModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    Fsopt,
    Oracle,
    Rcf,
    Lwls,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [Self::Fsopt, Self::Oracle, Self::Rcf, Self::Lwls];

    /// Lower-case token used on the command line and in CSV output.
    pub fn token(self) -> &'static str {
        match self {
            Self::Fsopt => "fsopt",
            Self::Oracle => "oracle",
            Self::Rcf => "rcf",
            Self::Lwls => "lwls",
        }
    }

    /// Whether the estimator needs the true covariance.
    pub fn needs_population(self) -> bool {
        matches!(self, Self::Fsopt | Self::Oracle)
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "").as_str() {
            "fsopt" => Ok(Self::Fsopt),
            "oracle" => Ok(Self::Oracle),
            "rcf" => Ok(Self::Rcf),
            "lwls" => Ok(Self::Lwls),
            other => Err(Error::Domain(format!("unknown estimator '{other}'"))),
        }
    }
}

/// Partial Cholesky factor `H = [H11; H21]` of `Πᵀ X Xᵀ Π`.
#[derive(Debug, Clone)]
pub struct SampleFactorization {
    h: DenseMatrix,
    h11: LowerTriangular,
    perm: Permutation,
    q: DenseMatrix,
}

impl SampleFactorization {
    pub fn p(&self) -> usize {
        self.h.rows()
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Full `p x n` factor.
    pub fn h(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn h11(&self) -> &LowerTriangular {
        &self.h11
    }

    pub fn h21(&self) -> DenseMatrix {
        self.h.block(self.n(), 0, self.p() - self.n(), self.n())
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// Orthogonal factor of `Xᵀ Π = Q Hᵀ`.
    pub fn q(&self) -> &DenseMatrix {
        &self.q
    }
}

/// Partial Cholesky factorization of the data scatter matrix.
///
/// With `pivot` the rows of `x` are reordered so the factor diagonal is
/// non-increasing; without it the natural order is kept.
pub fn factor_sample(x: &DenseMatrix, pivot: bool) -> Result<SampleFactorization> {
    let (p, n) = x.shape();
    if n >= p {
        return Err(Error::Dimension(format!(
            "estimators need n < p, got n={n}, p={p}"
        )));
    }
    let qr = if pivot {
        pivoted_qr_of_transpose(x)?
    } else {
        qr_of_transpose(x)?
    };
    let (q, h, perm) = qr.into_parts();
    let h11 = LowerTriangular::from_dense(&h, n);
    Ok(SampleFactorization { h, h11, perm, q })
}

/// A covariance estimate and the parameters that produced it.
#[derive(Debug, Clone)]
pub struct CovEstimate {
    pub sigma_hat: DenseMatrix,
    pub kind: EstimatorKind,
    /// Diagonal of `D` (length `p`); empty for LW-LS.
    pub d: Vec<f64>,
    /// RCF trailing diagonal of the augmented factor.
    pub alpha: Option<f64>,
    /// RCF trailing weight.
    pub beta: Option<f64>,
    /// LW-LS weight on the scaled identity.
    pub shrinkage: Option<f64>,
}

/// `d_j = 1 / (p + n - 2j + 1)` for `j = 1..=n`.
pub fn oracle_weights(p: usize, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n >= p {
        return Err(Error::Dimension(format!(
            "oracle weights need 1 <= n < p, got n={n}, p={p}"
        )));
    }
    Ok((1..=n).map(|j| 1.0 / (p + n + 1 - 2 * j) as f64).collect())
}

/// Per-realization optimal weights `d_j = 1 / (g_jᵀ Σ⁻¹ g_j)`, with `g_j` the
/// columns of the factor and `Σ` brought into the factorization's row order.
pub fn fsopt_weights(fact: &SampleFactorization, sigma: &DenseMatrix) -> Result<Vec<f64>> {
    if sigma.rows() != fact.p() || !sigma.is_square() {
        return Err(Error::Dimension(format!(
            "covariance is {}x{}, factor has {} rows",
            sigma.rows(),
            sigma.cols(),
            fact.p()
        )));
    }
    let l = if fact.perm().is_identity() {
        cholesky(sigma)?
    } else {
        cholesky(&fact.perm().congruence(sigma))?
    };
    Ok(fsopt_weights_with_factor(fact, &l))
}

fn fsopt_weights_with_factor(fact: &SampleFactorization, l: &LowerTriangular) -> Vec<f64> {
    (0..fact.n())
        .map(|j| {
            // g_jᵀ Σ⁻¹ g_j = |L⁻¹ g_j|²
            let mut z = fact.h().col(j).to_vec();
            forward_substitute(l, &mut z);
            1.0 / z.iter().map(|v| v * v).sum::<f64>()
        })
        .collect()
}

/// `H diag(d1) Hᵀ` plus `tail` on the trailing `(p - n)` block.
fn assemble(h: &DenseMatrix, d1: &[f64], tail: &DenseMatrix) -> DenseMatrix {
    let n = h.cols();
    let mut s = h.weighted_gram(d1);
    for j in 0..tail.cols() {
        for i in 0..tail.rows() {
            s[(n + i, n + j)] += tail[(i, j)];
        }
    }
    s
}

fn require_natural_order(fact: &SampleFactorization) -> Result<()> {
    if fact.perm().is_identity() {
        Ok(())
    } else {
        Err(Error::Domain(
            "FSOPT and Oracle are defined on the unpivoted factorization".into(),
        ))
    }
}

fn with_identity_tail(d1: Vec<f64>, p: usize) -> Vec<f64> {
    let mut d = d1;
    d.resize(p, 1.0);
    d
}

/// Finite-sample optimal estimate: FSOPT weights and the true Schur
/// complement in the trailing block.
pub fn estimate_fsopt(fact: &SampleFactorization, model: &PopulationModel) -> Result<CovEstimate> {
    require_natural_order(fact)?;
    if model.dim() != fact.p() {
        return Err(Error::Dimension("model and data dimensions differ".into()));
    }
    let d1 = fsopt_weights_with_factor(fact, model.chol_l());
    let tail = model.schur_complement(fact.n())?;
    Ok(CovEstimate {
        sigma_hat: assemble(fact.h(), &d1, &tail),
        kind: EstimatorKind::Fsopt,
        d: with_identity_tail(d1, fact.p()),
        alpha: None,
        beta: None,
        shrinkage: None,
    })
}

/// Risk-minimizing estimate: Oracle weights and the true Schur complement in
/// the trailing block.
pub fn estimate_oracle(fact: &SampleFactorization, model: &PopulationModel) -> Result<CovEstimate> {
    require_natural_order(fact)?;
    if model.dim() != fact.p() {
        return Err(Error::Dimension("model and data dimensions differ".into()));
    }
    let d1 = oracle_weights(fact.p(), fact.n())?;
    let tail = model.schur_complement(fact.n())?;
    Ok(CovEstimate {
        sigma_hat: assemble(fact.h(), &d1, &tail),
        kind: EstimatorKind::Oracle,
        d: with_identity_tail(d1, fact.p()),
        alpha: None,
        beta: None,
        shrinkage: None,
    })
}

/// Regularized Cholesky factor estimate computed from the data alone.
pub fn estimate_rcf(x: &DenseMatrix) -> Result<CovEstimate> {
    let fact = factor_sample(x, true)?;
    estimate_rcf_from(&fact)
}

/// RCF estimate from an existing pivoted factorization.
pub fn estimate_rcf_from(fact: &SampleFactorization) -> Result<CovEstimate> {
    let (p, n) = (fact.p(), fact.n());
    let d1 = oracle_weights(p, n)?;
    let alpha = fact.h11().get(n - 1, n - 1);
    let beta = 1.0 / (p - n + 1) as f64;
    let tail = DenseMatrix::from_diagonal(&vec![alpha * alpha * beta; p - n]);
    let permuted = assemble(fact.h(), &d1, &tail);
    let mut d = d1;
    d.resize(p, beta);
    Ok(CovEstimate {
        sigma_hat: fact.perm().uncongruence(&permuted),
        kind: EstimatorKind::Rcf,
        d,
        alpha: Some(alpha),
        beta: Some(beta),
        shrinkage: None,
    })
}

/// Linear shrinkage of `S = X Xᵀ / n` towards `tr(S)/p · I` with the
/// Ledoit–Wolf (2004) plug-in intensity.
pub fn estimate_lwls(x: &DenseMatrix) -> Result<CovEstimate> {
    let (p, n) = x.shape();
    if n < 2 {
        return Err(Error::Dimension(format!(
            "linear shrinkage needs at least 2 samples, got {n}"
        )));
    }
    let s = x.gram().scale(1.0 / n as f64);
    let mu = s.trace() / p as f64;
    let mut dist = s.clone();
    for i in 0..p {
        dist[(i, i)] -= mu;
    }
    let d2 = dist.frobenius_norm().powi(2) / p as f64;
    if d2 == 0.0 {
        return Ok(CovEstimate {
            sigma_hat: DenseMatrix::from_diagonal(&vec![mu; p]),
            kind: EstimatorKind::Lwls,
            d: Vec::new(),
            alpha: None,
            beta: None,
            shrinkage: Some(1.0),
        });
    }

    // Σ_k |x_k x_kᵀ - S|² = Σ_k (|x_k|⁴ - 2 x_kᵀ S x_k) + n |S|²
    let s_norm2 = s.frobenius_norm().powi(2);
    let sx = s.matmul(x);
    let mut acc = 0.0;
    for k in 0..n {
        let xk = x.col(k);
        let xx: f64 = xk.iter().map(|v| v * v).sum();
        let xsx: f64 = xk.iter().zip(sx.col(k)).map(|(a, b)| a * b).sum();
        acc += xx * xx - 2.0 * xsx + s_norm2;
    }
    let b2_bar = (acc.max(0.0) / (n as f64 * n as f64)) / p as f64;
    let b2 = b2_bar.min(d2);
    let rho = b2 / d2;

    let mut sigma_hat = s.scale(1.0 - rho);
    for i in 0..p {
        sigma_hat[(i, i)] += rho * mu;
    }
    Ok(CovEstimate {
        sigma_hat,
        kind: EstimatorKind::Lwls,
        d: Vec::new(),
        alpha: None,
        beta: None,
        shrinkage: Some(rho),
    })
}

/// Runs `kind` on the data `x`, factorizing as that estimator requires.
///
/// `model` is only consulted by FSOPT and Oracle.
pub fn estimate(
    kind: EstimatorKind,
    x: &DenseMatrix,
    model: &PopulationModel,
) -> Result<CovEstimate> {
    match kind {
        EstimatorKind::Fsopt => estimate_fsopt(&factor_sample(x, false)?, model),
        EstimatorKind::Oracle => estimate_oracle(&factor_sample(x, false)?, model),
        EstimatorKind::Rcf => estimate_rcf(x),
        EstimatorKind::Lwls => estimate_lwls(x),
    }
}
