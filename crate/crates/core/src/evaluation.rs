//! Stein's loss, the closed-form Oracle risk and the Monte-Carlo risk engine.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{
    estimate, estimate_fsopt, estimate_lwls, estimate_oracle, estimate_rcf_from, factor_sample,
    EstimatorKind,
};
use crate::linalg::{cholesky, digamma, tri_solve_lower, DenseMatrix, LowerTriangular};
use crate::synthetic::{
    build_population, lambda_max_for_cond, mix_seed, sample_data, PopulationModel, RngStream,
    SpectrumSpec,
};

/// Child-stream key reserved for drawing the population of a scenario.
const POPULATION_STREAM: u64 = u64::MAX;

/// Stein's loss `tr(Σ̂ Σ⁻¹) - log det(Σ̂ Σ⁻¹)`.
///
/// No `-p` offset is applied: the minimum, reached at `Σ̂ = Σ`, is `p`.
pub fn stein_loss(sigma_hat: &DenseMatrix, model: &PopulationModel) -> Result<f64> {
    stein_loss_with_factor(sigma_hat, model.chol_l())
}

/// Stein's loss against a covariance given as a plain matrix.
pub fn stein_loss_matrices(sigma_hat: &DenseMatrix, sigma: &DenseMatrix) -> Result<f64> {
    stein_loss_with_factor(sigma_hat, &cholesky(sigma)?)
}

fn stein_loss_with_factor(sigma_hat: &DenseMatrix, l: &LowerTriangular) -> Result<f64> {
    if !sigma_hat.is_square() || sigma_hat.rows() != l.dim() {
        return Err(Error::Dimension(format!(
            "estimate is {}x{}, covariance has dimension {}",
            sigma_hat.rows(),
            sigma_hat.cols(),
            l.dim()
        )));
    }
    // A = L⁻¹ Σ̂ L⁻ᵀ; Σ̂ symmetric so (L⁻¹ Σ̂)ᵀ = Σ̂ L⁻ᵀ.
    let b = tri_solve_lower(l, sigma_hat)?;
    let a = tri_solve_lower(l, &b.transpose())?.symmetrize();
    let f = cholesky(&a)?;
    Ok(a.trace() - 2.0 * f.log_diag_sum())
}

/// Closed-form risk of the Oracle estimator,
/// `Σ_j [1 + log(p + n - 2j + 1) - E log χ²_{n-j+1}] + (p - n)`.
pub fn oracle_risk_closed_form(p: usize, n: usize) -> Result<f64> {
    oracle_risk_closed_form_with(p, n, digamma)
}

/// [`oracle_risk_closed_form`] with a caller-supplied digamma.
pub fn oracle_risk_closed_form_with(
    p: usize,
    n: usize,
    psi: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    if n == 0 || n >= p {
        return Err(Error::Dimension(format!(
            "oracle risk needs 1 <= n < p, got n={n}, p={p}"
        )));
    }
    let mut risk = (p - n) as f64;
    for j in 1..=n {
        let dof = n - j + 1;
        let e_log_chi2 = std::f64::consts::LN_2 + psi(dof as f64 / 2.0)?;
        risk += 1.0 + ((p + n + 1 - 2 * j) as f64).ln() - e_log_chi2;
    }
    Ok(risk)
}

/// One point of an experiment grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub p: usize,
    pub n: usize,
    pub target_cond: f64,
    pub eta: f64,
}

impl Scenario {
    pub fn new(p: usize, n: usize, target_cond: f64, eta: f64) -> Result<Self> {
        if n < 2 || n >= p {
            return Err(Error::Dimension(format!(
                "scenario needs 2 <= n < p, got n={n}, p={p}"
            )));
        }
        let s = Self {
            p,
            n,
            target_cond,
            eta,
        };
        s.spectrum()?;
        Ok(s)
    }

    pub fn id(&self) -> String {
        format!(
            "p{}_n{}_cond{}_eta{}",
            self.p, self.n, self.target_cond, self.eta
        )
    }

    pub fn spectrum(&self) -> Result<SpectrumSpec> {
        SpectrumSpec::new(self.p, self.eta, lambda_max_for_cond(self.target_cond)?)
    }

    /// Stream for this scenario, derived from a base seed and the scenario
    /// parameters only. Estimators run on the same scenario share it.
    pub fn stream(&self, base_seed: u64) -> RngStream {
        let mut seed = mix_seed(base_seed, self.p as u64);
        seed = mix_seed(seed, self.n as u64);
        seed = mix_seed(seed, self.target_cond.to_bits());
        seed = mix_seed(seed, self.eta.to_bits());
        RngStream::new(seed)
    }

    /// Population for this scenario drawn from `rng`'s reserved child stream.
    pub fn population(&self, rng: &RngStream) -> Result<PopulationModel> {
        build_population(self.spectrum()?, &mut rng.child(POPULATION_STREAM))
    }
}

/// Monte-Carlo summary of one estimator on one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskRecord {
    pub scenario: String,
    pub p: usize,
    pub n: usize,
    pub target_cond: f64,
    pub realized_cond: f64,
    pub eta: f64,
    pub estimator: EstimatorKind,
    pub trials: usize,
    pub mean_loss: f64,
    pub stderr_loss: f64,
    pub seed: u64,
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let t = values.len() as f64;
    let mean = values.iter().sum::<f64>() / t;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (t - 1.0);
    (mean, (var / t).sqrt())
}

/// Per-trial Stein losses of several estimators evaluated on the same data.
///
/// Trial `t` draws its data from `rng.child(t)`; results are in trial order
/// whatever the thread count. The returned vectors follow the order of
/// `kinds`.
pub fn trial_losses(
    model: &PopulationModel,
    n: usize,
    kinds: &[EstimatorKind],
    trials: usize,
    rng: &RngStream,
) -> Result<Vec<Vec<f64>>> {
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut stream = rng.child(t as u64);
            let x = sample_data(model, n, &mut stream)?;
            losses_on(&x, model, kinds)
        })
        .collect::<Result<_>>()?;
    Ok((0..kinds.len())
        .map(|k| per_trial.iter().map(|row| row[k]).collect())
        .collect())
}

/// Shares the two factorizations across the requested estimators.
fn losses_on(
    x: &DenseMatrix,
    model: &PopulationModel,
    kinds: &[EstimatorKind],
) -> Result<Vec<f64>> {
    if kinds.len() == 1 {
        let est = estimate(kinds[0], x, model)?;
        return Ok(vec![stein_loss(&est.sigma_hat, model)?]);
    }
    let natural = if kinds.iter().any(|k| k.needs_population()) {
        Some(factor_sample(x, false)?)
    } else {
        None
    };
    let pivoted = if kinds.contains(&EstimatorKind::Rcf) {
        Some(factor_sample(x, true)?)
    } else {
        None
    };
    kinds
        .iter()
        .map(|&kind| {
            let est = match kind {
                EstimatorKind::Fsopt => estimate_fsopt(natural.as_ref().unwrap(), model)?,
                EstimatorKind::Oracle => estimate_oracle(natural.as_ref().unwrap(), model)?,
                EstimatorKind::Rcf => estimate_rcf_from(pivoted.as_ref().unwrap())?,
                EstimatorKind::Lwls => estimate_lwls(x)?,
            };
            stein_loss(&est.sigma_hat, model)
        })
        .collect()
}

/// Mean Stein loss of several estimators on one scenario.
///
/// The population is fixed by the scenario stream and only the data are
/// redrawn per trial, so every estimator sees the same `Σ` and the same
/// samples.
pub fn run_risk_many(
    scenario: &Scenario,
    kinds: &[EstimatorKind],
    trials: usize,
    rng: &RngStream,
) -> Result<Vec<RiskRecord>> {
    if trials < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 trials, got {trials}"
        )));
    }
    let model = scenario.population(rng)?;
    let losses = trial_losses(&model, scenario.n, kinds, trials, rng)?;
    Ok(kinds
        .iter()
        .zip(losses)
        .map(|(&kind, l)| {
            let (mean_loss, stderr_loss) = mean_and_stderr(&l);
            RiskRecord {
                scenario: scenario.id(),
                p: scenario.p,
                n: scenario.n,
                target_cond: scenario.target_cond,
                realized_cond: model.cond(),
                eta: scenario.eta,
                estimator: kind,
                trials,
                mean_loss,
                stderr_loss,
                seed: rng.seed(),
            }
        })
        .collect())
}

/// Mean Stein loss of one estimator on one scenario.
pub fn run_risk(
    scenario: &Scenario,
    kind: EstimatorKind,
    trials: usize,
    rng: &RngStream,
) -> Result<RiskRecord> {
    Ok(run_risk_many(scenario, &[kind], trials, rng)?.remove(0))
}
