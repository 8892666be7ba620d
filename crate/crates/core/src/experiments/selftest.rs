//! Fast invariant checks runnable from the command line.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::estimators::EstimatorKind;
use crate::evaluation::{oracle_risk_closed_form_with, run_risk, stein_loss, Scenario};
use crate::linalg::{cholesky, digamma, pivoted_qr_of_transpose, DenseMatrix};
use crate::synthetic::{PopulationModel, RngStream};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selftest (seed {})", self.seed)?;
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  {tag}  {:<28} {}", c.name, c.detail)?;
        }
        let total = self.checks.len();
        let ok = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{ok}/{total} checks passed")
    }
}

/// Digamma shifted by 1e-3, for exercising the self-test's failure path.
pub fn corrupted_digamma(x: f64) -> Result<f64> {
    digamma(x).map(|v| v + 1e-3)
}

/// The digamma the command-line self-test uses: the real one, unless the
/// crate was built with the `corrupt-digamma` feature.
pub fn build_digamma() -> fn(f64) -> Result<f64> {
    if cfg!(feature = "corrupt-digamma") {
        corrupted_digamma
    } else {
        digamma
    }
}

/// Runs the self-test with the given digamma implementation.
pub fn cmd_selftest(seed: u64, psi: fn(f64) -> Result<f64>) -> SelftestReport {
    let root = RngStream::new(seed);
    let checks = vec![
        check("cholesky round-trip", cholesky_roundtrip(&root.child(1))),
        check("pivoted QR fidelity", qr_fidelity(&root.child(2))),
        check("Stein loss floor", loss_floor(&root.child(3))),
        check("digamma reference values", digamma_values(psi)),
        check(
            "oracle risk (p=10, n=6)",
            oracle_agreement(&root.child(4), psi),
        ),
    ];
    SelftestReport { seed, checks }
}

fn check(name: &'static str, r: Result<(bool, String)>) -> CheckOutcome {
    match r {
        Ok((passed, detail)) => CheckOutcome {
            name,
            passed,
            detail,
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn gaussian(rows: usize, cols: usize, rng: &mut RngStream) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn cholesky_roundtrip(rng: &RngStream) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for t in 0..20 {
        let mut r = rng.child(t);
        let dim = 2 + (t as usize * 7) % 40;
        let b = gaussian(dim, dim + 3, &mut r);
        let a = b.gram();
        let l = cholesky(&a)?;
        worst = worst.max(l.gram().sub(&a).frobenius_norm() / a.frobenius_norm());
    }
    Ok((worst <= 1e-9, format!("max relative error {worst:.2e}")))
}

fn qr_fidelity(rng: &RngStream) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut ordered = true;
    for t in 0..50 {
        let mut r = rng.child(t);
        let p = 3 + (t as usize * 11) % 48;
        let n = 1 + (t as usize * 5) % (p - 1);
        let x = gaussian(p, n, &mut r);
        let f = pivoted_qr_of_transpose(&x)?;
        let s = f.perm().permute_rows(&x).gram();
        worst = worst.max(s.sub(&f.h().gram()).frobenius_norm() / s.frobenius_norm());
        let d = f.h().diagonal();
        ordered &= d.windows(2).all(|w| w[0] >= w[1]) && d[n - 1] > 0.0;
    }
    Ok((
        worst <= 1e-9 && ordered,
        format!("max relative error {worst:.2e}, decreasing diagonal: {ordered}"),
    ))
}

fn loss_floor(rng: &RngStream) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for t in 0..20 {
        let mut r = rng.child(t);
        let p = 2 + (t as usize) % 19;
        let b = gaussian(p, p + 2, &mut r);
        let model = PopulationModel::from_sigma(b.gram())?;
        let l = stein_loss(model.sigma(), &model)?;
        worst = worst.max((l - p as f64).abs());
    }
    Ok((worst <= 1e-10, format!("max |loss(S,S) - p| = {worst:.2e}")))
}

fn digamma_values(psi: fn(f64) -> Result<f64>) -> Result<(bool, String)> {
    let e1 = (psi(1.0)? + EULER_GAMMA).abs();
    let e2 = (psi(0.5)? + EULER_GAMMA + 2.0 * std::f64::consts::LN_2).abs();
    let e3 = (psi(10.0)? - psi(9.0)? - 1.0 / 9.0).abs();
    let worst = e1.max(e2).max(e3);
    Ok((worst <= 1e-10, format!("max deviation {worst:.2e}")))
}

fn oracle_agreement(rng: &RngStream, psi: fn(f64) -> Result<f64>) -> Result<(bool, String)> {
    let scenario = Scenario::new(10, 6, 16.0, 0.25)?;
    let rec = run_risk(&scenario, EstimatorKind::Oracle, 500, rng)?;
    let closed = oracle_risk_closed_form_with(10, 6, psi)?;
    let z = (rec.mean_loss - closed) / rec.stderr_loss;
    Ok((
        z.abs() <= 3.0,
        format!(
            "MC {:.4} ± {:.4} vs closed form {closed:.4} (z = {z:.2})",
            rec.mean_loss, rec.stderr_loss
        ),
    ))
}
