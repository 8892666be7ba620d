#![allow(dead_code)]

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;

use cholcov::linalg::DenseMatrix;
use cholcov::synthetic::RngStream;

pub fn gaussian(rows: usize, cols: usize, rng: &mut RngStream) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// `A Aᵀ / k + 0.1 I` with `A` a `p × k` Gaussian matrix.
pub fn random_spd(p: usize, rng: &mut RngStream) -> DenseMatrix {
    let k = p + 3;
    let a = gaussian(p, k, rng);
    a.gram()
        .scale(1.0 / k as f64)
        .add(&DenseMatrix::identity(p).scale(0.1))
        .symmetrize()
}

/// Writes straight to the process stderr so the line shows up even when
/// the harness captures test output.
pub fn report(criterion: &str, passed: bool, detail: &str) {
    let tag = if passed { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {criterion}: {tag} {detail}");
}

pub fn pooled(se_a: f64, se_b: f64) -> f64 {
    (se_a * se_a + se_b * se_b).sqrt()
}
