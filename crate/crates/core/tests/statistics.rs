//! Distributional and Monte-Carlo checks.

mod common;

use cholcov::estimators::{estimate_rcf, EstimatorKind};
use cholcov::evaluation::{run_risk_many, Scenario};
use cholcov::linalg::{sym_eigen, DenseMatrix, Permutation};
use cholcov::synthetic::{sample_bartlett_factor, sample_data, PopulationModel, RngStream};

use common::{gaussian, pooled};

/// Two-sample Kolmogorov-Smirnov statistic.
fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[test]
fn bartlett_factor_matches_direct_sampling() {
    let (p, n, draws) = (6, 4, 5000);
    let identity = PopulationModel::from_sigma(DenseMatrix::identity(p)).unwrap();
    let root = RngStream::new(11);
    let stats = |w: &DenseMatrix| (w[(0, 0)] + w[(1, 1)], w[(1, 0)], w[(3, 2)]);
    let mut direct = (Vec::new(), Vec::new(), Vec::new());
    let mut bartlett = (Vec::new(), Vec::new(), Vec::new());
    for t in 0..draws {
        let w = sample_data(&identity, n, &mut root.child(2 * t))
            .unwrap()
            .gram();
        let s = stats(&w);
        direct.0.push(s.0);
        direct.1.push(s.1);
        direct.2.push(s.2);
        let w = sample_bartlett_factor(p, n, &mut root.child(2 * t + 1))
            .unwrap()
            .gram();
        let s = stats(&w);
        bartlett.0.push(s.0);
        bartlett.1.push(s.1);
        bartlett.2.push(s.2);
    }
    // 0.1% critical value of the two-sample statistic for 5000 + 5000 draws
    let critical = 1.95 * (2.0 / draws as f64).sqrt();
    for (a, b) in [
        (direct.0, bartlett.0),
        (direct.1, bartlett.1),
        (direct.2, bartlett.2),
    ] {
        let d = ks_statistic(a, b);
        assert!(d < critical, "KS statistic {d} >= {critical}");
    }
}

#[test]
fn bartlett_column_norms_have_chi_square_means() {
    // |g_j|² ~ χ²_{p+n-2j+1} for 1-based j
    let (p, n, draws) = (9, 5, 20000);
    let root = RngStream::new(12);
    let mut sums = vec![0.0; n];
    let mut squares = vec![0.0; n];
    for t in 0..draws {
        let g = sample_bartlett_factor(p, n, &mut root.child(t)).unwrap();
        for j in 0..n {
            let v: f64 = g.col(j).iter().map(|x| x * x).sum();
            sums[j] += v;
            squares[j] += v * v;
        }
    }
    for j in 0..n {
        let mean = sums[j] / draws as f64;
        let var = squares[j] / draws as f64 - mean * mean;
        let se = (var / draws as f64).sqrt();
        let expect = (p + n - 2 * j - 1) as f64;
        assert!(
            (mean - expect).abs() < 4.0 * se,
            "column {j}: {mean} vs {expect}"
        );
    }
}

#[test]
fn risk_is_independent_of_thread_count() {
    let scenario = Scenario::new(14, 9, 256.0, 0.4).unwrap();
    let rng = scenario.stream(5);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_risk_many(&scenario, &EstimatorKind::ALL, 64, &rng).unwrap())
    };
    let one = run(1);
    let four = run(4);
    for (a, b) in one.iter().zip(&four) {
        assert_eq!(a.mean_loss.to_bits(), b.mean_loss.to_bits());
        assert_eq!(a.stderr_loss.to_bits(), b.stderr_loss.to_bits());
    }
}

#[test]
fn fsopt_beats_linear_shrinkage_on_average_at_high_condition_number() {
    for cond in [64.0, 1024.0] {
        let scenario = Scenario::new(60, 36, cond, 0.25).unwrap();
        let r = run_risk_many(
            &scenario,
            &[EstimatorKind::Fsopt, EstimatorKind::Lwls],
            200,
            &scenario.stream(3),
        )
        .unwrap();
        let gap = (r[1].mean_loss - r[0].mean_loss) / pooled(r[0].stderr_loss, r[1].stderr_loss);
        assert!(
            gap > 3.0,
            "cond {cond}: {} vs {}",
            r[0].mean_loss,
            r[1].mean_loss
        );
    }
}

#[test]
fn rcf_spectrum_is_invariant_under_row_permutation() {
    let root = RngStream::new(21);
    for k in 0..20 {
        let mut rng = root.child(k);
        let (p, n) = (15, 9);
        let x = gaussian(p, n, &mut rng);
        let mut order: Vec<usize> = (0..p).collect();
        order.rotate_left(1 + k as usize % (p - 1));
        order.swap(0, p - 1);
        let permuted = Permutation::new(order).unwrap().permute_rows(&x);
        let a = sym_eigen(&estimate_rcf(&x).unwrap().sigma_hat).unwrap();
        let b = sym_eigen(&estimate_rcf(&permuted).unwrap().sigma_hat).unwrap();
        for (u, v) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((u - v).abs() <= 1e-9 * a.max(), "{u} vs {v}");
        }
    }
}
