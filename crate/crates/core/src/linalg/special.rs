use crate::error::{Error, Result};

/// Below this argument the recurrence `ψ(x) = ψ(x + 1) - 1/x` is applied.
const ASYMPTOTIC_FROM: f64 = 10.0;

/// Digamma function ψ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("digamma needs x > 0, got {x}")));
    }
    let mut shift = 0.0;
    let mut x = x;
    while x < ASYMPTOTIC_FROM {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli terms B_2k / (2k x^2k), k = 1..6
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    Ok(shift + x.ln() - 0.5 / x - tail)
}

/// `E[log χ²_k] = log 2 + ψ(k / 2)`.
pub fn expected_log_chi_square(dof: usize) -> Result<f64> {
    if dof == 0 {
        return Err(Error::Domain(
            "chi-square needs at least one degree of freedom".into(),
        ));
    }
    Ok(std::f64::consts::LN_2 + digamma(dof as f64 / 2.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    /// ψ(x) = -γ + Σ_{k≥0} [1/(k+1) - 1/(k+x)], summed with an integral tail
    /// correction. Independent of the recurrence/asymptotic route.
    fn series_digamma(x: f64) -> f64 {
        let terms = 2_000_000usize;
        let mut s = 0.0;
        for k in (0..terms).rev() {
            let k = k as f64;
            s += 1.0 / (k + 1.0) - 1.0 / (k + x);
        }
        // Σ_{k≥N} [1/(k+1) - 1/(k+x)] ≈ (x - 1) / (N + (x - 1)/2 + 1/2) to O(N^-3)
        let n = terms as f64;
        s += (x - 1.0) / (n + 0.5 * x);
        -EULER_GAMMA + s
    }

    #[test]
    fn at_one_is_minus_euler_gamma() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-12);
        assert!((series_digamma(1.0) + EULER_GAMMA).abs() < 1e-12);
    }

    #[test]
    fn at_one_half() {
        let expect = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        assert!((expect - (-1.963_510_026_021_423_5)).abs() < 1e-15);
        assert!((digamma(0.5).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_series() {
        for &x in &[0.1, 0.3, 0.75, 1.5, 2.5, 4.0, 7.3, 9.99, 12.0, 33.3] {
            let d = digamma(x).unwrap();
            let s = series_digamma(x);
            assert!((d - s).abs() < 1e-10, "x={x}: {d} vs {s}");
        }
    }

    #[test]
    fn recurrence_at_ten() {
        let lhs = digamma(10.0).unwrap();
        let rhs = digamma(9.0).unwrap() + 1.0 / 9.0;
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn domain() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
        assert!(digamma(f64::NAN).is_err());
        assert!(expected_log_chi_square(0).is_err());
    }

    #[test]
    fn chi_square_log_mean_one_dof() {
        // E[log χ²_1] = -γ - log 2
        let e = expected_log_chi_square(1).unwrap();
        assert!((e - (-EULER_GAMMA - std::f64::consts::LN_2)).abs() < 1e-12);
    }
}
