//! One-sided tests for the rate of an exponential-delay copula.
//!
//! An observation pair is (arrival, arrival + delay) with uniform arrivals
//! and exponential delays. The rank-based I-test rejects small rates when
//! the inversion frequency of the rank permutation is large; the D-test,
//! available when the raw delays themselves are observed, compares the mean
//! delay against a gamma quantile and is uniformly most powerful. Closed
//! forms for the inversion probability, its derivative, and the limiting
//! variance of the inversion count feed the Pitman/Bahadur efficiency of the
//! I-test relative to the D-test.

use crate::copula::{sample_with_rng, CopulaModel};
use crate::count::count_inversions;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::result::{TestConfig, TestResult};
use crate::rng::stream_rng;
use crate::special::{gamma_survival, gamma_upper_quantile};

/// Below this rate the closed forms lose precision to cancellation (their
/// numerators vanish like powers of the rate while the summands stay of
/// order one) and all three functions switch to their Taylor expansions,
/// which converge fast enough here to be exact to machine precision.
const SERIES_THRESHOLD: f64 = 0.25;
const SERIES_TERMS: usize = 40;

fn check_rate(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta <= 0.0 {
        return Err(Error::Parameter(format!(
            "delay rate must be positive, got {theta}"
        )));
    }
    Ok(())
}

/// Probability that a two-point sample from the exponential-delay copula is
/// inverted: `(e^-t - 1 + t) / t^2`. Strictly decreasing from 1/2 at 0+ to 0
/// at infinity.
pub fn inversion_prob(theta: f64) -> Result<f64> {
    check_rate(theta)?;
    if theta < SERIES_THRESHOLD {
        // sum_{j>=0} (-t)^j / (j+2)!
        let mut acc = 0.0;
        let mut term = 0.5;
        for j in 0..SERIES_TERMS {
            acc += term;
            term *= -theta / (j + 3) as f64;
        }
        return Ok(acc);
    }
    Ok(((-theta).exp() - 1.0 + theta) / (theta * theta))
}

/// Derivative of [`inversion_prob`]: `-((2+t) e^-t - (2-t)) / t^3`.
pub fn inversion_prob_deriv(theta: f64) -> Result<f64> {
    check_rate(theta)?;
    if theta < SERIES_THRESHOLD {
        // sum_{j>=1} j (-1)^j t^{j-1} / (j+2)!
        let mut acc = 0.0;
        let mut term = -1.0 / 6.0;
        for j in 1..SERIES_TERMS {
            acc += term;
            term *= -theta * (j + 1) as f64 / (j * (j + 3)) as f64;
        }
        return Ok(acc);
    }
    Ok(-((2.0 + theta) * (-theta).exp() - (2.0 - theta)) / theta.powi(3))
}

/// Limiting variance of the scaled inversion frequency
/// `sqrt(n) (I_n - inversion_prob)`:
/// `(2/(3 t^4)) (2t^2 - 3t - 6 + 2(3t^2 + 2t + 6) e^-t - (t+6) e^-2t)`.
pub fn inversion_variance(theta: f64) -> Result<f64> {
    check_rate(theta)?;
    if theta < SERIES_THRESHOLD {
        // Taylor coefficients of the bracket start at t^4; with
        // s(j) = (-1)^j / j! and d(j) = (-2)^j / j! the t^j coefficient for
        // j >= 4 is 2 (3 s(j-2) + 2 s(j-1) + 6 s(j)) - (d(j-1) + 6 d(j)).
        let s = |j: usize| -> f64 {
            let mut v = 1.0f64;
            for i in 1..=j {
                v /= i as f64;
            }
            if j % 2 == 0 {
                v
            } else {
                -v
            }
        };
        let d = |j: usize| -> f64 {
            let mut v = 1.0f64;
            for i in 1..=j {
                v *= 2.0 / i as f64;
            }
            if j % 2 == 0 {
                v
            } else {
                -v
            }
        };
        let mut acc = 0.0;
        let mut power = 1.0;
        for j in 4..4 + SERIES_TERMS {
            let c = 2.0 * (3.0 * s(j - 2) + 2.0 * s(j - 1) + 6.0 * s(j))
                - (d(j - 1) + 6.0 * d(j));
            acc += c * power;
            power *= theta;
        }
        return Ok(acc * 2.0 / 3.0);
    }
    let e1 = (-theta).exp();
    let e2 = (-2.0 * theta).exp();
    Ok(2.0 / (3.0 * theta.powi(4))
        * (2.0 * theta * theta - 3.0 * theta - 6.0
            + 2.0 * (3.0 * theta * theta + 2.0 * theta + 6.0) * e1
            - (theta + 6.0) * e2))
}

/// Pitman (equal to local Bahadur) asymptotic relative efficiency of the
/// I-test with respect to the D-test:
/// `theta0^2 * inversion_prob_deriv(theta0)^2 / inversion_variance(theta0)`.
pub fn efficiency(theta0: f64) -> Result<f64> {
    let d = inversion_prob_deriv(theta0)?;
    Ok(theta0 * theta0 * d * d / inversion_variance(theta0)?)
}

/// Bahadur exact slope of the D-test at an alternative `theta < theta0`:
/// `theta0/theta - 1 - log(theta0/theta)`.
pub fn mean_delay_slope(theta: f64, theta0: f64) -> Result<f64> {
    check_rate(theta)?;
    check_rate(theta0)?;
    if theta >= theta0 {
        return Err(Error::Parameter(format!(
            "alternative must satisfy theta < theta0, got theta={theta}, theta0={theta0}"
        )));
    }
    let u = theta0 / theta;
    Ok(u - 1.0 - u.ln())
}

/// Leading term of the Bahadur slope of the I-test at `theta < theta0`:
/// `(inversion_prob(theta) - inversion_prob(theta0))^2 /
/// (2 inversion_variance(theta0))`. This is a local approximation; the
/// higher-order series coefficients are not computable here.
pub fn inversion_slope_local(theta: f64, theta0: f64) -> Result<f64> {
    check_rate(theta)?;
    check_rate(theta0)?;
    if theta >= theta0 {
        return Err(Error::Parameter(format!(
            "alternative must satisfy theta < theta0, got theta={theta}, theta0={theta0}"
        )));
    }
    let gap = inversion_prob(theta)? - inversion_prob(theta0)?;
    Ok(gap * gap / (2.0 * inversion_variance(theta0)?))
}

/// Configuration of the I-test of `H0: theta >= theta0`.
#[derive(Debug, Clone, Copy)]
pub struct DelayTestConfig {
    pub theta0: f64,
    pub alpha: f64,
    pub n: usize,
    /// Monte Carlo replicates for the null quantile of the inversion count.
    pub reps: u64,
    pub seed: u64,
}

impl DelayTestConfig {
    pub fn validate(&self) -> Result<()> {
        check_rate(self.theta0)?;
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Parameter(format!(
                "level must lie in (0,1), got {}",
                self.alpha
            )));
        }
        if self.n < 2 {
            return Err(Error::Size("the I-test needs n >= 2".into()));
        }
        if self.reps < 100 {
            return Err(Error::Parameter(format!(
                "need at least 100 null replicates, got {}",
                self.reps
            )));
        }
        Ok(())
    }
}

/// Inversion-count test of `H0: theta >= theta0` against `theta < theta0`.
/// Rejects when the inversion frequency exceeds its Monte Carlo upper-alpha
/// quantile at the boundary rate; the power function is monotone in the
/// rate, so the level holds on the whole hypothesis.
pub fn i_test(pi: &Permutation, config: &DelayTestConfig) -> Result<TestResult> {
    config.validate()?;
    if pi.len() != config.n {
        return Err(Error::Size(format!(
            "permutation size {} does not match configured n {}",
            pi.len(),
            config.n
        )));
    }
    let statistic = count_inversions(pi)?.frequency();
    let model = CopulaModel::DelayExp(config.theta0);
    let replicates: Vec<f64> = (0..config.reps)
        .map(|r| {
            let mut rng = stream_rng(config.seed, &[0x4954, r]);
            let s = sample_with_rng(&model, config.n, &mut rng)?;
            Ok(count_inversions(&s.permutation)?.frequency())
        })
        .collect::<Result<_>>()?;
    Ok(TestResult::from_replicates(
        statistic,
        replicates,
        config.alpha,
        TestConfig {
            kind: "delay-i".into(),
            model: Some(model.spec_string()),
            n: Some(config.n),
            alpha: config.alpha,
            reps: Some(config.reps),
            seed: Some(config.seed),
            theta0: Some(config.theta0),
            ..TestConfig::default()
        },
    ))
}

/// Mean-delay test of `H0: theta >= theta0` on raw delays: rejects when the
/// sample mean exceeds the upper-alpha quantile of the gamma distribution
/// with shape `n` and rate `n * theta0`.
pub fn d_test(delays: &[f64], theta0: f64, alpha: f64) -> Result<TestResult> {
    check_rate(theta0)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("level must lie in (0,1), got {alpha}")));
    }
    if delays.is_empty() {
        return Err(Error::Size("the D-test needs at least one delay".into()));
    }
    for (i, &d) in delays.iter().enumerate() {
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::Data(format!(
                "delay at index {i} must be positive, got {d}"
            )));
        }
    }
    let n = delays.len();
    let mean = delays.iter().sum::<f64>() / n as f64;
    let rate = n as f64 * theta0;
    let critical = gamma_upper_quantile(n as f64, rate, alpha)?;
    let p_value = gamma_survival(n as f64, rate, mean)?;
    Ok(TestResult::from_exact_null(
        mean,
        critical,
        p_value,
        TestConfig {
            kind: "delay-d".into(),
            n: Some(n),
            alpha,
            theta0: Some(theta0),
            ..TestConfig::default()
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn inversion_prob_known_values() {
        assert!((inversion_prob(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!(inversion_prob(0.0).is_err());
        assert!(inversion_prob(-1.0).is_err());
    }

    #[test]
    fn inversion_prob_limits() {
        for &t in &[1e-8, 1e-6, 1e-4] {
            assert!((inversion_prob(t).unwrap() - 0.5).abs() < 1e-4);
        }
        assert!((inversion_prob(1e-6).unwrap() - 0.5).abs() < 1e-6);
        for &t in &[1e3, 1e4] {
            assert!(inversion_prob(t).unwrap() < 2.0 / t);
        }
    }

    #[test]
    fn inversion_prob_strictly_decreasing() {
        let grid: Vec<f64> = (1..=1000).map(|i| i as f64 * 0.01).collect();
        for w in grid.windows(2) {
            assert!(inversion_prob(w[0]).unwrap() > inversion_prob(w[1]).unwrap());
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for &t in &[0.05, 0.3, 1.0, 2.5, 7.0] {
            let h = 1e-5 * t;
            let fd = (inversion_prob(t + h).unwrap() - inversion_prob(t - h).unwrap())
                / (2.0 * h);
            let d = inversion_prob_deriv(t).unwrap();
            assert!(
                ((fd - d) / d).abs() < 1e-6,
                "t={t}: fd {fd} vs closed {d}"
            );
        }
    }

    #[test]
    fn series_switch_is_seamless() {
        // the series (used below the threshold) agrees with the closed
        // forms where the closed forms are still accurate
        for &t in &[0.2f64, 0.2499, 0.32] {
            let phi_closed = ((-t).exp() - 1.0 + t) / (t * t);
            assert!(((inversion_prob(t).unwrap() - phi_closed) / phi_closed).abs() < 1e-12);
            let dphi_closed = -((2.0 + t) * (-t).exp() - (2.0 - t)) / t.powi(3);
            assert!(
                ((inversion_prob_deriv(t).unwrap() - dphi_closed) / dphi_closed).abs() < 1e-11
            );
            let v_closed = {
                let e1 = (-t).exp();
                let e2 = (-2.0 * t).exp();
                2.0 / (3.0 * t.powi(4))
                    * (2.0 * t * t - 3.0 * t - 6.0
                        + 2.0 * (3.0 * t * t + 2.0 * t + 6.0) * e1
                        - (t + 6.0) * e2)
            };
            assert!(
                ((inversion_variance(t).unwrap() - v_closed) / v_closed).abs() < 1e-9,
                "t={t}"
            );
        }
        // leading series values at tiny rates
        assert!((inversion_prob(1e-9).unwrap() - 0.5).abs() < 1e-9);
        assert!((inversion_prob_deriv(1e-9).unwrap() + 1.0 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn variance_positive_and_matches_independence_limit() {
        for &t in &[1e-6, 0.01, 0.5, 1.0, 5.0, 20.0] {
            assert!(inversion_variance(t).unwrap() > 0.0, "t={t}");
        }
        // the zero-rate limit is the uniform-permutation inversion variance
        assert!((inversion_variance(1e-9).unwrap() - 1.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn efficiency_reference_value() {
        // reference computed with 50-digit arithmetic
        let e = efficiency(1.0).unwrap();
        assert!((e - 0.11035118736056710).abs() < 1e-12);
        for &t in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            let e = efficiency(t).unwrap();
            assert!(e > 0.0 && e < 1.0, "t={t}: {e}");
        }
    }

    #[test]
    fn efficiency_is_continuous() {
        assert!((efficiency(1.0 + 1e-6).unwrap() - efficiency(1.0).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn mean_delay_slope_values() {
        assert!((mean_delay_slope(1.0, 2.0).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-15);
        let near = mean_delay_slope(0.9999, 1.0).unwrap();
        assert!(near > 0.0 && near < 1e-7);
        assert!(mean_delay_slope(1.0, 1.0).is_err());
        assert!(mean_delay_slope(2.0, 1.0).is_err());
        // local quadratic approximation within 10 percent at 5 percent offset
        let theta0 = 1.3f64;
        let theta = 0.95 * theta0;
        let exact = mean_delay_slope(theta, theta0).unwrap();
        let quad = (theta - theta0).powi(2) / (2.0 * theta0 * theta0);
        assert!(((exact - quad) / exact).abs() < 0.10);
    }

    #[test]
    fn slope_ratio_approaches_efficiency() {
        let theta0 = 1.0f64;
        let eff = efficiency(theta0).unwrap();
        let mut last_gap = f64::INFINITY;
        for &d in &[0.1, 0.01] {
            let theta = theta0 - d;
            let ratio = inversion_slope_local(theta, theta0).unwrap()
                / mean_delay_slope(theta, theta0).unwrap();
            let gap = (ratio - eff).abs();
            assert!(gap < last_gap, "gap did not shrink at offset {d}");
            last_gap = gap;
        }
        assert!(last_gap < 1e-3);
        assert!(inversion_slope_local(0.5, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn i_test_identity_never_rejects() {
        let config = DelayTestConfig {
            theta0: 1.0,
            alpha: 0.2,
            n: 30,
            reps: 400,
            seed: 5,
        };
        let pi = Permutation::identity(30).unwrap();
        let res = i_test(&pi, &config).unwrap();
        assert_eq!(res.statistic, 0.0);
        assert!(!res.reject);
        assert!(res.p_value > 0.9);
    }

    #[test]
    fn i_test_rejects_under_strong_alternative() {
        let config = DelayTestConfig {
            theta0: 1.0,
            alpha: 0.05,
            n: 120,
            reps: 500,
            seed: 6,
        };
        // inversion-heavy permutation, as produced by slow rates
        let mut rng = stream_rng(77, &[0]);
        let s = sample_with_rng(&CopulaModel::DelayExp(0.1), 120, &mut rng).unwrap();
        let res = i_test(&s.permutation, &config).unwrap();
        assert!(res.reject, "statistic {} crit {}", res.statistic, res.critical_value);
    }

    #[test]
    fn d_test_examples() {
        let res = d_test(&[1.0], 1.0, 0.05).unwrap();
        assert!((res.critical_value - 2.995732273553991).abs() < 1e-10);
        assert!(!res.reject);

        // delays at the null mean: no rejection at any alpha below one half
        let delays: Vec<f64> = vec![0.5; 400];
        let res = d_test(&delays, 2.0, 0.49).unwrap();
        assert!(!res.reject);
        assert!((res.p_value - 0.5).abs() < 0.05);

        assert!(d_test(&[0.3, -0.1], 1.0, 0.05).is_err());
        assert!(d_test(&[], 1.0, 0.05).is_err());
    }

    #[test]
    fn d_test_level_under_null() {
        let theta0 = 1.5f64;
        let n = 40usize;
        let reps = 4000usize;
        let mut rejects = 0usize;
        let mut rng = stream_rng(91, &[1]);
        for _ in 0..reps {
            let delays: Vec<f64> = (0..n)
                .map(|_| -(1.0 - rng.random::<f64>()).ln() / theta0)
                .collect();
            if d_test(&delays, theta0, 0.05).unwrap().reject {
                rejects += 1;
            }
        }
        let level = rejects as f64 / reps as f64;
        assert!((level - 0.05).abs() < 0.015, "level {level}");
    }
}
