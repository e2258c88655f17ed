//! Test results and the Monte Carlo critical-value conventions shared by
//! every test in the crate.
//!
//! With `R` null replicates sorted ascending, the critical value is the
//! `ceil((1-alpha)(R+1))`-th order statistic and the p-value of an observed
//! statistic `t` is `(1 + #{replicates >= t}) / (R + 1)`. Rejection is
//! `t > critical value`, which coincides with `p <= alpha`.

use serde::Serialize;

/// Echo of a test invocation; every stochastic ingredient is recorded.
#[derive(Debug, Clone, Default, Serialize)]
pub struct TestConfig {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Outcome of a single hypothesis test.
#[derive(Debug, Clone, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject: bool,
    pub config: TestConfig,
}

impl TestResult {
    /// Assemble a result from Monte Carlo (or bootstrap) null replicates.
    pub fn from_replicates(
        statistic: f64,
        mut replicates: Vec<f64>,
        alpha: f64,
        config: TestConfig,
    ) -> TestResult {
        replicates.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let critical_value = mc_upper_critical(&replicates, alpha);
        let p_value = mc_p_value(&replicates, statistic);
        TestResult {
            statistic,
            critical_value,
            p_value,
            reject: statistic > critical_value,
            config,
        }
    }

    /// Assemble a result from an exact continuous null distribution.
    pub fn from_exact_null(
        statistic: f64,
        critical_value: f64,
        p_value: f64,
        config: TestConfig,
    ) -> TestResult {
        TestResult {
            statistic,
            critical_value,
            p_value,
            reject: statistic > critical_value,
            config,
        }
    }
}

/// Upper-`alpha` Monte Carlo critical value: the
/// `ceil((1-alpha)(R+1))`-th ascending order statistic, infinite when the
/// index exceeds the sample (the test then never rejects).
pub fn mc_upper_critical(sorted: &[f64], alpha: f64) -> f64 {
    let r = sorted.len();
    let rank = ((1.0 - alpha) * (r as f64 + 1.0)).ceil() as usize;
    if rank == 0 {
        return f64::NEG_INFINITY;
    }
    if rank > r {
        return f64::INFINITY;
    }
    sorted[rank - 1]
}

/// Monte Carlo p-value `(1 + #{replicates >= statistic}) / (R + 1)`.
pub fn mc_p_value(sorted: &[f64], statistic: f64) -> f64 {
    let r = sorted.len();
    // first index with value >= statistic
    let idx = sorted.partition_point(|v| *v < statistic);
    (1 + r - idx) as f64 / (r as f64 + 1.0)
}
