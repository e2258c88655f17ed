//! Two-sample tests with permuton-mixture bootstrap critical values.
//!
//! The observed permutations cannot be resampled directly; instead each is
//! identified with its discrete permuton and the bootstrap draws fresh
//! samples of the original sizes from the weight-`m/(m+n)` mixture of the
//! two permutons, which pools the samples under the null.

use rayon::prelude::*;

use crate::copula::{sample_with_rng, CopulaModel};
use crate::count::{profile_auto, FrequencyProfile};
use crate::error::{Error, Result};
use crate::nptest::{check_level, Flavor};
use crate::perm::{factorial, Permutation};
use crate::result::{TestConfig, TestResult};
use crate::rng::stream_rng;
use crate::space::{PatternWeights, TruncatedVector};

fn statistic_from_profiles(
    weights: &PatternWeights,
    a: &FrequencyProfile,
    b: &FrequencyProfile,
    k: usize,
    flavor: Flavor,
) -> Result<f64> {
    let mut diff = TruncatedVector::zeros(k)?;
    for m in 1..=k {
        for idx in 0..factorial(m).unwrap() as usize {
            diff.set_at(m, idx, a.frequency_at(m, idx) - b.frequency_at(m, idx));
        }
    }
    let m_size = a.source_size() as f64;
    let n_size = b.source_size() as f64;
    let effective = m_size * n_size / (m_size + n_size);
    Ok(match flavor {
        // the norm helpers scale by their integer size argument; apply the
        // two-sample effective size by hand
        Flavor::Cvm => effective * weights.cvm_norm_sq(&diff, 1),
        Flavor::Ks => effective.sqrt() * weights.ks_norm(&diff, 1),
    })
}

/// Two-sample discrepancy statistic between the pattern profiles of two
/// permutations, truncated at pattern length `k`.
pub fn two_sample_statistic(
    pi1: &Permutation,
    pi2: &Permutation,
    k: usize,
    flavor: Flavor,
) -> Result<f64> {
    if k > pi1.len().min(pi2.len()) {
        return Err(Error::Size(format!(
            "truncation k={k} exceeds a sample size ({}, {})",
            pi1.len(),
            pi2.len()
        )));
    }
    let weights = PatternWeights::new();
    let a = crate::count::profile(pi1, k, crate::count::ProfileMode::Exact)?;
    let b = crate::count::profile(pi2, k, crate::count::ProfileMode::Exact)?;
    statistic_from_profiles(&weights, &a, &b, k, flavor)
}

/// The pooled resampling measure: the two discrete permutons mixed with
/// weights proportional to the sample sizes.
pub fn bootstrap_mixture(pi1: &Permutation, pi2: &Permutation) -> CopulaModel {
    let m = pi1.len() as f64;
    let n = pi2.len() as f64;
    let w1 = m / (m + n);
    CopulaModel::PermutonMixture(vec![(pi1.clone(), w1), (pi2.clone(), 1.0 - w1)])
}

/// Two-sample test of equal underlying copulas, with bootstrap critical
/// values from `bootstrap` resample pairs drawn from the pooled permuton
/// mixture.
pub fn two_sample_test(
    pi1: &Permutation,
    pi2: &Permutation,
    k: usize,
    flavor: Flavor,
    alpha: f64,
    bootstrap: u64,
    seed: u64,
) -> Result<TestResult> {
    check_level(alpha)?;
    if bootstrap < 100 {
        return Err(Error::Parameter(format!(
            "need at least 100 bootstrap replicates, got {bootstrap}"
        )));
    }
    let m = pi1.len();
    let n = pi2.len();
    if k > m.min(n) {
        return Err(Error::Size(format!(
            "truncation k={k} exceeds a sample size ({m}, {n})"
        )));
    }
    let weights = PatternWeights::new();
    let statistic = {
        let mut rng1 = stream_rng(seed, &[0x5453, 0, 2]);
        let mut rng2 = stream_rng(seed, &[0x5453, 0, 3]);
        let a = profile_auto(pi1, k, &mut rng1)?;
        let b = profile_auto(pi2, k, &mut rng2)?;
        statistic_from_profiles(&weights, &a, &b, k, flavor)?
    };
    let mixture = bootstrap_mixture(pi1, pi2);
    let replicates: Vec<f64> = (0..bootstrap)
        .into_par_iter()
        .map(|r| {
            let mut rng1 = stream_rng(seed, &[0x5453, r + 1, 0]);
            let mut rng2 = stream_rng(seed, &[0x5453, r + 1, 1]);
            let s1 = sample_with_rng(&mixture, m, &mut rng1)?;
            let s2 = sample_with_rng(&mixture, n, &mut rng2)?;
            let mut prng1 = stream_rng(seed, &[0x5453, r + 1, 2]);
            let mut prng2 = stream_rng(seed, &[0x5453, r + 1, 3]);
            let a = profile_auto(&s1.permutation, k, &mut prng1)?;
            let b = profile_auto(&s2.permutation, k, &mut prng2)?;
            statistic_from_profiles(&weights, &a, &b, k, flavor)
        })
        .collect::<Result<_>>()?;
    let mut config = TestConfig {
        kind: format!("two-sample-{flavor}"),
        m: Some(m),
        n: Some(n),
        k: Some(k),
        alpha,
        bootstrap: Some(bootstrap),
        seed: Some(seed),
        ..TestConfig::default()
    };
    config.note = Some("bootstrap from pooled permuton mixture".into());
    Ok(TestResult::from_replicates(
        statistic, replicates, alpha, config,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn identical_inputs_give_zero() {
        let pi = p("35142");
        assert_eq!(
            two_sample_statistic(&pi, &pi, 3, Flavor::Cvm).unwrap(),
            0.0
        );
        assert_eq!(two_sample_statistic(&pi, &pi, 3, Flavor::Ks).unwrap(), 0.0);
    }

    #[test]
    fn pair_hand_value() {
        let got = two_sample_statistic(&p("12"), &p("21"), 2, Flavor::Cvm).unwrap();
        let gamma = 1.0 / (0.5f64.exp() - 1.0);
        assert!((got - gamma / 32.0).abs() < 1e-15, "{got}");
        assert!((got - 0.04817169007927495).abs() < 1e-15);
    }

    #[test]
    fn statistic_is_symmetric() {
        let mut rng = stream_rng(3, &[60]);
        for _ in 0..10 {
            let a = Permutation::random(9, &mut rng);
            let b = Permutation::random(14, &mut rng);
            for flavor in [Flavor::Cvm, Flavor::Ks] {
                let lhs = two_sample_statistic(&a, &b, 3, flavor).unwrap();
                let rhs = two_sample_statistic(&b, &a, 3, flavor).unwrap();
                assert!((lhs - rhs).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn truncation_size_guard() {
        assert!(two_sample_statistic(&p("12"), &p("4321"), 3, Flavor::Cvm).is_err());
    }

    #[test]
    fn mixture_weights() {
        let mix = bootstrap_mixture(&p("12"), &p("21"));
        match &mix {
            CopulaModel::PermutonMixture(c) => {
                assert_eq!(c[0].1, 0.5);
                assert_eq!(c[1].1, 0.5);
            }
            other => panic!("{other:?}"),
        }
        let mut rng = stream_rng(5, &[61]);
        let a = Permutation::random(30, &mut rng);
        let b = Permutation::random(70, &mut rng);
        match bootstrap_mixture(&a, &b) {
            CopulaModel::PermutonMixture(c) => {
                assert!((c[0].1 - 0.3).abs() < 1e-15);
                assert!((c[1].1 - 0.7).abs() < 1e-15);
                assert!((c[0].1 + c[1].1 - 1.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identical_inputs_never_reject() {
        let mut rng = stream_rng(7, &[62]);
        let pi = Permutation::random(25, &mut rng);
        let res = two_sample_test(&pi, &pi, 3, Flavor::Cvm, 0.05, 150, 11).unwrap();
        assert_eq!(res.statistic, 0.0);
        assert!(!res.reject);
    }

    #[test]
    fn bootstrap_critical_values_are_positive_and_finite() {
        let mut rng = stream_rng(9, &[63]);
        let a = Permutation::random(30, &mut rng);
        let b = Permutation::random(40, &mut rng);
        for flavor in [Flavor::Cvm, Flavor::Ks] {
            let res = two_sample_test(&a, &b, 3, flavor, 0.05, 120, 13).unwrap();
            assert!(res.critical_value.is_finite());
            assert!(res.critical_value > 0.0);
        }
    }
}
