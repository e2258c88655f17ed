//! Tests of copula symmetry under coordinate exchange.
//!
//! Exchanging the coordinates of a sample inverts its rank permutation, so a
//! symmetric copula makes the pattern frequencies of `sigma` and
//! `sigma^{-1}` asymptotically indistinguishable. The statistic weights the
//! differences `T(sigma) - T(sigma^{-1})`; critical values come from
//! resampling the symmetrized permuton, the equal-weight mixture of the
//! observed rank plot and its inverse, which imposes the null on the
//! resampling measure the same way two-sample pooling does.

use rayon::prelude::*;

use crate::copula::{sample_with_rng, CopulaModel};
use crate::count::{profile_auto, FrequencyProfile};
use crate::error::{Error, Result};
use crate::nptest::{check_level, Flavor};
use crate::perm::{factorial, Permutation};
use crate::result::{TestConfig, TestResult};
use crate::rng::stream_rng;
use crate::space::{PatternWeights, TruncatedVector};

/// For each lexicographic pattern index of length `m`, the index of the
/// inverse pattern.
fn inverse_index_map(m: usize) -> Vec<usize> {
    let mf = factorial(m).unwrap() as usize;
    (0..mf)
        .map(|idx| {
            Permutation::from_lex_index(m, idx)
                .unwrap()
                .inverse()
                .lex_index()
        })
        .collect()
}

fn statistic_from_profile(
    weights: &PatternWeights,
    prof: &FrequencyProfile,
    k: usize,
    flavor: Flavor,
) -> Result<f64> {
    let mut diff = TruncatedVector::zeros(k)?;
    for m in 1..=k {
        let inv = inverse_index_map(m);
        for idx in 0..inv.len() {
            diff.set_at(
                m,
                idx,
                prof.frequency_at(m, idx) - prof.frequency_at(m, inv[idx]),
            );
        }
    }
    let n = prof.source_size();
    Ok(match flavor {
        Flavor::Cvm => weights.cvm_norm_sq(&diff, n),
        Flavor::Ks => weights.ks_norm(&diff, n),
    })
}

/// Symmetry statistic: the weighted discrepancy between the profile and its
/// pattern-inverse, truncated at length `k`.
pub fn symmetry_statistic(pi: &Permutation, k: usize, flavor: Flavor) -> Result<f64> {
    let weights = PatternWeights::new();
    let prof = crate::count::profile(pi, k, crate::count::ProfileMode::Exact)?;
    statistic_from_profile(&weights, &prof, k, flavor)
}

/// Bootstrap symmetry test. Resamples of the original size are drawn from
/// the symmetrized permuton (the observed rank plot mixed equally with its
/// inverse); the critical value is the upper-alpha resampling quantile.
pub fn symmetry_test(
    pi: &Permutation,
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
    let n = pi.len();
    if k > n {
        return Err(Error::Size(format!(
            "truncation k={k} exceeds the sample size {n}"
        )));
    }
    let weights = PatternWeights::new();
    let statistic = {
        let mut rng = stream_rng(seed, &[0x5359, 0, 1]);
        let prof = profile_auto(pi, k, &mut rng)?;
        statistic_from_profile(&weights, &prof, k, flavor)?
    };
    let mixture = CopulaModel::PermutonMixture(vec![
        (pi.clone(), 0.5),
        (pi.inverse(), 0.5),
    ]);
    let replicates: Vec<f64> = (0..bootstrap)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, &[0x5359, r + 1, 0]);
            let s = sample_with_rng(&mixture, n, &mut rng)?;
            let mut prng = stream_rng(seed, &[0x5359, r + 1, 1]);
            let prof = profile_auto(&s.permutation, k, &mut prng)?;
            statistic_from_profile(&weights, &prof, k, flavor)
        })
        .collect::<Result<_>>()?;
    let config = TestConfig {
        kind: format!("symmetry-{flavor}"),
        n: Some(n),
        k: Some(k),
        alpha,
        bootstrap: Some(bootstrap),
        seed: Some(seed),
        note: Some("bootstrap from symmetrized permuton".into()),
        ..TestConfig::default()
    };
    Ok(TestResult::from_replicates(
        statistic, replicates, alpha, config,
    ))
}
