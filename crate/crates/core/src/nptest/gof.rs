//! Goodness-of-fit tests against a fully specified null copula.

use rayon::prelude::*;

use crate::copula::{pattern_prob_closed, sample_with_rng, CopulaModel};
use crate::count::{profile, profile_auto, FrequencyProfile, ProfileMode};
use crate::error::{Error, Result};
use crate::nptest::{check_level, Flavor};
use crate::perm::{factorial, Permutation};
use crate::result::{TestConfig, TestResult};
use crate::rng::stream_rng;
use crate::space::{PatternWeights, TruncatedVector};
use crate::nptest::table::NullQuantileTable;

/// Pattern probabilities of a null copula over all patterns of length at
/// most `k`, the reference a goodness-of-fit statistic is measured against.
#[derive(Debug, Clone)]
pub struct CsTable {
    max_len: usize,
    values: Vec<Vec<f64>>,
}

impl CsTable {
    /// Build from closed forms; fails with a model error where the family
    /// has no closed form at some required length (the caller can fall back
    /// to [`CsTable::estimated`]).
    pub fn closed(model: &CopulaModel, k: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(k);
        for m in 1..=k {
            let mf = factorial(m).unwrap() as usize;
            let mut level = Vec::with_capacity(mf);
            for idx in 0..mf {
                let sigma = Permutation::from_lex_index(m, idx)?;
                match pattern_prob_closed(model, &sigma) {
                    Some(p) => level.push(p),
                    None => {
                        return Err(Error::Model(format!(
                            "{} has no closed form at pattern length {m}",
                            model.spec_string()
                        )))
                    }
                }
            }
            values.push(level);
        }
        Ok(CsTable { max_len: k, values })
    }

    /// Monte Carlo estimate of the table from `reps` independent size-`k`
    /// samples (each prefix of a sample is itself an i.i.d. sample).
    pub fn estimated(model: &CopulaModel, k: usize, reps: u64, seed: u64) -> Result<Self> {
        if reps == 0 {
            return Err(Error::Parameter("need at least one replicate".into()));
        }
        model.validate()?;
        let mut counts: Vec<Vec<u64>> = (1..=k)
            .map(|m| vec![0u64; factorial(m).unwrap() as usize])
            .collect();
        let mut rng = stream_rng(seed, &[0x43535454]);
        for _ in 0..reps {
            let s = sample_with_rng(model, k, &mut rng)?;
            let xs: Vec<f64> = s.points.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = s.points.iter().map(|p| p.1).collect();
            let mut order: Vec<usize> = (0..k).collect();
            for m in 1..=k {
                order[..m].sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
                let sub: Vec<f64> = order[..m].iter().map(|&i| ys[i]).collect();
                counts[m - 1][crate::perm::pattern_lex_index(&sub)] += 1;
                order[..m].sort_unstable();
            }
        }
        let values = counts
            .into_iter()
            .map(|level| {
                level
                    .into_iter()
                    .map(|c| c as f64 / reps as f64)
                    .collect()
            })
            .collect();
        Ok(CsTable { max_len: k, values })
    }

    /// Build from explicit per-length values (lexicographic order within
    /// each length).
    pub fn from_values(values: Vec<Vec<f64>>) -> Result<Self> {
        for (m, level) in values.iter().enumerate() {
            let expect = factorial(m + 1).unwrap() as usize;
            if level.len() != expect {
                return Err(Error::Parameter(format!(
                    "length-{} block needs {expect} entries, got {}",
                    m + 1,
                    level.len()
                )));
            }
        }
        Ok(CsTable {
            max_len: values.len(),
            values,
        })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn value_at(&self, m: usize, idx: usize) -> f64 {
        self.values[m - 1][idx]
    }

    pub fn value(&self, sigma: &Permutation) -> f64 {
        self.value_at(sigma.len(), sigma.lex_index())
    }
}

pub(crate) fn statistic_from_profile(
    weights: &PatternWeights,
    prof: &FrequencyProfile,
    table: &CsTable,
    k: usize,
    flavor: Flavor,
) -> Result<f64> {
    if table.max_len() < k || prof.max_len() < k {
        return Err(Error::Parameter(format!(
            "profile and table must cover pattern length {k}"
        )));
    }
    let mut diff = TruncatedVector::zeros(k)?;
    for m in 1..=k {
        for idx in 0..factorial(m).unwrap() as usize {
            diff.set_at(m, idx, prof.frequency_at(m, idx) - table.value_at(m, idx));
        }
    }
    let n = prof.source_size();
    Ok(match flavor {
        Flavor::Cvm => weights.cvm_norm_sq(&diff, n),
        Flavor::Ks => weights.ks_norm(&diff, n),
    })
}

/// Goodness-of-fit statistic of the observed permutation against a null
/// model with closed-form pattern probabilities, from an exact profile.
pub fn gof_statistic(
    pi: &Permutation,
    null_model: &CopulaModel,
    k: usize,
    flavor: Flavor,
) -> Result<f64> {
    let table = CsTable::closed(null_model, k)?;
    gof_statistic_with_table(pi, &table, k, flavor)
}

/// As [`gof_statistic`], with a caller-supplied pattern-probability table.
pub fn gof_statistic_with_table(
    pi: &Permutation,
    table: &CsTable,
    k: usize,
    flavor: Flavor,
) -> Result<f64> {
    let weights = PatternWeights::new();
    let prof = profile(pi, k, ProfileMode::Exact)?;
    statistic_from_profile(&weights, &prof, table, k, flavor)
}

/// Monte Carlo distribution of the goodness-of-fit statistic under the null:
/// `reps` i.i.d. replicate statistics, sorted into a quantile table.
///
/// Each replicate samples the null model, reduces to ranks, and evaluates
/// the statistic with the same profile policy the test itself uses (exact
/// within the classification budget, Monte Carlo subset counting beyond it).
pub fn null_quantiles(
    null_model: &CopulaModel,
    n: usize,
    k: usize,
    flavor: Flavor,
    reps: u64,
    seed: u64,
) -> Result<NullQuantileTable> {
    // a hundred replicates is the recommended floor; callers may go lower
    // at their own risk (front ends warn)
    if reps == 0 {
        return Err(Error::Parameter("need at least one replicate".into()));
    }
    let table = CsTable::closed(null_model, k)?;
    let weights = PatternWeights::new();
    let values: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut sample_rng = stream_rng(seed, &[0x474e, r, 0]);
            let s = sample_with_rng(null_model, n, &mut sample_rng)?;
            let mut profile_rng = stream_rng(seed, &[0x474e, r, 1]);
            let prof = profile_auto(&s.permutation, k, &mut profile_rng)?;
            statistic_from_profile(&weights, &prof, &table, k, flavor)
        })
        .collect::<Result<_>>()?;
    NullQuantileTable::new(
        null_model.spec_string(),
        n,
        k,
        flavor,
        reps,
        seed,
        values,
    )
}

/// Goodness-of-fit test with Monte Carlo critical values generated on the
/// fly. The statistic uses an exact profile within the classification
/// budget and the Monte Carlo counter beyond it.
pub fn gof_test(
    pi: &Permutation,
    null_model: &CopulaModel,
    k: usize,
    flavor: Flavor,
    alpha: f64,
    reps: u64,
    seed: u64,
) -> Result<TestResult> {
    check_level(alpha)?;
    let table = null_quantiles(null_model, pi.len(), k, flavor, reps, seed)?;
    let cs = CsTable::closed(null_model, k)?;
    gof_test_with_table(pi, &table, &cs, alpha, seed)
}

/// Goodness-of-fit test against a precomputed null-quantile table (and the
/// matching pattern-probability table).
pub fn gof_test_with_table(
    pi: &Permutation,
    table: &NullQuantileTable,
    cs: &CsTable,
    alpha: f64,
    seed: u64,
) -> Result<TestResult> {
    check_level(alpha)?;
    if pi.len() != table.n {
        return Err(Error::Size(format!(
            "quantile table was built for n={}, data has n={}",
            table.n,
            pi.len()
        )));
    }
    let weights = PatternWeights::new();
    let mut profile_rng = stream_rng(seed, &[0x474f46, 0]);
    let prof = profile_auto(pi, table.k, &mut profile_rng)?;
    let statistic = statistic_from_profile(&weights, &prof, cs, table.k, table.flavor)?;
    let critical_value = table.upper_quantile(alpha);
    let p_value = table.p_value(statistic);
    Ok(TestResult {
        statistic,
        critical_value,
        p_value,
        reject: statistic > critical_value,
        config: TestConfig {
            kind: format!("gof-{}", table.flavor),
            model: Some(table.model.clone()),
            n: Some(pi.len()),
            k: Some(table.k),
            alpha,
            reps: Some(table.reps),
            seed: Some(seed),
            ..TestConfig::default()
        },
    })
}
