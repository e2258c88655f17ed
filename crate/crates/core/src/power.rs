//! Empirical power study for the independence tests: Monte Carlo critical
//! values under the product copula, then rejection rates under the
//! configured alternatives, for every requested test and level at once.

use rayon::prelude::*;
use serde::Serialize;

use crate::copula::{sample_with_rng, CopulaModel};
use crate::count::{binomial, profile_auto, FrequencyProfile};
use crate::error::{Error, Result};
use crate::nptest::{CsTable, Flavor};
use crate::nptest::{bdy_profile_statistic, star_profile_statistic};
use crate::perm::Permutation;
use crate::result::mc_upper_critical;
use crate::rng::stream_rng;
use crate::space::{PatternWeights, TruncatedVector};

/// The independence tests entering the power study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndependenceTest {
    /// Weighted squared-l2 statistic over patterns of length <= k.
    Cvm,
    /// Weighted supremum statistic over patterns of length <= k.
    Ks,
    /// Unweighted squared-l2 statistic over length-4 patterns only.
    CvmStar,
    /// Unweighted supremum statistic over length-4 patterns only.
    KsStar,
    /// Bergsma-Dassios-Yanagimoto statistic.
    Bdy,
    /// Rank Hoeffding-Blum-Kiefer-Rosenblatt statistic.
    Hbkr,
}

impl IndependenceTest {
    pub const ALL: [IndependenceTest; 6] = [
        IndependenceTest::Cvm,
        IndependenceTest::Ks,
        IndependenceTest::CvmStar,
        IndependenceTest::KsStar,
        IndependenceTest::Bdy,
        IndependenceTest::Hbkr,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IndependenceTest::Cvm => "cvm",
            IndependenceTest::Ks => "ks",
            IndependenceTest::CvmStar => "cvm-star",
            IndependenceTest::KsStar => "ks-star",
            IndependenceTest::Bdy => "bdy",
            IndependenceTest::Hbkr => "hbkr",
        }
    }
}

impl std::str::FromStr for IndependenceTest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cvm" => Ok(IndependenceTest::Cvm),
            "ks" => Ok(IndependenceTest::Ks),
            "cvm-star" => Ok(IndependenceTest::CvmStar),
            "ks-star" => Ok(IndependenceTest::KsStar),
            "bdy" => Ok(IndependenceTest::Bdy),
            "hbkr" => Ok(IndependenceTest::Hbkr),
            other => Err(Error::Parameter(format!("unknown test {other:?}"))),
        }
    }
}

impl std::fmt::Display for IndependenceTest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Configuration of a power study.
#[derive(Debug, Clone)]
pub struct PowerStudySpec {
    pub alternatives: Vec<CopulaModel>,
    pub sizes: Vec<usize>,
    pub alphas: Vec<f64>,
    pub tests: Vec<IndependenceTest>,
    /// Rejection-rate replicates per alternative.
    pub power_reps: u64,
    /// Replicates for the null critical values.
    pub critical_reps: u64,
    /// Truncation for the weighted statistics.
    pub k: usize,
    pub seed: u64,
}

impl Default for PowerStudySpec {
    fn default() -> Self {
        PowerStudySpec {
            alternatives: Vec::new(),
            sizes: vec![50, 100],
            alphas: vec![0.1, 0.05, 0.025],
            tests: IndependenceTest::ALL.to_vec(),
            power_reps: 2_000,
            critical_reps: 20_000,
            k: 4,
            seed: 0,
        }
    }
}

impl PowerStudySpec {
    pub fn validate(&self) -> Result<()> {
        if self.alternatives.is_empty() {
            return Err(Error::Parameter("no alternatives given".into()));
        }
        for model in &self.alternatives {
            model.validate()?;
        }
        if self.sizes.is_empty() || self.tests.is_empty() || self.alphas.is_empty() {
            return Err(Error::Parameter(
                "sizes, tests, and alphas must be nonempty".into(),
            ));
        }
        for &a in &self.alphas {
            crate::nptest::check_level(a)?;
        }
        if self.power_reps < 100 || self.critical_reps < 100 {
            return Err(Error::Parameter(
                "power and critical-value replications must be at least 100".into(),
            ));
        }
        if self.k == 0 || self.k > 6 {
            return Err(Error::Parameter(format!(
                "truncation must lie in 1..=6, got {}",
                self.k
            )));
        }
        let needs_len4 = self.tests.iter().any(|t| {
            matches!(
                t,
                IndependenceTest::CvmStar
                    | IndependenceTest::KsStar
                    | IndependenceTest::Bdy
            )
        });
        if needs_len4 {
            for &n in &self.sizes {
                if n < 4 {
                    return Err(Error::Size(format!(
                        "length-four statistics need n >= 4, got {n}"
                    )));
                }
            }
        }
        // total-work guard: classification count across all replicates
        let mut work: u128 = 0;
        let reps_per_size =
            self.critical_reps as u128 + self.power_reps as u128 * self.alternatives.len() as u128;
        for &n in &self.sizes {
            let mut per_rep: u128 = 0;
            for m in 1..=self.profile_len().min(n) {
                per_rep = per_rep.saturating_add(
                    binomial(n, m)?.min(crate::count::DEFAULT_EXACT_BUDGET),
                );
            }
            work = work.saturating_add(per_rep.saturating_mul(reps_per_size));
        }
        const WORK_CAP: u128 = 2_000_000_000_000;
        if work > WORK_CAP {
            return Err(Error::Resource(format!(
                "power study would classify about {work} subsets, cap is {WORK_CAP}"
            )));
        }
        Ok(())
    }

    fn profile_len(&self) -> usize {
        let needs_len4 = self.tests.iter().any(|t| {
            matches!(
                t,
                IndependenceTest::CvmStar
                    | IndependenceTest::KsStar
                    | IndependenceTest::Bdy
            )
        });
        if needs_len4 {
            self.k.max(4)
        } else {
            self.k
        }
    }
}

/// One cell of the study: a (model, size, test, level) combination.
#[derive(Debug, Clone, Serialize)]
pub struct PowerCell {
    pub model: String,
    pub n: usize,
    pub test: IndependenceTest,
    pub alpha: f64,
    pub power: f64,
    /// Binomial standard error of the power estimate.
    pub std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerStudyResult {
    pub sizes: Vec<usize>,
    pub alphas: Vec<f64>,
    pub tests: Vec<IndependenceTest>,
    pub power_reps: u64,
    pub critical_reps: u64,
    pub k: usize,
    pub seed: u64,
    pub cells: Vec<PowerCell>,
}

impl PowerStudyResult {
    pub fn cell(&self, model: &str, n: usize, test: IndependenceTest, alpha: f64) -> Option<&PowerCell> {
        self.cells.iter().find(|c| {
            c.model == model && c.n == n && c.test == test && (c.alpha - alpha).abs() < 1e-12
        })
    }
}

struct StatBundle<'a> {
    tests: &'a [IndependenceTest],
    k: usize,
    profile_len: usize,
    weights: PatternWeights,
    cs: CsTable,
}

impl<'a> StatBundle<'a> {
    fn new(spec: &'a PowerStudySpec) -> Result<Self> {
        let profile_len = spec.profile_len();
        Ok(StatBundle {
            tests: &spec.tests,
            k: spec.k,
            profile_len,
            weights: PatternWeights::new(),
            cs: CsTable::closed(&CopulaModel::Independence, profile_len)?,
        })
    }

    fn weighted(&self, prof: &FrequencyProfile, flavor: Flavor) -> Result<f64> {
        let mut diff = TruncatedVector::zeros(self.k)?;
        for m in 1..=self.k {
            for idx in 0..crate::perm::factorial(m).unwrap() as usize {
                diff.set_at(m, idx, prof.frequency_at(m, idx) - self.cs.value_at(m, idx));
            }
        }
        let n = prof.source_size();
        Ok(match flavor {
            Flavor::Cvm => self.weights.cvm_norm_sq(&diff, n),
            Flavor::Ks => self.weights.ks_norm(&diff, n),
        })
    }

    fn evaluate(&self, pi: &Permutation, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Vec<f64>> {
        let prof = profile_auto(pi, self.profile_len, rng)?;
        self.tests
            .iter()
            .map(|t| match t {
                IndependenceTest::Cvm => self.weighted(&prof, Flavor::Cvm),
                IndependenceTest::Ks => self.weighted(&prof, Flavor::Ks),
                IndependenceTest::CvmStar => Ok(star_profile_statistic(&prof, Flavor::Cvm)),
                IndependenceTest::KsStar => Ok(star_profile_statistic(&prof, Flavor::Ks)),
                IndependenceTest::Bdy => Ok(bdy_profile_statistic(&prof)),
                IndependenceTest::Hbkr => Ok(crate::nptest::hbkr_statistic(pi)),
            })
            .collect()
    }
}

/// Run the study: per size, one batch of null replicates fixes the critical
/// values of every (test, level) pair, then each alternative is hit with
/// fresh replicates and scored against them.
pub fn run_power_study(spec: &PowerStudySpec) -> Result<PowerStudyResult> {
    spec.validate()?;
    let bundle = StatBundle::new(spec)?;
    let mut cells = Vec::new();
    for (size_idx, &n) in spec.sizes.iter().enumerate() {
        let size_tag = 0x5057_0000u64 + size_idx as u64;
        // null replicates
        let null_stats: Vec<Vec<f64>> = (0..spec.critical_reps)
            .into_par_iter()
            .map(|r| {
                let mut srng = stream_rng(spec.seed, &[size_tag, 0, r, 0]);
                let s = sample_with_rng(&CopulaModel::Independence, n, &mut srng)?;
                let mut prng = stream_rng(spec.seed, &[size_tag, 0, r, 1]);
                bundle.evaluate(&s.permutation, &mut prng)
            })
            .collect::<Result<_>>()?;
        // critical values per test and level
        let mut crit = vec![vec![f64::INFINITY; spec.alphas.len()]; spec.tests.len()];
        for (t_idx, _) in spec.tests.iter().enumerate() {
            let mut sorted: Vec<f64> = null_stats.iter().map(|row| row[t_idx]).collect();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a_idx, &alpha) in spec.alphas.iter().enumerate() {
                crit[t_idx][a_idx] = mc_upper_critical(&sorted, alpha);
            }
        }
        // alternatives
        for (m_idx, model) in spec.alternatives.iter().enumerate() {
            let model_tag = 1 + m_idx as u64;
            let alt_stats: Vec<Vec<f64>> = (0..spec.power_reps)
                .into_par_iter()
                .map(|r| {
                    let mut srng = stream_rng(spec.seed, &[size_tag, model_tag, r, 0]);
                    let s = sample_with_rng(model, n, &mut srng)?;
                    let mut prng = stream_rng(spec.seed, &[size_tag, model_tag, r, 1]);
                    bundle.evaluate(&s.permutation, &mut prng)
                })
                .collect::<Result<_>>()?;
            for (t_idx, &test) in spec.tests.iter().enumerate() {
                for (a_idx, &alpha) in spec.alphas.iter().enumerate() {
                    let rejects = alt_stats
                        .iter()
                        .filter(|row| row[t_idx] > crit[t_idx][a_idx])
                        .count();
                    let power = rejects as f64 / spec.power_reps as f64;
                    cells.push(PowerCell {
                        model: model.spec_string(),
                        n,
                        test,
                        alpha,
                        power,
                        std_error: (power * (1.0 - power) / spec.power_reps as f64).sqrt(),
                    });
                }
            }
        }
    }
    Ok(PowerStudyResult {
        sizes: spec.sizes.clone(),
        alphas: spec.alphas.clone(),
        tests: spec.tests.clone(),
        power_reps: spec.power_reps,
        critical_reps: spec.critical_reps,
        k: spec.k,
        seed: spec.seed,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        let mut spec = PowerStudySpec {
            alternatives: vec![CopulaModel::Fgm(0.5)],
            sizes: vec![20],
            alphas: vec![0.1],
            tests: vec![IndependenceTest::Cvm],
            power_reps: 200,
            critical_reps: 200,
            k: 4,
            seed: 1,
        };
        assert!(spec.validate().is_ok());
        spec.power_reps = 50;
        assert!(spec.validate().is_err());
        spec.power_reps = 200;
        spec.alphas = vec![1.5];
        assert!(spec.validate().is_err());
    }

    #[test]
    fn small_study_levels_and_monotonicity() {
        // with the null itself as the alternative the rejection rate
        // approximates the level
        let spec = PowerStudySpec {
            alternatives: vec![CopulaModel::Independence, CopulaModel::Fgm(1.0)],
            sizes: vec![30],
            alphas: vec![0.1, 0.05],
            tests: vec![IndependenceTest::Cvm, IndependenceTest::Bdy],
            power_reps: 500,
            critical_reps: 2_000,
            k: 4,
            seed: 9,
        };
        let result = run_power_study(&spec).unwrap();
        assert_eq!(result.cells.len(), 2 * 2 * 2);
        let level = result
            .cell("indep", 30, IndependenceTest::Cvm, 0.05)
            .unwrap();
        assert!((level.power - 0.05).abs() < 0.035, "level {}", level.power);
        let power = result
            .cell("fgm:1", 30, IndependenceTest::Cvm, 0.05)
            .unwrap();
        assert!(power.power > level.power + 0.15);
        // rejection rates increase with the level
        let lo = result.cell("fgm:1", 30, IndependenceTest::Bdy, 0.05).unwrap();
        let hi = result.cell("fgm:1", 30, IndependenceTest::Bdy, 0.1).unwrap();
        assert!(hi.power >= lo.power);
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = PowerStudySpec {
            alternatives: vec![CopulaModel::Clayton(0.5)],
            sizes: vec![15],
            alphas: vec![0.1],
            tests: vec![IndependenceTest::Hbkr],
            power_reps: 150,
            critical_reps: 150,
            k: 3,
            seed: 4,
        };
        let a = run_power_study(&spec).unwrap();
        let b = run_power_study(&spec).unwrap();
        assert_eq!(a.cells[0].power.to_bits(), b.cells[0].power.to_bits());
    }
}
