//! Exact and Monte Carlo pattern-frequency computation.
//!
//! Exact counting enumerates index subsets in lexicographic order and
//! classifies each subset by the order-isomorphism type of the restricted
//! permutation. Lengths two to four have specialized kernels (inversion
//! merge count, Lehmer-code loops); longer patterns go through the generic
//! combination walk. Monte Carlo counting averages the pattern indicator
//! over independently drawn uniform subsets.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::{factorial, Permutation};
use crate::rng::stream_rng;

/// Default ceiling on the number of subset classifications a single exact
/// profile pass may perform.
pub const DEFAULT_EXACT_BUDGET: u128 = 10_000_000;

/// Largest pattern length for which complete profiles are materialized.
pub const MAX_PROFILE_LEN: usize = 8;

/// An exact occurrence count together with the number of subsets inspected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternCount {
    pub occurrences: u128,
    /// `C(n, m)`; zero when the pattern is longer than the host permutation.
    pub subsets: u128,
}

impl PatternCount {
    /// Relative frequency as a float; 0 when the pattern is longer than the
    /// host (the `n < m` convention).
    pub fn frequency(&self) -> f64 {
        if self.subsets == 0 {
            0.0
        } else {
            self.occurrences as f64 / self.subsets as f64
        }
    }

    /// Exact rational frequency.
    pub fn ratio(&self) -> BigRational {
        if self.subsets == 0 {
            BigRational::from_integer(BigInt::from(0))
        } else {
            BigRational::new(
                BigInt::from(self.occurrences),
                BigInt::from(self.subsets),
            )
        }
    }
}

/// Plan for Monte Carlo subset sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetSamplerPlan {
    pub subsets: u64,
    pub seed: u64,
}

impl SubsetSamplerPlan {
    pub fn new(subsets: u64, seed: u64) -> Result<Self> {
        if subsets == 0 {
            return Err(Error::Parameter("subset count must be at least 1".into()));
        }
        Ok(SubsetSamplerPlan { subsets, seed })
    }

    /// Default subset count for size-`n` hosts and patterns of length `k`.
    pub fn default_subsets(n: usize, k: usize) -> u64 {
        (10 * n * k).max(1) as u64
    }
}

/// A Monte Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl McEstimate {
    pub(crate) fn from_hits(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        McEstimate {
            value: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
        }
    }
}

pub fn binomial(n: usize, m: usize) -> Result<u128> {
    if m > n {
        return Ok(0);
    }
    let m = m.min(n - m);
    let mut acc: u128 = 1;
    for i in 0..m {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::Resource(format!("C({n},{m}) does not fit in u128")))?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// Walk all `m`-subsets of `0..n` in lexicographic order.
fn for_each_combination(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    if m == 0 || m > n {
        return;
    }
    let mut c: Vec<usize> = (0..m).collect();
    loop {
        f(&c);
        // advance to the next combination
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] != i + n - m {
                break;
            }
            if i == 0 {
                return;
            }
        }
        c[i] += 1;
        for j in i + 1..m {
            c[j] = c[j - 1] + 1;
        }
    }
}

fn matches_pattern(values: &[u32], positions: &[usize], sigma: &[u32]) -> bool {
    let m = sigma.len();
    for a in 0..m {
        for b in a + 1..m {
            if (values[positions[a]] < values[positions[b]]) != (sigma[a] < sigma[b]) {
                return false;
            }
        }
    }
    true
}

/// Exact relative pattern frequency of `sigma` in `pi` over all
/// `|sigma|`-subsets of positions; zero by convention when `pi` is shorter
/// than `sigma`.
pub fn count_exact(pi: &Permutation, sigma: &Permutation) -> PatternCount {
    let n = pi.len();
    let m = sigma.len();
    if m > n {
        return PatternCount {
            occurrences: 0,
            subsets: 0,
        };
    }
    let subsets = binomial(n, m).expect("binomial overflow in count_exact");
    if m == 1 {
        return PatternCount {
            occurrences: n as u128,
            subsets,
        };
    }
    if m == 2 {
        let inv = inversion_count(pi.values());
        let occurrences = if sigma.values() == [2, 1] {
            inv
        } else {
            subsets - inv
        };
        return PatternCount {
            occurrences,
            subsets,
        };
    }
    let values = pi.values();
    let sv = sigma.values();
    let mut occurrences: u128 = 0;
    for_each_combination(n, m, |positions| {
        if matches_pattern(values, positions, sv) {
            occurrences += 1;
        }
    });
    PatternCount {
        occurrences,
        subsets,
    }
}

/// Merge-based inversion count, `O(n log n)`.
fn inversion_count(values: &[u32]) -> u128 {
    fn merge_count(v: &mut [u32], buf: &mut [u32]) -> u128 {
        let n = v.len();
        if n <= 1 {
            return 0;
        }
        let mid = n / 2;
        let mut inv = {
            let (left, right) = v.split_at_mut(mid);
            merge_count(left, &mut buf[..mid]) + merge_count(right, &mut buf[mid..])
        };
        let (mut i, mut j, mut k) = (0usize, mid, 0usize);
        while i < mid && j < n {
            if v[i] <= v[j] {
                buf[k] = v[i];
                i += 1;
            } else {
                buf[k] = v[j];
                j += 1;
                inv += (mid - i) as u128;
            }
            k += 1;
        }
        buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
        let done = k + mid - i;
        v[..done].copy_from_slice(&buf[..done]);
        // the tail v[j..] is already in place
        inv
    }
    let mut work = values.to_vec();
    let mut buf = vec![0u32; values.len()];
    merge_count(&mut work, &mut buf)
}

/// Relative inversion frequency `count_exact(pi, 21)`, computed in
/// `O(n log n)`.
pub fn count_inversions(pi: &Permutation) -> Result<PatternCount> {
    let n = pi.len();
    if n < 2 {
        return Err(Error::Size(format!(
            "inversion count needs n >= 2, got {n}"
        )));
    }
    Ok(PatternCount {
        occurrences: inversion_count(pi.values()),
        subsets: binomial(n, 2)?,
    })
}

/// Unbiased Monte Carlo estimate of the pattern frequency from `plan.subsets`
/// independently drawn uniform `m`-subsets.
pub fn count_monte_carlo(
    pi: &Permutation,
    sigma: &Permutation,
    plan: &SubsetSamplerPlan,
) -> Result<McEstimate> {
    let n = pi.len();
    let m = sigma.len();
    if n < m {
        return Err(Error::Size(format!(
            "Monte Carlo counting needs n >= |sigma|, got n={n}, |sigma|={m}"
        )));
    }
    let mut rng = stream_rng(plan.seed, &[0x4d43]);
    Ok(count_mc_with_rng(pi, sigma, plan.subsets, &mut rng))
}

pub(crate) fn count_mc_with_rng(
    pi: &Permutation,
    sigma: &Permutation,
    subsets: u64,
    rng: &mut ChaCha8Rng,
) -> McEstimate {
    let n = pi.len();
    let m = sigma.len();
    let values = pi.values();
    let sv = sigma.values();
    let mut positions = vec![0usize; m];
    let mut hits = 0u64;
    for _ in 0..subsets {
        sample_subset(n, m, rng, &mut positions);
        if matches_pattern(values, &positions, sv) {
            hits += 1;
        }
    }
    McEstimate::from_hits(hits, subsets)
}

/// Uniform `m`-subset of `0..n`, written sorted into `out`.
fn sample_subset(n: usize, m: usize, rng: &mut ChaCha8Rng, out: &mut [usize]) {
    // Floyd's algorithm; m is tiny so the membership scan is cheap.
    debug_assert_eq!(out.len(), m);
    let mut len = 0usize;
    for j in n - m..n {
        let t = rng.random_range(0..=j);
        let chosen = if out[..len].contains(&t) { j } else { t };
        out[len] = chosen;
        len += 1;
    }
    out.sort_unstable();
}

/// How the entries of a [`FrequencyProfile`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    Exact,
    /// Monte Carlo with the given number of subsets per pattern length.
    MonteCarlo(SubsetSamplerPlan),
}

/// Complete pattern-frequency profile over all patterns of length at most
/// `max_len`, with exact-count provenance in exact mode.
#[derive(Debug, Clone)]
pub struct FrequencyProfile {
    source_size: usize,
    max_len: usize,
    exact: bool,
    /// occurrence (or hit) counts per length, indexed by lexicographic rank
    counts: Vec<Vec<u64>>,
    /// denominator per length: `C(n,m)` in exact mode, sampled subsets in MC
    /// mode; zero for lengths exceeding the source size
    totals: Vec<u128>,
}

impl FrequencyProfile {
    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Frequency of the pattern with lexicographic rank `index` among
    /// patterns of length `m`.
    pub fn frequency_at(&self, m: usize, index: usize) -> f64 {
        let total = self.totals[m - 1];
        if total == 0 {
            0.0
        } else {
            self.counts[m - 1][index] as f64 / total as f64
        }
    }

    pub fn frequency(&self, sigma: &Permutation) -> f64 {
        self.frequency_at(sigma.len(), sigma.lex_index())
    }

    /// Exact rational frequency; `None` in Monte Carlo mode.
    pub fn ratio(&self, sigma: &Permutation) -> Option<BigRational> {
        if !self.exact {
            return None;
        }
        let m = sigma.len();
        let total = self.totals[m - 1];
        if total == 0 {
            return Some(BigRational::from_integer(BigInt::from(0)));
        }
        Some(BigRational::new(
            BigInt::from(self.counts[m - 1][sigma.lex_index()]),
            BigInt::from(total),
        ))
    }

    /// Raw counts for one length class.
    pub fn counts(&self, m: usize) -> &[u64] {
        &self.counts[m - 1]
    }

    pub fn total(&self, m: usize) -> u128 {
        self.totals[m - 1]
    }
}

/// Count all length-3 patterns with one lexicographic pass.
fn count_profile_m3(values: &[u32]) -> [u64; 6] {
    let n = values.len();
    let mut counts = [0u64; 6];
    for i in 0..n.saturating_sub(2) {
        let a = values[i];
        for j in i + 1..n - 1 {
            let b = values[j];
            let ab = (a > b) as usize;
            for &c in &values[j + 1..] {
                let idx = 2 * (ab + (a > c) as usize) + (b > c) as usize;
                counts[idx] += 1;
            }
        }
    }
    counts
}

/// Count all length-4 patterns with one lexicographic pass.
fn count_profile_m4(values: &[u32]) -> [u64; 24] {
    let n = values.len();
    let mut counts = [0u64; 24];
    for i in 0..n.saturating_sub(3) {
        let a = values[i];
        for j in i + 1..n - 2 {
            let b = values[j];
            let ab = (a > b) as usize;
            for k in j + 1..n - 1 {
                let c = values[k];
                let base = 6 * (ab + (a > c) as usize) + 2 * ((b > c) as usize);
                for &d in &values[k + 1..] {
                    let idx = base
                        + 6 * ((a > d) as usize)
                        + 2 * ((b > d) as usize)
                        + ((c > d) as usize);
                    counts[idx] += 1;
                }
            }
        }
    }
    counts
}

fn exact_counts_for_len(pi: &Permutation, m: usize) -> Vec<u64> {
    let values = pi.values();
    let n = values.len();
    match m {
        1 => vec![n as u64],
        2 => {
            let inv = inversion_count(values) as u64;
            let total = (binomial(n, 2).unwrap()) as u64;
            vec![total - inv, inv]
        }
        3 => count_profile_m3(values).to_vec(),
        4 => count_profile_m4(values).to_vec(),
        _ => {
            let mf = factorial(m).unwrap() as usize;
            let mut counts = vec![0u64; mf];
            let mut sub = vec![0f64; m];
            for_each_combination(n, m, |positions| {
                for (t, &p) in positions.iter().enumerate() {
                    sub[t] = values[p] as f64;
                }
                counts[crate::perm::pattern_lex_index(&sub)] += 1;
            });
            counts
        }
    }
}

fn mc_counts_for_len(
    pi: &Permutation,
    m: usize,
    subsets: u64,
    rng: &mut ChaCha8Rng,
) -> Vec<u64> {
    let values = pi.values();
    let n = values.len();
    let mf = factorial(m).unwrap() as usize;
    let mut counts = vec![0u64; mf];
    let mut positions = vec![0usize; m];
    let mut sub = vec![0f64; m];
    for _ in 0..subsets {
        sample_subset(n, m, rng, &mut positions);
        for (t, &p) in positions.iter().enumerate() {
            sub[t] = values[p] as f64;
        }
        counts[crate::perm::pattern_lex_index(&sub)] += 1;
    }
    counts
}

/// Complete frequency profile of `pi` over patterns of length at most `k`,
/// with the default exact-classification budget.
pub fn profile(pi: &Permutation, k: usize, mode: ProfileMode) -> Result<FrequencyProfile> {
    profile_with_budget(pi, k, mode, DEFAULT_EXACT_BUDGET)
}

/// As [`profile`], with an explicit ceiling on exact subset classifications.
pub fn profile_with_budget(
    pi: &Permutation,
    k: usize,
    mode: ProfileMode,
    budget: u128,
) -> Result<FrequencyProfile> {
    if k == 0 {
        return Err(Error::Parameter("profile needs k >= 1".into()));
    }
    if k > MAX_PROFILE_LEN {
        return Err(Error::Resource(format!(
            "complete profiles are limited to pattern length {MAX_PROFILE_LEN}, requested {k}"
        )));
    }
    let n = pi.len();
    let mut counts = Vec::with_capacity(k);
    let mut totals = Vec::with_capacity(k);
    let mut mc_rng = match mode {
        ProfileMode::MonteCarlo(plan) => Some((plan.subsets, stream_rng(plan.seed, &[0x50524f46]))),
        ProfileMode::Exact => None,
    };
    for m in 1..=k {
        if m > n {
            counts.push(vec![0u64; factorial(m).unwrap() as usize]);
            totals.push(0);
            continue;
        }
        match &mut mc_rng {
            None => {
                let total = binomial(n, m)?;
                if total > budget {
                    return Err(Error::Resource(format!(
                        "exact profile would classify C({n},{m}) = {total} subsets, budget is {budget}"
                    )));
                }
                counts.push(exact_counts_for_len(pi, m));
                totals.push(total);
            }
            Some((subsets, rng)) => {
                // length 1 is deterministic, and length 2 is cheap exactly
                if m <= 2 {
                    counts.push(exact_counts_for_len(pi, m));
                    totals.push(binomial(n, m)?);
                } else {
                    counts.push(mc_counts_for_len(pi, m, *subsets, rng));
                    totals.push(*subsets as u128);
                }
            }
        }
    }
    Ok(FrequencyProfile {
        source_size: n,
        max_len: k,
        exact: matches!(mode, ProfileMode::Exact),
        counts,
        totals,
    })
}

/// Profile with the mode chosen by the classification budget: exact when
/// every `C(n,m)`, `m <= k`, stays within [`DEFAULT_EXACT_BUDGET`], Monte
/// Carlo with `10·n·k` subsets per length otherwise. The supplied generator
/// drives the Monte Carlo path and is left untouched on the exact path.
pub fn profile_auto(pi: &Permutation, k: usize, rng: &mut ChaCha8Rng) -> Result<FrequencyProfile> {
    let n = pi.len();
    let exact_ok = (1..=k.min(n)).all(|m| {
        binomial(n, m)
            .map(|c| c <= DEFAULT_EXACT_BUDGET)
            .unwrap_or(false)
    });
    if exact_ok {
        profile(pi, k, ProfileMode::Exact)
    } else {
        let subsets = SubsetSamplerPlan::default_subsets(n, k);
        let mut counts = Vec::with_capacity(k);
        let mut totals = Vec::with_capacity(k);
        for m in 1..=k {
            if m > n {
                counts.push(vec![0u64; factorial(m).unwrap() as usize]);
                totals.push(0);
            } else if m <= 2 || binomial(n, m)? <= DEFAULT_EXACT_BUDGET {
                counts.push(exact_counts_for_len(pi, m));
                totals.push(binomial(n, m)?);
            } else {
                counts.push(mc_counts_for_len(pi, m, subsets, rng));
                totals.push(subsets as u128);
            }
        }
        Ok(FrequencyProfile {
            source_size: n,
            max_len: k,
            exact: false,
            counts,
            totals,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use num_traits::{One, Zero};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn paper_example_541362() {
        let c = count_exact(&p("541362"), &p("231"));
        assert_eq!((c.occurrences, c.subsets), (3, 20));
        assert_eq!(c.frequency(), 0.15);
    }

    #[test]
    fn singleton_pattern_is_certain() {
        let c = count_exact(&p("52134"), &p("1"));
        assert!(c.ratio().is_one());
    }

    #[test]
    fn longer_pattern_than_host_is_zero() {
        let c = count_exact(&p("321"), &p("4321"));
        assert_eq!(c.subsets, 0);
        assert_eq!(c.frequency(), 0.0);
        assert!(c.ratio().is_zero());
    }

    #[test]
    fn inversion_examples() {
        let identity = Permutation::identity(9).unwrap();
        assert_eq!(count_inversions(&identity).unwrap().occurrences, 0);
        let reversal = p("987654321");
        let c = count_inversions(&reversal).unwrap();
        assert_eq!(c.occurrences, c.subsets);
        let c = count_inversions(&p("231")).unwrap();
        assert_eq!((c.occurrences, c.subsets), (2, 3));
        assert!(count_inversions(&p("1")).is_err());
    }

    #[test]
    fn inversions_agree_with_generic_count() {
        let mut rng = stream_rng(3, &[1]);
        for _ in 0..30 {
            let pi = Permutation::random(2 + rng.random_range(0..40usize), &mut rng);
            assert_eq!(
                count_inversions(&pi).unwrap(),
                count_exact(&pi, &p("21"))
            );
        }
    }

    #[test]
    fn fast_profile_kernels_match_generic_enumeration() {
        let mut rng = stream_rng(11, &[2]);
        for _ in 0..25 {
            let pi = Permutation::random(4 + rng.random_range(0..9usize), &mut rng);
            let prof = profile(&pi, 4, ProfileMode::Exact).unwrap();
            for m in 1..=4 {
                let mf: usize = (1..=m).product();
                for idx in 0..mf {
                    let sigma = Permutation::from_lex_index(m, idx).unwrap();
                    let direct = count_exact(&pi, &sigma);
                    assert_eq!(
                        prof.counts(m)[idx] as u128,
                        direct.occurrences,
                        "mismatch for sigma={sigma:?} in pi={pi:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn profile_examples() {
        let prof = profile(&p("21"), 2, ProfileMode::Exact).unwrap();
        assert_eq!(prof.frequency(&p("1")), 1.0);
        assert_eq!(prof.frequency(&p("12")), 0.0);
        assert_eq!(prof.frequency(&p("21")), 1.0);

        let prof = profile(&p("541362"), 3, ProfileMode::Exact).unwrap();
        assert_eq!(prof.frequency(&p("231")), 0.15);
    }

    #[test]
    fn profile_partition_sums() {
        let mut rng = stream_rng(5, &[3]);
        for _ in 0..10 {
            let pi = Permutation::random(3 + rng.random_range(0..10usize), &mut rng);
            let prof = profile(&pi, 3, ProfileMode::Exact).unwrap();
            for m in 1..=3.min(pi.len()) {
                let total: u64 = prof.counts(m).iter().sum();
                assert_eq!(total as u128, prof.total(m));
            }
        }
    }

    #[test]
    fn profile_budget_guard() {
        let mut rng = stream_rng(5, &[4]);
        let pi = Permutation::random(100, &mut rng);
        match profile_with_budget(&pi, 4, ProfileMode::Exact, 1_000_000) {
            Err(Error::Resource(_)) => {}
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn profile_lengths_beyond_host_are_zero() {
        let prof = profile(&p("21"), 4, ProfileMode::Exact).unwrap();
        assert_eq!(prof.total(3), 0);
        assert_eq!(prof.frequency(&p("123")), 0.0);
    }

    #[test]
    fn chapman_kolmogorov_exact() {
        // t(pi, sigma) = sum over rho of t(pi, rho) * t(rho, sigma), exact
        // rational arithmetic, random hosts up to size 8.
        let mut rng = stream_rng(17, &[5]);
        for n in 4..=8usize {
            for _ in 0..3 {
                let pi = Permutation::random(n, &mut rng);
                for k in 1..=3usize {
                    for l in k..=5.min(n) {
                        let lf: usize = (1..=l).product();
                        for s_idx in 0..(1..=k).product::<usize>() {
                            let sigma = Permutation::from_lex_index(k, s_idx).unwrap();
                            let lhs = count_exact(&pi, &sigma).ratio();
                            let mut rhs = BigRational::zero();
                            for r_idx in 0..lf {
                                let rho = Permutation::from_lex_index(l, r_idx).unwrap();
                                rhs += count_exact(&pi, &rho).ratio()
                                    * count_exact(&rho, &sigma).ratio();
                            }
                            assert_eq!(lhs, rhs, "CK failed n={n} k={k} l={l}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_pattern_covariance() {
        let mut rng = stream_rng(19, &[6]);
        for _ in 0..15 {
            let pi = Permutation::random(5 + rng.random_range(0..5usize), &mut rng);
            let inv = pi.inverse();
            for m in 1..=3usize {
                for idx in 0..(1..=m).product::<usize>() {
                    let sigma = Permutation::from_lex_index(m, idx).unwrap();
                    assert_eq!(
                        count_exact(&pi, &sigma),
                        count_exact(&inv, &sigma.inverse())
                    );
                }
            }
        }
    }

    #[test]
    fn monte_carlo_singleton_is_exact() {
        let pi = p("3142");
        let plan = SubsetSamplerPlan::new(500, 9).unwrap();
        let est = count_monte_carlo(&pi, &p("1"), &plan).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn monte_carlo_converges_to_exact() {
        let pi = p("541362");
        let plan = SubsetSamplerPlan::new(200_000, 123).unwrap();
        let est = count_monte_carlo(&pi, &p("231"), &plan).unwrap();
        assert!((est.value - 0.15).abs() < 3.0 * est.std_error + 1e-12);
    }

    #[test]
    fn monte_carlo_size_guard() {
        let plan = SubsetSamplerPlan::new(10, 1).unwrap();
        assert!(count_monte_carlo(&p("21"), &p("123"), &plan).is_err());
    }

    #[test]
    fn monte_carlo_unbiased_over_repetitions() {
        // mean of seeded estimates approaches the exact value
        let mut rng = stream_rng(23, &[7]);
        let pi = Permutation::random(30, &mut rng);
        let exact = count_exact(&pi, &p("1234")).frequency();
        let reps = 400u64;
        let subsets = 400u64;
        let mut sum = 0.0;
        for r in 0..reps {
            let plan = SubsetSamplerPlan::new(subsets, 1000 + r).unwrap();
            sum += count_monte_carlo(&pi, &p("1234"), &plan).unwrap().value;
        }
        let mean = sum / reps as f64;
        let se_single = (exact * (1.0 - exact) / subsets as f64).sqrt();
        let tol = 4.0 * se_single / (reps as f64).sqrt();
        assert!(
            (mean - exact).abs() < tol,
            "mean {mean} vs exact {exact}, tol {tol}"
        );
    }

    #[test]
    fn mc_profile_mode_covers_requested_lengths() {
        let mut rng = stream_rng(29, &[8]);
        let pi = Permutation::random(40, &mut rng);
        let plan = SubsetSamplerPlan::new(5_000, 77).unwrap();
        let prof = profile(&pi, 4, ProfileMode::MonteCarlo(plan)).unwrap();
        assert!(!prof.is_exact());
        let sum3: f64 = (0..6).map(|i| prof.frequency_at(3, i)).sum();
        assert!((sum3 - 1.0).abs() < 1e-12);
        let exact = profile(&pi, 4, ProfileMode::Exact).unwrap();
        for idx in 0..24 {
            let e = exact.frequency_at(4, idx);
            let m = prof.frequency_at(4, idx);
            assert!((e - m).abs() < 0.05, "idx {idx}: {e} vs {m}");
        }
    }
}
