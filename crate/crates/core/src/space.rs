//! The weighted sequence space over all finite patterns.
//!
//! Pattern `sigma` carries weight `gamma * (|sigma|!)^-2 * 2^-|sigma|` where
//! `gamma = 1/(e^{1/2} - 1)`; summing the weights over one length class gives
//! the zero-truncated Poisson(1/2) mass of that length, so the weights sum to
//! one over all patterns. The weighted squared-l2 and weighted supremum norms
//! below are the building blocks of every nonparametric statistic in this
//! crate.

use crate::count::FrequencyProfile;
use crate::error::{Error, Result};
use crate::perm::{factorial, Permutation};

pub const MAX_ENUMERATION_LEN: usize = 8;

fn factorial_f64(m: usize) -> f64 {
    (1..=m).fold(1.0, |acc, i| acc * i as f64)
}

/// Weights and norm evaluators of the pattern sequence space.
#[derive(Debug, Clone)]
pub struct PatternWeights {
    gamma: f64,
    by_len: Vec<f64>,
}

impl Default for PatternWeights {
    fn default() -> Self {
        Self::new()
    }
}

impl PatternWeights {
    pub fn new() -> Self {
        let gamma = 1.0 / (0.5f64.exp() - 1.0);
        let by_len = (0..=MAX_ENUMERATION_LEN)
            .map(|m| {
                if m == 0 {
                    0.0
                } else {
                    let mf = factorial(m).unwrap() as f64;
                    gamma / (mf * mf * 2f64.powi(m as i32))
                }
            })
            .collect();
        PatternWeights { gamma, by_len }
    }

    /// `gamma = e^{-1/2} (1 - e^{-1/2})^{-1}`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Weight shared by every pattern of length `m`.
    pub fn weight_for_len(&self, m: usize) -> f64 {
        if m <= MAX_ENUMERATION_LEN {
            self.by_len[m]
        } else {
            let mf = factorial_f64(m);
            self.gamma / (mf * mf * 2f64.powi(m as i32))
        }
    }

    pub fn weight(&self, sigma: &Permutation) -> f64 {
        self.weight_for_len(sigma.len())
    }

    /// Total weight of the length class `m` (zero-truncated Poisson(1/2)
    /// mass at `m`).
    pub fn level_weight(&self, m: usize) -> f64 {
        self.gamma / (factorial_f64(m) * 2f64.powi(m as i32))
    }

    /// Weighted squared-l2 statistic
    /// `n * sum_sigma p_sigma |sigma|^-2 diff(sigma)^2` over the truncated
    /// pattern set.
    pub fn cvm_norm_sq(&self, diff: &TruncatedVector, n: usize) -> f64 {
        let mut acc = 0.0;
        for m in 1..=diff.max_len() {
            let w = self.weight_for_len(m) / (m * m) as f64;
            let mut level = 0.0;
            for &d in diff.level(m) {
                level += d * d;
            }
            acc += w * level;
        }
        n as f64 * acc
    }

    /// Weighted supremum statistic
    /// `sqrt(n) * max_sigma p_sigma^{1/2} |sigma|^-1 |diff(sigma)|`.
    pub fn ks_norm(&self, diff: &TruncatedVector, n: usize) -> f64 {
        let mut best = 0.0f64;
        for m in 1..=diff.max_len() {
            let w = self.weight_for_len(m).sqrt() / m as f64;
            for &d in diff.level(m) {
                best = best.max(w * d.abs());
            }
        }
        (n as f64).sqrt() * best
    }
}

/// A real vector indexed by all patterns of length at most `max_len`,
/// complete over every length class (entries default to zero).
#[derive(Debug, Clone)]
pub struct TruncatedVector {
    max_len: usize,
    levels: Vec<Vec<f64>>,
}

impl TruncatedVector {
    pub fn zeros(max_len: usize) -> Result<Self> {
        if max_len == 0 || max_len > MAX_ENUMERATION_LEN {
            return Err(Error::Resource(format!(
                "truncation must lie in 1..={MAX_ENUMERATION_LEN}, got {max_len}"
            )));
        }
        let levels = (1..=max_len)
            .map(|m| vec![0.0; factorial(m).unwrap() as usize])
            .collect();
        Ok(TruncatedVector { max_len, levels })
    }

    /// Entrywise difference of two complete profiles over `𝕊≤max_len`.
    pub fn profile_difference(
        a: &FrequencyProfile,
        b: &FrequencyProfile,
        max_len: usize,
    ) -> Result<Self> {
        let mut v = Self::zeros(max_len)?;
        for m in 1..=max_len {
            for idx in 0..v.levels[m - 1].len() {
                v.levels[m - 1][idx] = a.frequency_at(m, idx) - b.frequency_at(m, idx);
            }
        }
        Ok(v)
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn level(&self, m: usize) -> &[f64] {
        &self.levels[m - 1]
    }

    pub fn get(&self, sigma: &Permutation) -> f64 {
        self.levels[sigma.len() - 1][sigma.lex_index()]
    }

    pub fn set(&mut self, sigma: &Permutation, value: f64) {
        self.levels[sigma.len() - 1][sigma.lex_index()] = value;
    }

    pub fn set_at(&mut self, m: usize, index: usize, value: f64) {
        self.levels[m - 1][index] = value;
    }
}

/// All patterns of length at most `k`, in lexicographic order within each
/// length class, lengths ascending.
pub fn enumerate_patterns(k: usize) -> Result<Vec<Permutation>> {
    if k == 0 || k > MAX_ENUMERATION_LEN {
        return Err(Error::Resource(format!(
            "pattern enumeration is limited to length {MAX_ENUMERATION_LEN}, requested {k}"
        )));
    }
    let mut out = Vec::new();
    for m in 1..=k {
        for idx in 0..factorial(m).unwrap() as usize {
            out.push(Permutation::from_lex_index(m, idx)?);
        }
    }
    Ok(out)
}
