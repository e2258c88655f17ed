//! Spectrum of the limiting covariance operator of the weighted pattern
//! process under a null model, estimated by Monte Carlo.
//!
//! The operator matrix in the orthonormal pattern basis has entries
//! `sqrt(p_sigma p_tau) * cov(sigma, tau)` where `cov` is the covariance
//! kernel of the limiting Gaussian process (the shared-first-point pattern
//! covariance). Its eigenvalues drive the weighted chi-square series
//! representation of the limiting null distribution of the squared-l2
//! statistic; the eigenvalue sum equals the operator trace, which is the
//! limiting mean of that statistic.

use nalgebra::DMatrix;

use crate::copula::{CopulaModel, JointPatternMatrix};
use crate::error::{Error, Result};
use crate::perm::factorial;
use crate::space::PatternWeights;

#[derive(Debug, Clone)]
pub struct LimitSpectrum {
    /// Eigenvalues, nonincreasing, with Monte Carlo negatives clamped to
    /// zero.
    pub eigenvalues: Vec<f64>,
    /// Unclamped eigenvalues, nonincreasing; materially negative entries
    /// indicate too few replicates.
    pub raw_eigenvalues: Vec<f64>,
    /// Trace of the operator matrix (equals the raw eigenvalue sum).
    pub trace: f64,
}

impl LimitSpectrum {
    pub fn raw_min(&self) -> f64 {
        *self.raw_eigenvalues.last().unwrap()
    }
}

/// Estimate the covariance-operator spectrum over patterns of length at
/// most `k` from `reps` Monte Carlo replicates.
pub fn limit_spectrum(
    model: &CopulaModel,
    k: usize,
    reps: u64,
    seed: u64,
) -> Result<LimitSpectrum> {
    if k == 0 || k > 4 {
        return Err(Error::Resource(format!(
            "spectrum estimation is limited to k <= 4, got {k}"
        )));
    }
    let joint = JointPatternMatrix::estimate(model, k, reps, seed)?;
    let weights = PatternWeights::new();
    // lengths of the flattened pattern indices
    let mut len_of = Vec::with_capacity(joint.dim());
    for m in 1..=k {
        for _ in 0..factorial(m).unwrap() as usize {
            len_of.push(m);
        }
    }
    let dim = joint.dim();
    let matrix = DMatrix::from_fn(dim, dim, |a, b| {
        let w = (weights.weight_for_len(len_of[a]) * weights.weight_for_len(len_of[b])).sqrt();
        w * joint.covariance(a, b)
    });
    let trace = (0..dim).map(|i| matrix[(i, i)]).sum();
    let eig = matrix.symmetric_eigen();
    let mut raw: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    raw.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let eigenvalues = raw.iter().map(|v| v.max(0.0)).collect();
    Ok(LimitSpectrum {
        eigenvalues,
        raw_eigenvalues: raw,
        trace,
    })
}
