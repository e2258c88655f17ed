//! Pattern-based statistical inference for two-dimensional copulas.
//!
//! A tie-free bivariate sample induces a rank permutation, and the relative
//! frequencies of small patterns in that permutation estimate the pattern
//! probabilities of the underlying copula. This crate provides
//!
//! - exact and Monte Carlo pattern-frequency computation ([`count`]),
//! - samplers for the copula families used throughout, including discrete
//!   permutons and their mixtures ([`copula`]),
//! - the weighted pattern sequence space with its squared-l2 and supremum
//!   norms ([`space`]),
//! - goodness-of-fit, two-sample, and symmetry tests with Monte Carlo and
//!   permuton-bootstrap critical values, plus reference independence
//!   statistics and a power-study runner ([`nptest`], [`power`]),
//! - linear triple-pattern rank tests for the Farlie-Gumbel-Morgenstern
//!   family with slope and efficiency computations ([`fgm`]),
//! - the inversion-count test for exponential-delay copulas with its
//!   Pitman/Bahadur efficiency against the mean-delay test ([`delay`]).
//!
//! Everything stochastic takes an explicit 64-bit seed and derives one
//! stream per replicate, so results are reproducible and independent of
//! thread scheduling.

pub mod copula;
pub mod count;
pub mod delay;
pub mod error;
pub mod fgm;
pub mod nptest;
pub mod perm;
pub mod power;
pub mod result;
pub mod rng;
pub mod space;
pub mod special;

pub use copula::{BivariateSample, CopulaModel};
pub use count::{
    count_exact, count_inversions, count_monte_carlo, profile, FrequencyProfile, McEstimate,
    PatternCount, ProfileMode, SubsetSamplerPlan,
};
pub use error::{Error, Result};
pub use perm::{pattern_of, rank_permutation, Permutation};
pub use result::{TestConfig, TestResult};
pub use space::{enumerate_patterns, PatternWeights, TruncatedVector};
