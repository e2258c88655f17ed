//! Copula models, samplers, and Monte Carlo pattern-probability estimators.
//!
//! Every sampler is a pure function of (model, n, seed). The permuton
//! components sample a uniformly chosen diagonal cell of the rescaled rank
//! plot and then a uniform point inside that cell, which realizes exactly the
//! piecewise-constant density of the discrete permuton.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::count::McEstimate;
use crate::error::{Error, Result};
use crate::fgm;
use crate::perm::{factorial, pattern_lex_index, rank_permutation, Permutation};
use crate::rng::stream_rng;

/// Quantile function of a delay distribution, defined on (0,1).
pub type QuantileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A two-dimensional copula model.
#[derive(Clone)]
pub enum CopulaModel {
    /// Product copula; coordinates independent.
    Independence,
    /// Farlie–Gumbel–Morgenstern family, parameter in [-1, 1].
    Fgm(f64),
    /// Clayton family, parameter in [-1, inf) excluding 0.
    Clayton(f64),
    /// Delay copula with exponential delays of the given rate.
    DelayExp(f64),
    /// Delay copula with a general delay distribution, given by its quantile
    /// function.
    Delay(QuantileFn),
    /// Finite mixture of discrete permutons, weights summing to one.
    PermutonMixture(Vec<(Permutation, f64)>),
}

impl fmt::Debug for CopulaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec_string())
    }
}

impl CopulaModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            CopulaModel::Independence => Ok(()),
            CopulaModel::Fgm(theta) => {
                if !theta.is_finite() || !(-1.0..=1.0).contains(theta) {
                    Err(Error::Parameter(format!(
                        "FGM parameter must lie in [-1, 1], got {theta}"
                    )))
                } else {
                    Ok(())
                }
            }
            CopulaModel::Clayton(kappa) => {
                if !kappa.is_finite() || *kappa < -1.0 || *kappa == 0.0 {
                    Err(Error::Parameter(format!(
                        "Clayton parameter must lie in [-1, inf) and be nonzero, got {kappa}"
                    )))
                } else {
                    Ok(())
                }
            }
            CopulaModel::DelayExp(theta) => {
                if !theta.is_finite() || *theta <= 0.0 {
                    Err(Error::Parameter(format!(
                        "exponential delay rate must be positive, got {theta}"
                    )))
                } else {
                    Ok(())
                }
            }
            CopulaModel::Delay(_) => Ok(()),
            CopulaModel::PermutonMixture(components) => {
                if components.is_empty() {
                    return Err(Error::Parameter("permuton mixture needs components".into()));
                }
                let mut total = 0.0;
                for (_, w) in components {
                    if !w.is_finite() || *w < 0.0 {
                        return Err(Error::Parameter(format!(
                            "mixture weights must be nonnegative, got {w}"
                        )));
                    }
                    total += w;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Parameter(format!(
                        "mixture weights must sum to 1, got {total}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Parse the model mini-language: `indep`, `fgm:T`, `clayton:K`,
    /// `delay-exp:T`, `permuton:FILE` (one `weight v1 v2 …` line per
    /// component).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let model = if spec == "indep" || spec == "independence" {
            CopulaModel::Independence
        } else if let Some(arg) = spec.strip_prefix("fgm:") {
            CopulaModel::Fgm(parse_param(arg, "fgm")?)
        } else if let Some(arg) = spec.strip_prefix("clayton:") {
            CopulaModel::Clayton(parse_param(arg, "clayton")?)
        } else if let Some(arg) = spec.strip_prefix("delay-exp:") {
            CopulaModel::DelayExp(parse_param(arg, "delay-exp")?)
        } else if let Some(path) = spec.strip_prefix("permuton:") {
            Self::permuton_from_file(Path::new(path))?
        } else {
            return Err(Error::Parameter(format!("unknown model spec {spec:?}")));
        };
        model.validate()?;
        Ok(model)
    }

    fn permuton_from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut components = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let w: f64 = parts
                .next()
                .unwrap()
                .parse()
                .map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: "expected a weight".into(),
                })?;
            let values: Vec<u32> = parts
                .map(|t| {
                    t.parse::<u32>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad permutation value {t:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            let perm = Permutation::new(values).map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
            components.push((perm, w));
        }
        Ok(CopulaModel::PermutonMixture(components))
    }

    /// Round-trippable textual form (mixtures are described, not serialized).
    pub fn spec_string(&self) -> String {
        match self {
            CopulaModel::Independence => "indep".into(),
            CopulaModel::Fgm(t) => format!("fgm:{t}"),
            CopulaModel::Clayton(k) => format!("clayton:{k}"),
            CopulaModel::DelayExp(t) => format!("delay-exp:{t}"),
            CopulaModel::Delay(_) => "delay:<quantile fn>".into(),
            CopulaModel::PermutonMixture(c) => {
                format!("permuton-mixture[{} components]", c.len())
            }
        }
    }
}

fn parse_param(arg: &str, name: &str) -> Result<f64> {
    arg.parse()
        .map_err(|_| Error::Parameter(format!("bad {name} parameter {arg:?}")))
}

/// An i.i.d. bivariate sample together with its induced rank permutation.
#[derive(Debug, Clone)]
pub struct BivariateSample {
    /// Raw points: (u, v) on the unit square, or (x, x + d) for delay models.
    pub points: Vec<(f64, f64)>,
    pub permutation: Permutation,
}

/// Invert the FGM conditional distribution `w = v + a v(1-v)`,
/// `a = theta (1 - 2u)`, using the cancellation-free root
/// `v = 2w / (1 + a + sqrt((1+a)^2 - 4aw))`.
fn fgm_conditional_inverse(theta: f64, u: f64, w: f64) -> f64 {
    let a = theta * (1.0 - 2.0 * u);
    if a.abs() < 1e-12 {
        return w;
    }
    let b = 1.0 + a;
    let disc = (b * b - 4.0 * a * w).max(0.0);
    2.0 * w / (b + disc.sqrt())
}

/// Invert the Clayton conditional distribution. The formula's natural range
/// covers the boundary region of negative parameters; the countermonotone
/// limit `kappa = -1` degenerates to `v = 1 - u`.
fn clayton_conditional_inverse(kappa: f64, u: f64, w: f64) -> f64 {
    if kappa == -1.0 {
        return 1.0 - u;
    }
    let t = w.powf(-kappa / (1.0 + kappa)) - 1.0;
    let base = t * u.powf(-kappa) + 1.0;
    base.powf(-1.0 / kappa)
}

/// Uniform draw from (0, 1]; the lower endpoint is excluded so cell
/// assignments under the permuton samplers stay exact.
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    (1.0 - rng.random::<f64>()).max(1e-12)
}

fn sample_point(model: &CopulaModel, rng: &mut ChaCha8Rng) -> (f64, f64) {
    match model {
        CopulaModel::Independence => (rng.random(), rng.random()),
        CopulaModel::Fgm(theta) => {
            let u: f64 = rng.random();
            let w: f64 = rng.random();
            (u, fgm_conditional_inverse(*theta, u, w))
        }
        CopulaModel::Clayton(kappa) => {
            let u = open_unit(rng);
            let w = open_unit(rng);
            (u, clayton_conditional_inverse(*kappa, u, w))
        }
        CopulaModel::DelayExp(theta) => {
            let x: f64 = rng.random();
            let d = -open_unit(rng).ln() / theta;
            (x, x + d)
        }
        CopulaModel::Delay(quantile) => {
            let x: f64 = rng.random();
            let w = open_unit(rng).min(1.0 - 1e-12);
            (x, x + quantile(w))
        }
        CopulaModel::PermutonMixture(components) => {
            let mut pick: f64 = rng.random();
            let mut chosen = &components[components.len() - 1].0;
            for (perm, w) in components {
                if pick < *w {
                    chosen = perm;
                    break;
                }
                pick -= w;
            }
            let s = chosen.len();
            let cell = rng.random_range(0..s);
            let u = (cell as f64 + open_unit(rng)) / s as f64;
            let v = ((chosen.values()[cell] - 1) as f64 + open_unit(rng)) / s as f64;
            (u, v)
        }
    }
}

/// Draw `n` i.i.d. points from the model and reduce them to ranks.
pub fn sample_with_rng(
    model: &CopulaModel,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<BivariateSample> {
    model.validate()?;
    if n == 0 {
        return Err(Error::Size("sample size must be at least 1".into()));
    }
    // ties between sampled coordinates have probability zero; the redraw
    // guard only exists for floating-point collisions
    for _ in 0..64 {
        let points: Vec<(f64, f64)> = (0..n).map(|_| sample_point(model, rng)).collect();
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        match rank_permutation(&xs, &ys) {
            Ok(permutation) => {
                return Ok(BivariateSample {
                    points,
                    permutation,
                })
            }
            Err(Error::Ties { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Data(
        "could not draw a tie-free sample after 64 attempts".into(),
    ))
}

/// Seeded variant of [`sample_with_rng`].
pub fn sample(model: &CopulaModel, n: usize, seed: u64) -> Result<BivariateSample> {
    let mut rng = stream_rng(seed, &[0x53414d50]);
    sample_with_rng(model, n, &mut rng)
}

/// Closed-form probability that a size-`|sigma|` sample from the model
/// induces the pattern `sigma`; `None` where no closed form is implemented.
pub fn pattern_prob_closed(model: &CopulaModel, sigma: &Permutation) -> Option<f64> {
    let m = sigma.len();
    if m == 1 {
        return Some(1.0);
    }
    match model {
        CopulaModel::Independence => Some(1.0 / factorial(m).unwrap() as f64),
        CopulaModel::Fgm(theta) => match m {
            2 => {
                let asc = fgm::pair_prob_ascending(*theta);
                if sigma.values() == [1, 2] {
                    Some(asc)
                } else {
                    Some(1.0 - asc)
                }
            }
            3 => Some(fgm::triple_pattern_probs(*theta).ok()?[sigma.lex_index()]),
            _ => None,
        },
        CopulaModel::DelayExp(theta) => match m {
            2 => {
                let inv = crate::delay::inversion_prob(*theta).ok()?;
                if sigma.values() == [2, 1] {
                    Some(inv)
                } else {
                    Some(1.0 - inv)
                }
            }
            _ => None,
        },
        _ => None,
    }
}

/// Monte Carlo estimate of the probability that a size-`|sigma|` sample from
/// the model induces the pattern `sigma`.
pub fn pattern_prob_mc(
    model: &CopulaModel,
    sigma: &Permutation,
    reps: u64,
    seed: u64,
) -> Result<McEstimate> {
    if reps == 0 {
        return Err(Error::Parameter("need at least one replicate".into()));
    }
    model.validate()?;
    let k = sigma.len();
    let mut rng = stream_rng(seed, &[0x43531]);
    let mut hits = 0u64;
    for _ in 0..reps {
        let s = sample_with_rng(model, k, &mut rng)?;
        if s.permutation == *sigma {
            hits += 1;
        }
    }
    Ok(McEstimate::from_hits(hits, reps))
}

fn prefix_pattern_index(points: &[(f64, f64)], m: usize, scratch: &mut Vec<f64>) -> usize {
    // rank permutation of the first m points: order by x (insertion sort,
    // m is tiny), read the y-values, Lehmer-index them
    let mut order = [0usize; 8];
    for (i, slot) in order.iter_mut().enumerate().take(m) {
        *slot = i;
    }
    for i in 1..m {
        let mut j = i;
        while j > 0 && points[order[j]].0 < points[order[j - 1]].0 {
            order.swap(j, j - 1);
            j -= 1;
        }
    }
    scratch.clear();
    for &i in order.iter().take(m) {
        scratch.push(points[i].1);
    }
    pattern_lex_index(scratch)
}

/// Joint Monte Carlo estimate of the probability that two size-limited
/// samples sharing exactly their first point induce the patterns `sigma` and
/// `tau`.
pub fn joint_pattern_prob_mc(
    model: &CopulaModel,
    sigma: &Permutation,
    tau: &Permutation,
    reps: u64,
    seed: u64,
) -> Result<McEstimate> {
    if reps == 0 {
        return Err(Error::Parameter("need at least one replicate".into()));
    }
    model.validate()?;
    let k = sigma.len();
    let j = tau.len();
    let sigma_idx = sigma.lex_index();
    let tau_idx = tau.lex_index();
    let mut rng = stream_rng(seed, &[0x43532]);
    let mut hits = 0u64;
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut scratch = Vec::new();
    for _ in 0..reps {
        first.clear();
        second.clear();
        let shared = sample_point(model, &mut rng);
        first.push(shared);
        for _ in 1..k {
            first.push(sample_point(model, &mut rng));
        }
        second.push(shared);
        for _ in 1..j {
            second.push(sample_point(model, &mut rng));
        }
        let a = prefix_pattern_index(&first, k, &mut scratch) == sigma_idx;
        let b = prefix_pattern_index(&second, j, &mut scratch) == tau_idx;
        if a && b {
            hits += 1;
        }
    }
    Ok(McEstimate::from_hits(hits, reps))
}

/// Monte Carlo estimate of the pattern covariance
/// `joint(sigma, tau) - prob(sigma) * prob(tau)`, the covariance kernel of
/// the limiting Gaussian pattern process. Closed forms replace the marginal
/// estimates where available; standard errors are propagated.
pub fn pattern_cov_mc(
    model: &CopulaModel,
    sigma: &Permutation,
    tau: &Permutation,
    reps: u64,
    seed: u64,
) -> Result<McEstimate> {
    let joint = joint_pattern_prob_mc(model, sigma, tau, reps, seed)?;
    let (ps, se_s) = match pattern_prob_closed(model, sigma) {
        Some(p) => (p, 0.0),
        None => {
            let e = pattern_prob_mc(model, sigma, reps, seed ^ 0x5551)?;
            (e.value, e.std_error)
        }
    };
    let (pt, se_t) = match pattern_prob_closed(model, tau) {
        Some(p) => (p, 0.0),
        None => {
            let e = pattern_prob_mc(model, tau, reps, seed ^ 0x5552)?;
            (e.value, e.std_error)
        }
    };
    let value = joint.value - ps * pt;
    let var = joint.std_error.powi(2)
        + (pt * se_s).powi(2)
        + (ps * se_t).powi(2);
    Ok(McEstimate {
        value,
        std_error: var.sqrt(),
        samples: reps,
    })
}

/// Dense joint pattern-probability estimates over all pattern pairs of
/// lengths up to `k`, from one Monte Carlo pass with shared first points.
#[derive(Debug, Clone)]
pub struct JointPatternMatrix {
    max_len: usize,
    reps: u64,
    offsets: Vec<usize>,
    dim: usize,
    joint_counts: Vec<u64>,
}

impl JointPatternMatrix {
    pub fn estimate(model: &CopulaModel, k: usize, reps: u64, seed: u64) -> Result<Self> {
        if reps == 0 {
            return Err(Error::Parameter("need at least one replicate".into()));
        }
        if k == 0 || k > 6 {
            return Err(Error::Resource(format!(
                "joint pattern matrices are limited to k <= 6, got {k}"
            )));
        }
        model.validate()?;
        let mut offsets = vec![0usize; k + 1];
        for m in 1..=k {
            offsets[m] = offsets[m - 1] + factorial(m).unwrap() as usize;
        }
        let dim = offsets[k];
        let mut joint_counts = vec![0u64; dim * dim];
        let mut rng = stream_rng(seed, &[0x43533]);
        let mut first = Vec::with_capacity(k);
        let mut second = Vec::with_capacity(k);
        let mut scratch = Vec::new();
        let mut idx_a = vec![0usize; k + 1];
        let mut idx_b = vec![0usize; k + 1];
        for _ in 0..reps {
            let shared = sample_point(model, &mut rng);
            first.clear();
            second.clear();
            first.push(shared);
            second.push(shared);
            for _ in 1..k {
                first.push(sample_point(model, &mut rng));
                second.push(sample_point(model, &mut rng));
            }
            for m in 1..=k {
                idx_a[m] = offsets[m - 1] + prefix_pattern_index(&first, m, &mut scratch);
                idx_b[m] = offsets[m - 1] + prefix_pattern_index(&second, m, &mut scratch);
            }
            for m in 1..=k {
                for j in 1..=k {
                    joint_counts[idx_a[m] * dim + idx_b[j]] += 1;
                }
            }
        }
        Ok(JointPatternMatrix {
            max_len: k,
            reps,
            offsets,
            dim,
            joint_counts,
        })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flat_index(&self, sigma: &Permutation) -> usize {
        self.offsets[sigma.len() - 1] + sigma.lex_index()
    }

    /// Symmetrized joint probability estimate.
    pub fn joint(&self, a: usize, b: usize) -> f64 {
        let r = self.reps as f64;
        0.5 * (self.joint_counts[a * self.dim + b] + self.joint_counts[b * self.dim + a]) as f64
            / r
    }

    /// Marginal pattern-probability estimate: the symmetrized joint with
    /// the length-1 pattern, which is certain, so covariances against the
    /// trivial pattern vanish identically.
    pub fn marginal(&self, a: usize) -> f64 {
        self.joint(a, 0)
    }

    /// Estimated covariance kernel entry.
    pub fn covariance(&self, a: usize, b: usize) -> f64 {
        self.joint(a, b) - self.marginal(a) * self.marginal(b)
    }
}
