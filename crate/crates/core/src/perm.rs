//! Permutations in one-line notation and rank reduction of bivariate data.
//!
//! A permutation of size `n` doubles as the rank plot of a tie-free bivariate
//! sample and as a pattern to be counted in larger permutations. Values are
//! stored 1-based, matching the usual one-line notation `(π(1),…,π(n))`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Coord, Error, Result};

/// A permutation of `{1,…,n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Build from one-line notation; validates that `values` is a bijection
    /// of `{1,…,n}` with `n ≥ 1`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} out of range 1..={n}"
                )));
            }
            if seen[v as usize - 1] {
                return Err(Error::InvalidPermutation(format!("value {v} repeats")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { values })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((1..=n as u32).collect())
    }

    /// Uniformly random permutation (Fisher–Yates).
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut values: Vec<u32> = (1..=n as u32).collect();
        values.shuffle(rng);
        Permutation { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// One-line notation, 1-based values.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Group inverse: `inverse()(v) = i` whenever `self(i) = v`.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.values.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Permutation { values: inv }
    }

    /// Rank of this permutation in the lexicographic order of its size class
    /// (equivalently its Lehmer code read in the factorial number system).
    pub fn lex_index(&self) -> usize {
        lehmer_index_by(self.values.len(), |i, j| self.values[i] > self.values[j])
    }

    /// Inverse of [`lex_index`]: the `index`-th permutation of size `m` in
    /// lexicographic order.
    pub fn from_lex_index(m: usize, index: usize) -> Result<Self> {
        let total = factorial(m)
            .ok_or_else(|| Error::Resource(format!("{m}! does not fit in u128")))?;
        if m == 0 || index as u128 >= total {
            return Err(Error::InvalidPermutation(format!(
                "lex index {index} out of range for size {m}"
            )));
        }
        let mut digits = vec![0usize; m];
        let mut rest = index;
        for i in (0..m).rev() {
            let base = m - i;
            digits[i] = rest % base;
            rest /= base;
        }
        let mut remaining: Vec<u32> = (1..=m as u32).collect();
        let values = digits
            .iter()
            .map(|&d| remaining.remove(d))
            .collect::<Vec<_>>();
        Ok(Permutation { values })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    /// Compact form: `541362` for sizes below ten, spaced otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.len() < 10 {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            write!(f, "{self}")
        }
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parse whitespace-separated 1-based values; `"231"` style compact
    /// notation is accepted for single-token digit strings.
    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        if tokens.len() == 1 && tokens[0].len() > 1 && tokens[0].chars().all(|c| c.is_ascii_digit())
        {
            let values: Vec<u32> = tokens[0]
                .chars()
                .map(|c| c.to_digit(10).unwrap())
                .collect();
            return Permutation::new(values);
        }
        let mut values = Vec::with_capacity(tokens.len());
        for t in tokens {
            let v: u32 = t
                .parse()
                .map_err(|_| Error::InvalidPermutation(format!("bad value {t:?}")))?;
            values.push(v);
        }
        Permutation::new(values)
    }
}

/// Lehmer code of a comparison-defined sequence, read as a lexicographic rank:
/// `Σ_i #{j > i : v_i > v_j} · (m−1−i)!`.
fn lehmer_index_by(m: usize, gt: impl Fn(usize, usize) -> bool) -> usize {
    let mut idx = 0usize;
    let mut weight = 1usize;
    // factorial weights built right to left
    let mut weights = vec![1usize; m];
    for i in (0..m.saturating_sub(1)).rev() {
        weight *= m - 1 - i;
        weights[i] = weight;
    }
    for i in 0..m {
        let mut c = 0usize;
        for j in i + 1..m {
            if gt(i, j) {
                c += 1;
            }
        }
        idx += c * weights[i];
    }
    idx
}

/// Lexicographic rank of the order-isomorphism type of a real sequence.
pub(crate) fn pattern_lex_index(values: &[f64]) -> usize {
    lehmer_index_by(values.len(), |i, j| values[i] > values[j])
}

pub(crate) fn factorial(m: usize) -> Option<u128> {
    let mut f: u128 = 1;
    for i in 2..=m as u128 {
        f = f.checked_mul(i)?;
    }
    Some(f)
}

fn argsort_strict(values: &[f64], coord: Coord) -> Result<Vec<usize>> {
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Data(format!(
                "non-finite value {v} at index {i} in the {coord} coordinate"
            )));
        }
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    for w in order.windows(2) {
        if values[w[0]] == values[w[1]] {
            let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::Ties {
                coord,
                first,
                second,
            });
        }
    }
    Ok(order)
}

/// The permutation connecting x-ranks to y-ranks of a tie-free sample:
/// sort the points by their x-coordinate and read off the ranks of the
/// y-coordinates.
pub fn rank_permutation(xs: &[f64], ys: &[f64]) -> Result<Permutation> {
    if xs.len() != ys.len() {
        return Err(Error::Data(format!(
            "coordinate lengths differ: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.is_empty() {
        return Err(Error::Size("need at least one observation".into()));
    }
    let order_x = argsort_strict(xs, Coord::X)?;
    let order_y = argsort_strict(ys, Coord::Y)?;
    let mut rank_y = vec![0u32; ys.len()];
    for (r, &i) in order_y.iter().enumerate() {
        rank_y[i] = r as u32 + 1;
    }
    let values = order_x.iter().map(|&i| rank_y[i]).collect();
    Ok(Permutation { values })
}

/// The unique permutation order-isomorphic to a sequence of distinct reals.
pub fn pattern_of(values: &[f64]) -> Result<Permutation> {
    if values.is_empty() {
        return Err(Error::Size("need at least one value".into()));
    }
    let order = argsort_strict(values, Coord::X)?;
    let mut ranks = vec![0u32; values.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = r as u32 + 1;
    }
    Ok(Permutation { values: ranks })
}
