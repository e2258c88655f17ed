//! Reference independence-test statistics built on length-four patterns:
//! the Bergsma–Dassios–Yanagimoto statistic, a rank variant of the
//! Hoeffding–Blum–Kiefer–Rosenblatt statistic, and the unweighted
//! length-four-only discrepancy statistics.

use crate::count::FrequencyProfile;
use crate::error::{Error, Result};
use crate::nptest::Flavor;
use crate::perm::Permutation;

/// Lexicographic indices of the concordance class
/// {1234, 1243, 2134, 2143, 3412, 3421, 4312, 4321}.
fn concordant_indices() -> [usize; 8] {
    let patterns = ["1234", "1243", "2134", "2143", "3412", "3421", "4312", "4321"];
    let mut out = [0usize; 8];
    for (slot, s) in out.iter_mut().zip(patterns) {
        *slot = s.parse::<Permutation>().unwrap().lex_index();
    }
    out
}

pub(crate) fn bdy_from_profile(prof: &FrequencyProfile) -> f64 {
    let freqs: Vec<f64> = (0..24).map(|i| prof.frequency_at(4, i)).collect();
    let conc = concordant_indices();
    let in_class: f64 = conc.iter().map(|&i| freqs[i]).sum();
    let total: f64 = freqs.iter().sum();
    prof.source_size() as f64 * (2.0 / 3.0 * in_class - 1.0 / 3.0 * (total - in_class))
}

/// Bergsma–Dassios–Yanagimoto statistic
/// `n ((2/3) sum over the concordance class - (1/3) sum over the rest)` of
/// the length-four pattern frequencies.
pub fn bdy_statistic(pi: &Permutation) -> Result<f64> {
    if pi.len() < 4 {
        return Err(Error::Size(format!(
            "the BDY statistic needs n >= 4, got {}",
            pi.len()
        )));
    }
    let prof = crate::count::profile(pi, 4, crate::count::ProfileMode::Exact)?;
    Ok(bdy_from_profile(&prof))
}

/// Rank-based Hoeffding–Blum–Kiefer–Rosenblatt statistic:
/// `n^{-4} sum_j (m1(j) m4(j) - m2(j) m3(j))^2` with the four strict
/// quadrant counts around each point of the rank plot.
pub fn hbkr_statistic(pi: &Permutation) -> f64 {
    let n = pi.len();
    let values = pi.values();
    let mut acc = 0.0f64;
    for j in 0..n {
        let (xj, yj) = (j, values[j]);
        let mut m1 = 0i64; // x <, y <
        let mut m2 = 0i64; // x >, y <
        let mut m3 = 0i64; // x <, y >
        let mut m4 = 0i64; // x >, y >
        for (i, &yi) in values.iter().enumerate() {
            if i == j {
                continue;
            }
            match (i < xj, yi < yj) {
                (true, true) => m1 += 1,
                (false, true) => m2 += 1,
                (true, false) => m3 += 1,
                (false, false) => m4 += 1,
            }
        }
        let t = (m1 * m4 - m2 * m3) as f64;
        acc += t * t;
    }
    acc / (n as f64).powi(4)
}

pub(crate) fn star_from_profile(prof: &FrequencyProfile, flavor: Flavor) -> f64 {
    let n = prof.source_size() as f64;
    match flavor {
        Flavor::Cvm => {
            let mut acc = 0.0;
            for i in 0..24 {
                acc += (prof.frequency_at(4, i) - 1.0 / 24.0).powi(2);
            }
            n * acc
        }
        Flavor::Ks => {
            let mut best = 0.0f64;
            for i in 0..24 {
                best = best.max((prof.frequency_at(4, i) - 1.0 / 24.0).abs());
            }
            n.sqrt() * best
        }
    }
}

/// Unweighted length-four-only discrepancy from the uniform pattern law:
/// `n sum (T(sigma) - 1/24)^2` or `sqrt(n) max |T(sigma) - 1/24|`.
pub fn star_statistic(pi: &Permutation, flavor: Flavor) -> Result<f64> {
    if pi.len() < 4 {
        return Err(Error::Size(format!(
            "the length-four statistics need n >= 4, got {}",
            pi.len()
        )));
    }
    let prof = crate::count::profile(pi, 4, crate::count::ProfileMode::Exact)?;
    Ok(star_from_profile(&prof, flavor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    // transparent reimplementations used as oracles

    fn bdy_oracle(pi: &Permutation) -> f64 {
        let class: Vec<Permutation> = ["1234", "1243", "2134", "2143", "3412", "3421", "4312", "4321"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let mut in_class = 0.0;
        let mut out_class = 0.0;
        for idx in 0..24 {
            let sigma = Permutation::from_lex_index(4, idx).unwrap();
            let f = crate::count::count_exact(pi, &sigma).frequency();
            if class.contains(&sigma) {
                in_class += f;
            } else {
                out_class += f;
            }
        }
        pi.len() as f64 * (2.0 / 3.0 * in_class - 1.0 / 3.0 * out_class)
    }

    fn hbkr_oracle(pi: &Permutation) -> f64 {
        let n = pi.len() as i64;
        let v = pi.values();
        let point = |i: i64| (i + 1, v[i as usize] as i64);
        let mut acc = 0.0;
        for j in 0..n {
            let (xj, yj) = point(j);
            let count = |pred: &dyn Fn(i64, i64) -> bool| -> i64 {
                (0..n)
                    .map(point)
                    .filter(|&(x, y)| pred(x, y))
                    .count() as i64
            };
            let m1 = count(&|x, y| x < xj && y < yj);
            let m2 = count(&|x, y| x > xj && y < yj);
            let m3 = count(&|x, y| x < xj && y > yj);
            let m4 = count(&|x, y| x > xj && y > yj);
            acc += ((m1 * m4 - m2 * m3) as f64).powi(2);
        }
        acc / (n as f64).powi(4)
    }

    fn star_oracle(pi: &Permutation, flavor: Flavor) -> f64 {
        let n = pi.len() as f64;
        let devs: Vec<f64> = (0..24)
            .map(|idx| {
                let sigma = Permutation::from_lex_index(4, idx).unwrap();
                crate::count::count_exact(pi, &sigma).frequency() - 1.0 / 24.0
            })
            .collect();
        match flavor {
            Flavor::Cvm => n * devs.iter().map(|d| d * d).sum::<f64>(),
            Flavor::Ks => n.sqrt() * devs.iter().fold(0.0f64, |m, d| m.max(d.abs())),
        }
    }

    #[test]
    fn bdy_reference_values() {
        assert!((bdy_statistic(&p("1234")).unwrap() - 8.0 / 3.0).abs() < 1e-14);
        assert!((bdy_statistic(&p("4321")).unwrap() - 8.0 / 3.0).abs() < 1e-14);
        assert!(bdy_statistic(&p("321")).is_err());
    }

    #[test]
    fn hbkr_reference_values() {
        assert_eq!(hbkr_statistic(&p("1")), 0.0);
        assert_eq!(hbkr_statistic(&p("12")), 0.0);
        let pi = p("2413");
        assert!((hbkr_statistic(&pi) - hbkr_oracle(&pi)).abs() < 1e-15);
    }

    #[test]
    fn star_reference_values() {
        let cvm = star_statistic(&p("1234"), Flavor::Cvm).unwrap();
        assert!((cvm - 23.0 / 6.0).abs() < 1e-13);
        let ks = star_statistic(&p("1234"), Flavor::Ks).unwrap();
        assert!((ks - 2.0 * 23.0 / 24.0).abs() < 1e-14);
    }

    #[test]
    fn statistics_match_oracles_exhaustively_small() {
        // all permutations of sizes four through six
        for n in 4..=6usize {
            let total: usize = (1..=n).product();
            for idx in 0..total {
                let pi = Permutation::from_lex_index(n, idx).unwrap();
                assert!((bdy_statistic(&pi).unwrap() - bdy_oracle(&pi)).abs() < 1e-12);
                assert!((hbkr_statistic(&pi) - hbkr_oracle(&pi)).abs() < 1e-12);
                for flavor in [Flavor::Cvm, Flavor::Ks] {
                    assert!(
                        (star_statistic(&pi, flavor).unwrap() - star_oracle(&pi, flavor)).abs()
                            < 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn hbkr_larger_random_case() {
        let mut rng = stream_rng(3, &[80]);
        for _ in 0..5 {
            let pi = Permutation::random(30, &mut rng);
            assert!((hbkr_statistic(&pi) - hbkr_oracle(&pi)).abs() < 1e-12);
        }
    }
}
