//! Persisted Monte Carlo null-quantile tables.
//!
//! Flat-file format: a single header line
//! `n=<n> k=<k> flavor=<cvm|ks> reps=<reps> seed=<seed> model=<spec>`
//! followed by one replicate value per line, printed with 17 significant
//! digits so values round-trip bit-exactly.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::nptest::Flavor;
use crate::result::{mc_p_value, mc_upper_critical};

#[derive(Debug, Clone)]
pub struct NullQuantileTable {
    pub model: String,
    pub n: usize,
    pub k: usize,
    pub flavor: Flavor,
    pub reps: u64,
    pub seed: u64,
    values: Vec<f64>,
}

impl NullQuantileTable {
    pub fn new(
        model: String,
        n: usize,
        k: usize,
        flavor: Flavor,
        reps: u64,
        seed: u64,
        mut values: Vec<f64>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parameter("a quantile table needs replicates".into()));
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(NullQuantileTable {
            model,
            n,
            k,
            flavor,
            reps,
            seed,
            values,
        })
    }

    /// Replicate values, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Upper-`alpha` Monte Carlo critical value.
    pub fn upper_quantile(&self, alpha: f64) -> f64 {
        mc_upper_critical(&self.values, alpha)
    }

    /// Monte Carlo p-value of an observed statistic.
    pub fn p_value(&self, statistic: f64) -> f64 {
        mc_p_value(&self.values, statistic)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(
            out,
            "n={} k={} flavor={} reps={} seed={} model={}",
            self.n, self.k, self.flavor, self.reps, self.seed, self.model
        )?;
        for v in &self.values {
            writeln!(out, "{v:.16e}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty quantile table".into(),
        })?;
        let mut n = None;
        let mut k = None;
        let mut flavor = None;
        let mut reps = None;
        let mut seed = None;
        let mut model = None;
        for field in header.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("bad header field {field:?}"),
            })?;
            match key {
                "n" => n = Some(parse_field(value, "n")?),
                "k" => k = Some(parse_field(value, "k")?),
                "reps" => reps = Some(parse_field(value, "reps")?),
                "seed" => seed = Some(parse_field(value, "seed")?),
                "flavor" => flavor = Some(value.parse::<Flavor>()?),
                "model" => {
                    // the model spec is the final field and may not contain
                    // spaces in persisted tables
                    model = Some(value.to_string());
                }
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("unknown header key {other:?}"),
                    })
                }
            }
        }
        let mut values = Vec::new();
        for (lineno, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad replicate value {line:?}"),
            })?;
            values.push(v);
        }
        NullQuantileTable::new(
            model.ok_or_else(|| missing("model"))?,
            n.ok_or_else(|| missing("n"))?,
            k.ok_or_else(|| missing("k"))?,
            flavor.ok_or_else(|| missing("flavor"))?,
            reps.ok_or_else(|| missing("reps"))?,
            seed.ok_or_else(|| missing("seed"))?,
            values,
        )
    }
}

fn parse_field<T: std::str::FromStr>(value: &str, key: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line: 1,
        msg: format!("bad value {value:?} for header key {key}"),
    })
}

fn missing(key: &str) -> Error {
    Error::Parse {
        line: 1,
        msg: format!("missing header key {key}"),
    }
}
