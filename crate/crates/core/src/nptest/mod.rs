//! Nonparametric goodness-of-fit, two-sample, and symmetry tests built on
//! weighted pattern-frequency discrepancies, with Monte Carlo null quantiles
//! and the permuton-mixture bootstrap, plus the comparison statistics used
//! in the independence-testing study.

mod gof;
mod indep;
mod spectrum;
mod symmetry;
mod table;
mod twosample;

pub use gof::{gof_statistic, gof_statistic_with_table, gof_test, gof_test_with_table, null_quantiles, CsTable};
pub use indep::{bdy_statistic, hbkr_statistic, star_statistic};
pub(crate) use indep::{bdy_from_profile as bdy_profile_statistic, star_from_profile as star_profile_statistic};
pub use spectrum::{limit_spectrum, LimitSpectrum};
pub use symmetry::{symmetry_statistic, symmetry_test};
pub use table::NullQuantileTable;
pub use twosample::{bootstrap_mixture, two_sample_statistic, two_sample_test};

use serde::Serialize;

use crate::error::{Error, Result};

/// Test-statistic flavor: weighted squared-l2 or weighted supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Cvm,
    Ks,
}

impl Flavor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flavor::Cvm => "cvm",
            Flavor::Ks => "ks",
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cvm" => Ok(Flavor::Cvm),
            "ks" => Ok(Flavor::Ks),
            other => Err(Error::Parameter(format!(
                "unknown flavor {other:?}, expected cvm or ks"
            ))),
        }
    }
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Default truncation for goodness-of-fit tests.
pub const DEFAULT_GOF_TRUNCATION: usize = 4;
/// Default truncation for the bootstrap-calibrated two-sample and symmetry
/// tests, where each replicate costs two fresh profiles.
pub const DEFAULT_BOOTSTRAP_TRUNCATION: usize = 3;

pub(crate) fn check_level(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!(
            "level must lie in (0,1), got {alpha}"
        )));
    }
    Ok(())
}
