use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming a tolerance profile.
pub const PROFILE_ENV: &str = "QLEB_TOL_PROFILE";

/// Numerical tolerances shared by every module.
///
/// `rank_rel` decides which eigenvalues count as zero: an eigenvalue is
/// treated as kernel when it does not exceed `rank_rel * lambda_max`.
/// `psd_floor` is the (relative) amount of negativity that is forgiven
/// and clamped before an operator is rejected as not positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub hermitian: f64,
    pub psd_floor: f64,
    pub rank_rel: f64,
    pub trace: f64,
    pub recon: f64,
    pub ortho: f64,
    pub eq_rel: f64,
    pub fd_step: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            hermitian: 1e-10,
            psd_floor: 1e-10,
            rank_rel: 1e-9,
            trace: 1e-10,
            recon: 1e-12,
            ortho: 1e-12,
            eq_rel: 1e-8,
            fd_step: 1e-5,
        }
    }
}

impl ToleranceConfig {
    /// Named profiles: `default`, `strict`, `loose` and `graded`.
    ///
    /// `graded` keeps eigenvalues down to `1e-30 * lambda_max`. It is meant
    /// for faithful states whose spectrum spans many orders of magnitude,
    /// where the default cutoff would declare a genuine eigenvalue zero.
    pub fn profile(name: &str) -> Result<Self> {
        let base = ToleranceConfig::default();
        match name {
            "default" => Ok(base),
            "strict" => Ok(ToleranceConfig { eq_rel: 1e-10, rank_rel: 1e-11, psd_floor: 1e-12, ..base }),
            "loose" => Ok(ToleranceConfig { eq_rel: 1e-6, rank_rel: 1e-7, psd_floor: 1e-8, hermitian: 1e-8, trace: 1e-8, ..base }),
            "graded" => Ok(ToleranceConfig { rank_rel: 1e-30, psd_floor: 1e-14, ..base }),
            other => Err(Error::Invalid(format!("unknown tolerance profile `{other}`"))),
        }
    }

    /// Profile selected by `QLEB_TOL_PROFILE`, or the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(PROFILE_ENV) {
            Ok(name) if !name.is_empty() => Self::profile(&name),
            _ => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("hermitian", self.hermitian),
            ("psd_floor", self.psd_floor),
            ("rank_rel", self.rank_rel),
            ("trace", self.trace),
            ("recon", self.recon),
            ("ortho", self.ortho),
            ("eq_rel", self.eq_rel),
            ("fd_step", self.fd_step),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Invalid(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        if self.rank_rel >= 1.0 {
            return Err(Error::Invalid(format!("tolerance rank_rel must be below 1, got {}", self.rank_rel)));
        }
        Ok(())
    }
}
