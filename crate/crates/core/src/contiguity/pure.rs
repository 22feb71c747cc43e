use serde::Serialize;

use super::{ContiguityReport, Criterion, CriterionSettings, StateSequence, Verdict};
use crate::error::{Error, Result};
use crate::lebesgue::{sqrt_likelihood_ratio, DensityMatrix};
use crate::matcore::{psd_spectrum, trace_inner};
use crate::tolerance::ToleranceConfig;

/// The two numbers the pure-state criterion looks at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairStats {
    /// `Tr(rho R^2)`, the mass of `sigma` seen by `rho`.
    pub tr_rho_r2: f64,
    /// `Tr(rho sigma)`.
    pub overlap: f64,
}

/// A sequence with a pure reference state that can report [`PairStats`].
pub trait PureFamily {
    fn grid(&self) -> &[u64];
    fn stats(&self, n: u64, tol: &ToleranceConfig) -> Result<PairStats>;
    /// Declared `lim Tr(rho_n sigma_n)`, if known.
    fn overlap_limit(&self) -> Option<f64>;
}

fn pair_stats(n: u64, rho: &DensityMatrix, sigma: &DensityMatrix, tol: &ToleranceConfig) -> Result<PairStats> {
    if psd_spectrum(rho, tol)?.rank(tol) != 1 {
        return Err(Error::NotPure { n });
    }
    let r = sqrt_likelihood_ratio(sigma, rho, tol)?;
    Ok(PairStats { tr_rho_r2: r.sandwich(rho).trace(), overlap: trace_inner(rho, sigma)?.re })
}

impl PureFamily for StateSequence<'_> {
    fn grid(&self) -> &[u64] {
        &self.grid
    }

    fn stats(&self, n: u64, tol: &ToleranceConfig) -> Result<PairStats> {
        let (rho, sigma) = self.eval(n)?;
        pair_stats(n, &rho, &sigma, tol)
    }

    fn overlap_limit(&self) -> Option<f64> {
        let (rho, sigma) = self.limits.as_ref()?;
        trace_inner(rho, sigma).ok().map(|z| z.re)
    }
}

/// `rho_n = rho(n)^{(x) n}` and `sigma_n = sigma(n)^{(x) n}` given by a
/// single-site pair. Statistics are computed on one site and raised to the
/// `n`-th power, which is exact for tensor powers.
pub struct TensorPowerSequence<'a> {
    site: Box<dyn Fn(u64) -> Result<(DensityMatrix, DensityMatrix)> + 'a>,
    pub grid: Vec<u64>,
    pub overlap_limit: Option<f64>,
}

impl<'a> TensorPowerSequence<'a> {
    /// `site(n)` returns the single-site `(rho, sigma)` used at sample size `n`.
    pub fn new(site: impl Fn(u64) -> Result<(DensityMatrix, DensityMatrix)> + 'a, grid: Vec<u64>) -> Self {
        TensorPowerSequence { site: Box::new(site), grid: super::normalize_grid(grid), overlap_limit: None }
    }

    pub fn with_overlap_limit(mut self, limit: f64) -> Self {
        self.overlap_limit = Some(limit);
        self
    }
}

fn power(x: f64, n: u64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (n as f64 * x.ln()).exp()
    }
}

impl PureFamily for TensorPowerSequence<'_> {
    fn grid(&self) -> &[u64] {
        &self.grid
    }

    fn stats(&self, n: u64, tol: &ToleranceConfig) -> Result<PairStats> {
        let (rho, sigma) = (self.site)(n)?;
        let s = pair_stats(n, &rho, &sigma, tol)?;
        Ok(PairStats { tr_rho_r2: power(s.tr_rho_r2, n), overlap: power(s.overlap, n) })
    }

    fn overlap_limit(&self) -> Option<f64> {
        self.overlap_limit
    }
}

/// Criterion for pure reference states: contiguity holds iff
/// `Tr(rho R^2) -> 1` and `liminf Tr(rho sigma) > 0`.
///
/// `Contiguous` needs `|1 - Tr(rho R^2)| <= eps1` at the horizon (backed by a
/// declared limit or a non-increasing tail) and overlaps `>= eps2` on the
/// whole grid. `NotContiguous` needs a declared overlap limit `<= eps2`
/// that the sampled tail does not contradict.
pub fn pure_criterion(family: &dyn PureFamily, tol: &ToleranceConfig, settings: &CriterionSettings) -> Result<ContiguityReport> {
    let mut report = ContiguityReport::new(Criterion::Pure);
    let grid = family.grid().to_vec();
    if grid.is_empty() {
        report.notes.push("empty grid".into());
        return Ok(report);
    }
    let mut defects = Vec::with_capacity(grid.len());
    let mut overlaps = Vec::with_capacity(grid.len());
    for &n in &grid {
        let s = family.stats(n, tol)?;
        report.push(n, "tr_rho_r2", s.tr_rho_r2);
        report.push(n, "overlap", s.overlap);
        defects.push((1.0 - s.tr_rho_r2).abs());
        overlaps.push(s.overlap);
    }
    let declared = family.overlap_limit();
    let last_defect = *defects.last().unwrap();
    let last_overlap = *overlaps.last().unwrap();
    let ratio_ok = last_defect <= settings.eps1 && (declared.is_some() || settings.tail_nonincreasing(&defects));
    let min_overlap = overlaps.iter().copied().fold(f64::INFINITY, f64::min);

    match declared {
        Some(l) if l <= settings.eps2 => {
            if last_overlap <= settings.eps2 || settings.tail_nonincreasing(&overlaps) {
                report.verdict = Verdict::NotContiguous;
                report.notes.push(format!("overlap tends to {l:e}"));
            } else {
                report.notes.push("declared vanishing overlap contradicted by increasing samples".into());
            }
        }
        _ => {
            if !ratio_ok {
                report.notes.push(format!("Tr(rho R^2) not within {:e} of 1 at horizon", settings.eps1));
            } else if min_overlap < settings.eps2 {
                report.notes.push(format!("overlap drops to {min_overlap:e} without a declared limit"));
            } else {
                report.verdict = Verdict::Contiguous;
                report.notes.push(format!("overlap stays above {min_overlap:e}"));
            }
        }
    }
    Ok(report)
}
