//! Contiguity of sequences of state pairs.
//!
//! `sigma_n` is contiguous with respect to `rho_n` when the mass of
//! `sigma_n` that `rho_n` cannot see vanishes and the square-root
//! likelihood ratios have uniformly integrable squares, up to an
//! `L^2(rho_n)`-infinitesimal correction. Nothing here can prove an
//! asymptotic statement from finitely many samples, so every criterion
//! returns a [`ContiguityReport`] whose verdict is backed by a theorem
//! hypothesis that the samples confirm, and falls back to
//! [`Verdict::Inconclusive`] otherwise.

mod block;
mod dinf;
mod kakutani;
mod limit;
mod pure;

use serde::Serialize;

use crate::error::Result;
use crate::lebesgue::DensityMatrix;
use crate::matcore::{eig_hermitian, trace_inner, HermitianMatrix};

pub use block::{block_criterion_diagnostics, BlockSequence, InnerCriterion, ThreeBlocks};
pub use dinf::{d_infinitesimal_diagnostic, DiagnosticQuery};
pub use kakutani::{kakutani_criterion, ProductFamily, SeriesClass};
pub use limit::limit_criterion;
pub use pure::{pure_criterion, PairStats, PureFamily, TensorPowerSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Contiguous,
    NotContiguous,
    Inconclusive,
    DiagnosticsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Criterion {
    Limit,
    Pure,
    Kakutani,
    Block,
    DInfinitesimal,
}

/// One sampled statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub n: u64,
    pub statistic: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContiguityReport {
    pub verdict: Verdict,
    pub criterion: Criterion,
    pub evidence: Vec<Sample>,
    pub notes: Vec<String>,
}

impl ContiguityReport {
    fn new(criterion: Criterion) -> Self {
        ContiguityReport { verdict: Verdict::Inconclusive, criterion, evidence: Vec::new(), notes: Vec::new() }
    }

    fn push(&mut self, n: u64, statistic: &str, value: f64) {
        self.evidence.push(Sample { n, statistic: statistic.to_string(), value });
    }

    /// All samples of one statistic, in grid order.
    pub fn series(&self, statistic: &str) -> Vec<(u64, f64)> {
        self.evidence.iter().filter(|s| s.statistic == statistic).map(|s| (s.n, s.value)).collect()
    }

    /// Last sample of one statistic.
    pub fn last(&self, statistic: &str) -> Option<f64> {
        self.series(statistic).last().map(|&(_, v)| v)
    }
}

/// Thresholds used to turn finite samples into verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionSettings {
    /// Frobenius distance to a declared limit accepted at the horizon.
    pub limit_tol: f64,
    /// How close `Tr(rho R^2)` must be to 1 at the horizon.
    pub eps1: f64,
    /// Overlap floor below which `Tr(rho sigma)` counts as vanishing.
    pub eps2: f64,
    /// Fraction of the grid (taken from the end) used for trends.
    pub tail_fraction: f64,
    /// Relative slack allowed when checking a monotone trend.
    pub trend_eps: f64,
    /// Fitted decay exponents above `1 + margin` mean a convergent series.
    pub kakutani_margin: f64,
    /// Fitted decay exponents up to `1 + harmonic_slack` mean divergence.
    pub harmonic_slack: f64,
    /// Floor for a liminf that must stay positive.
    pub liminf_floor: f64,
    /// Accepted distance of a trace from its declared limit at the horizon.
    pub trace_eps: f64,
}

impl Default for CriterionSettings {
    fn default() -> Self {
        CriterionSettings {
            limit_tol: 1e-2,
            eps1: 1e-3,
            eps2: 1e-6,
            tail_fraction: 0.25,
            trend_eps: 1e-3,
            kakutani_margin: 0.15,
            harmonic_slack: 0.05,
            liminf_floor: 1e-3,
            trace_eps: 1e-2,
        }
    }
}

impl CriterionSettings {
    fn tail<'v, T>(&self, values: &'v [T]) -> &'v [T] {
        let k = ((values.len() as f64) * self.tail_fraction).ceil() as usize;
        let k = k.max(2).min(values.len());
        &values[values.len() - k..]
    }

    /// Whether the tail of `values` never rises by more than `trend_eps`
    /// (relative to the largest magnitude in the tail).
    fn tail_nonincreasing(&self, values: &[f64]) -> bool {
        let tail = self.tail(values);
        let scale = tail.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        tail.windows(2).all(|w| w[1] <= w[0] + self.trend_eps * scale)
    }
}

/// A sequence of pairs `(rho_n, sigma_n)` sampled on a grid of `n`.
pub struct StateSequence<'a> {
    eval: Box<dyn Fn(u64) -> Result<(DensityMatrix, DensityMatrix)> + 'a>,
    pub limits: Option<(DensityMatrix, DensityMatrix)>,
    pub grid: Vec<u64>,
}

impl<'a> StateSequence<'a> {
    /// `eval(n)` returns `(rho_n, sigma_n)`. The grid is sorted and deduplicated.
    pub fn new(eval: impl Fn(u64) -> Result<(DensityMatrix, DensityMatrix)> + 'a, grid: Vec<u64>) -> Self {
        StateSequence { eval: Box::new(eval), limits: None, grid: normalize_grid(grid) }
    }

    /// Declares `(rho_inf, sigma_inf)`.
    pub fn with_limits(mut self, rho: DensityMatrix, sigma: DensityMatrix) -> Self {
        self.limits = Some((rho, sigma));
        self
    }

    pub fn eval(&self, n: u64) -> Result<(DensityMatrix, DensityMatrix)> {
        (self.eval)(n)
    }

    pub fn horizon(&self) -> u64 {
        self.grid.last().copied().unwrap_or(0)
    }
}

fn normalize_grid(mut grid: Vec<u64>) -> Vec<u64> {
    grid.retain(|&n| n > 0);
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Roughly `per_decade` log-spaced integers from `lo` to `hi`, both included.
pub fn log_grid(lo: u64, hi: u64, per_decade: usize) -> Vec<u64> {
    let lo = lo.max(1);
    if hi <= lo {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).log10(), (hi as f64).log10());
    let steps = (((b - a) * per_decade as f64).ceil() as usize).max(1);
    let mut out: Vec<u64> = (0..=steps).map(|k| 10f64.powf(a + (b - a) * k as f64 / steps as f64).round() as u64).collect();
    out.push(hi);
    normalize_grid(out)
}

/// `Tr(rho R^2 (I - 1_M(R)))`: the mass of `R^2` carried by eigenvalues of
/// `R` above `m`.
pub fn tail_mass(rho: &HermitianMatrix, r: &HermitianMatrix, m: f64) -> Result<f64> {
    if rho.dim() != r.dim() {
        return Err(crate::Error::DimMismatch { expected: rho.dim(), found: r.dim() });
    }
    let spec = eig_hermitian(r);
    if spec.min_eigenvalue() < -1e-10 * spec.max_eigenvalue().abs().max(f64::MIN_POSITIVE) {
        return Err(crate::Error::NotPsd { min_eigenvalue: spec.min_eigenvalue() });
    }
    let mut acc = 0.0;
    for (k, &l) in spec.eigenvalues.iter().enumerate() {
        if l > m {
            let v = spec.eigenvectors.column(k);
            let weight = (v.adjoint() * rho.as_mat() * v)[(0, 0)].re;
            acc += l * l * weight;
        }
    }
    Ok(acc)
}

/// `||X||^2_{L^2(rho)} = Tr(rho X^2)`.
pub fn l2_norm_sq(rho: &HermitianMatrix, x: &HermitianMatrix) -> Result<f64> {
    let sq = HermitianMatrix::from_hermitian_part(x.as_mat() * x.as_mat());
    Ok(trace_inner(rho, &sq)?.re)
}
