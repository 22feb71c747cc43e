use super::{limit_criterion, pure_criterion, ContiguityReport, Criterion, CriterionSettings, StateSequence, Verdict};
use crate::error::{Error, Result};
use crate::lebesgue::DensityMatrix;
use crate::matcore::{pd_inverse, CMat, HermitianMatrix};
use crate::tolerance::ToleranceConfig;

/// The six blocks of a pair written over `H1 + H2 + H3`:
/// `rho = [[rho2, rho1, 0], [rho1*, rho0, 0], [0, 0, 0]]` and
/// `sigma = [[0, 0, 0], [0, sigma0, sigma1], [0, sigma1*, sigma2]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeBlocks {
    pub rho0: HermitianMatrix,
    pub rho1: CMat,
    pub rho2: HermitianMatrix,
    pub sigma0: HermitianMatrix,
    pub sigma1: CMat,
    pub sigma2: HermitianMatrix,
}

impl ThreeBlocks {
    /// Block sizes `(dim H1, dim H2, dim H3)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.rho2.dim(), self.rho0.dim(), self.sigma2.dim())
    }

    /// Reassembles `(rho, sigma)` as plain Hermitian operators.
    pub fn assemble(&self) -> (HermitianMatrix, HermitianMatrix) {
        let (a, b, c) = self.dims();
        let d = a + b + c;
        let mut rho = CMat::zeros(d, d);
        rho.view_mut((0, 0), (a, a)).copy_from(self.rho2.as_mat());
        rho.view_mut((0, a), (a, b)).copy_from(&self.rho1);
        rho.view_mut((a, 0), (b, a)).copy_from(&self.rho1.adjoint());
        rho.view_mut((a, a), (b, b)).copy_from(self.rho0.as_mat());
        let mut sigma = CMat::zeros(d, d);
        sigma.view_mut((a, a), (b, b)).copy_from(self.sigma0.as_mat());
        sigma.view_mut((a, a + b), (b, c)).copy_from(&self.sigma1);
        sigma.view_mut((a + b, a), (c, b)).copy_from(&self.sigma1.adjoint());
        sigma.view_mut((a + b, a + b), (c, c)).copy_from(self.sigma2.as_mat());
        (HermitianMatrix::from_hermitian_part(rho), HermitianMatrix::from_hermitian_part(sigma))
    }
}

/// How the normalized inner pair `(sigma0 / Tr sigma0, rho0 / Tr rho0)` is
/// judged.
#[derive(Debug, Clone)]
pub enum InnerCriterion {
    /// Limit criterion with the declared limits `(rho, sigma)` of the inner pair.
    Limit { rho: DensityMatrix, sigma: DensityMatrix },
    /// Pure-state criterion (the normalized `rho0` must be pure).
    Pure,
}

/// A sequence given through its blocks, optionally with the full states to
/// cross-check against.
pub struct BlockSequence<'a> {
    blocks: Box<dyn Fn(u64) -> Result<ThreeBlocks> + 'a>,
    states: Option<Box<dyn Fn(u64) -> Result<(DensityMatrix, DensityMatrix)> + 'a>>,
    pub grid: Vec<u64>,
    pub inner: InnerCriterion,
}

impl<'a> BlockSequence<'a> {
    pub fn new(blocks: impl Fn(u64) -> Result<ThreeBlocks> + 'a, grid: Vec<u64>, inner: InnerCriterion) -> Self {
        BlockSequence { blocks: Box::new(blocks), states: None, grid: super::normalize_grid(grid), inner }
    }

    /// Full states `(rho_n, sigma_n)` that the blocks must reassemble into.
    pub fn with_states(mut self, states: impl Fn(u64) -> Result<(DensityMatrix, DensityMatrix)> + 'a) -> Self {
        self.states = Some(Box::new(states));
        self
    }
}

fn perp_trace(b: &ThreeBlocks, tol: &ToleranceConfig) -> Option<f64> {
    let inv = pd_inverse(&b.sigma0, tol).ok()?;
    let schur = b.sigma2.as_mat() - b.sigma1.adjoint() * inv.as_mat() * &b.sigma1;
    Some((0..schur.nrows()).map(|i| schur[(i, i)].re).sum())
}

/// Checks the hypotheses of the block criterion: `liminf Tr rho0 > 0`,
/// `Tr sigma0 -> 1`, and contiguity of the normalized inner pair. When all
/// hold the verdict is `Contiguous`; otherwise it stays `Inconclusive`,
/// since the criterion is only sufficient.
pub fn block_criterion_diagnostics(seq: &BlockSequence, tol: &ToleranceConfig, settings: &CriterionSettings) -> Result<ContiguityReport> {
    let mut report = ContiguityReport::new(Criterion::Block);
    if seq.grid.is_empty() {
        report.notes.push("empty grid".into());
        return Ok(report);
    }
    let mut tr_rho0 = Vec::new();
    let mut trace_gap = Vec::new();
    for &n in &seq.grid {
        let b = (seq.blocks)(n)?;
        if let Some(states) = &seq.states {
            let (rho, sigma) = states(n)?;
            let (r, s) = b.assemble();
            if r.dim() != rho.dim() || s.dim() != sigma.dim() {
                return Err(Error::BlocksInconsistent { n, residual: f64::INFINITY });
            }
            let residual = rho.distance(&r).max(sigma.distance(&s));
            if residual > tol.eq_rel {
                return Err(Error::BlocksInconsistent { n, residual });
            }
        }
        let (t0, s0) = (b.rho0.trace(), b.sigma0.trace());
        report.push(n, "tr_rho0", t0);
        report.push(n, "tr_sigma0", s0);
        if let Some(p) = perp_trace(&b, tol) {
            report.push(n, "tr_sigma_perp", p);
        }
        tr_rho0.push(t0);
        trace_gap.push((1.0 - s0).abs());
    }

    let liminf_ok = settings.tail(&tr_rho0).iter().all(|&t| t >= settings.liminf_floor);
    let trace_ok = *trace_gap.last().unwrap() <= settings.trace_eps && settings.tail_nonincreasing(&trace_gap);
    if !liminf_ok {
        report.notes.push(format!("hypothesis failed: Tr rho0 falls below {:e} on the tail", settings.liminf_floor));
    }
    if !trace_ok {
        report.notes.push(format!("hypothesis failed: Tr sigma0 not within {:e} of 1 at horizon", settings.trace_eps));
    }

    let normalized = |n: u64| -> Result<(DensityMatrix, DensityMatrix)> {
        let b = (seq.blocks)(n)?;
        Ok((DensityMatrix::normalize(&b.rho0, tol)?, DensityMatrix::normalize(&b.sigma0, tol)?))
    };
    let inner = match &seq.inner {
        InnerCriterion::Limit { rho, sigma } => {
            let s = StateSequence::new(normalized, seq.grid.clone()).with_limits(rho.clone(), sigma.clone());
            limit_criterion(&s, tol, settings)?
        }
        InnerCriterion::Pure => pure_criterion(&StateSequence::new(normalized, seq.grid.clone()), tol, settings)?,
    };
    report.notes.push(format!("inner pair verdict: {:?} ({:?} criterion)", inner.verdict, inner.criterion));
    for note in &inner.notes {
        report.notes.push(format!("inner: {note}"));
    }
    if inner.verdict != Verdict::Contiguous {
        report.notes.push("hypothesis failed: inner pair not shown contiguous".into());
    }
    if liminf_ok && trace_ok && inner.verdict == Verdict::Contiguous {
        report.verdict = Verdict::Contiguous;
    }
    Ok(report)
}
