//! Lebesgue decomposition of one state with respect to another, the
//! square-root likelihood ratio, and absolute-continuity predicates.
//!
//! For states `sigma` and `rho` on the same space, `sigma = ac + perp` where
//! `ac = R rho R` for a positive `R` and `perp` is orthogonal to `rho`. The
//! `R` returned here is the canonical one,
//! `R = sqrt(sigma) (sqrt(sqrt(sigma) rho sqrt(sigma)))^+ sqrt(sigma)`,
//! the only version that vanishes on the orthogonal complement of the
//! relevant supports.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::matcore::{
    eig_hermitian, geometric_mean, gram_spectrum, pd_inverse, psd_spectrum, trace_inner, CMat, HermitianMatrix,
    SpectralDecomposition, C64,
};
use crate::tolerance::ToleranceConfig;

/// A positive semidefinite operator of unit trace, or of trace at most one
/// when flagged as subnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianMatrix,
    subnormalized: bool,
}

impl DensityMatrix {
    pub fn new(op: HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        psd_spectrum(&op, tol)?;
        let tr = op.trace();
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::TraceMismatch { trace: tr });
        }
        Ok(DensityMatrix { op, subnormalized: false })
    }

    /// A nonzero positive operator with trace at most one.
    pub fn subnormalized(op: HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        psd_spectrum(&op, tol)?;
        let tr = op.trace();
        if tr <= 0.0 {
            return Err(Error::ZeroState);
        }
        if tr > 1.0 + tol.trace {
            return Err(Error::TraceMismatch { trace: tr });
        }
        Ok(DensityMatrix { op, subnormalized: true })
    }

    /// Divides a nonzero positive operator by its trace.
    pub fn normalize(op: &HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let tr = op.trace();
        if !(tr > 0.0) {
            return Err(Error::ZeroState);
        }
        Self::new(op.scale(1.0 / tr), tol)
    }

    /// Row-major real entries, validated with default tolerances.
    pub fn from_real(d: usize, entries: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real(d, entries)?, &ToleranceConfig::default())
    }

    /// `|v><v| / <v|v>`.
    pub fn pure(v: &[C64]) -> Result<Self> {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        let u: Vec<C64> = v.iter().map(|z| z / norm.sqrt()).collect();
        Self::new(HermitianMatrix::outer(&u), &ToleranceConfig::default())
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix { op: HermitianMatrix::identity(d).scale(1.0 / d as f64), subnormalized: false }
    }

    pub fn is_subnormalized(&self) -> bool {
        self.subnormalized
    }

    pub fn op(&self) -> &HermitianMatrix {
        &self.op
    }

    pub fn into_op(self) -> HermitianMatrix {
        self.op
    }
}

impl Deref for DensityMatrix {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.op
    }
}

impl AsRef<HermitianMatrix> for DensityMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        &self.op
    }
}

/// Orthonormal bases (as columns) of the three pieces of the space:
/// `h1` is the part of the support of `rho` that `sigma` does not reach,
/// `h2` the part where the excision of `sigma` is strictly positive,
/// and `h3` the kernel of `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSplit {
    pub h1: CMat,
    pub h2: CMat,
    pub h3: CMat,
}

impl SupportSplit {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.h1.ncols(), self.h2.ncols(), self.h3.ncols())
    }

    /// The unitary `[h1 | h2 | h3]`.
    pub fn basis(&self) -> CMat {
        let d = self.h1.nrows();
        let (a, b, c) = self.dims();
        let mut out = CMat::zeros(d, a + b + c);
        out.view_mut((0, 0), (d, a)).copy_from(&self.h1);
        out.view_mut((0, a), (d, b)).copy_from(&self.h2);
        out.view_mut((0, a + b), (d, c)).copy_from(&self.h3);
        out
    }
}

/// `sigma = ac + perp` with `ac = R rho R`.
#[derive(Debug, Clone, PartialEq)]
pub struct LebesgueDecomposition {
    pub ac: HermitianMatrix,
    pub perp: HermitianMatrix,
    pub sqrt_lr: HermitianMatrix,
    pub split: SupportSplit,
    pub singular: bool,
}

/// How well a decomposition satisfies its defining identities.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DecompositionResiduals {
    /// `||ac + perp - sigma||_F / ||sigma||_F`
    pub reconstruction: f64,
    /// `||R rho R - ac||_F / ||sigma||_F`
    pub ratio: f64,
    /// `Tr(rho perp)`
    pub orthogonality: f64,
    /// whether `ac` is absolutely continuous with respect to `rho`
    pub ac_dominated: bool,
}

impl LebesgueDecomposition {
    pub fn residuals(&self, sigma: &HermitianMatrix, rho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<DecompositionResiduals> {
        let scale = sigma.frobenius_norm().max(f64::MIN_POSITIVE);
        let reconstruction = (&self.ac + &self.perp).distance(sigma) / scale;
        let ratio = self.sqrt_lr.sandwich(rho).distance(&self.ac) / scale;
        let orthogonality = trace_inner(rho, &self.perp)?.re;
        let ac_dominated = self.ac.trace() <= tol.eq_rel * sigma.trace() || is_abs_continuous(&self.ac, rho, tol)?;
        Ok(DecompositionResiduals { reconstruction, ratio, orthogonality, ac_dominated })
    }

    /// Checks every identity against `tol.eq_rel`.
    pub fn verify(&self, sigma: &HermitianMatrix, rho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<bool> {
        let r = self.residuals(sigma, rho, tol)?;
        Ok(r.reconstruction <= tol.eq_rel
            && r.ratio <= tol.eq_rel
            && r.orthogonality.abs() <= tol.eq_rel * sigma.trace().max(rho.trace())
            && r.ac_dominated)
    }
}

// Spectra shared by the routines below.
struct Pair {
    sigma: SpectralDecomposition,
    rho: SpectralDecomposition,
    rho_supp: Vec<usize>,
}

fn check_dims(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

fn analyse(sigma: &HermitianMatrix, rho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<Pair> {
    check_dims(sigma, rho)?;
    let s = psd_spectrum(sigma, tol)?;
    let r = psd_spectrum(rho, tol)?;
    if s.max_eigenvalue() <= 0.0 || r.max_eigenvalue() <= 0.0 {
        return Err(Error::ZeroState);
    }
    let rho_supp = r.support(tol);
    Ok(Pair { sigma: s, rho: r, rho_supp })
}

fn singular_by_overlap(sigma: &HermitianMatrix, rho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<bool> {
    let overlap = trace_inner(sigma, rho)?.re;
    Ok(overlap <= tol.eq_rel * sigma.trace() * rho.trace())
}

// sqrt(rho) restricted to the numerical support, as a d x rank factor.
fn root_factor(spec: &SpectralDecomposition, idx: &[usize]) -> CMat {
    let mut f = spec.columns(idx);
    for (j, &k) in idx.iter().enumerate() {
        let w = spec.eigenvalues[k].sqrt();
        for v in f.column_mut(j).iter_mut() {
            *v *= w;
        }
    }
    f
}

fn canonical_ratio(p: &Pair, tol: &ToleranceConfig) -> HermitianMatrix {
    let d = p.sigma.dim();
    let s = p.sigma.apply_on_support(tol, f64::sqrt);
    let g = s.as_mat() * root_factor(&p.rho, &p.rho_supp);
    let gram = gram_spectrum(&g);
    let cut = tol.rank_rel * p.sigma.max_eigenvalue() * p.rho.max_eigenvalue();
    let keep: Vec<usize> = (0..gram.eigenvalues.len()).filter(|&k| gram.eigenvalues[k] > cut).collect();
    if keep.is_empty() {
        return HermitianMatrix::zeros(d);
    }
    let mut y = s.as_mat() * gram.columns(&keep);
    for (j, &k) in keep.iter().enumerate() {
        let w = gram.eigenvalues[k].powf(-0.25);
        for v in y.column_mut(j).iter_mut() {
            *v *= w;
        }
    }
    HermitianMatrix::from_hermitian_part(&y * y.adjoint())
}

/// Restriction of `sigma` to the support of `rho`, written in the
/// eigenbasis of `rho` (eigenvalues ascending).
pub fn excision(sigma: &HermitianMatrix, rho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let p = analyse(sigma, rho, tol)?;
    let w = p.rho.columns(&p.rho_supp);
    Ok(sigma.conjugate_by(&w.adjoint()))
}

/// True when the supports of `rho` and `sigma` are orthogonal, tested
/// through `Tr(rho sigma) <= eq_rel * Tr(rho) * Tr(sigma)`.
pub fn is_singular(rho: &HermitianMatrix, sigma: &HermitianMatrix, tol: &ToleranceConfig) -> Result<bool> {
    analyse(sigma, rho, tol)?;
    singular_by_overlap(sigma, rho, tol)
}

/// `a << b`: the excision of `b` onto the support of `a` is strictly positive.
///
/// Positivity is judged relative to the excision's own largest eigenvalue.
/// An excision whose largest eigenvalue is below `rank_rel * lambda_max(b)`
/// counts as zero.
pub fn is_abs_continuous(a: &HermitianMatrix, b: &HermitianMatrix, tol: &ToleranceConfig) -> Result<bool> {
    let p = analyse(b, a, tol)?;
    if singular_by_overlap(b, a, tol)? {
        return Ok(false);
    }
    let w = p.rho.columns(&p.rho_supp);
    let ex = eig_hermitian(&b.conjugate_by(&w.adjoint()));
    let top = ex.max_eigenvalue();
    if top <= tol.rank_rel * p.sigma.max_eigenvalue() {
        return Ok(false);
    }
    Ok(ex.min_eigenvalue() > tol.rank_rel * top)
}

pub fn is_mutually_ac(rho: &HermitianMatrix, sigma: &HermitianMatrix, tol: &ToleranceConfig) -> Result<bool> {
    Ok(is_abs_continuous(rho, sigma, tol)? && is_abs_continuous(sigma, rho, tol)?)
}

/// Canonical square-root likelihood ratio `R(sigma | rho)`.
pub fn sqrt_likelihood_ratio(sigma: &HermitianMatrix, rho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let p = analyse(sigma, rho, tol)?;
    if singular_by_overlap(sigma, rho, tol)? {
        return Ok(HermitianMatrix::zeros(sigma.dim()));
    }
    Ok(canonical_ratio(&p, tol))
}

/// Fidelity `Tr sqrt(sqrt(sigma) rho sqrt(sigma))`, which equals `Tr(rho R)`.
pub fn fidelity(sigma: &HermitianMatrix, rho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let p = analyse(sigma, rho, tol)?;
    let s = p.sigma.apply_on_support(tol, f64::sqrt);
    let g = s.as_mat() * root_factor(&p.rho, &p.rho_supp);
    Ok(gram_spectrum(&g).eigenvalues.iter().map(|l| l.sqrt()).sum())
}

/// Decomposes `sigma` with respect to `rho`.
pub fn lebesgue_decompose(sigma: &HermitianMatrix, rho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<LebesgueDecomposition> {
    let p = analyse(sigma, rho, tol)?;
    let d = sigma.dim();
    let kernel = p.rho.kernel(tol);
    let h3 = p.rho.columns(&kernel);
    let w = p.rho.columns(&p.rho_supp);
    if singular_by_overlap(sigma, rho, tol)? {
        return Ok(LebesgueDecomposition {
            ac: HermitianMatrix::zeros(d),
            perp: sigma.clone(),
            sqrt_lr: HermitianMatrix::zeros(d),
            split: SupportSplit { h1: w, h2: CMat::zeros(d, 0), h3 },
            singular: true,
        });
    }
    let ex = eig_hermitian(&sigma.conjugate_by(&w.adjoint()));
    let cut = tol.rank_rel * p.sigma.max_eigenvalue();
    let (lo, hi): (Vec<usize>, Vec<usize>) = (0..ex.eigenvalues.len()).partition(|&k| ex.eigenvalues[k] <= cut);
    let split = SupportSplit { h1: &w * ex.columns(&lo), h2: &w * ex.columns(&hi), h3 };

    let r = canonical_ratio(&p, tol);
    let rf = r.as_mat() * root_factor(&p.rho, &p.rho_supp);
    let ac = HermitianMatrix::from_hermitian_part(&rf * rf.adjoint());
    let perp = sigma - &ac;
    Ok(LebesgueDecomposition { ac, perp, sqrt_lr: r, split, singular: false })
}

/// `2 log(sigma # rho^-1)` for strictly positive `sigma` and `rho`.
pub fn quantum_log_likelihood(sigma: &HermitianMatrix, rho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    check_dims(sigma, rho)?;
    let inv = pd_inverse(rho, tol)?;
    let mean = geometric_mean(sigma, &inv, tol)?;
    Ok(eig_hermitian(&mean).apply(|l| 2.0 * l.ln()))
}
