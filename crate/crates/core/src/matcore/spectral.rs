use nalgebra::DVector;

use super::hermitian::{CMat, HermitianMatrix, C64};
use super::jacobi;
use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

/// Eigenvalues in ascending order with matching unit eigenvectors as columns.
///
/// Each eigenvector is phase-fixed so that its first entry of non-negligible
/// modulus is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

fn phase_fix(v: &mut CMat, col: usize) {
    let n = v.nrows();
    let peak = (0..n).map(|i| v[(i, col)].norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return;
    }
    let lead = (0..n).find(|&i| v[(i, col)].norm() > 1e-8 * peak).unwrap_or(0);
    let z = v[(lead, col)];
    let phase = z.conj() / z.norm();
    for i in 0..n {
        v[(i, col)] *= phase;
    }
    v[(lead, col)] = C64::new(v[(lead, col)].re, 0.0);
}

fn sorted(values: Vec<f64>, vectors: CMat) -> SpectralDecomposition {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut out = CMat::zeros(vectors.nrows(), order.len());
    for (dst, &src) in order.iter().enumerate() {
        out.set_column(dst, &vectors.column(src));
        phase_fix(&mut out, dst);
    }
    SpectralDecomposition { eigenvalues: order.iter().map(|&i| values[i]).collect(), eigenvectors: out }
}

/// Spectral decomposition of a Hermitian matrix.
pub fn eig_hermitian(a: &HermitianMatrix) -> SpectralDecomposition {
    let (vals, vecs) = jacobi::eigh(a.as_mat().clone());
    sorted(vals, vecs)
}

/// Spectral decomposition of `G G*` computed from the factor `G` alone.
///
/// Only the nonzero part of the spectrum is returned (eigenvectors are
/// `d x k` with `k <= cols(G)`). Small eigenvalues of `G G*` come out with
/// good relative accuracy when `G` is a well-conditioned matrix with
/// badly scaled columns, which is where forming `G G*` first would fail.
pub fn gram_spectrum(g: &CMat) -> SpectralDecomposition {
    let (norms, cols) = jacobi::orthogonalize_columns(g.clone());
    let keep: Vec<usize> = (0..norms.len()).filter(|&k| norms[k] > 0.0).collect();
    let mut u = CMat::zeros(g.nrows(), keep.len());
    let mut vals = Vec::with_capacity(keep.len());
    for (dst, &k) in keep.iter().enumerate() {
        u.set_column(dst, &cols.column(k).unscale(norms[k]));
        vals.push(norms[k] * norms[k]);
    }
    sorted(vals, u)
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvectors.nrows()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// `(||V diag(lambda) V* - A||_F, ||V* V - I||_F)`.
    pub fn residuals(&self, a: &HermitianMatrix) -> (f64, f64) {
        let recon = (self.reconstruct().as_mat() - a.as_mat()).norm();
        let d = self.dim();
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors - CMat::identity(d, d);
        (recon, gram.norm())
    }

    /// Whether both residuals are within `tol.recon * (1 + ||A||_F)` and
    /// `tol.ortho`.
    pub fn verify(&self, a: &HermitianMatrix, tol: &ToleranceConfig) -> bool {
        let (recon, ortho) = self.residuals(a);
        recon <= tol.recon * (1.0 + a.frobenius_norm()) && ortho <= tol.ortho
    }

    /// Eigenvalues at or below `rank_rel * lambda_max` count as zero.
    pub fn cutoff(&self, tol: &ToleranceConfig) -> f64 {
        tol.rank_rel * self.max_eigenvalue().max(0.0)
    }

    /// Indices of eigenvalues strictly above the rank cutoff.
    pub fn support(&self, tol: &ToleranceConfig) -> Vec<usize> {
        let cut = self.cutoff(tol);
        (0..self.eigenvalues.len()).filter(|&k| self.eigenvalues[k] > cut).collect()
    }

    /// Indices of eigenvalues at or below the rank cutoff.
    pub fn kernel(&self, tol: &ToleranceConfig) -> Vec<usize> {
        let cut = self.cutoff(tol);
        (0..self.eigenvalues.len()).filter(|&k| self.eigenvalues[k] <= cut).collect()
    }

    pub fn rank(&self, tol: &ToleranceConfig) -> usize {
        self.support(tol).len()
    }

    /// Eigenvector columns selected by `idx`.
    pub fn columns(&self, idx: &[usize]) -> CMat {
        self.eigenvectors.select_columns(idx.iter())
    }

    /// `sum_k f(lambda_k) v_k v_k*` with complex weights.
    pub fn apply_complex(&self, f: impl Fn(f64) -> C64) -> CMat {
        let w = DVector::from_iterator(self.eigenvalues.len(), self.eigenvalues.iter().map(|&l| f(l)));
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= w[j];
        }
        scaled * v.adjoint()
    }

    /// `sum_k f(lambda_k) v_k v_k*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        HermitianMatrix::from_hermitian_part(self.apply_complex(|l| C64::new(f(l), 0.0)))
    }

    /// Reassembles the matrix.
    pub fn reconstruct(&self) -> HermitianMatrix {
        self.apply(|l| l)
    }

    /// Applies `f` on the support and zero on the kernel. Used for every
    /// function of a positive operator, so the cutoff lives in one place.
    pub fn apply_on_support(&self, tol: &ToleranceConfig, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let cut = self.cutoff(tol);
        self.apply(|l| if l > cut { f(l) } else { 0.0 })
    }
}

/// Spectrum of a positive semidefinite operator with small negative
/// eigenvalues (down to `-psd_floor * lambda_max`) clamped to zero.
pub fn psd_spectrum(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<SpectralDecomposition> {
    let mut s = eig_hermitian(a);
    let top = s.max_eigenvalue().max(0.0);
    let floor = tol.psd_floor * top.max(f64::MIN_POSITIVE);
    if s.min_eigenvalue() < -floor {
        return Err(Error::NotPsd { min_eigenvalue: s.min_eigenvalue() });
    }
    for l in s.eigenvalues.iter_mut() {
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    Ok(s)
}

pub fn support_projector(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    Ok(psd_spectrum(a, tol)?.apply_on_support(tol, |_| 1.0))
}

pub fn psd_sqrt(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    Ok(psd_spectrum(a, tol)?.apply_on_support(tol, f64::sqrt))
}

/// Moore-Penrose pseudo-inverse of a positive semidefinite operator.
pub fn psd_pinv(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    Ok(psd_spectrum(a, tol)?.apply_on_support(tol, f64::recip))
}

/// `log` on the support, zero on the kernel.
pub fn psd_log_on_support(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    Ok(psd_spectrum(a, tol)?.apply_on_support(tol, f64::ln))
}

/// Inverse of a strictly positive operator.
pub fn pd_inverse(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let s = strictly_positive_spectrum(a, tol)?;
    Ok(s.apply(f64::recip))
}

fn strictly_positive_spectrum(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<SpectralDecomposition> {
    let s = eig_hermitian(a);
    if s.max_eigenvalue() <= 0.0 || s.min_eigenvalue() <= s.cutoff(tol) {
        return Err(Error::NotStrictlyPositive { min_eigenvalue: s.min_eigenvalue() });
    }
    Ok(s)
}

pub fn herm_exp(a: &HermitianMatrix) -> HermitianMatrix {
    eig_hermitian(a).apply(f64::exp)
}

/// The unitary `exp(i t A)`.
pub fn unitary_exp(a: &HermitianMatrix, t: f64) -> CMat {
    eig_hermitian(a).apply_complex(|l| C64::from_polar(1.0, t * l))
}

/// Matrix geometric mean `A # B = A^1/2 (A^-1/2 B A^-1/2)^1/2 A^1/2`,
/// the unique positive solution of `X A^-1 X = B`.
pub fn geometric_mean(a: &HermitianMatrix, b: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { expected: a.dim(), found: b.dim() });
    }
    let sa = strictly_positive_spectrum(a, tol)?;
    strictly_positive_spectrum(b, tol)?;
    let half = sa.apply(f64::sqrt);
    let neg_half = sa.apply(|l| 1.0 / l.sqrt());
    let inner = neg_half.sandwich(b);
    let root = psd_sqrt(&inner, tol)?;
    Ok(half.sandwich(&root))
}

/// `Tr(A B)`.
pub fn trace_inner(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { expected: a.dim(), found: b.dim() });
    }
    let (x, y) = (a.as_mat(), b.as_mat());
    let d = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    Ok(acc)
}

/// `Tr(A M)` for a general square `M`.
pub fn trace_with(a: &HermitianMatrix, m: &CMat) -> C64 {
    let x = a.as_mat();
    let d = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += x[(i, j)] * m[(j, i)];
        }
    }
    acc
}
