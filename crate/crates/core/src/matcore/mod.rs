//! Hermitian matrices and the spectral calculus everything else is built on.
//!
//! All matrix functions (square roots, pseudo-inverses, logarithms,
//! exponentials) go through [`SpectralDecomposition::apply`], so the rank
//! cutoff in [`ToleranceConfig`](crate::ToleranceConfig) is applied the
//! same way everywhere.

mod hermitian;
mod jacobi;
mod spectral;

pub use hermitian::{hermitian_part, pauli, CMat, HermitianMatrix, C64};
pub use spectral::{
    eig_hermitian, geometric_mean, gram_spectrum, herm_exp, pd_inverse, psd_log_on_support, psd_pinv,
    psd_spectrum, psd_sqrt, support_projector, trace_inner, trace_with, unitary_exp, SpectralDecomposition,
};
