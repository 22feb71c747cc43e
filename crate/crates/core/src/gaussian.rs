//! Quantum Gaussian states described through their quasi-characteristic
//! function, and the Gaussian shift that appears in Le Cam's third lemma.
//!
//! For a mean `h` and Hermitian covariance `J = V + iS`, the ordered product
//! of Weyl unitaries `e^{i xi_1.X} ... e^{i xi_r.X}` has expectation
//!
//! ```text
//! exp( sum_t (i xi_t^a h_a - 1/2 xi_t^a xi_t^b J_ba) - sum_{t<u} xi_t^a xi_u^b J_ba )
//! ```
//!
//! where the second index of `J` pairs with the earlier vector. The formula
//! is evaluated verbatim for complex `xi` as well.

use crate::error::{Error, Result};
use crate::matcore::{psd_spectrum, CMat, HermitianMatrix, C64};
use crate::tolerance::ToleranceConfig;

/// `N(h, J)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianParams {
    pub h: Vec<f64>,
    pub j: HermitianMatrix,
}

impl GaussianParams {
    pub fn new(h: Vec<f64>, j: HermitianMatrix) -> Self {
        GaussianParams { h, j }
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    /// `Re J`.
    pub fn v(&self) -> nalgebra::DMatrix<f64> {
        self.j.as_mat().map(|z| z.re)
    }

    /// `Im J`.
    pub fn s(&self) -> nalgebra::DMatrix<f64> {
        self.j.as_mat().map(|z| z.im)
    }
}

/// Parameters `(mu, Sigma, kappa, s^2)` of a jointly Gaussian pair made of an
/// observable with law `N(mu, Sigma)` and a log-likelihood with mean
/// `-s^2 / 2`, variance `s^2` and cross covariance `kappa`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedGaussianParams {
    pub mu: Vec<f64>,
    pub sigma: HermitianMatrix,
    pub kappa: Vec<C64>,
    pub s2: f64,
}

/// Ordered list `xi_1, ..., xi_r` of (possibly complex) vectors.
pub type QcfQuery = Vec<Vec<C64>>;

/// Turns real vectors into a query.
pub fn real_query(xis: &[Vec<f64>]) -> QcfQuery {
    xis.iter().map(|x| x.iter().map(|&v| C64::new(v, 0.0)).collect()).collect()
}

fn psd_ok(j: &HermitianMatrix) -> bool {
    let tol = ToleranceConfig::default();
    psd_spectrum(j, &tol).is_ok() && j.as_mat().iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// True when `J` is Hermitian positive semidefinite (within `psd_floor`)
/// and matches the dimension of `h`.
pub fn validate(params: &GaussianParams) -> bool {
    params.j.dim() == params.h.len() && params.h.iter().all(|v| v.is_finite()) && psd_ok(&params.j)
}

impl ExtendedGaussianParams {
    /// The `(d+1) x (d+1)` matrix `[[Sigma, kappa], [kappa*, s^2]]`.
    pub fn enlarged_covariance(&self) -> Result<HermitianMatrix> {
        let d = self.mu.len();
        if self.sigma.dim() != d || self.kappa.len() != d {
            return Err(Error::InvalidParams(format!(
                "mean has length {d}, covariance is {}x{}, kappa has length {}",
                self.sigma.dim(),
                self.sigma.dim(),
                self.kappa.len()
            )));
        }
        let mut m = CMat::zeros(d + 1, d + 1);
        m.view_mut((0, 0), (d, d)).copy_from(self.sigma.as_mat());
        for i in 0..d {
            m[(i, d)] = self.kappa[i];
            m[(d, i)] = self.kappa[i].conj();
        }
        m[(d, d)] = C64::new(self.s2, 0.0);
        Ok(HermitianMatrix::from_hermitian_part(m))
    }

    /// `N((mu, -s^2/2), [[Sigma, kappa], [kappa*, s^2]])`.
    pub fn enlarged(&self) -> Result<GaussianParams> {
        let j = self.enlarged_covariance()?;
        let mut h = self.mu.clone();
        h.push(-0.5 * self.s2);
        Ok(GaussianParams { h, j })
    }

    pub fn validate(&self) -> bool {
        self.s2 >= 0.0 && self.enlarged().map(|p| validate(&p)).unwrap_or(false)
    }
}

fn check(params: &GaussianParams, q: &QcfQuery) -> Result<()> {
    if !validate(params) {
        return Err(Error::InvalidParams("covariance is not Hermitian positive semidefinite".into()));
    }
    let d = params.dim();
    if let Some(bad) = q.iter().find(|x| x.len() != d) {
        return Err(Error::InvalidParams(format!("query vector has length {}, expected {d}", bad.len())));
    }
    Ok(())
}

// sum_{a,b} x_a y_b J_ba, without conjugation.
fn contract(j: &CMat, x: &[C64], y: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (a, xa) in x.iter().enumerate() {
        for (b, yb) in y.iter().enumerate() {
            acc += xa * yb * j[(b, a)];
        }
    }
    acc
}

/// Quasi-characteristic function of `N(h, J)` at the ordered query.
pub fn gaussian_qcf(params: &GaussianParams, q: &QcfQuery) -> Result<C64> {
    check(params, q)?;
    let j = params.j.as_mat();
    let i = C64::new(0.0, 1.0);
    let mut exponent = C64::new(0.0, 0.0);
    for (t, xt) in q.iter().enumerate() {
        let mean: C64 = xt.iter().zip(&params.h).map(|(x, h)| x * h).sum();
        exponent += i * mean - 0.5 * contract(j, xt, xt);
        for xu in &q[t + 1..] {
            exponent -= contract(j, xt, xu);
        }
    }
    Ok(exponent.exp())
}

/// `N(mu + Re kappa, Sigma)`.
pub fn lecam_shift(ext: &ExtendedGaussianParams) -> Result<GaussianParams> {
    if !ext.validate() {
        return Err(Error::InvalidParams("enlarged covariance is not positive semidefinite".into()));
    }
    let h = ext.mu.iter().zip(&ext.kappa).map(|(m, k)| m + k.re).collect();
    Ok(GaussianParams { h, j: ext.sigma.clone() })
}

/// Expectation of `e^{L/2} prod_t e^{i xi_t.X} e^{L/2}` in the enlarged
/// Gaussian state, where `L` is the last coordinate. Implemented by
/// wrapping the query in two end vectors `(0, ..., 0, -i/2)`.
pub fn sandwiched_gaussian_qcf(ext: &ExtendedGaussianParams, q: &QcfQuery) -> Result<C64> {
    if !ext.validate() {
        return Err(Error::InvalidParams("enlarged covariance is not positive semidefinite".into()));
    }
    let d = ext.mu.len();
    if q.iter().any(|x| x.iter().any(|z| z.im != 0.0)) {
        return Err(Error::InvalidParams("sandwiched evaluation takes real query vectors".into()));
    }
    let mut end = vec![C64::new(0.0, 0.0); d + 1];
    end[d] = C64::new(0.0, -0.5);
    let mut wide = Vec::with_capacity(q.len() + 2);
    wide.push(end.clone());
    for x in q {
        let mut y = x.clone();
        y.push(C64::new(0.0, 0.0));
        wide.push(y);
    }
    wide.push(end);
    gaussian_qcf(&ext.enlarged()?, &wide)
}
