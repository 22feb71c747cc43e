//! Local asymptotic normality experiments for i.i.d. models at desk scale.
//!
//! Everything involving `n` copies is reduced to single-site traces raised
//! to the `n`-th power: for collective observables
//! `X_n = n^{-1/2} sum_k B^{(k)}` the ordered product of Weyl unitaries
//! under `rho^{(x) n}` is the `n`-th power of the one-copy expectation.

mod spin;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::contiguity::Verdict;
use crate::error::{Error, Result};
use crate::gaussian::{gaussian_qcf, real_query, GaussianParams};
use crate::lebesgue::{sqrt_likelihood_ratio, DensityMatrix};
use crate::matcore::{psd_spectrum, support_projector, trace_inner, trace_with, unitary_exp, CMat, HermitianMatrix, C64};
use crate::tolerance::ToleranceConfig;

pub use spin::{
    model_by_name, perturbed_state, perturbed_state_derivative, spin_perturbed_model, spin_pure_model, spin_state,
    spin_state_derivative, Perturbation,
};

type StateFn<'a> = Box<dyn Fn(&[f64]) -> Result<DensityMatrix> + 'a>;
type DerivFn<'a> = Box<dyn Fn(&[f64], usize) -> Result<HermitianMatrix> + 'a>;

/// A smooth family `theta -> rho_theta` with `theta` in `R^dim`.
pub struct ParametricModel<'a> {
    pub dim: usize,
    state_at: StateFn<'a>,
    deriv_at: Option<DerivFn<'a>>,
    /// Central-difference step; `None` disables finite differences.
    pub fd_step: Option<f64>,
}

impl<'a> ParametricModel<'a> {
    pub fn new(dim: usize, state_at: impl Fn(&[f64]) -> Result<DensityMatrix> + 'a) -> Self {
        ParametricModel { dim, state_at: Box::new(state_at), deriv_at: None, fd_step: Some(1e-5) }
    }

    pub fn with_derivative(mut self, deriv_at: impl Fn(&[f64], usize) -> Result<HermitianMatrix> + 'a) -> Self {
        self.deriv_at = Some(Box::new(deriv_at));
        self
    }

    pub fn without_finite_differences(mut self) -> Self {
        self.fd_step = None;
        self
    }

    pub fn state(&self, theta: &[f64]) -> Result<DensityMatrix> {
        if theta.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: theta.len() });
        }
        (self.state_at)(theta)
    }

    /// Supplied derivative if present, otherwise finite differences.
    pub fn derivative(&self, theta: &[f64], i: usize) -> Result<HermitianMatrix> {
        match &self.deriv_at {
            Some(d) => d(theta, i),
            None => self.fd_derivative(theta, i),
        }
    }

    /// Central differences at steps `h` and `h/2` combined by Richardson
    /// extrapolation.
    pub fn fd_derivative(&self, theta: &[f64], i: usize) -> Result<HermitianMatrix> {
        let h = self.fd_step.ok_or(Error::DerivativeUnavailable)?;
        if i >= self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: i + 1 });
        }
        let central = |step: f64| -> Result<HermitianMatrix> {
            let mut p = theta.to_vec();
            let mut m = theta.to_vec();
            p[i] += step;
            m[i] -= step;
            Ok((&*self.state(&p)? - &*self.state(&m)?).scale(0.5 / step))
        };
        let coarse = central(h)?;
        let fine = central(0.5 * h)?;
        Ok((&fine.scale(4.0) - &coarse).scale(1.0 / 3.0))
    }
}

/// A symmetric logarithmic derivative with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Sld {
    pub op: HermitianMatrix,
    /// `||rho L + L rho - 2 d rho||_F` outside the kernel-kernel block.
    pub residual: f64,
    /// Size of the kernel-kernel block of `d rho`, which no SLD can match.
    pub kernel_defect: f64,
}

/// Solves `rho L + L rho = 2 drho` in the eigenbasis of `rho`, setting the
/// kernel-kernel block of `L` to zero.
pub fn sld_from_derivative(rho: &HermitianMatrix, drho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<Sld> {
    if rho.dim() != drho.dim() {
        return Err(Error::DimMismatch { expected: rho.dim(), found: drho.dim() });
    }
    let spec = psd_spectrum(rho, tol)?;
    let cut = spec.cutoff(tol);
    let w = &spec.eigenvectors;
    let dm = w.adjoint() * drho.as_mat() * w;
    let d = rho.dim();
    let mut l = CMat::zeros(d, d);
    let mut defect = 0.0;
    for j in 0..d {
        for k in 0..d {
            let (lj, lk) = (spec.eigenvalues[j], spec.eigenvalues[k]);
            if lj <= cut && lk <= cut {
                defect += dm[(j, k)].norm_sqr();
            } else {
                l[(j, k)] = dm[(j, k)] * (2.0 / (lj + lk));
            }
        }
    }
    let defect = defect.sqrt();
    if defect > 1e-6 * drho.frobenius_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::InconsistentDerivative { defect });
    }
    let op = HermitianMatrix::from_hermitian_part(w * l * w.adjoint());
    let full = rho.as_mat() * op.as_mat() + op.as_mat() * rho.as_mat() - drho.as_mat() * C64::new(2.0, 0.0);
    let kernel = spec.columns(&spec.kernel(tol));
    let kk = &kernel * (kernel.adjoint() * &full * &kernel) * kernel.adjoint();
    Ok(Sld { op, residual: (full - kk).norm(), kernel_defect: defect })
}

/// The `i`-th SLD of `model` at `theta0`.
pub fn sld(model: &ParametricModel, theta0: &[f64], i: usize, tol: &ToleranceConfig) -> Result<Sld> {
    let rho = model.state(theta0)?;
    let drho = model.derivative(theta0, i)?;
    sld_from_derivative(&rho, &drho, tol)
}

/// All SLDs of `model` at `theta0`.
pub fn slds(model: &ParametricModel, theta0: &[f64], tol: &ToleranceConfig) -> Result<Vec<HermitianMatrix>> {
    (0..model.dim).map(|i| sld(model, theta0, i, tol).map(|s| s.op)).collect()
}

fn check_centered(rho: &HermitianMatrix, ops: &[HermitianMatrix], tol: &ToleranceConfig) -> Result<()> {
    for (index, op) in ops.iter().enumerate() {
        if op.dim() != rho.dim() {
            return Err(Error::DimMismatch { expected: rho.dim(), found: op.dim() });
        }
        let mean = trace_inner(rho, op)?.re;
        if mean.abs() > tol.eq_rel * op.frobenius_norm().max(1.0) {
            return Err(Error::CenteringViolated { index, mean });
        }
    }
    Ok(())
}

/// `J_ij = Tr(rho L_j L_i)`.
pub fn qfi_matrix(rho: &HermitianMatrix, slds: &[HermitianMatrix], tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    cross_covariance(rho, slds, slds, tol).map(HermitianMatrix::from_hermitian_part)
}

// M_ij = Tr(rho A_j B_i) after checking that every operator is centred.
fn cross_covariance(rho: &HermitianMatrix, a: &[HermitianMatrix], b: &[HermitianMatrix], tol: &ToleranceConfig) -> Result<CMat> {
    check_centered(rho, a, tol)?;
    check_centered(rho, b, tol)?;
    let mut m = CMat::zeros(b.len(), a.len());
    for (i, bi) in b.iter().enumerate() {
        for (j, aj) in a.iter().enumerate() {
            m[(i, j)] = trace_with(rho, &(aj.as_mat() * bi.as_mat()));
        }
    }
    Ok(m)
}

/// `n` copies of `base` together with SLDs and centred observables.
#[derive(Debug, Clone, PartialEq)]
pub struct IIDExperiment {
    pub base: DensityMatrix,
    pub slds: Vec<HermitianMatrix>,
    pub obs: Vec<HermitianMatrix>,
    pub h: Vec<f64>,
    pub n: u64,
}

impl IIDExperiment {
    pub fn new(base: DensityMatrix, slds: Vec<HermitianMatrix>, obs: Vec<HermitianMatrix>, h: Vec<f64>, n: u64, tol: &ToleranceConfig) -> Result<Self> {
        check_centered(&base, &slds, tol)?;
        check_centered(&base, &obs, tol)?;
        if h.len() != slds.len() {
            return Err(Error::DimMismatch { expected: slds.len(), found: h.len() });
        }
        if n == 0 {
            return Err(Error::Invalid("number of copies must be positive".into()));
        }
        Ok(IIDExperiment { base, slds, obs, h, n })
    }

    /// `tau_ij = Tr(rho L_j B_i)`.
    pub fn tau(&self, tol: &ToleranceConfig) -> Result<CMat> {
        cross_covariance(&self.base, &self.slds, &self.obs, tol)
    }

    /// `Sigma_ij = Tr(rho B_j B_i)`.
    pub fn sigma(&self, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
        cross_covariance(&self.base, &self.obs, &self.obs, tol).map(HermitianMatrix::from_hermitian_part)
    }
}

/// `Tr(state prod_t e^{i xi_t.B / sqrt(n)})`, the one-copy factor.
pub fn single_site_qcf(state: &HermitianMatrix, obs: &[HermitianMatrix], n: u64, xis: &[Vec<f64>]) -> Result<C64> {
    let d = state.dim();
    let scale = 1.0 / (n as f64).sqrt();
    let mut prod = CMat::identity(d, d);
    for xi in xis {
        if xi.len() != obs.len() {
            return Err(Error::DimMismatch { expected: obs.len(), found: xi.len() });
        }
        let mut gen = HermitianMatrix::zeros(d);
        for (b, &x) in obs.iter().zip(xi) {
            if b.dim() != d {
                return Err(Error::DimMismatch { expected: d, found: b.dim() });
            }
            gen = &gen + &b.scale(x * scale);
        }
        prod *= unitary_exp(&gen, 1.0);
    }
    Ok(trace_with(state, &prod))
}

/// `(Tr(state prod_t e^{i xi_t.B / sqrt(n)}))^n`: the quasi-characteristic
/// function of the collective observables on `state^{(x) n}`.
pub fn iid_qcf_under(state: &HermitianMatrix, obs: &[HermitianMatrix], n: u64, xis: &[Vec<f64>]) -> Result<C64> {
    let z = single_site_qcf(state, obs, n, xis)?;
    if z.norm() == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok((z.ln() * n as f64).exp())
}

/// [`iid_qcf_under`] evaluated on the experiment's base state.
pub fn iid_qcf(exp: &IIDExperiment, xis: &[Vec<f64>]) -> Result<C64> {
    iid_qcf_under(&exp.base, &exp.obs, exp.n, xis)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lecam3Report {
    /// Mean `(Re tau) h` of the predicted limit.
    pub target_mean: Vec<f64>,
    /// `(n, max deviation over the query grid)`.
    pub deviations: Vec<(u64, f64)>,
    /// Whether deviations strictly decrease along the grid.
    pub decreasing: bool,
}

/// Compares the quasi-characteristic function of the collective
/// observables under `rho_{theta0 + h/sqrt(n)}^{(x) n}` with that of
/// `N((Re tau) h, Sigma)`, for each `n` and every query.
pub fn lecam3_numeric_check(
    model: &ParametricModel,
    theta0: &[f64],
    obs: &[HermitianMatrix],
    h: &[f64],
    n_grid: &[u64],
    xi_grid: &[Vec<Vec<f64>>],
    tol: &ToleranceConfig,
) -> Result<Lecam3Report> {
    if h.len() != model.dim {
        return Err(Error::DimMismatch { expected: model.dim, found: h.len() });
    }
    let base = model.state(theta0)?;
    let exp = IIDExperiment::new(base, slds(model, theta0, tol)?, obs.to_vec(), h.to_vec(), 1, tol)?;
    let tau = exp.tau(tol)?;
    let target_mean: Vec<f64> = (0..obs.len()).map(|i| (0..h.len()).map(|j| tau[(i, j)].re * h[j]).sum()).collect();
    let target = GaussianParams::new(target_mean.clone(), exp.sigma(tol)?);
    let mut deviations = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let theta: Vec<f64> = theta0.iter().zip(h).map(|(t, hi)| t + hi / (n as f64).sqrt()).collect();
        let state = model.state(&theta)?;
        let mut worst = 0.0_f64;
        for q in xi_grid {
            let lhs = iid_qcf_under(&state, obs, n, q)?;
            let rhs = gaussian_qcf(&target, &real_query(q))?;
            worst = worst.max((lhs - rhs).norm());
        }
        deviations.push((n, worst));
    }
    let decreasing = deviations.windows(2).all(|w| w[1].1 < w[0].1);
    Ok(Lecam3Report { target_mean, deviations, decreasing })
}

/// Canonical `R(sigma | rho)` completed by the projector onto the kernel of
/// `rho`, so that it equals the identity when `sigma = rho`. Adding an
/// operator supported on the kernel of `rho` leaves every `rho`-expectation
/// unchanged.
pub fn unit_completed_ratio(sigma: &HermitianMatrix, rho: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let r = sqrt_likelihood_ratio(sigma, rho, tol)?;
    let p = support_projector(rho, tol)?;
    Ok(&(&r + &HermitianMatrix::identity(rho.dim())) - &p)
}

/// `B(h) = R_h - I - (1/2) sum_i h_i L_i`.
pub fn remainder(model: &ParametricModel, theta0: &[f64], h: &[f64], slds: &[HermitianMatrix], tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let rho = model.state(theta0)?;
    let theta: Vec<f64> = theta0.iter().zip(h).map(|(t, x)| t + x).collect();
    let r = unit_completed_ratio(&*model.state(&theta)?, &rho, tol)?;
    let mut b = &r - &HermitianMatrix::identity(rho.dim());
    for (l, &x) in slds.iter().zip(h) {
        b = &b - &l.scale(0.5 * x);
    }
    Ok(b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    /// Fitted symmetric `K` with `Tr(rho B(h)) ~ h^T K h`, row-major.
    pub fitted: Vec<f64>,
    /// `-(1/8) Re J`, row-major.
    pub expected: Vec<f64>,
    /// `||K - expected||_F / ||expected||_F`.
    pub relative_error: f64,
    /// Slope of `log |Tr(rho B(h)) + h^T (Re J) h / 8|` against `log |h|`.
    pub remainder_order: Option<f64>,
    /// Slope of `log |Tr(rho R_h^2) - 1|` against `log |h|`.
    pub mass_defect_order: Option<f64>,
    /// `(|h|, Tr(rho B(h)), Tr(rho R_h^2) - 1)` per grid point.
    pub samples: Vec<(f64, f64, f64)>,
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.0 > 0.0 && p.1 > 1e-15).map(|&(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

const SHELL_WIDTH: f64 = 1.01;

/// Checks `Tr(rho B(h)) = -(1/8) h^T (Re J) h + o(|h|^2)`.
///
/// The quadratic form is fitted by least squares on the grid points whose
/// norm lies within one percent of the smallest nonzero norm; the remainder
/// order is estimated from all points.
pub fn sqrt_expansion_check(model: &ParametricModel, theta0: &[f64], h_grid: &[Vec<f64>], tol: &ToleranceConfig) -> Result<ExpansionReport> {
    let d = model.dim;
    let rho = model.state(theta0)?;
    let ls = slds(model, theta0, tol)?;
    let re_j = qfi_matrix(&rho, &ls, tol)?.as_mat().map(|z| z.re);
    let expected = re_j.scale(-0.125);

    let mut samples = Vec::with_capacity(h_grid.len());
    for h in h_grid {
        if h.len() != d {
            return Err(Error::DimMismatch { expected: d, found: h.len() });
        }
        let b = remainder(model, theta0, h, &ls, tol)?;
        let theta: Vec<f64> = theta0.iter().zip(h).map(|(t, x)| t + x).collect();
        let r = sqrt_likelihood_ratio(&*model.state(&theta)?, &rho, tol)?;
        let mass = r.sandwich(&rho).trace() - 1.0;
        let norm = h.iter().map(|x| x * x).sum::<f64>().sqrt();
        samples.push((norm, trace_inner(&rho, &b)?.re, mass));
    }

    let smallest = samples.iter().map(|s| s.0).filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a..d).map(move |b| (a, b))).collect();
    let rows: Vec<usize> = (0..samples.len()).filter(|&k| samples[k].0 > 0.0 && samples[k].0 <= SHELL_WIDTH * smallest).collect();
    if rows.len() < pairs.len() {
        return Err(Error::Invalid(format!("need at least {} nonzero grid points on the smallest shell", pairs.len())));
    }
    let mut design = DMatrix::<f64>::zeros(rows.len(), pairs.len());
    let mut target = DVector::<f64>::zeros(rows.len());
    for (r, &k) in rows.iter().enumerate() {
        let h = &h_grid[k];
        for (c, &(a, b)) in pairs.iter().enumerate() {
            design[(r, c)] = if a == b { h[a] * h[a] } else { 2.0 * h[a] * h[b] };
        }
        target[r] = samples[k].1;
    }
    let coef = design
        .clone()
        .svd(true, true)
        .solve(&target, 1e-14)
        .map_err(|e| Error::Invalid(format!("least squares failed: {e}")))?;
    let mut fitted = DMatrix::<f64>::zeros(d, d);
    for (c, &(a, b)) in pairs.iter().enumerate() {
        fitted[(a, b)] = coef[c];
        fitted[(b, a)] = coef[c];
    }
    let relative_error = (&fitted - &expected).norm() / expected.norm().max(f64::MIN_POSITIVE);

    let remainder_pts: Vec<(f64, f64)> = samples
        .iter()
        .zip(h_grid)
        .map(|(s, h)| {
            let hv = DVector::from_column_slice(h);
            let quad = (hv.transpose() * &re_j * &hv)[(0, 0)];
            (s.0, (s.1 + quad / 8.0).abs())
        })
        .collect();
    let mass_pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.0, s.2.abs())).collect();
    let row_major = |m: &DMatrix<f64>| (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).map(|(a, b)| m[(a, b)]).collect();
    Ok(ExpansionReport {
        fitted: row_major(&fitted),
        expected: row_major(&expected),
        relative_error,
        remainder_order: slope(&remainder_pts),
        mass_defect_order: slope(&mass_pts),
        samples,
    })
}

/// Shrinking grid: for each scale, `directions` unit vectors spread over the
/// upper half circle (first two coordinates), times the scale.
pub fn shell_grid(dim: usize, scales: &[f64], directions: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for &s in scales {
        for k in 0..directions {
            let a = std::f64::consts::PI * (k as f64 + 0.5) / directions as f64;
            let mut h = vec![0.0; dim];
            h[0] = s * a.cos();
            if dim > 1 {
                h[1] = s * a.sin();
            }
            out.push(h);
        }
    }
    out
}

/// Built-in localization rates `g(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rate {
    /// `g(n) = sqrt(n)`.
    Sqrt,
    /// `g(n) = n^(1/4)`.
    Quarter,
    /// `g(n) = n`.
    Linear,
}

impl Rate {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "sqrt" => Ok(Rate::Sqrt),
            "quarter" => Ok(Rate::Quarter),
            "linear" => Ok(Rate::Linear),
            other => Err(Error::Invalid(format!("unknown rate `{other}` (expected sqrt, quarter or linear)"))),
        }
    }

    pub fn eval(self, n: u64) -> f64 {
        let n = n as f64;
        match self {
            Rate::Sqrt => n.sqrt(),
            Rate::Quarter => n.sqrt().sqrt(),
            Rate::Linear => n,
        }
    }
}

/// Local perturbation size `f`, rate `g` and direction `h` for the
/// perturbed-model contiguity scan.
pub struct RateScan<'a> {
    pub f: Box<dyn Fn(&[f64]) -> f64 + 'a>,
    pub g: Box<dyn Fn(u64) -> f64 + 'a>,
    pub h: Vec<f64>,
    pub grid: Vec<u64>,
    /// Threshold for `n f(h / g(n))` at the horizon.
    pub eps: f64,
    /// Declared bound for `n / g(n)^2`.
    pub bound: f64,
}

impl<'a> RateScan<'a> {
    pub fn new(f: impl Fn(&[f64]) -> f64 + 'a, g: impl Fn(u64) -> f64 + 'a, h: Vec<f64>, grid: Vec<u64>) -> Self {
        RateScan { f: Box::new(f), g: Box::new(g), h, grid, eps: 1e-3, bound: 10.0 }
    }
}

/// Two points per decade from `10` to `10^10`.
pub fn default_rate_grid() -> Vec<u64> {
    crate::contiguity::log_grid(10, 10_000_000_000, 2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateScanReport {
    /// `(n, n f(h / g(n)), n / g(n)^2)`.
    pub rows: Vec<(u64, f64, f64)>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Contiguity of the perturbed model along `theta = h / g(n)` holds iff
/// `n f(h / g(n)) -> 0` and `n / g(n)^2` stays bounded. The trends are read
/// off the last quarter of the grid.
pub fn rate_scan(scan: &RateScan) -> RateScanReport {
    let rows: Vec<(u64, f64, f64)> = scan
        .grid
        .iter()
        .map(|&n| {
            let g = (scan.g)(n);
            let theta: Vec<f64> = scan.h.iter().map(|x| x / g).collect();
            (n, n as f64 * (scan.f)(&theta), n as f64 / (g * g))
        })
        .collect();
    let mut notes = Vec::new();
    if rows.is_empty() {
        notes.push("empty grid".into());
        return RateScanReport { rows, verdict: Verdict::Inconclusive, notes };
    }
    let k = ((rows.len() as f64) * 0.25).ceil().max(2.0) as usize;
    let tail = &rows[rows.len() - k.min(rows.len())..];
    let slack = 1e-3;
    let first: Vec<f64> = tail.iter().map(|r| r.1).collect();
    let second: Vec<f64> = tail.iter().map(|r| r.2).collect();
    let scale = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let nonincreasing = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0] + slack * scale(v));
    let nondecreasing = |v: &[f64]| v.windows(2).all(|w| w[1] >= w[0] - slack * scale(v));
    let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);

    let last_first = *first.last().unwrap();
    let to_zero = last_first <= scan.eps && nonincreasing(&first);
    let bounded = scale(&second) <= scan.bound;
    let stuck = last_first > scan.eps && nondecreasing(&first);
    let blows_up = !bounded && increasing(&second);

    let verdict = if to_zero && bounded {
        notes.push("n f(h/g(n)) tends to zero and n/g(n)^2 stays bounded".into());
        Verdict::Contiguous
    } else if stuck || blows_up {
        if stuck {
            notes.push(format!("n f(h/g(n)) stays above {:e}", scan.eps));
        }
        if blows_up {
            notes.push(format!("n/g(n)^2 grows past the declared bound {}", scan.bound));
        }
        Verdict::NotContiguous
    } else {
        notes.push("trends on the grid are ambiguous".into());
        Verdict::Inconclusive
    };
    RateScanReport { rows, verdict, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sld_of_maximally_mixed_state() {
        let rho = HermitianMatrix::identity(3).scale(1.0 / 3.0);
        let a = HermitianMatrix::from_real(3, &[0.5, 0.2, 0.0, 0.2, -0.1, 0.3, 0.0, 0.3, -0.4]).unwrap();
        let s = sld_from_derivative(&rho, &a, &ToleranceConfig::default()).unwrap();
        assert!(s.op.distance(&a.scale(3.0)) < 1e-13);
    }

    #[test]
    fn kernel_block_in_derivative_is_rejected() {
        let rho = HermitianMatrix::diag(&[1.0, 0.0]);
        let d = HermitianMatrix::diag(&[-0.5, 0.5]);
        assert!(matches!(sld_from_derivative(&rho, &d, &ToleranceConfig::default()), Err(Error::InconsistentDerivative { .. })));
    }

    #[test]
    fn rate_scan_cases() {
        let grid = default_rate_grid();
        let norm = |t: &[f64]| t.iter().map(|x| x * x).sum::<f64>().sqrt();
        let cubic = RateScan::new(move |t: &[f64]| norm(t).powi(3), |n| (n as f64).sqrt(), vec![1.0, 0.5], grid.clone());
        assert_eq!(rate_scan(&cubic).verdict, Verdict::Contiguous);
        let quad = RateScan::new(move |t: &[f64]| norm(t).powi(2), |n| (n as f64).sqrt(), vec![1.0, 0.5], grid.clone());
        assert_eq!(rate_scan(&quad).verdict, Verdict::NotContiguous);
        let zero = RateScan::new(|_: &[f64]| 0.0, |n| n as f64, vec![1.0, 0.5], grid);
        assert_eq!(rate_scan(&zero).verdict, Verdict::Contiguous);
    }
}
