use super::ParametricModel;
use crate::error::{Error, Result};
use crate::lebesgue::DensityMatrix;
use crate::matcore::{pauli, HermitianMatrix, C64};
use crate::tolerance::ToleranceConfig;

// tanh(t)/t and its derivative divided by t, with series near zero.
fn tanhc(t: f64) -> f64 {
    if t < 1e-4 {
        1.0 - t * t / 3.0
    } else {
        t.tanh() / t
    }
}

fn tanhc_prime_over_t(t: f64) -> f64 {
    if t < 1e-2 {
        let t2 = t * t;
        -2.0 / 3.0 + 8.0 * t2 / 15.0 - 102.0 * t2 * t2 / 315.0
    } else {
        let sech = 1.0 / t.cosh();
        (t * sech * sech - t.tanh()) / (t * t * t)
    }
}

fn check_theta(theta: &[f64]) -> Result<(f64, f64)> {
    match theta {
        [a, b] if a.is_finite() && b.is_finite() => Ok((*a, *b)),
        _ => Err(Error::DimMismatch { expected: 2, found: theta.len() }),
    }
}

/// Pure qubit state `(I + tanh|t|/|t| (t1 s1 + t2 s2) + s3 / cosh|t|) / 2`,
/// equal to `|0><0|` at the origin.
pub fn spin_state(theta: &[f64]) -> Result<HermitianMatrix> {
    let (t1, t2) = check_theta(theta)?;
    let t = t1.hypot(t2);
    let a = tanhc(t);
    let b = 1.0 / t.cosh();
    let off = C64::new(a * t1, -a * t2) * 0.5;
    HermitianMatrix::from_complex(2, &[C64::new(0.5 * (1.0 + b), 0.0), off, off.conj(), C64::new(0.5 * (1.0 - b), 0.0)])
}

/// Derivative of [`spin_state`] in direction `i` (0 or 1).
pub fn spin_state_derivative(theta: &[f64], i: usize) -> Result<HermitianMatrix> {
    let (t1, t2) = check_theta(theta)?;
    if i > 1 {
        return Err(Error::DimMismatch { expected: 2, found: i + 1 });
    }
    let t = t1.hypot(t2);
    let ti = theta[i];
    let [s1, s2, s3] = pauli();
    let dir = &s1.scale(t1) + &s2.scale(t2);
    // d/dtheta_i of tanhc(t) theta.sigma and of sech(t) sigma_3
    let from_a = dir.scale(tanhc_prime_over_t(t) * ti);
    let from_sigma = if i == 0 { s1 } else { s2 }.scale(tanhc(t));
    let from_b = s3.scale(-tanhc(t) / t.cosh() * ti);
    Ok((&(&from_a + &from_sigma) + &from_b).scale(0.5))
}

/// Size of the non-pure admixture in the perturbed spin model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturbation {
    /// `f = 0`
    Zero,
    /// `f = |theta|^2`
    Quadratic,
    /// `f = |theta|^3`
    Cubic,
}

impl Perturbation {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "zero" => Ok(Perturbation::Zero),
            "quadratic" => Ok(Perturbation::Quadratic),
            "cubic" => Ok(Perturbation::Cubic),
            other => Err(Error::Invalid(format!("unknown perturbation `{other}` (expected zero, quadratic or cubic)"))),
        }
    }

    pub fn value(&self, theta: &[f64]) -> f64 {
        let r = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
        match self {
            Perturbation::Zero => 0.0,
            Perturbation::Quadratic => r * r,
            Perturbation::Cubic => r * r * r,
        }
    }

    pub fn gradient(&self, theta: &[f64], i: usize) -> f64 {
        let r = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
        match self {
            Perturbation::Zero => 0.0,
            Perturbation::Quadratic => 2.0 * theta[i],
            Perturbation::Cubic => 3.0 * r * theta[i],
        }
    }
}

/// `e^{-f} spin_state(theta) + (1 - e^{-f}) |1><1|`.
pub fn perturbed_state(theta: &[f64], f: Perturbation) -> Result<HermitianMatrix> {
    let w = (-f.value(theta)).exp();
    let pure = spin_state(theta)?;
    Ok(&pure.scale(w) + &HermitianMatrix::diag(&[0.0, 1.0 - w]))
}

pub fn perturbed_state_derivative(theta: &[f64], i: usize, f: Perturbation) -> Result<HermitianMatrix> {
    let w = (-f.value(theta)).exp();
    let g = f.gradient(theta, i);
    let pure = spin_state(theta)?;
    let d = spin_state_derivative(theta, i)?;
    Ok((&(&d - &pure.scale(g)) + &HermitianMatrix::diag(&[0.0, g])).scale(w))
}

fn density(op: HermitianMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(op, &ToleranceConfig::default())
}

/// Two-parameter pure qubit model with analytic derivatives.
pub fn spin_pure_model() -> ParametricModel<'static> {
    ParametricModel::new(2, |t: &[f64]| density(spin_state(t)?)).with_derivative(spin_state_derivative)
}

/// Spin model mixed with `|1><1|` at weight `1 - e^{-f(theta)}`.
pub fn spin_perturbed_model(f: Perturbation) -> ParametricModel<'static> {
    ParametricModel::new(2, move |t: &[f64]| density(perturbed_state(t, f)?))
        .with_derivative(move |t: &[f64], i| perturbed_state_derivative(t, i, f))
}

/// Built-in models by name: `spin-pure` and `spin-perturbed:f=<zero|quadratic|cubic>`.
pub fn model_by_name(name: &str) -> Result<ParametricModel<'static>> {
    if name == "spin-pure" {
        return Ok(spin_pure_model());
    }
    if let Some(rest) = name.strip_prefix("spin-perturbed:f=") {
        return Ok(spin_perturbed_model(Perturbation::parse(rest)?));
    }
    Err(Error::Invalid(format!("unknown model `{name}`")))
}
