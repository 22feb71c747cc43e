//! State families used as worked examples, by the command-line presets and
//! by the acceptance suite.

use crate::contiguity::{ProductFamily, SeriesClass, TensorPowerSequence, ThreeBlocks};
use crate::error::Result;
use crate::lebesgue::DensityMatrix;
use crate::matcore::{CMat, HermitianMatrix, C64};
use crate::qlan::{spin_state, Rate};
use crate::tolerance::ToleranceConfig;

fn real(d: usize, entries: &[f64]) -> HermitianMatrix {
    HermitianMatrix::from_real(d, entries).expect("preset matrices are symmetric")
}

fn state(op: HermitianMatrix) -> DensityMatrix {
    DensityMatrix::new(op, &ToleranceConfig::default()).expect("preset states are valid")
}

/// Qubit pair whose square-root likelihood ratio grows like `n` on a
/// direction where the reference state has weight `1 / (2 n^3)`.
///
/// `rho = diag(2n^3 - 1, 1) / (2n^3)`,
/// `sigma = [[n^2, n^2 + 1], [n^2 + 1, n^2 + 2n + 2]] / (2 (n^2 + n + 1))`.
pub fn pseudo_likelihood_pair(n: f64) -> (DensityMatrix, DensityMatrix) {
    let c = 2.0 * n * n * n;
    let rho = real(2, &[1.0 - 1.0 / c, 0.0, 0.0, 1.0 / c]);
    let z = 2.0 * (n * n + n + 1.0);
    let sigma = real(2, &[n * n / z, (n * n + 1.0) / z, (n * n + 1.0) / z, (n * n + 2.0 * n + 2.0) / z]);
    (state(rho), state(sigma))
}

/// Limits of [`pseudo_likelihood_pair`] as `n` grows: `(rho, sigma)`.
pub fn pseudo_likelihood_limits() -> (DensityMatrix, DensityMatrix) {
    (state(real(2, &[1.0, 0.0, 0.0, 0.0])), state(real(2, &[0.5, 0.5, 0.5, 0.5])))
}

/// Pure qubit pair that becomes orthogonal in the limit:
/// `rho = diag(1, 0)`, `sigma = [[1, n], [n, n^2]] / (1 + n^2)`.
pub fn collapsing_pure_pair(n: f64) -> (DensityMatrix, DensityMatrix) {
    let z = 1.0 + n * n;
    let rho = real(2, &[1.0, 0.0, 0.0, 0.0]);
    let sigma = real(2, &[1.0 / z, n / z, n / z, n * n / z]);
    (state(rho), state(sigma))
}

/// Limits of [`collapsing_pure_pair`]: `(diag(1, 0), diag(0, 1))`.
pub fn collapsing_pure_limits() -> (DensityMatrix, DensityMatrix) {
    (state(real(2, &[1.0, 0.0, 0.0, 0.0])), state(real(2, &[0.0, 0.0, 0.0, 1.0])))
}

/// Blocks of a family on `n + 2 + n` dimensions whose middle block is a
/// scaled copy of [`pseudo_likelihood_pair`], coupled to an `n`-dimensional
/// block on either side by entries `1 / (n + 1)^3`.
pub fn three_block_blocks(n: usize) -> ThreeBlocks {
    let nf = n as f64;
    let (inner_rho, inner_sigma) = pseudo_likelihood_pair(nf);
    let coupling = 1.0 / (nf + 1.0).powi(3);
    ThreeBlocks {
        rho0: inner_rho.op().scale(0.5),
        rho1: CMat::from_element(n, 2, C64::new(coupling, 0.0)),
        rho2: HermitianMatrix::identity(n).scale(1.0 / (2.0 * nf)),
        sigma0: inner_sigma.op().scale(1.0 - 1.0 / (2.0 * nf)),
        sigma1: CMat::from_element(2, n, C64::new(coupling, 0.0)),
        sigma2: HermitianMatrix::identity(n).scale(1.0 / (2.0 * nf * nf)),
    }
}

/// Full states of the three-block family, built entry by entry.
pub fn three_block_pair(n: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    let nf = n as f64;
    let d = 2 * n + 2;
    let c = 2.0 * nf * nf * nf;
    let z = 2.0 * (nf * nf + nf + 1.0);
    let shrink = 1.0 - 1.0 / (2.0 * nf);
    let coupling = 1.0 / (nf + 1.0).powi(3);
    let mut rho = vec![0.0; d * d];
    let mut sigma = vec![0.0; d * d];
    let at = |i: usize, j: usize| i * d + j;
    for i in 0..n {
        rho[at(i, i)] = 1.0 / (2.0 * nf);
        sigma[at(n + 2 + i, n + 2 + i)] = 1.0 / (2.0 * nf * nf);
        for k in 0..2 {
            rho[at(i, n + k)] = coupling;
            rho[at(n + k, i)] = coupling;
            sigma[at(n + k, n + 2 + i)] = coupling;
            sigma[at(n + 2 + i, n + k)] = coupling;
        }
    }
    rho[at(n, n)] = 0.5 * (1.0 - 1.0 / c);
    rho[at(n + 1, n + 1)] = 0.5 / c;
    let inner = [nf * nf, nf * nf + 1.0, nf * nf + 1.0, nf * nf + 2.0 * nf + 2.0];
    for (k, v) in inner.iter().enumerate() {
        sigma[at(n + k / 2, n + k % 2)] = shrink * v / z;
    }
    let tol = ToleranceConfig::default();
    Ok((
        DensityMatrix::new(HermitianMatrix::from_real(d, &rho)?, &tol)?,
        DensityMatrix::new(HermitianMatrix::from_real(d, &sigma)?, &tol)?,
    ))
}

/// Qubit factor for product families: `rho = I / 2` and
/// `sigma_t = [[2t^2 + 2t + 1, 2t], [2t, 2t^2 - 2t + 1]] / (4t^2 + 2)`.
pub fn qubit_factor(t: f64) -> (DensityMatrix, DensityMatrix) {
    let z = 4.0 * t * t + 2.0;
    let sigma = real(2, &[(2.0 * t * t + 2.0 * t + 1.0) / z, 2.0 * t / z, 2.0 * t / z, (2.0 * t * t - 2.0 * t + 1.0) / z]);
    (DensityMatrix::maximally_mixed(2), state(sigma))
}

/// `1 - sqrt(2t^2 / (2t^2 + 1))`, the summand of [`qubit_factor`],
/// evaluated without cancellation.
pub fn qubit_summand(t: f64) -> f64 {
    let q = 2.0 * t * t / (2.0 * t * t + 1.0);
    (1.0 - q) / (1.0 + q.sqrt())
}

/// Product family with factors `qubit_factor(i)`: summands decay like
/// `i^-2`, so the series converges.
pub fn linear_qubit_family(horizon: u64) -> ProductFamily<'static> {
    ProductFamily::new(|i| Ok(qubit_factor(i as f64)), horizon)
}

/// Product family with factors `qubit_factor(sqrt(i))`: summands decay
/// like `i^-1`, so the series diverges.
pub fn sqrt_qubit_family(horizon: u64) -> ProductFamily<'static> {
    ProductFamily::new(|i| Ok(qubit_factor((i as f64).sqrt())), horizon)
}

/// The two product families above with their closed-form summands and
/// the known behaviour of the series attached.
pub fn qubit_family_with_closed_form(sqrt_rate: bool, horizon: u64) -> ProductFamily<'static> {
    if sqrt_rate {
        sqrt_qubit_family(horizon).with_closed_form(|i| qubit_summand((i as f64).sqrt()), SeriesClass::Divergent)
    } else {
        linear_qubit_family(horizon).with_closed_form(|i| qubit_summand(i as f64), SeriesClass::Convergent)
    }
}

/// `lim (1/2 (1 + 1 / cosh(|h| / g(n))))^n`: `exp(-|h|^2 / 4)` for
/// `g = sqrt(n)`, zero for slower rates and one for faster ones.
pub fn spin_overlap_limit(h: &[f64], g: Rate) -> f64 {
    let h2: f64 = h.iter().map(|x| x * x).sum();
    match g {
        Rate::Sqrt => (-h2 / 4.0).exp(),
        Rate::Quarter => {
            if h2 == 0.0 {
                1.0
            } else {
                0.0
            }
        }
        Rate::Linear => 1.0,
    }
}

/// `n` copies of the pure spin state at `0` against `n` copies at
/// `h / g(n)`, with the overlap limit declared.
pub fn spin_overlap_family(h: Vec<f64>, g: Rate, grid: Vec<u64>) -> TensorPowerSequence<'static> {
    let limit = spin_overlap_limit(&h, g);
    TensorPowerSequence::new(
        move |n| {
            let tol = ToleranceConfig::default();
            let theta: Vec<f64> = h.iter().map(|x| x / g.eval(n)).collect();
            Ok((DensityMatrix::new(spin_state(&[0.0, 0.0])?, &tol)?, DensityMatrix::new(spin_state(&theta)?, &tol)?))
        },
        grid,
    )
    .with_overlap_limit(limit)
}
