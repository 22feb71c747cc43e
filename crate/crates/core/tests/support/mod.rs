//! Random inputs and independent reference constructions for the
//! integration tests.
//!
//! The references diagonalise the real symmetric embedding with nalgebra's
//! eigensolver and use explicit block algebra, so they share no numerical
//! code with the library beyond the matrix type.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qleb::gaussian::ExtendedGaussianParams;
use qleb::matcore::{CMat, HermitianMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type C = Complex64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> CMat {
    gaussian_matrix(rng, d, d).qr().q()
}

pub fn random_hermitian(rng: &mut impl Rng, d: usize) -> HermitianMatrix {
    let g = gaussian_matrix(rng, d, d);
    HermitianMatrix::from_hermitian_part(&g + g.adjoint())
}

/// `W diag(p) W*` where `W` holds `p.len()` orthonormal columns of `u`
/// starting at `offset`.
pub fn state_on(u: &CMat, offset: usize, p: &[f64]) -> HermitianMatrix {
    let d = u.nrows();
    let mut m = CMat::zeros(d, d);
    for (k, &w) in p.iter().enumerate() {
        let v = u.column(offset + k);
        m += v * v.adjoint() * c(w, 0.0);
    }
    HermitianMatrix::from_hermitian_part(m)
}

/// Normalized weights in `[0.1, 1]` before normalization.
pub fn weights(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Density matrix of rank `rank` with a random eigenbasis.
pub fn random_state(rng: &mut impl Rng, d: usize, rank: usize) -> HermitianMatrix {
    let u = random_unitary(rng, d);
    state_on(&u, 0, &weights(rng, rank))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// Independent random eigenbases and ranks.
    Generic,
    /// `sigma` lives on the kernel of `rho`.
    Orthogonal,
    /// Both states faithful.
    Faithful,
    /// Two pure states.
    Pure,
}

/// A random pair `(rho, sigma)` with dimension in `2..=6`.
pub fn random_pair(rng: &mut impl Rng) -> (HermitianMatrix, HermitianMatrix, PairKind) {
    let d = rng.gen_range(2..=6);
    match rng.gen_range(0..10) {
        0 | 1 => {
            let u = random_unitary(rng, d);
            let r = rng.gen_range(1..d);
            let s = rng.gen_range(1..=d - r);
            let rho = state_on(&u, 0, &weights(rng, r));
            let sigma = state_on(&u, r, &weights(rng, s));
            (rho, sigma, PairKind::Orthogonal)
        }
        2 => (random_state(rng, d, d), random_state(rng, d, d), PairKind::Faithful),
        3 => (random_state(rng, d, 1), random_state(rng, d, 1), PairKind::Pure),
        _ => {
            let r = rng.gen_range(1..=d);
            let s = rng.gen_range(1..=d);
            (random_state(rng, d, r), random_state(rng, d, s), PairKind::Generic)
        }
    }
}

pub fn rel_dist(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

// Reference linear algebra. A Hermitian `X + iY` is carried as the real
// symmetric `[[X, -Y], [Y, X]]`; sums, products, inverses and spectral
// functions commute with this embedding. nalgebra's symmetric QR stops too
// early under its default threshold (eigenvector residuals up to 1e-8 were
// seen), so it is driven with a far smaller one and the residual is
// asserted.

pub type RMat = DMatrix<f64>;

pub fn embed(a: &CMat) -> RMat {
    let d = a.nrows();
    let k = a.ncols();
    let mut m = RMat::zeros(2 * d, 2 * k);
    for i in 0..d {
        for j in 0..k {
            let z = a[(i, j)];
            m[(i, j)] = z.re;
            m[(i, j + k)] = -z.im;
            m[(i + d, j)] = z.im;
            m[(i + d, j + k)] = z.re;
        }
    }
    m
}

pub fn unembed(m: &RMat) -> CMat {
    let d = m.nrows() / 2;
    let k = m.ncols() / 2;
    CMat::from_fn(d, k, |i, j| c(m[(i, j)], m[(i + d, j)]))
}

pub struct Eig {
    pub values: Vec<f64>,
    pub vectors: RMat,
}

pub fn eig(m: &RMat) -> Eig {
    let h = (m + m.transpose()) * 0.5;
    let e = h.clone().try_symmetric_eigen(1e-100, 100_000).expect("reference eigensolver did not converge");
    let lam = RMat::from_diagonal(&e.eigenvalues);
    let res = (&h * &e.eigenvectors - &e.eigenvectors * lam).norm();
    assert!(res <= 1e-11 * h.norm() + 1e-15, "reference eigensolver residual {res:e}");
    Eig { values: e.eigenvalues.iter().copied().collect(), vectors: e.eigenvectors }
}

pub fn func(m: &RMat, f: impl Fn(f64) -> f64) -> RMat {
    let e = eig(m);
    let fl = RMat::from_diagonal(&nalgebra::DVector::from_iterator(e.values.len(), e.values.iter().map(|&x| f(x))));
    &e.vectors * fl * e.vectors.transpose()
}

pub fn sqrt_pd(m: &RMat) -> RMat {
    func(m, |x| x.max(0.0).sqrt())
}

pub fn inv_pd(m: &RMat) -> RMat {
    func(m, |x| 1.0 / x)
}

/// Complex-matrix inverse of a positive definite matrix via the embedding.
pub fn inv_pd_c(a: &CMat) -> CMat {
    unembed(&inv_pd(&embed(a)))
}

/// `a # b^{-1}` for strictly positive `a`, `b`: the positive solution of
/// `X b X = a`, written as `b^{-1/2} (b^{1/2} a b^{1/2})^{1/2} b^{-1/2}`.
pub fn gm_inv(a: &RMat, b: &RMat) -> RMat {
    let bh = sqrt_pd(b);
    let bmh = func(b, |x| 1.0 / x.sqrt());
    &bmh * sqrt_pd(&(&bh * a * &bh)) * &bmh
}

fn columns(m: &RMat, idx: &[usize]) -> RMat {
    let cols: Vec<_> = idx.iter().map(|&k| m.column(k).into_owned()).collect();
    if cols.is_empty() {
        RMat::zeros(m.nrows(), 0)
    } else {
        RMat::from_columns(&cols)
    }
}

/// Eigenvector columns with eigenvalue above / at most `cut * max`.
pub fn split_columns(m: &RMat, cut: f64) -> (RMat, RMat) {
    let e = eig(m);
    let top = e.values.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs()));
    let (sup, ker): (Vec<usize>, Vec<usize>) = (0..e.values.len()).partition(|&k| e.values[k] > cut * top);
    (columns(&e.vectors, &sup), columns(&e.vectors, &ker))
}

pub struct BlockOracle {
    pub ac: CMat,
    pub perp: CMat,
    /// `E* (0 + sigma_0 # rho_0^{-1} + 0) E` in the original basis.
    pub ratio: CMat,
    /// Complex dimensions of the three blocks.
    pub dims: (usize, usize, usize),
}

/// Three-block construction of the Lebesgue decomposition of `sigma`
/// with respect to `rho`: split the space into the kernel of the excision
/// inside `supp rho`, its support, and `ker rho`, then read off the
/// Schur complement.
pub fn block_oracle(sigma: &CMat, rho: &CMat, cut: f64) -> BlockOracle {
    let (s, r) = (embed(sigma), embed(rho));
    let n = s.nrows();
    let (supp_rho, h3) = split_columns(&r, cut);
    let exc = supp_rho.transpose() * &s * &supp_rho;
    let smax = eig(&s).values.iter().fold(0.0_f64, |acc, &x| acc.max(x));
    let ee = eig(&exc);
    let (h2_idx, h1_idx): (Vec<usize>, Vec<usize>) = (0..ee.values.len()).partition(|&k| ee.values[k] > cut * smax);
    let dims = (h1_idx.len() / 2, h2_idx.len() / 2, h3.ncols() / 2);
    if h2_idx.is_empty() {
        return BlockOracle { ac: CMat::zeros(n / 2, n / 2), perp: sigma.clone(), ratio: CMat::zeros(n / 2, n / 2), dims };
    }
    let h2 = &supp_rho * columns(&ee.vectors, &h2_idx);
    let s0 = h2.transpose() * &s * &h2;
    let alpha = h2.transpose() * &s * &h3;
    let beta = h3.transpose() * &s * &h3;
    let r0 = h2.transpose() * &r * &h2;
    let s0i = inv_pd(&s0);

    let mut ac = &h2 * &s0 * h2.transpose();
    let mut perp = RMat::zeros(n, n);
    let mut e_rows = h2.transpose();
    if h3.ncols() > 0 {
        let a_s = alpha.transpose() * &s0i * &alpha;
        ac += &h2 * &alpha * h3.transpose() + &h3 * alpha.transpose() * h2.transpose() + &h3 * &a_s * h3.transpose();
        perp = &h3 * (&beta - &a_s) * h3.transpose();
        // Row block of E acting on (H2, H3) coordinates: x2 + s0^{-1} alpha x3.
        e_rows += &s0i * &alpha * h3.transpose();
    }
    let ratio = e_rows.transpose() * gm_inv(&s0, &r0) * &e_rows;
    BlockOracle { ac: unembed(&ac), perp: unembed(&perp), ratio: unembed(&ratio), dims }
}

/// The operator from the proof that `a << b` implies `a = R b R`:
/// `R = a_0 # b_0^{-1}` on `supp a`, zero elsewhere. Returns `None` when
/// the excision of `b` onto `supp a` is not strictly positive.
pub fn dominating_ratio(a: &CMat, b: &CMat, cut: f64) -> Option<CMat> {
    let (a, b) = (embed(a), embed(b));
    let (supp, _) = split_columns(&a, cut);
    let a0 = supp.transpose() * &a * &supp;
    let b0 = supp.transpose() * &b * &supp;
    let e = eig(&b0);
    let top = e.values.iter().fold(0.0_f64, |acc, &x| acc.max(x));
    let low = e.values.iter().fold(f64::INFINITY, |acc, &x| acc.min(x));
    if !(top > 0.0 && low > cut * top) {
        return None;
    }
    Some(unembed(&(&supp * gm_inv(&a0, &b0) * supp.transpose())))
}

// Closed forms.

/// `n / sqrt(2 (n^2 + n + 1)) [[1, 1], [1, 2n + 1]]`.
pub fn pseudo_likelihood_ratio(n: f64) -> DMatrix<f64> {
    let k = n / (2.0 * (n * n + n + 1.0)).sqrt();
    DMatrix::from_row_slice(2, 2, &[k, k, k, k * (2.0 * n + 1.0)])
}

/// `(1/2 (1 + 1/cosh(|h| / g)))^n`.
pub fn spin_overlap(h: &[f64], n: f64, g: f64) -> f64 {
    let t = h.iter().map(|x| x * x).sum::<f64>().sqrt() / g;
    (n * (0.5 * (1.0 + 1.0 / t.cosh())).ln()).exp()
}

/// `1 - sqrt(2 t^2 / (2 t^2 + 1))`, written to avoid cancellation.
pub fn qubit_summand(t: f64) -> f64 {
    let q = 2.0 * t * t / (2.0 * t * t + 1.0);
    (1.0 - q) / (1.0 + q.sqrt())
}

pub fn real(m: &DMatrix<f64>) -> CMat {
    m.map(|x| c(x, 0.0))
}

// Gaussian parameters.

pub fn random_psd(r: &mut impl Rng, d: usize) -> HermitianMatrix {
    let g = gaussian_matrix(r, d, d);
    HermitianMatrix::from_hermitian_part(&g * g.adjoint())
}

/// `(mu, Sigma, kappa, s^2)` read off a random PSD `(d+1) x (d+1)` matrix.
pub fn random_ext(r: &mut impl Rng, d: usize) -> ExtendedGaussianParams {
    let m = random_psd(r, d + 1);
    let a = m.as_mat();
    ExtendedGaussianParams {
        mu: (0..d).map(|_| r.gen_range(-2.0..2.0)).collect(),
        sigma: HermitianMatrix::from_hermitian_part(a.view((0, 0), (d, d)).into_owned()),
        kappa: (0..d).map(|i| a[(i, d)]).collect(),
        s2: a[(d, d)].re,
    }
}
