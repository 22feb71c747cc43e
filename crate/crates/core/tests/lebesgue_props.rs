mod support;

use proptest::prelude::*;
use qleb::lebesgue::*;
use qleb::matcore::*;
use qleb::presets;
use qleb::ToleranceConfig;
use rand::Rng;
use support::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn pure(v: &[C]) -> HermitianMatrix {
    DensityMatrix::pure(v).unwrap().into_op()
}

#[test]
fn excision_examples() {
    let t = tol();
    let mut r = rng(1);
    let rho = random_state(&mut r, 3, 3);
    let sigma = random_state(&mut r, 3, 2);
    let e = excision(&sigma, &rho, &t).unwrap();
    let a = eig_hermitian(&e).eigenvalues;
    let b = eig_hermitian(&sigma).eigenvalues;
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-14));

    let (rho, sigma) = presets::pseudo_likelihood_limits();
    let e = excision(&sigma, &rho, &t).unwrap();
    assert_eq!(e.dim(), 1);
    assert!((e.get(0, 0).re - 0.5).abs() < 1e-15);

    let e = excision(&pure(&[c(0.0, 1.0), c(0.0, 0.0)]), &pure(&[c(0.0, 0.0), c(1.0, 0.0)]), &t).unwrap();
    assert!(e.frobenius_norm() < 1e-15);
    assert!(matches!(excision(&sigma, &HermitianMatrix::zeros(2), &t), Err(qleb::Error::ZeroState)));
}

#[test]
fn predicate_examples() {
    let t = tol();
    let (d1, d2) = (HermitianMatrix::diag(&[1.0, 0.0]), HermitianMatrix::diag(&[0.0, 1.0]));
    assert!(is_singular(&d1, &d2, &t).unwrap());
    let (rho, sigma) = presets::pseudo_likelihood_limits();
    assert!(!is_singular(&rho, &sigma, &t).unwrap());
    assert!(is_abs_continuous(&sigma, &rho, &t).unwrap());
    assert!(is_abs_continuous(&rho, &sigma, &t).unwrap());
    let (rho, sigma) = presets::collapsing_pure_limits();
    assert!(!is_abs_continuous(&sigma, &rho, &t).unwrap());
    let faithful = random_state(&mut rng(2), 4, 4);
    assert!(!is_singular(&faithful, &faithful, &t).unwrap());
    assert!(is_mutually_ac(&faithful, &faithful, &t).unwrap());
    let any = random_state(&mut rng(3), 4, 1);
    assert!(is_abs_continuous(&any, &faithful, &t).unwrap());

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = pure(&[c(1.0, 0.0), c(0.0, 0.0)]);
    let xi = pure(&[c(s, 0.0), c(0.0, s)]);
    assert!(is_mutually_ac(&psi, &xi, &t).unwrap());
    assert!(!is_mutually_ac(&psi, &pure(&[c(0.0, 0.0), c(1.0, 0.0)]), &t).unwrap());
}

#[test]
fn decomposition_of_a_state_against_itself() {
    let t = tol();
    let rho = random_state(&mut rng(4), 4, 4);
    let dec = lebesgue_decompose(&rho, &rho, &t).unwrap();
    assert!(dec.ac.distance(&rho) < 1e-12);
    assert!(dec.perp.frobenius_norm() < 1e-12);
    assert!(dec.sqrt_lr.distance(&HermitianMatrix::identity(4)) < 1e-10);
    assert_eq!(dec.split.dims(), (0, 4, 0));

    let low = random_state(&mut rng(5), 4, 2);
    let r = sqrt_likelihood_ratio(&low, &low, &t).unwrap();
    assert!(r.distance(&support_projector(&low, &t).unwrap()) < 1e-10);
}

#[test]
fn pseudo_likelihood_ratio_matches_closed_form() {
    let t = tol();
    for n in [1.0, 2.0, 10.0, 50.0] {
        let (rho, sigma) = presets::pseudo_likelihood_pair(n);
        let r = sqrt_likelihood_ratio(&sigma, &rho, &t).unwrap();
        assert!(rel_dist(r.as_mat(), &real(&pseudo_likelihood_ratio(n))) < 1e-12, "n = {n}");
    }
}

#[test]
fn collapsing_pure_ratio() {
    let t = tol();
    let (rho, sigma) = presets::collapsing_pure_pair(2.0);
    let r = sqrt_likelihood_ratio(&sigma, &rho, &t).unwrap();
    let want = HermitianMatrix::from_real(2, &[1.0, 2.0, 2.0, 4.0]).unwrap().scale(1.0 / 5f64.sqrt());
    assert!(r.distance(&want) < 1e-12);
}

#[test]
fn rank_two_reference_against_blocks() {
    let t = tol();
    let mut r = rng(6);
    let rho = random_state(&mut r, 4, 2);
    let sigma = random_state(&mut r, 4, 3);
    let dec = lebesgue_decompose(&sigma, &rho, &t).unwrap();
    let o = block_oracle(sigma.as_mat(), rho.as_mat(), t.rank_rel);
    assert_eq!(dec.split.dims(), o.dims);
    assert!(rel_dist(dec.ac.as_mat(), &o.ac) < 1e-10);
    assert!(rel_dist(dec.perp.as_mat(), &o.perp) < 1e-10);
    assert!(dec.verify(&sigma, &rho, &t).unwrap());
}

#[test]
fn faithful_ratio_against_blocks() {
    let t = tol();
    for seed in 0..50 {
        let mut r = rng(100 + seed);
        let d = r.gen_range(2..=6);
        let rho = random_state(&mut r, d, d);
        let rank = r.gen_range(1..=d);
        let sigma = random_state(&mut r, d, rank);
        let got = sqrt_likelihood_ratio(&sigma, &rho, &t).unwrap();
        let o = block_oracle(sigma.as_mat(), rho.as_mat(), t.rank_rel);
        assert!(rel_dist(got.as_mat(), &o.ratio) < 1e-8, "seed {seed}");
    }
}

#[test]
fn log_likelihood_examples() {
    let t = tol();
    let rho = random_state(&mut rng(7), 3, 3);
    assert!(quantum_log_likelihood(&rho, &rho, &t).unwrap().frobenius_norm() < 1e-12);
    let l = quantum_log_likelihood(&HermitianMatrix::diag(&[0.2, 0.3, 0.5]), &HermitianMatrix::diag(&[0.5, 0.25, 0.25]), &t).unwrap();
    let want = HermitianMatrix::diag(&[(0.4f64).ln(), (1.2f64).ln(), (2.0f64).ln()]);
    assert!(l.distance(&want) < 1e-12);
    assert!(matches!(
        quantum_log_likelihood(&rho, &HermitianMatrix::diag(&[1.0, 0.0, 0.0]), &t),
        Err(qleb::Error::NotStrictlyPositive { .. })
    ));
}

fn unitary_conj(u: &CMat, a: &HermitianMatrix) -> HermitianMatrix {
    a.conjugate_by(u)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_form_agrees_with_blocks(seed in any::<u64>()) {
        let t = tol();
        let (rho, sigma, _) = random_pair(&mut rng(seed));
        let dec = lebesgue_decompose(&sigma, &rho, &t).unwrap();
        let o = block_oracle(sigma.as_mat(), rho.as_mat(), t.rank_rel);
        let scale = sigma.frobenius_norm();
        prop_assert!((dec.ac.as_mat() - &o.ac).norm() <= 1e-8 * scale);
        prop_assert!((dec.perp.as_mat() - &o.perp).norm() <= 1e-8 * scale);
        prop_assert!(dec.verify(&sigma, &rho, &t).unwrap());
    }

    #[test]
    fn dominated_states_are_reproduced(seed in any::<u64>()) {
        let t = tol();
        let (a, b, _) = random_pair(&mut rng(seed));
        prop_assume!(is_abs_continuous(&a, &b, &t).unwrap());
        let r = sqrt_likelihood_ratio(&a, &b, &t).unwrap();
        let back = r.sandwich(&b);
        prop_assert!(back.distance(&a) <= 1e-8 * a.frobenius_norm());
    }

    #[test]
    fn singularity_is_symmetric(seed in any::<u64>()) {
        let t = tol();
        let (rho, sigma, _) = random_pair(&mut rng(seed));
        prop_assert_eq!(is_singular(&rho, &sigma, &t).unwrap(), is_singular(&sigma, &rho, &t).unwrap());
    }

    #[test]
    fn unitary_covariance(seed in any::<u64>()) {
        let t = tol();
        let mut r = rng(seed);
        let (rho, sigma, _) = random_pair(&mut r);
        let u = random_unitary(&mut r, rho.dim());
        let dec = lebesgue_decompose(&sigma, &rho, &t).unwrap();
        let rot = lebesgue_decompose(&unitary_conj(&u, &sigma), &unitary_conj(&u, &rho), &t).unwrap();
        let scale = sigma.frobenius_norm();
        prop_assert!(rot.ac.distance(&unitary_conj(&u, &dec.ac)) <= t.eq_rel * scale);
        prop_assert!(rot.perp.distance(&unitary_conj(&u, &dec.perp)) <= t.eq_rel * scale);
    }

    #[test]
    fn parts_carry_all_mass(seed in any::<u64>()) {
        let t = tol();
        let (rho, sigma, _) = random_pair(&mut rng(seed));
        let dec = lebesgue_decompose(&sigma, &rho, &t).unwrap();
        prop_assert!((dec.ac.trace() + dec.perp.trace() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn kernel_freedom_in_ratio(seed in any::<u64>()) {
        let t = tol();
        let mut r = rng(seed);
        let d = r.gen_range(3..=6);
        let u = random_unitary(&mut r, d);
        let k = r.gen_range(1..d);
        let rho = state_on(&u, 0, &weights(&mut r, d - k));
        let sigma = random_state(&mut r, d, d);
        let gamma = state_on(&u, d - k, &weights(&mut r, k));
        let ratio = sqrt_likelihood_ratio(&sigma, &rho, &t).unwrap();
        let shifted = &ratio + &gamma;
        prop_assert!(shifted.sandwich(&rho).distance(&ratio.sandwich(&rho)) <= 1e-12);
    }
}
