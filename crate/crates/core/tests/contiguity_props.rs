mod support;

use proptest::prelude::*;
use qleb::contiguity::*;
use qleb::lebesgue::{sqrt_likelihood_ratio, DensityMatrix};
use qleb::matcore::*;
use qleb::presets;
use qleb::qlan::Rate;
use qleb::ToleranceConfig;
use rand::Rng;
use support::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn settings() -> CriterionSettings {
    CriterionSettings::default()
}

/// The pseudo-likelihood reference state has an eigenvalue `1 / (2 n^3)`, which
/// falls below the default rank cutoff once `n` reaches about 800.
fn graded() -> ToleranceConfig {
    ToleranceConfig::profile("graded").unwrap()
}

fn dm(op: HermitianMatrix) -> DensityMatrix {
    DensityMatrix::new(op, &tol()).unwrap()
}

fn modified_ratio(n: f64) -> HermitianMatrix {
    let k = n / (2.0 * (n * n + n + 1.0)).sqrt();
    HermitianMatrix::from_real(2, &[k, k, k, k]).unwrap()
}

#[test]
fn tail_mass_examples() {
    let t = graded();
    let (rho, sigma) = presets::pseudo_likelihood_pair(1e4);
    let r = sqrt_likelihood_ratio(&sigma, &rho, &t).unwrap();
    let top = eig_hermitian(&r).max_eigenvalue();
    assert_eq!(tail_mass(&rho, &r, top * 1.0001).unwrap(), 0.0);
    assert!((tail_mass(&rho, &r, 1.0).unwrap() - 0.5).abs() < 1e-3);
    for n in [1.0, 10.0, 1e3, 1e6] {
        let (rho, _) = presets::pseudo_likelihood_pair(n);
        assert_eq!(tail_mass(&rho, &modified_ratio(n), 2.0).unwrap(), 0.0);
    }
    assert!(matches!(tail_mass(&rho, &HermitianMatrix::diag(&[1.0, -1.0]), 1.0), Err(qleb::Error::NotPsd { .. })));
}

#[test]
fn l2_defect_of_the_modified_ratio() {
    let t = graded();
    assert_eq!(l2_norm_sq(&HermitianMatrix::identity(2).scale(0.5), &HermitianMatrix::zeros(2)).unwrap(), 0.0);
    let mut last = f64::INFINITY;
    for n in [1.0, 10.0, 100.0, 1000.0] {
        let (rho, sigma) = presets::pseudo_likelihood_pair(n);
        let r = sqrt_likelihood_ratio(&sigma, &rho, &t).unwrap();
        let o = &modified_ratio(n) - &r;
        let v = l2_norm_sq(&rho, &o).unwrap();
        assert!(v < last);
        last = v;
        // Tr rho (Rbar - R)^2 = n / (n^2 + n + 1).
        assert!((v - n / (n * n + n + 1.0)).abs() <= 1e-10 * v, "n = {n}");
    }
}

#[test]
fn pseudo_likelihood_mass_is_one() {
    let t = graded();
    for n in log_grid(1, 1000, 4) {
        let (rho, sigma) = presets::pseudo_likelihood_pair(n as f64);
        let r = sqrt_likelihood_ratio(&sigma, &rho, &t).unwrap();
        assert!((r.sandwich(&rho).trace() - 1.0).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn limit_criterion_examples() {
    let t = tol();
    let grid = log_grid(1, 10_000, 3);
    let (lr, ls) = presets::pseudo_likelihood_limits();
    let seq = StateSequence::new(|n| Ok(presets::pseudo_likelihood_pair(n as f64)), grid.clone()).with_limits(lr, ls);
    assert_eq!(limit_criterion(&seq, &t, &settings()).unwrap().verdict, Verdict::Contiguous);

    let (lr, ls) = presets::collapsing_pure_limits();
    let seq = StateSequence::new(|n| Ok(presets::collapsing_pure_pair(n as f64)), grid.clone()).with_limits(lr, ls);
    assert_eq!(limit_criterion(&seq, &t, &settings()).unwrap().verdict, Verdict::NotContiguous);

    let s = random_state(&mut rng(9), 3, 3);
    let (a, b) = (dm(s.clone()), dm(s));
    let seq = StateSequence::new(|_| Ok((a.clone(), b.clone())), grid.clone()).with_limits(a.clone(), b.clone());
    assert_eq!(limit_criterion(&seq, &t, &settings()).unwrap().verdict, Verdict::Contiguous);

    let seq = StateSequence::new(|_| Ok((a.clone(), b.clone())), grid.clone());
    assert!(matches!(limit_criterion(&seq, &t, &settings()), Err(qleb::Error::MissingLimits)));
}

#[test]
fn limit_criterion_refuses_wrong_limits() {
    let t = tol();
    let (lr, ls) = presets::collapsing_pure_limits();
    let seq = StateSequence::new(|n| Ok(presets::pseudo_likelihood_pair(n as f64)), log_grid(1, 1000, 2)).with_limits(lr, ls);
    assert_eq!(limit_criterion(&seq, &t, &settings()).unwrap().verdict, Verdict::Inconclusive);
}

#[test]
fn pure_criterion_examples() {
    let t = tol();
    let grid = log_grid(10, 1_000_000, 2);
    let h = vec![1.0, 0.5];
    let fam = presets::spin_overlap_family(h.clone(), Rate::Sqrt, grid.clone());
    let rep = pure_criterion(&fam, &t, &settings()).unwrap();
    assert_eq!(rep.verdict, Verdict::Contiguous);
    for (n, v) in rep.series("overlap") {
        assert!((v - spin_overlap(&h, n as f64, (n as f64).sqrt())).abs() <= 1e-10, "n = {n}");
    }
    let fam = presets::spin_overlap_family(h.clone(), Rate::Quarter, grid.clone());
    assert_eq!(pure_criterion(&fam, &t, &settings()).unwrap().verdict, Verdict::NotContiguous);

    let p = dm(random_state(&mut rng(10), 3, 1));
    let seq = StateSequence::new(|_| Ok((p.clone(), p.clone())), grid.clone());
    assert_eq!(pure_criterion(&seq, &t, &settings()).unwrap().verdict, Verdict::Contiguous);

    let mixed = dm(HermitianMatrix::identity(2).scale(0.5));
    let seq = StateSequence::new(|_| Ok((mixed.clone(), mixed.clone())), grid);
    assert!(matches!(pure_criterion(&seq, &t, &settings()), Err(qleb::Error::NotPure { .. })));
}

#[test]
fn kakutani_numeric_matches_closed_form() {
    let t = tol();
    for sqrt_rate in [false, true] {
        let fam = presets::qubit_family_with_closed_form(sqrt_rate, 2000);
        let rep = kakutani_criterion(&fam, &t, &settings()).unwrap();
        assert!(rep.last("closed_form_max_gap").unwrap() <= 1e-12);
        let numeric = if sqrt_rate { presets::sqrt_qubit_family(2000) } else { presets::linear_qubit_family(2000) };
        assert_eq!(kakutani_criterion(&numeric, &t, &settings()).unwrap().verdict, rep.verdict);
    }
}

#[test]
fn kakutani_identical_factors() {
    let s = dm(random_state(&mut rng(11), 2, 2));
    let fam = ProductFamily::new(|_| Ok((s.clone(), s.clone())), 100);
    assert_eq!(kakutani_criterion(&fam, &tol(), &settings()).unwrap().verdict, Verdict::Contiguous);
}

#[test]
fn kakutani_rejects_singular_factor() {
    let fam = ProductFamily::new(|_| Ok(presets::collapsing_pure_limits()), 10);
    assert!(matches!(kakutani_criterion(&fam, &tol(), &settings()), Err(qleb::Error::FactorNotAc { index: 1 })));
}

fn three_block_sequence(grid: Vec<u64>) -> BlockSequence<'static> {
    let (lr, ls) = presets::pseudo_likelihood_limits();
    BlockSequence::new(|n| Ok(presets::three_block_blocks(n as usize)), grid, InnerCriterion::Limit { rho: lr, sigma: ls })
        .with_states(|n| presets::three_block_pair(n as usize))
}

#[test]
fn block_criterion_on_three_block_family() {
    let rep = block_criterion_diagnostics(&three_block_sequence(vec![1, 2, 4, 8, 16, 32, 64, 128, 256]), &tol(), &settings()).unwrap();
    assert_eq!(rep.verdict, Verdict::Contiguous, "{:?}", rep.notes);
}

#[test]
fn block_criterion_with_half_mass_is_inconclusive() {
    let (lr, ls) = presets::pseudo_likelihood_limits();
    let seq = BlockSequence::new(
        |n| {
            let mut b = presets::three_block_blocks(n as usize);
            b.sigma0 = b.sigma0.scale(0.5 / b.sigma0.trace());
            Ok(b)
        },
        vec![4, 16, 64, 256],
        InnerCriterion::Limit { rho: lr, sigma: ls },
    );
    let rep = block_criterion_diagnostics(&seq, &tol(), &settings()).unwrap();
    assert_eq!(rep.verdict, Verdict::Inconclusive);
    assert!(rep.notes.iter().any(|n| n.contains("hypothesis failed")));
}

#[test]
fn block_criterion_with_equal_inner_pair() {
    let (lr, _) = presets::pseudo_likelihood_limits();
    let seq = BlockSequence::new(
        |n| {
            let (rho, _) = presets::pseudo_likelihood_pair(n as f64);
            let w = 1.0 / (n as f64 + 1.0);
            Ok(ThreeBlocks {
                rho0: rho.op().scale(0.5),
                rho1: CMat::zeros(1, 2),
                rho2: HermitianMatrix::identity(1).scale(0.5),
                sigma0: rho.op().scale(1.0 - w),
                sigma1: CMat::zeros(2, 1),
                sigma2: HermitianMatrix::identity(1).scale(w),
            })
        },
        log_grid(1, 10_000, 2),
        InnerCriterion::Limit { rho: lr.clone(), sigma: lr },
    );
    assert_eq!(block_criterion_diagnostics(&seq, &tol(), &settings()).unwrap().verdict, Verdict::Contiguous);
}

#[test]
fn block_criterion_detects_inconsistent_blocks() {
    let (lr, ls) = presets::pseudo_likelihood_limits();
    let seq = BlockSequence::new(|n| Ok(presets::three_block_blocks(n as usize)), vec![3], InnerCriterion::Limit { rho: lr, sigma: ls })
        .with_states(|n| presets::three_block_pair(n as usize + 1));
    assert!(matches!(block_criterion_diagnostics(&seq, &tol(), &settings()), Err(qleb::Error::BlocksInconsistent { .. })));
}

#[test]
fn d_infinitesimal_diagnostic_shrinks() {
    let p = pauli();
    let rep = d_infinitesimal_diagnostic(
        |n| {
            let rho = DensityMatrix::maximally_mixed(2);
            Ok((rho, vec![p[0].clone()], vec![p[2].scale(1.0 / n as f64)]))
        },
        &[1, 10, 100],
        &[vec![(vec![1.0], vec![1.0]), (vec![-0.5], vec![2.0])]],
    )
    .unwrap();
    assert_eq!(rep.verdict, Verdict::DiagnosticsOnly);
    let s = rep.series("max_deviation");
    assert!(s.windows(2).all(|w| w[1].1 < w[0].1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tail_mass_monotone_and_partitions(seed in any::<u64>(), m1 in 0.01f64..5.0, m2 in 0.01f64..5.0) {
        let t = tol();
        let mut r = rng(seed);
        let d = r.gen_range(2..=5);
        let rho = random_state(&mut r, d, d);
        let sigma = random_state(&mut r, d, d);
        let ratio = sqrt_likelihood_ratio(&sigma, &rho, &t).unwrap();
        let (lo, hi) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
        prop_assert!(tail_mass(&rho, &ratio, hi).unwrap() <= tail_mass(&rho, &ratio, lo).unwrap() + 1e-15);

        // Truncated part computed independently from the reference spectrum.
        let e = eig(&embed(ratio.as_mat()));
        let mut head = RMat::zeros(2 * d, 2 * d);
        for k in 0..2 * d {
            if e.values[k] <= lo {
                let v = e.vectors.column(k);
                head += v * v.transpose() * (e.values[k] * e.values[k] * 0.5);
            }
        }
        let inside = (embed(rho.as_mat()) * head).trace() ;
        let total = ratio.sandwich(&rho).trace();
        prop_assert!((tail_mass(&rho, &ratio, lo).unwrap() + inside - total).abs() <= 1e-12);
    }

    #[test]
    fn verdicts_are_unitarily_invariant(seed in any::<u64>()) {
        let t = tol();
        let mut r = rng(seed);
        let u = random_unitary(&mut r, 2);
        let rot = |m: &DensityMatrix| dm(m.op().conjugate_by(&u));
        let grid = log_grid(1, 1000, 2);
        let (lr, ls) = presets::pseudo_likelihood_limits();
        let plain = StateSequence::new(|n| Ok(presets::pseudo_likelihood_pair(n as f64)), grid.clone()).with_limits(lr.clone(), ls.clone());
        let turned = StateSequence::new(|n| {
            let (a, b) = presets::pseudo_likelihood_pair(n as f64);
            Ok((rot(&a), rot(&b)))
        }, grid.clone()).with_limits(rot(&lr), rot(&ls));
        prop_assert_eq!(limit_criterion(&plain, &t, &settings()).unwrap().verdict, limit_criterion(&turned, &t, &settings()).unwrap().verdict);

        let (cr, cs) = presets::collapsing_pure_limits();
        let plain = StateSequence::new(|n| Ok(presets::collapsing_pure_pair(n as f64)), grid.clone()).with_limits(cr.clone(), cs.clone());
        let turned = StateSequence::new(|n| {
            let (a, b) = presets::collapsing_pure_pair(n as f64);
            Ok((rot(&a), rot(&b)))
        }, grid).with_limits(rot(&cr), rot(&cs));
        prop_assert_eq!(limit_criterion(&plain, &t, &settings()).unwrap().verdict, limit_criterion(&turned, &t, &settings()).unwrap().verdict);
    }
}
