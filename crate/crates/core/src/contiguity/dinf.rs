use super::{ContiguityReport, Criterion, Verdict};
use crate::error::{Error, Result};
use crate::lebesgue::DensityMatrix;
use crate::matcore::{trace_with, unitary_exp, CMat, HermitianMatrix, C64};

/// One product query: for each factor `t`, the coefficients `(xi_t, eta_t)`
/// multiplying `Z` and `O`.
pub type DiagnosticQuery = Vec<(Vec<f64>, Vec<f64>)>;

fn combine(ops: &[HermitianMatrix], coeffs: &[f64], d: usize) -> Result<HermitianMatrix> {
    if ops.len() != coeffs.len() {
        return Err(Error::DimMismatch { expected: ops.len(), found: coeffs.len() });
    }
    let mut acc = HermitianMatrix::zeros(d);
    for (op, &c) in ops.iter().zip(coeffs) {
        acc = &acc + &op.scale(c);
    }
    Ok(acc)
}

fn product_trace(rho: &DensityMatrix, factors: &[HermitianMatrix]) -> C64 {
    let d = rho.dim();
    let mut prod = CMat::identity(d, d);
    for f in factors {
        prod *= unitary_exp(f, 1.0);
    }
    trace_with(rho, &prod)
}

/// Finite-grid check of whether perturbing `Z` by `O` changes the
/// quasi-characteristic function: for each `n` reports
/// `max_q |Tr rho prod_t e^{i(xi_t Z + eta_t O)} - Tr rho prod_t e^{i xi_t Z}|`.
///
/// The statement being probed is asymptotic, so the report only ever
/// carries `DiagnosticsOnly`.
pub fn d_infinitesimal_diagnostic(
    eval: impl Fn(u64) -> Result<(DensityMatrix, Vec<HermitianMatrix>, Vec<HermitianMatrix>)>,
    grid: &[u64],
    queries: &[DiagnosticQuery],
) -> Result<ContiguityReport> {
    let mut report = ContiguityReport::new(Criterion::DInfinitesimal);
    report.verdict = Verdict::DiagnosticsOnly;
    for &n in grid {
        let (rho, z, o) = eval(n)?;
        let d = rho.dim();
        let mut worst = 0.0_f64;
        for q in queries {
            let mut perturbed = Vec::with_capacity(q.len());
            let mut plain = Vec::with_capacity(q.len());
            for (xi, eta) in q {
                let zx = combine(&z, xi, d)?;
                perturbed.push(&zx + &combine(&o, eta, d)?);
                plain.push(zx);
            }
            worst = worst.max((product_trace(&rho, &perturbed) - product_trace(&rho, &plain)).norm());
        }
        report.push(n, "max_deviation", worst);
    }
    Ok(report)
}
