use super::{ContiguityReport, Criterion, CriterionSettings, StateSequence, Verdict};
use crate::error::{Error, Result};
use crate::lebesgue::is_abs_continuous;
use crate::tolerance::ToleranceConfig;

/// For sequences with limits, `sigma_n` is contiguous with respect to
/// `rho_n` exactly when `sigma_inf << rho_inf`.
///
/// The samples are used only to confirm that the declared limits are
/// reached: if either distance at the horizon exceeds `limit_tol` the
/// verdict is `Inconclusive`.
pub fn limit_criterion(seq: &StateSequence, tol: &ToleranceConfig, settings: &CriterionSettings) -> Result<ContiguityReport> {
    let (rho_inf, sigma_inf) = seq.limits.as_ref().ok_or(Error::MissingLimits)?;
    if rho_inf.dim() != sigma_inf.dim() {
        return Err(Error::DimMismatch { expected: rho_inf.dim(), found: sigma_inf.dim() });
    }
    let d = rho_inf.dim();
    let mut report = ContiguityReport::new(Criterion::Limit);
    let mut last = (f64::INFINITY, f64::INFINITY);
    for &n in &seq.grid {
        let (rho, sigma) = seq.eval(n)?;
        if rho.dim() != d || sigma.dim() != d {
            return Err(Error::DimVaries { n });
        }
        last = (rho.distance(rho_inf), sigma.distance(sigma_inf));
        report.push(n, "rho_limit_distance", last.0);
        report.push(n, "sigma_limit_distance", last.1);
    }
    if seq.grid.is_empty() {
        report.notes.push("empty grid".into());
        return Ok(report);
    }
    if last.0 > settings.limit_tol || last.1 > settings.limit_tol {
        report.notes.push(format!(
            "declared limits not reached at horizon {} (distances {:e}, {:e}; accepted {:e})",
            seq.horizon(),
            last.0,
            last.1,
            settings.limit_tol
        ));
        return Ok(report);
    }
    let ac = is_abs_continuous(sigma_inf, rho_inf, tol)?;
    report.verdict = if ac { Verdict::Contiguous } else { Verdict::NotContiguous };
    report.notes.push(if ac {
        "limit of sigma is absolutely continuous with respect to limit of rho".into()
    } else {
        "limit of sigma is not absolutely continuous with respect to limit of rho".into()
    });
    Ok(report)
}
