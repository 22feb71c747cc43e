use serde::Serialize;

use super::{ContiguityReport, Criterion, CriterionSettings, Verdict};
use crate::error::{Error, Result};
use crate::lebesgue::{fidelity, is_abs_continuous, DensityMatrix};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesClass {
    Convergent,
    Divergent,
}

/// Product states `rho_n = rho_1 (x) ... (x) rho_n` and likewise for `sigma`,
/// given factor by factor. Each `sigma_i` must be absolutely continuous
/// with respect to `rho_i`.
pub struct ProductFamily<'a> {
    factor: Box<dyn Fn(u64) -> Result<(DensityMatrix, DensityMatrix)> + 'a>,
    pub horizon: u64,
    closed_form: Option<(Box<dyn Fn(u64) -> f64 + 'a>, SeriesClass)>,
}

impl<'a> ProductFamily<'a> {
    /// `factor(i)` returns `(rho_i, sigma_i)` for `i >= 1`.
    pub fn new(factor: impl Fn(u64) -> Result<(DensityMatrix, DensityMatrix)> + 'a, horizon: u64) -> Self {
        ProductFamily { factor: Box::new(factor), horizon, closed_form: None }
    }

    /// Supplies the summands `1 - Tr(rho_i R_i)` in closed form together
    /// with the known behaviour of their series, which then decides the
    /// verdict.
    pub fn with_closed_form(mut self, summand: impl Fn(u64) -> f64 + 'a, class: SeriesClass) -> Self {
        self.closed_form = Some((Box::new(summand), class));
        self
    }

    pub fn factor(&self, i: u64) -> Result<(DensityMatrix, DensityMatrix)> {
        (self.factor)(i)
    }
}

/// Least-squares slope of `log s_i` against `log i`, negated.
fn decay_exponent(points: &[(u64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|&(i, s)| ((i as f64).ln(), s.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| -sxy / sxx)
}

fn is_report_point(i: u64, horizon: u64) -> bool {
    i == horizon || i.is_power_of_two() || (i % 1000 == 0)
}

/// Product criterion: contiguity holds iff `sum_i (1 - Tr(rho_i R_i))` is
/// finite, where `Tr(rho_i R_i)` is the fidelity of the factors.
///
/// The summands are computed for `i = 1..=horizon` and their decay exponent
/// `p` is fitted on the second half. `p > 1 + margin` gives `Contiguous`,
/// `p <= 1 + harmonic_slack` gives `NotContiguous` (the harmonic rate
/// already diverges), anything in between is `Inconclusive`.
pub fn kakutani_criterion(family: &ProductFamily, tol: &ToleranceConfig, settings: &CriterionSettings) -> Result<ContiguityReport> {
    let mut report = ContiguityReport::new(Criterion::Kakutani);
    let horizon = family.horizon.max(1);
    let mut partial = 0.0;
    let mut summands = Vec::with_capacity(horizon as usize);
    let mut closed_gap = 0.0_f64;
    for i in 1..=horizon {
        let (rho, sigma) = family.factor(i)?;
        if !is_abs_continuous(&sigma, &rho, tol)? {
            return Err(Error::FactorNotAc { index: i });
        }
        let s = 1.0 - fidelity(&sigma, &rho, tol)?;
        partial += s;
        summands.push((i, s));
        if let Some((f, _)) = &family.closed_form {
            closed_gap = closed_gap.max((f(i) - s).abs());
        }
        if is_report_point(i, horizon) {
            report.push(i, "summand", s);
            report.push(i, "partial_sum", partial);
        }
    }
    let fitted = decay_exponent(&summands[summands.len() / 2..]);
    if let Some(p) = fitted {
        report.push(horizon, "fitted_exponent", p);
    }
    if let Some((_, class)) = &family.closed_form {
        report.push(horizon, "closed_form_max_gap", closed_gap);
        report.verdict = match class {
            SeriesClass::Convergent => Verdict::Contiguous,
            SeriesClass::Divergent => Verdict::NotContiguous,
        };
        report.notes.push(format!("declared series behaviour: {class:?}"));
        return Ok(report);
    }
    match fitted {
        Some(p) if p > 1.0 + settings.kakutani_margin => {
            report.verdict = Verdict::Contiguous;
            report.notes.push(format!("summands decay like i^-{p:.4}, series converges"));
        }
        Some(p) if p <= 1.0 + settings.harmonic_slack => {
            report.verdict = Verdict::NotContiguous;
            report.notes.push(format!("summands decay like i^-{p:.4}, series diverges"));
        }
        Some(p) => report.notes.push(format!("decay exponent {p:.4} too close to 1 to decide")),
        None => {
            let tail_max = summands[summands.len() / 2..].iter().fold(0.0_f64, |m, s| m.max(s.1.abs()));
            if tail_max <= 1e-14 {
                report.verdict = Verdict::Contiguous;
                report.notes.push("summands vanish on the tail".into());
            } else {
                report.notes.push("too few positive summands to fit a decay exponent".into());
            }
        }
    }
    Ok(report)
}
