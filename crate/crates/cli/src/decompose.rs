use clap::Args;
use qleb::lebesgue::{is_abs_continuous, is_singular, lebesgue_decompose};
use qleb::ToleranceConfig;
use serde_json::json;

use crate::doc::{read_matrix, MatrixDocument};
use crate::report::ReportDocument;
use crate::CliError;

#[derive(Args)]
pub struct DecomposeArgs {
    /// State to decompose (MatrixDocument JSON).
    #[arg(long)]
    sigma: String,
    /// Reference state (MatrixDocument JSON).
    #[arg(long)]
    rho: String,
}

pub fn run(a: &DecomposeArgs, tol: &ToleranceConfig) -> Result<ReportDocument, CliError> {
    let (sd, sv) = read_matrix(&a.sigma)?;
    let (rd, rv) = read_matrix(&a.rho)?;
    let sigma = sd.to_state("sigma", tol)?;
    let rho = rd.to_state("rho", tol)?;
    if sigma.dim() != rho.dim() {
        return Err(CliError::input(format!("sigma has dimension {} but rho has {}", sigma.dim(), rho.dim())));
    }
    let numeric = |e: qleb::Error| CliError::input(e.to_string());
    let dec = lebesgue_decompose(&sigma, &rho, tol).map_err(numeric)?;
    let res = dec.residuals(&sigma, &rho, tol).map_err(numeric)?;
    let passed = dec.verify(&sigma, &rho, tol).map_err(numeric)?;
    let (d1, d2, d3) = dec.split.dims();
    let values = json!({
        "ac": MatrixDocument::from_hermitian(&dec.ac).labelled("ac"),
        "perp": MatrixDocument::from_hermitian(&dec.perp).labelled("perp"),
        "sqrt_lr": MatrixDocument::from_hermitian(&dec.sqrt_lr).labelled("sqrt_lr"),
        "split_dims": [d1, d2, d3],
        "checks": {
            "reconstruction": res.reconstruction,
            "ratio": res.ratio,
            "orthogonality": res.orthogonality,
            "ac_dominated": res.ac_dominated,
            "singularity": is_singular(&rho, &sigma, tol).map_err(numeric)?,
            "ac_predicate": is_abs_continuous(&sigma, &rho, tol).map_err(numeric)?,
            "passed": passed,
        },
    });
    let report = ReportDocument::new("decompose", &json!({ "sigma": sv, "rho": rv }), values, tol);
    if !passed {
        let msg = format!(
            "decomposition residuals exceed tolerance (reconstruction {:e}, ratio {:e}, orthogonality {:e})",
            res.reconstruction, res.ratio, res.orthogonality
        );
        return Err(CliError::Check(msg, Box::new(report)));
    }
    Ok(report)
}
