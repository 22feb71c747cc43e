use clap::{Args, Subcommand};
use qleb::gaussian::*;
use qleb::ToleranceConfig;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::doc::{complex, parse, read_json, Entry, MatrixDocument};
use crate::report::ReportDocument;
use crate::CliError;

#[derive(Subcommand)]
pub enum GaussianCommand {
    /// Quasi-characteristic function of `N(h, J)`.
    Qcf(QueryArgs),
    /// Gaussian shift `N(mu + Re kappa, Sigma)` of extended parameters.
    Shift(ParamArgs),
    /// Likelihood-sandwiched quasi-characteristic function.
    Sandwich(QueryArgs),
}

#[derive(Args)]
pub struct ParamArgs {
    /// Parameter file.
    #[arg(long)]
    params: String,
}

#[derive(Args)]
pub struct QueryArgs {
    /// Parameter file.
    #[arg(long)]
    params: String,
    /// Query file: an array of vectors whose entries are numbers or `[re, im]` pairs.
    #[arg(long)]
    query: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianDocument {
    h: Vec<f64>,
    j: MatrixDocument,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtendedDocument {
    mu: Vec<f64>,
    sigma: MatrixDocument,
    kappa: Vec<Entry>,
    s2: f64,
}

fn gaussian_params(v: &Value, what: &str, tol: &ToleranceConfig) -> Result<GaussianParams, CliError> {
    let d: GaussianDocument = parse(v, what)?;
    let p = GaussianParams::new(d.h, d.j.to_hermitian("j", tol)?);
    if !validate(&p) {
        return Err(CliError::input(format!("{what}: J must be positive semidefinite with the dimension of h")));
    }
    Ok(p)
}

fn extended_params(v: &Value, what: &str, tol: &ToleranceConfig) -> Result<ExtendedGaussianParams, CliError> {
    let d: ExtendedDocument = parse(v, what)?;
    let p = ExtendedGaussianParams {
        mu: d.mu,
        sigma: d.sigma.to_hermitian("sigma", tol)?,
        kappa: d.kappa.into_iter().map(Entry::value).collect(),
        s2: d.s2,
    };
    if !p.validate() {
        return Err(CliError::input(format!("{what}: [[Sigma, kappa], [kappa*, s2]] must be positive semidefinite")));
    }
    Ok(p)
}

fn query(v: &Value, what: &str) -> Result<QcfQuery, CliError> {
    let q: Vec<Vec<Entry>> = parse(v, what)?;
    if q.is_empty() {
        return Err(CliError::input(format!("{what}: query is empty")));
    }
    Ok(q.into_iter().map(|x| x.into_iter().map(Entry::value).collect()).collect())
}

fn params_document(p: &GaussianParams) -> Value {
    json!({ "h": p.h, "j": MatrixDocument::from_hermitian(&p.j) })
}

fn lib(e: qleb::Error) -> CliError {
    CliError::input(e.to_string())
}

pub fn run(c: &GaussianCommand, tol: &ToleranceConfig) -> Result<ReportDocument, CliError> {
    match c {
        GaussianCommand::Qcf(a) => {
            let (pv, qv) = (read_json(&a.params)?, read_json(&a.query)?);
            let p = gaussian_params(&pv, &a.params, tol)?;
            let q = query(&qv, &a.query)?;
            let z = gaussian_qcf(&p, &q).map_err(lib)?;
            let inputs = json!({ "params": pv, "query": qv });
            Ok(ReportDocument::new("gaussian qcf", &inputs, json!({ "value": complex(z) }), tol))
        }
        GaussianCommand::Shift(a) => {
            let pv = read_json(&a.params)?;
            let ext = extended_params(&pv, &a.params, tol)?;
            let shifted = lecam_shift(&ext).map_err(lib)?;
            Ok(ReportDocument::new("gaussian shift", &json!({ "params": pv }), json!({ "shifted": params_document(&shifted) }), tol))
        }
        GaussianCommand::Sandwich(a) => {
            let (pv, qv) = (read_json(&a.params)?, read_json(&a.query)?);
            let ext = extended_params(&pv, &a.params, tol)?;
            let q = query(&qv, &a.query)?;
            let z = sandwiched_gaussian_qcf(&ext, &q).map_err(lib)?;
            let shifted = gaussian_qcf(&lecam_shift(&ext).map_err(lib)?, &q).map_err(lib)?;
            let gap = (z - shifted).norm();
            let values = json!({
                "value": complex(z),
                "shifted_value": complex(shifted),
                "gap": gap,
                "agree": gap <= tol.eq_rel * z.norm().max(1.0),
            });
            Ok(ReportDocument::new("gaussian sandwich", &json!({ "params": pv, "query": qv }), values, tol))
        }
    }
}
