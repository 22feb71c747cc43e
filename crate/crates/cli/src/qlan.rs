use clap::{Args, Subcommand};
use qleb::qlan::*;
use qleb::ToleranceConfig;
use serde_json::json;

use crate::doc::MatrixDocument;
use crate::report::ReportDocument;
use crate::{parse_count, CliError, Floats, Grid};

#[derive(Subcommand)]
pub enum QlanCommand {
    /// Symmetric logarithmic derivatives at theta.
    Sld(ModelArgs),
    /// Quantum Fisher information matrix `Tr(rho L_j L_i)` at theta.
    Qfi(ModelArgs),
    /// Quasi-characteristic function of the SLDs under the local
    /// alternative against the Gaussian limit.
    CltCheck(CltArgs),
    /// Second order coefficient of `Tr(rho B(h))` against `-(1/8) Re J`.
    Expansion(ExpansionArgs),
    /// Scans `n f(h / g(n))` and `n / g(n)^2` along a grid.
    RateScan(RateArgs),
}

#[derive(Args)]
pub struct ModelArgs {
    /// spin-pure or spin-perturbed:f=<zero|quadratic|cubic>.
    #[arg(long, default_value = "spin-pure")]
    model: String,
    /// Base point (defaults to the origin).
    #[arg(long)]
    theta: Option<Floats>,
}

#[derive(Args)]
pub struct CltArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Local parameter.
    #[arg(long, default_value = "1,0.5")]
    h: Floats,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_count, default_value = "100,10000,1000000")]
    n: Vec<u64>,
    /// Largest accepted deviation at the last sample size.
    #[arg(long, default_value_t = 1e-3)]
    bound: f64,
}

#[derive(Args)]
pub struct ExpansionArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Norms of the sampled local parameters.
    #[arg(long, default_value = "0.01,0.02,0.04,0.08")]
    scales: Floats,
    /// Directions sampled per norm.
    #[arg(long, default_value_t = 6)]
    directions: usize,
    /// Accepted relative error of the fitted coefficient.
    #[arg(long, default_value_t = 1e-3)]
    bound: f64,
}

#[derive(Args)]
pub struct RateArgs {
    /// Perturbation f: zero, quadratic or cubic.
    #[arg(long, default_value = "cubic")]
    f: String,
    /// Local rate g: sqrt, quarter or linear.
    #[arg(long, default_value = "sqrt")]
    g: String,
    #[arg(long, default_value = "1,0.5")]
    h: Floats,
    /// Sample grid: `1,10,100` or `log:LO:HI:PER_DECADE`.
    #[arg(long)]
    grid: Option<Grid>,
}

fn lib(e: qleb::Error) -> CliError {
    CliError::input(e.to_string())
}

fn model(a: &ModelArgs) -> Result<(ParametricModel<'static>, Vec<f64>), CliError> {
    let m = model_by_name(&a.model).map_err(lib)?;
    let theta = a.theta.clone().map(|t| t.0).unwrap_or_else(|| vec![0.0; m.dim]);
    if theta.len() != m.dim {
        return Err(CliError::input(format!("model `{}` has {} parameters, got {}", a.model, m.dim, theta.len())));
    }
    Ok((m, theta))
}

fn model_inputs(a: &ModelArgs, theta: &[f64]) -> serde_json::Value {
    json!({ "model": a.model, "theta": theta })
}

/// The 20-point query grid: single vectors on rings of radius 0.5 to 2.
fn xi_grid(dim: usize) -> Vec<Vec<Vec<f64>>> {
    (0..20)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / 20.0;
            let r = 0.5 + (k % 4) as f64 * 0.5;
            let mut xi = vec![0.0; dim];
            xi[0] = r * a.cos();
            if dim > 1 {
                xi[1] = r * a.sin();
            }
            vec![xi]
        })
        .collect()
}

pub fn run(c: &QlanCommand, tol: &ToleranceConfig) -> Result<ReportDocument, CliError> {
    match c {
        QlanCommand::Sld(a) => {
            let (m, theta) = model(a)?;
            let mut ops = Vec::new();
            let mut residuals = Vec::new();
            for i in 0..m.dim {
                let s = sld(&m, &theta, i, tol).map_err(lib)?;
                residuals.push(s.residual);
                ops.push(MatrixDocument::from_hermitian(&s.op).labelled(&format!("L{}", i + 1)));
            }
            Ok(ReportDocument::new("qlan sld", &model_inputs(a, &theta), json!({ "slds": ops, "residuals": residuals }), tol))
        }
        QlanCommand::Qfi(a) => {
            let (m, theta) = model(a)?;
            let ls = slds(&m, &theta, tol).map_err(lib)?;
            let j = qfi_matrix(&*m.state(&theta).map_err(lib)?, &ls, tol).map_err(lib)?;
            Ok(ReportDocument::new("qlan qfi", &model_inputs(a, &theta), json!({ "qfi": MatrixDocument::from_hermitian(&j).labelled("J") }), tol))
        }
        QlanCommand::CltCheck(a) => {
            let (m, theta) = model(&a.model)?;
            if a.h.0.len() != m.dim {
                return Err(CliError::input(format!("--h needs {} components", m.dim)));
            }
            let obs = slds(&m, &theta, tol).map_err(lib)?;
            let rep = lecam3_numeric_check(&m, &theta, &obs, &a.h.0, &a.n, &xi_grid(m.dim), tol).map_err(lib)?;
            let last = rep.deviations.last().map(|d| d.1).unwrap_or(f64::NAN);
            let within = last <= a.bound;
            let mut values = serde_json::to_value(&rep).expect("reports serialize");
            values["bound"] = json!(a.bound);
            values["within_bound"] = json!(within);
            let mut inputs = model_inputs(&a.model, &theta);
            inputs["h"] = json!(a.h.0);
            inputs["n"] = json!(a.n);
            inputs["bound"] = json!(a.bound);
            let report = ReportDocument::new("qlan clt-check", &inputs, values, tol);
            if !within {
                return Err(CliError::Check(format!("deviation {last:e} exceeds {:e}", a.bound), Box::new(report)));
            }
            Ok(report)
        }
        QlanCommand::Expansion(a) => {
            let (m, theta) = model(&a.model)?;
            let grid = shell_grid(m.dim, &a.scales.0, a.directions);
            let rep = sqrt_expansion_check(&m, &theta, &grid, tol).map_err(lib)?;
            let within = rep.relative_error <= a.bound;
            let mut values = serde_json::to_value(&rep).expect("reports serialize");
            values["within_bound"] = json!(within);
            let mut inputs = model_inputs(&a.model, &theta);
            inputs["scales"] = json!(a.scales.0);
            inputs["directions"] = json!(a.directions);
            inputs["bound"] = json!(a.bound);
            let report = ReportDocument::new("qlan expansion", &inputs, values, tol);
            if !within {
                return Err(CliError::Check(format!("relative error {:e} exceeds {:e}", rep.relative_error, a.bound), Box::new(report)));
            }
            Ok(report)
        }
        QlanCommand::RateScan(a) => {
            let f = Perturbation::parse(&a.f).map_err(lib)?;
            let g = Rate::parse(&a.g).map_err(lib)?;
            let grid = a.grid.clone().map(|g| g.0).unwrap_or_else(default_rate_grid);
            let scan = RateScan::new(move |t: &[f64]| f.value(t), move |n| g.eval(n), a.h.0.clone(), grid.clone());
            let rep = rate_scan(&scan);
            let inputs = json!({ "f": a.f, "g": a.g, "h": a.h.0, "grid": grid });
            Ok(ReportDocument::new("qlan rate-scan", &inputs, serde_json::to_value(&rep).expect("reports serialize"), tol))
        }
    }
}

