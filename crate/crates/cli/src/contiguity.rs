use clap::{Args, Subcommand};
use qleb::contiguity::*;
use qleb::lebesgue::DensityMatrix;
use qleb::presets;
use qleb::qlan::Rate;
use qleb::ToleranceConfig;
use serde::Deserialize;
use serde_json::json;

use crate::doc::{parse, read_json, MatrixDocument};
use crate::report::ReportDocument;
use crate::{parse_count, CliError, Floats, Grid};

#[derive(Subcommand)]
pub enum ContiguityCommand {
    /// Limit criterion (declared limit states).
    Limit(FamilyArgs),
    /// Pure-state criterion.
    Pure(FamilyArgs),
    /// Product criterion on the summands `1 - Tr(rho_i R_i)`.
    Kakutani(FamilyArgs),
    /// Three-block criterion.
    Block(FamilyArgs),
}

#[derive(Args)]
pub struct FamilyArgs {
    /// example-4.1, example-4.3, sec-7.1, sec-7.2-n, sec-7.2-sqrt-n or spin-overlap.
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,
    /// Inline constant family: `{"rho": M, "sigma": M, "rho_limit"?: M, "sigma_limit"?: M}`.
    #[arg(long)]
    spec: Option<String>,
    /// Sample grid: `1,10,100` or `log:LO:HI:PER_DECADE`.
    #[arg(long)]
    grid: Option<Grid>,
    /// Number of product factors.
    #[arg(long, value_parser = parse_count)]
    horizon: Option<u64>,
    /// Local rate for spin-overlap: sqrt, quarter or linear.
    #[arg(long, default_value = "sqrt")]
    g: String,
    /// Local parameter for spin-overlap.
    #[arg(long, default_value = "1,0.5")]
    h: Floats,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InlineFamily {
    rho: MatrixDocument,
    sigma: MatrixDocument,
    rho_limit: Option<MatrixDocument>,
    sigma_limit: Option<MatrixDocument>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Limit,
    Pure,
    Kakutani,
    Block,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Limit => "limit",
            Kind::Pure => "pure",
            Kind::Kakutani => "kakutani",
            Kind::Block => "block",
        }
    }
}

pub fn run(c: &ContiguityCommand, tol: &ToleranceConfig) -> Result<ReportDocument, CliError> {
    let (kind, a) = match c {
        ContiguityCommand::Limit(a) => (Kind::Limit, a),
        ContiguityCommand::Pure(a) => (Kind::Pure, a),
        ContiguityCommand::Kakutani(a) => (Kind::Kakutani, a),
        ContiguityCommand::Block(a) => (Kind::Block, a),
    };
    let settings = CriterionSettings::default();
    let mut inputs = json!({
        "grid": a.grid.as_ref().map(|g| &g.0),
        "horizon": a.horizon,
        "g": a.g,
        "h": a.h.0,
    });
    let report = match (&a.preset, &a.spec) {
        (Some(p), None) => {
            inputs["preset"] = json!(p);
            run_preset(kind, p, a, tol, &settings)?
        }
        (None, Some(path)) => {
            let v = read_json(path)?;
            let fam: InlineFamily = parse(&v, path)?;
            inputs["spec"] = v;
            run_inline(kind, &fam, a, tol, &settings)?
        }
        _ => return Err(CliError::input("exactly one of --preset or --spec is required")),
    };
    let values = serde_json::to_value(&report).expect("reports serialize");
    Ok(ReportDocument::new(&format!("contiguity {}", kind.name()), &inputs, values, tol))
}

fn unsupported(kind: Kind, preset: &str) -> CliError {
    CliError::input(format!("preset `{preset}` does not support the {} criterion", kind.name()))
}

fn lib(e: qleb::Error) -> CliError {
    CliError::input(e.to_string())
}

fn run_preset(kind: Kind, preset: &str, a: &FamilyArgs, tol: &ToleranceConfig, s: &CriterionSettings) -> Result<ContiguityReport, CliError> {
    let grid = |lo: u64, hi: u64, per: usize| a.grid.clone().map(|g| g.0).unwrap_or_else(|| log_grid(lo, hi, per));
    match preset {
        "example-4.1" | "example-4.3" => {
            let (pair, limits): (fn(f64) -> (DensityMatrix, DensityMatrix), _) = if preset == "example-4.1" {
                (presets::pseudo_likelihood_pair, presets::pseudo_likelihood_limits())
            } else {
                (presets::collapsing_pure_pair, presets::collapsing_pure_limits())
            };
            let seq = StateSequence::new(move |n| Ok(pair(n as f64)), grid(1, 10_000, 3)).with_limits(limits.0, limits.1);
            match kind {
                Kind::Limit => limit_criterion(&seq, tol, s).map_err(lib),
                Kind::Pure => pure_criterion(&seq, tol, s).map_err(lib),
                _ => Err(unsupported(kind, preset)),
            }
        }
        "sec-7.1" => {
            if kind != Kind::Block {
                return Err(unsupported(kind, preset));
            }
            let (lr, ls) = presets::pseudo_likelihood_limits();
            let g = a.grid.clone().map(|g| g.0).unwrap_or_else(|| (0..9).map(|k| 1u64 << k).collect());
            let seq = BlockSequence::new(|n| Ok(presets::three_block_blocks(n as usize)), g, InnerCriterion::Limit { rho: lr, sigma: ls })
                .with_states(|n| presets::three_block_pair(n as usize));
            block_criterion_diagnostics(&seq, tol, s).map_err(lib)
        }
        "sec-7.2-n" | "sec-7.2-sqrt-n" => {
            if kind != Kind::Kakutani {
                return Err(unsupported(kind, preset));
            }
            let horizon = a.horizon.unwrap_or(10_000);
            let fam = if preset == "sec-7.2-n" { presets::linear_qubit_family(horizon) } else { presets::sqrt_qubit_family(horizon) };
            kakutani_criterion(&fam, tol, s).map_err(lib)
        }
        "spin-overlap" => {
            if kind != Kind::Pure {
                return Err(unsupported(kind, preset));
            }
            let rate = Rate::parse(&a.g).map_err(lib)?;
            if a.h.0.len() != 2 {
                return Err(CliError::input("spin-overlap needs a two-component --h"));
            }
            let fam = presets::spin_overlap_family(a.h.0.clone(), rate, grid(10, 1_000_000, 2));
            pure_criterion(&fam, tol, s).map_err(lib)
        }
        other => Err(CliError::input(format!("unknown preset `{other}`"))),
    }
}

fn run_inline(kind: Kind, fam: &InlineFamily, a: &FamilyArgs, tol: &ToleranceConfig, s: &CriterionSettings) -> Result<ContiguityReport, CliError> {
    let rho = fam.rho.to_state("rho", tol)?;
    let sigma = fam.sigma.to_state("sigma", tol)?;
    if rho.dim() != sigma.dim() {
        return Err(CliError::input(format!("rho has dimension {} but sigma has {}", rho.dim(), sigma.dim())));
    }
    let limits = match (&fam.rho_limit, &fam.sigma_limit) {
        (Some(r), Some(s)) => (r.to_state("rho_limit", tol)?, s.to_state("sigma_limit", tol)?),
        (None, None) => (rho.clone(), sigma.clone()),
        _ => return Err(CliError::input("rho_limit and sigma_limit must be given together")),
    };
    let g = a.grid.clone().map(|g| g.0).unwrap_or_else(|| log_grid(1, 10_000, 2));
    let (r2, s2) = (rho.clone(), sigma.clone());
    let seq = StateSequence::new(move |_| Ok((r2.clone(), s2.clone())), g).with_limits(limits.0, limits.1);
    match kind {
        Kind::Limit => limit_criterion(&seq, tol, s).map_err(lib),
        Kind::Pure => pure_criterion(&seq, tol, s).map_err(lib),
        Kind::Kakutani => {
            let fam = ProductFamily::new(move |_| Ok((rho.clone(), sigma.clone())), a.horizon.unwrap_or(1000));
            kakutani_criterion(&fam, tol, s).map_err(lib)
        }
        Kind::Block => Err(CliError::input("the block criterion is only available through --preset sec-7.1")),
    }
}

