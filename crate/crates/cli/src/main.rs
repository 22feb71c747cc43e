//! `qleb`: command-line access to Lebesgue decompositions, contiguity
//! criteria, Gaussian quasi-characteristic functions and q-LAN checks.

mod contiguity;
mod decompose;
mod doc;
mod gaussian;
mod qlan;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qleb::ToleranceConfig;

use report::ReportDocument;

#[derive(Parser)]
#[command(name = "qleb", version, about = "Quantum Lebesgue decomposition and contiguity toolkit")]
struct Cli {
    #[command(flatten)]
    tol: TolFlags,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Pretty,
}

/// Overrides for individual tolerance fields, applied on top of the
/// profile named by `QLEB_TOL_PROFILE`.
#[derive(Args)]
struct TolFlags {
    #[arg(long, global = true)]
    tol_hermitian: Option<f64>,
    #[arg(long, global = true)]
    tol_psd_floor: Option<f64>,
    #[arg(long, global = true)]
    tol_rank_rel: Option<f64>,
    #[arg(long, global = true)]
    tol_trace: Option<f64>,
    #[arg(long, global = true)]
    tol_recon: Option<f64>,
    #[arg(long, global = true)]
    tol_ortho: Option<f64>,
    #[arg(long, global = true)]
    tol_eq_rel: Option<f64>,
    #[arg(long, global = true)]
    tol_fd_step: Option<f64>,
}

impl TolFlags {
    fn resolve(&self) -> Result<ToleranceConfig, CliError> {
        let mut t = ToleranceConfig::from_env().map_err(|e| CliError::input(e.to_string()))?;
        let fields = [
            (self.tol_hermitian, &mut t.hermitian),
            (self.tol_psd_floor, &mut t.psd_floor),
            (self.tol_rank_rel, &mut t.rank_rel),
            (self.tol_trace, &mut t.trace),
            (self.tol_recon, &mut t.recon),
            (self.tol_ortho, &mut t.ortho),
            (self.tol_eq_rel, &mut t.eq_rel),
            (self.tol_fd_step, &mut t.fd_step),
        ];
        for (flag, field) in fields {
            if let Some(v) = flag {
                *field = v;
            }
        }
        t.validate().map_err(|e| CliError::input(e.to_string()))?;
        Ok(t)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Lebesgue decomposition of sigma with respect to rho.
    Decompose(decompose::DecomposeArgs),
    /// Contiguity criteria on preset or inline sequences.
    #[command(subcommand)]
    Contiguity(contiguity::ContiguityCommand),
    /// Quantum Gaussian quasi-characteristic functions.
    #[command(subcommand)]
    Gaussian(gaussian::GaussianCommand),
    /// Quantum local asymptotic normality checks on built-in models.
    #[command(subcommand)]
    Qlan(qlan::QlanCommand),
}

/// Failures mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or invalid input (exit 2).
    Input(String),
    /// A numeric check failed; the report is still printed (exit 3).
    Check(String, Box<ReportDocument>),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

fn emit(report: &ReportDocument, output: Output) {
    let text = match output {
        Output::Json => serde_json::to_string(report),
        Output::Pretty => serde_json::to_string_pretty(report),
    }
    .expect("reports serialize");
    // A closed pipe downstream is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn run(cli: &Cli) -> Result<ReportDocument, CliError> {
    let tol = cli.tol.resolve()?;
    match &cli.command {
        Command::Decompose(a) => decompose::run(a, &tol),
        Command::Contiguity(c) => contiguity::run(c, &tol),
        Command::Gaussian(c) => gaussian::run(c, &tol),
        Command::Qlan(c) => qlan::run(c, &tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            emit(&report, cli.output);
            ExitCode::SUCCESS
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Check(msg, report)) => {
            emit(&report, cli.output);
            eprintln!("check failed: {msg}");
            ExitCode::from(3)
        }
    }
}

/// Comma separated floats, as in `1,0.5`.
#[derive(Debug, Clone, PartialEq)]
pub struct Floats(pub Vec<f64>);

impl std::str::FromStr for Floats {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"))).collect::<Result<_, _>>().map(Floats)
    }
}

/// A sample size written as an integer or in exponent form (`1e6`).
pub fn parse_count(s: &str) -> Result<u64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if v < 1.0 || v.fract() != 0.0 || v > 9.0e15 {
        return Err(format!("`{s}` is not a positive integer"));
    }
    Ok(v as u64)
}

/// A grid: comma separated sizes, or `log:LO:HI:PER_DECADE`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<u64>);

impl std::str::FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_grid(s).map(Grid)
    }
}

fn parse_grid(s: &str) -> Result<Vec<u64>, String> {
    if let Some(rest) = s.strip_prefix("log:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("`{s}`: expected log:LO:HI:PER_DECADE"));
        }
        let (lo, hi) = (parse_count(parts[0])?, parse_count(parts[1])?);
        let per = parse_count(parts[2])? as usize;
        if lo > hi {
            return Err(format!("`{s}`: empty range"));
        }
        return Ok(qleb::contiguity::log_grid(lo, hi, per));
    }
    let g: Vec<u64> = s.split(',').map(parse_count).collect::<Result<_, _>>()?;
    if g.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("`{s}`: grid must be strictly increasing"));
    }
    if g.is_empty() {
        return Err("empty grid".into());
    }
    Ok(g)
}
