use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use lensdet::polyhedral::{PolyhedralGroup, RepLabel};

#[derive(Debug, Parser)]
#[command(name = "lensdet", version, about = "Spectral determinants and thermodynamics on spherical space forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Z'(0), log det and det for one quotient, or a CSV sweep.
    Det(DetArgs),
    /// Free energy, internal energy and entropy of a conformal scalar.
    Thermo(ThermoArgs),
    /// Data grid behind one of the standard figures.
    Figure(FigureArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct QuotientArgs {
    /// Cyclic order; may be non-integer for homogeneous lens spaces.
    #[arg(long)]
    pub q: Option<f64>,
    /// Bundle twist r of a homogeneous lens space, in [0, q).
    #[arg(long, default_value_t = 0.0)]
    pub twist: f64,
    /// Rotation numbers, e.g. "1,7" for L(q; 1, 7) or "1,1,2" in higher dimensions.
    #[arg(long)]
    pub nu: Option<String>,
    /// Number of rotation planes; forces the higher-dimensional family.
    #[arg(long)]
    pub e: Option<usize>,
    /// Binary polyhedral group T, O or I.
    #[arg(long, value_parser = parse_group, conflicts_with_all = ["q", "nu", "e"])]
    pub poly: Option<PolyhedralGroup>,
    /// Flat bundle representation, e.g. "1", "2s", "1+2sp", "3p".
    #[arg(long, value_parser = parse_rep, requires = "poly")]
    pub rep: Option<RepLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NamedCoupling {
    /// α² = 1/4.
    Conformal3,
    /// α² = 0.
    Conformal4,
    /// α² = 1, with the l = 1 zero mode removed.
    Minimal,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("coupling_choice").args(["coupling", "alpha2", "mass"]).multiple(false)))]
pub struct CouplingArgs {
    /// Named coupling; conformal4 when no coupling flag is given.
    #[arg(long, value_enum)]
    pub coupling: Option<NamedCoupling>,
    /// Eigenvalue shift: eigenvalues are l² - α².
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<f64>,
    /// Mass parameter μ with α² = 1/4 - μ².
    #[arg(long)]
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ContourArgs {
    /// Offset of the integration line above the real axis.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format; sweeps and figures are always CSV.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps and grids (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct DetArgs {
    #[command(flatten)]
    pub quotient: QuotientArgs,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    #[command(flatten)]
    pub contour: ContourArgs,
    #[arg(long, value_enum, default_value = "real")]
    pub field: FieldArg,
    /// Sweep one parameter: q=START:END[:STEP], twist=START:END[:STEP] or nu=START:END.
    #[arg(long)]
    pub sweep: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("temperature_choice").args(["beta", "temperature"]).required(true)))]
pub struct ThermoArgs {
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long, default_value_t = 0.0)]
    pub twist: f64,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long, value_enum, default_value = "real")]
    pub field: FieldArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure number, 1 to 7.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
    pub number: u8,
    /// Override the field; figures 3 to 5 default to a complex field, the rest to a real one.
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
    /// Override the figure's default grid, same syntax as det --sweep.
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub contour: ContourArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Run only the listed criteria, e.g. --only A3 or --only A1,A4.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Rejected: the suite fixes its own field conventions.
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
    /// Multiplies every canonical Z'(0); for calibration-sensitivity runs.
    #[arg(long, hide = true, default_value_t = 1.0)]
    pub normalization: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_group(s: &str) -> Result<PolyhedralGroup, String> {
    s.parse().map_err(|e: lensdet::polyhedral::PolyhedralError| e.to_string())
}

fn parse_rep(s: &str) -> Result<RepLabel, String> {
    s.parse().map_err(|e: lensdet::polyhedral::PolyhedralError| e.to_string())
}
