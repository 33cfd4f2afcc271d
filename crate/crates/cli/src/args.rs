use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kahler_twistor::fiber::Involution;
use kahler_twistor::scalar::parse_ratio;
use kahler_twistor::spinor::TypeConvention;
use kahler_twistor::twistor::TwistorVariant;
use kahler_twistor::{Error, Sampling};
use num_rational::BigRational;

#[derive(Debug, Parser)]
#[command(name = "kts", version, about = "Verification reports for Kählerian twistor spinors and their bilinears")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the fiber and field identity suites.
    VerifyIdentities(IdentityArgs),
    /// Solve a twistor equation over polynomials and report the solution space.
    SolveTwistor(SolveArgs),
    /// Check the bilinear form equation on every solution basis element.
    VerifyTheorem1(Theorem1Args),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Float => "float",
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Half dimension of the model space.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = Backend::Exact)]
    pub backend: Backend,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9, value_parser = positive_f64)]
    pub tolerance: f64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn sampling(&self) -> Sampling {
        Sampling { seed: self.seed, tolerance: self.tolerance, ..Sampling::default() }
    }
}

#[derive(Debug, Args)]
pub struct VariantArgs {
    #[arg(long, default_value = "kahlerian", value_parser = TwistorVariant::CLI_NAMES)]
    pub variant: String,
    /// Spinor type.
    #[arg(long, default_value_t = 0)]
    pub r: usize,
    /// Polynomial degree of the ansatz.
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    /// Hijazi coefficient `a`, e.g. `1/4`.
    #[arg(long, value_parser = ratio, default_value = "1/4")]
    pub a: BigRational,
    /// Hijazi coefficient `b`.
    #[arg(long, value_parser = ratio, default_value = "1/4")]
    pub b: BigRational,
    #[arg(long, default_value = "spectral", value_parser = convention)]
    pub convention: TypeConvention,
}

impl VariantArgs {
    pub fn variant(&self) -> Result<TwistorVariant, Error> {
        TwistorVariant::from_cli(&self.variant, self.r, (self.a.clone(), self.b.clone()))
    }
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Random cases per identity in the fiber suite.
    #[arg(long, default_value_t = 1000)]
    pub cases: usize,
    /// Random cases per identity in the field suite.
    #[arg(long, default_value_t = 40)]
    pub field_cases: usize,
    /// Degree of random sections in the field suite.
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub variant: VariantArgs,
}

#[derive(Debug, Args)]
pub struct Theorem1Args {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub variant: VariantArgs,
    /// Pairing involution, or `all` for every admissible one.
    #[arg(long, default_value = "xi", value_parser = involutions)]
    pub involution: InvolutionChoice,
    /// Perturb each basis element off the solution space (negative control).
    #[arg(long, hide = true)]
    pub corrupt: bool,
}

#[derive(Clone, Debug)]
pub struct InvolutionChoice(pub Vec<Involution>);

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn ratio(s: &str) -> Result<BigRational, String> {
    parse_ratio(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

fn convention(s: &str) -> Result<TypeConvention, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn involutions(s: &str) -> Result<InvolutionChoice, String> {
    if s == "all" {
        return Ok(InvolutionChoice(Involution::PAIRING_CHOICES.to_vec()));
    }
    let inv: Involution = s.parse().map_err(|e: Error| e.to_string())?;
    if !Involution::PAIRING_CHOICES.contains(&inv) {
        return Err(format!("`{s}` admits no invariant pairing; use xi, xi*, xi-eta, xi-eta* or all"));
    }
    Ok(InvolutionChoice(vec![inv]))
}
