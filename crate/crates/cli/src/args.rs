use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dihedral_core::central::{Family, VSign};

/// Numerics for the dihedral 2l-body problem.
#[derive(Debug, Parser)]
#[command(name = "dihedral", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Central configurations with their linear stability.
    Cc(CcArgs),
    /// The reduced potential and its gradient on a (theta, phi) grid.
    Potential(PotentialArgs),
    /// One trajectory of the regularized flow.
    Flow(FlowArgs),
    /// Residuals of the l-adic averaging operator identities.
    Perron(PerronArgs),
    /// The acceptance suite.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CcArgs {
    /// One or more values of l, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub l: Vec<usize>,
    /// One or more values of alpha, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Representation {
    /// Sum over the group orbit.
    Direct,
    /// Singular integral (upper hemisphere only).
    Integral,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 50)]
    pub n_theta: usize,
    #[arg(long, default_value_t = 50)]
    pub n_phi: usize,
    /// Grid bounds; the default is the wedge [0, pi/(2l)] x [0, pi/2] moved
    /// off its collision edges by --inset.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi_max: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub inset: f64,
    /// Move grid points that fall within --clip-radius of a collision onto
    /// the edge of that ball instead of failing.
    #[arg(long)]
    pub allow_clip: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub clip_radius: f64,
    #[arg(long, value_enum, default_value_t = Representation::Direct)]
    pub representation: Representation,
    /// Gauss-Jacobi order for the integral representation.
    #[arg(long, env = "DIHEDRAL_QUAD_ORDER", default_value_t = 64)]
    pub quad_order: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Ngon,
    Prism,
    Antiprism,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Ngon => Family::NGon2l,
            FamilyArg::Prism => Family::Prism,
            FamilyArg::Antiprism => Family::Antiprism,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    #[value(alias = "+")]
    Plus,
    #[value(alias = "-")]
    Minus,
}

impl From<SignArg> for VSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => VSign::Plus,
            SignArg::Minus => VSign::Minus,
        }
    }
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub alpha: f64,
    /// Radial velocity; 0 by default, sign * sqrt(2U) with --homothetic.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.3)]
    pub theta: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub phi: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub w1: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub w2: f64,
    /// Rescale (v, w) onto the zero-energy manifold before integrating.
    #[arg(long)]
    pub parabolic: bool,
    /// Freeze the shape at a central configuration and integrate v only.
    #[arg(long, requires = "family")]
    pub homothetic: bool,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// With --homothetic and without --v: start at v = sign * sqrt(2U).
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub v_sign: SignArg,
    #[arg(long, default_value_t = 10.0)]
    pub tau_end: f64,
    /// Add the physical size rho and time t.
    #[arg(long)]
    pub lift: bool,
    /// Initial size. For a parabolic homothetic lift without --rho0 it is
    /// taken from the closed form at --t0.
    #[arg(long)]
    pub rho0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 0.05)]
    pub max_step: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_steps: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PerronArgs {
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    /// Gauss-Jacobi order.
    #[arg(long, env = "DIHEDRAL_QUAD_ORDER", default_value_t = 64)]
    pub order: usize,
    /// Number of coefficient rows b_0 .. b_n.
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    /// Number of equally spaced unit-circle points for the residual rows.
    #[arg(long, default_value_t = 16)]
    pub n_xi: usize,
    /// Residuals above this produce a warning.
    #[arg(long, default_value_t = 1e-8)]
    pub warn_above: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Smaller samples and sweeps; same tolerances.
    #[arg(long)]
    pub quick: bool,
    /// One JSON record per criterion instead of text lines.
    #[arg(long)]
    pub json: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
