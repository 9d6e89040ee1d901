//! Command-line surface.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlur::counts::Noise;
use qlur::optics::DampingBasis;

#[derive(Debug, Parser)]
#[command(
    name = "qlur",
    version,
    about = "Two-qubit entanglement from polarization coincidence counts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report or CSV here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// G, its uncertainty and the covariance matrix from a 36-setting counts file.
    Analyze(AnalyzeArgs),
    /// Generate a counts CSV for a prepared state.
    Simulate(SimulateArgs),
    /// Tabulate G and concurrence along the pump-angle family.
    SweepG(SweepArgs),
    /// Tabulate K for the target state and two product states.
    SweepK(SweepArgs),
    /// Compare G before and after a local transformation, or between two files.
    IlutCheck(IlutArgs),
    /// Reconstruct the density matrix from a counts file.
    Tomo(TomoArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    /// Also report the concurrence of the tomographic reconstruction.
    #[arg(long)]
    pub tomo: bool,
    /// Pump angle in degrees; when set, K is evaluated with matching projectors.
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Parallel,
    Antiparallel,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Parallel => "parallel",
            Family::Antiparallel => "antiparallel",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SettingsMode {
    /// All 36 analyzer pairs.
    Full,
    /// The 12 settings of the diagonal groups, enough for K.
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    A,
    B,
}

/// `--hwp`/`--qwp` value: plate angle in degrees on one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateArg {
    pub arm: Arm,
    pub degrees: f64,
}

impl fmt::Display for PlateArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arm = match self.arm {
            Arm::A => "a",
            Arm::B => "b",
        };
        write!(f, "{arm}:{}", self.degrees)
    }
}

/// `--damp` value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampArg {
    pub basis: DampingBasis,
    pub p: f64,
}

impl fmt::Display for DampArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.basis {
            DampingBasis::X => "x",
            DampingBasis::Z => "z",
        };
        write!(f, "{b}:{}", self.p)
    }
}

fn parse_finite(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("{s:?} is not a finite number")),
    }
}

/// `a:<deg>`, `b:<deg>`, or a bare `<deg>` meaning arm A.
pub fn parse_plate(s: &str) -> Result<PlateArg, String> {
    let (arm, deg) = match s.split_once(':') {
        Some((arm, deg)) => {
            let arm = match arm.trim().to_ascii_lowercase().as_str() {
                "a" => Arm::A,
                "b" => Arm::B,
                other => return Err(format!("unknown arm {other:?} (expected a or b)")),
            };
            (arm, deg)
        }
        None => (Arm::A, s),
    };
    Ok(PlateArg {
        arm,
        degrees: parse_finite(deg)?,
    })
}

/// `x:<p>` or `z:<p>` with `p` in `[0, 1]`.
pub fn parse_damp(s: &str) -> Result<DampArg, String> {
    let (basis, p) = s
        .split_once(':')
        .ok_or_else(|| format!("{s:?}: expected x:<p> or z:<p>"))?;
    let basis = match basis.trim().to_ascii_lowercase().as_str() {
        "x" => DampingBasis::X,
        "z" => DampingBasis::Z,
        other => return Err(format!("unknown damping basis {other:?} (expected x or z)")),
    };
    let p = parse_finite(p)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(format!("damping strength {p} outside [0, 1]"));
    }
    Ok(DampArg { basis, p })
}

#[derive(Debug, Clone, Args)]
pub struct SimFlags {
    /// Expected coincidences per setting for a uniform distribution over its group.
    #[arg(long, default_value_t = 5000.0)]
    pub n: f64,
    #[arg(long, default_value = "exact")]
    pub noise: Noise,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Local operations applied after preparation: wave plates first in the order
/// given (all `--hwp`, then all `--qwp`), then the damping channel.
#[derive(Debug, Clone, Args)]
pub struct TransformFlags {
    #[arg(long, value_parser = parse_damp)]
    pub damp: Option<DampArg>,
    #[arg(long, value_parser = parse_plate)]
    pub hwp: Vec<PlateArg>,
    #[arg(long, value_parser = parse_plate)]
    pub qwp: Vec<PlateArg>,
}

impl TransformFlags {
    pub fn is_empty(&self) -> bool {
        self.damp.is_none() && self.hwp.is_empty() && self.qwp.is_empty()
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateFlags {
    #[arg(long, value_enum, default_value_t = Family::Parallel)]
    pub family: Family,
    /// Pump half-wave-plate angle in degrees.
    #[arg(long, default_value_t = 22.5)]
    pub theta: f64,
    /// A named state (singlet, phi+, phi-, psi+, psi-, mixed, or a product
    /// label such as HH or DA); overrides --family/--theta.
    #[arg(long)]
    pub state: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub state: StateFlags,
    #[command(flatten)]
    pub transform: TransformFlags,
    #[command(flatten)]
    pub sim: SimFlags,
    #[arg(long, value_enum, default_value_t = SettingsMode::Full)]
    pub settings: SettingsMode,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = Family::Parallel)]
    pub family: Family,
    /// First grid angle in degrees.
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    /// Last grid angle in degrees.
    #[arg(long, default_value_t = 45.0)]
    pub stop: f64,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[command(flatten)]
    pub transform: TransformFlags,
    #[command(flatten)]
    pub sim: SimFlags,
}

#[derive(Debug, Args)]
pub struct IlutArgs {
    /// Two counts files to compare. Without them, a simulated state is
    /// compared with its transformed copy.
    #[arg(num_args = 0..=2)]
    pub files: Vec<PathBuf>,
    #[command(flatten)]
    pub state: StateFlags,
    #[command(flatten)]
    pub transform: TransformFlags,
    #[command(flatten)]
    pub sim: SimFlags,
    /// Agreement threshold in combined standard deviations.
    #[arg(long, default_value_t = 3.0)]
    pub k: f64,
}

#[derive(Debug, Args)]
pub struct TomoArgs {
    pub file: PathBuf,
    /// Named state or a JSON file `{"re": [[..4]; 4], "im": [[..4]; 4]}`.
    #[arg(long)]
    pub reference: Option<String>,
}
