//! Command-line surface. Every option is optional here so that a JSON
//! config can fill gaps; defaults are applied during resolution.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "sal", version, about = "Superadiabatic teleportation and controlled-evolution experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// JSON file with default values; explicit flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write the CSV here instead of stdout (`-` forces stdout).
    #[arg(long, short = 'o', global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Worker threads for sweep points (SAL_JOBS wins when set).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for the random input states.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Energy scale ω.
    #[arg(long, global = true)]
    pub omega: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Teleport random states (or a gate) through n sectors.
    Teleport(TeleportArgs),
    /// Controlled adiabatic evolution.
    Cae(ControlledArgs),
    /// Superadiabatic controlled evolution.
    Sce(ControlledArgs),
    /// Energy cost against runtime for controlled gates or teleportation.
    CostSweep(CostSweepArgs),
    /// θ₀ minimizing the mean cost of repeat-until-success gates.
    ThetaOpt(ThetaOptArgs),
    /// Speed-limit bound and its χ refinement along single trajectories.
    QslCheck(QslArgs),
    /// Fixed battery of quick checks with deterministic output.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Teleport(_) => "teleport",
            Command::Cae(_) => "cae",
            Command::Sce(_) => "sce",
            Command::CostSweep(_) => "cost-sweep",
            Command::ThetaOpt(_) => "theta-opt",
            Command::QslCheck(_) => "qsl-check",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct TimeArgs {
    /// Runtimes: `a,b,c`, `lin:a:b:k` or `log:a:b:k`.
    #[arg(long)]
    pub tau: Option<String>,
    /// Fixed number of propagation steps (default scales with ‖H‖τ).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Points of the s-grid used for costs and numeric frames.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Counter-diabatic construction.
    #[arg(long, value_name = "generic|analytic")]
    pub cd: Option<String>,
    /// Random input states per point.
    #[arg(long)]
    pub states: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TeleportOpts {
    /// Number of teleport sectors (list allowed).
    #[arg(long = "n-sectors", visible_alias = "n")]
    pub n_sectors: Option<String>,
    /// Gate to teleport: X, Y, Z, H, T, CNOT, Toffoli or custom.
    #[arg(long)]
    pub gate: Option<String>,
    /// JSON matrix for `--gate custom`: rows of `[re, im]` pairs.
    #[arg(long, value_name = "FILE")]
    pub gate_file: Option<PathBuf>,
    /// Interpolation family.
    #[arg(long, value_name = "linear|trig|exp")]
    pub schedule: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ControlledOpts {
    /// Number of control qubits (list allowed).
    #[arg(long = "n-controls")]
    pub n_controls: Option<String>,
    /// Rotation axis: x, y, z or `ax,ay,az` (normalized).
    #[arg(long)]
    pub axis: Option<String>,
    /// Rotation angle φ.
    #[arg(long)]
    pub phi: Option<String>,
    /// Final mixing angle θ₀ (list allowed; `pi/2` style accepted).
    #[arg(long)]
    pub theta0: Option<String>,
    /// Basis index of the control register that activates the rotation.
    #[arg(long)]
    pub activation: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TeleportArgs {
    #[command(flatten)]
    pub teleport: TeleportOpts,
    /// superadiabatic (default) or adiabatic.
    #[arg(long)]
    pub mode: Option<String>,
    #[command(flatten)]
    pub time: TimeArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ControlledArgs {
    #[command(flatten)]
    pub controlled: ControlledOpts,
    #[command(flatten)]
    pub time: TimeArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CostSweepArgs {
    /// controlled (default) or teleport.
    #[arg(long)]
    pub kind: Option<String>,
    /// Register size: controls or sectors depending on kind (list allowed).
    #[arg(long)]
    pub n: Option<String>,
    /// Mixing angles for the controlled sweep.
    #[arg(long)]
    pub theta0: Option<String>,
    /// Schedules for the teleport sweep (comma list).
    #[arg(long)]
    pub schedule: Option<String>,
    /// Runtimes τ (same list and range syntax as elsewhere).
    #[arg(long)]
    pub tau: Option<String>,
    /// Quadrature points on the s-grid.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ThetaOptArgs {
    /// ωτ values.
    #[arg(long = "omega-tau")]
    pub omega_tau: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct QslArgs {
    /// teleport-state, teleport-gate, cae or sce.
    #[arg(long)]
    pub protocol: Option<String>,
    /// superadiabatic (default) or adiabatic.
    #[arg(long)]
    pub mode: Option<String>,
    #[command(flatten)]
    pub teleport: TeleportOpts,
    #[command(flatten)]
    pub controlled: ControlledOpts,
    #[command(flatten)]
    pub time: TimeArgs,
}
