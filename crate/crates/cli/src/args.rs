use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "oscmirror", version, about = "Emission rate and spectrum of an atom near an oscillating mirror")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decay rate over a time grid, in units of A21.
    Rate(RateArgs),
    /// Finite-time emission spectrum at one observation time.
    Spectrum(SpectrumArgs),
    /// Spectrum over a (time, detuning) grid, long format.
    Surface(SurfaceArgs),
    /// Envelope peaks of the spectrum as JSON.
    Peaks(PeaksArgs),
    /// Runs the quadrature oracle suite; exit 3 when a check fails.
    Validate(Common),
    /// Repeats a command over a grid of one parameter.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON configuration; the 1.5e8 rad/s line-spectrum preset when absent.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file (a directory for `sweep`); stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads; defaults to the machine parallelism.
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,

    /// Run even when the adiabatic validator reports a failure.
    #[arg(long)]
    pub allow_invalid: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OrderArg {
    #[default]
    Exact,
    First,
}

#[derive(Args, Debug, Clone)]
pub struct RateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: RateGrid,
}

#[derive(Args, Debug, Clone, Default)]
pub struct RateGrid {
    /// First sample time, s.
    #[arg(long, value_name = "S")]
    pub t_start: Option<f64>,
    /// Last sample time, s; two mirror periods by default.
    #[arg(long, value_name = "S")]
    pub t_end: Option<f64>,
    /// Number of samples.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub order: Option<OrderArg>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SpectrumGrid {
    /// Observation time, s.
    #[arg(long = "t", value_name = "S")]
    pub t: Option<f64>,
    /// Lower detuning, rad/s; `-max(4 omega_p, 8 pi / t)` by default.
    #[arg(long, value_name = "RAD_PER_S", allow_hyphen_values = true)]
    pub delta_min: Option<f64>,
    #[arg(long, value_name = "RAD_PER_S", allow_hyphen_values = true)]
    pub delta_max: Option<f64>,
    /// Number of detuning samples.
    #[arg(long)]
    pub n: Option<usize>,
    /// Emit the upper envelope instead of the raw spectrum.
    #[arg(long)]
    pub envelope: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: SpectrumGrid,
}

#[derive(Args, Debug, Clone)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_name = "RAD_PER_S", allow_hyphen_values = true)]
    pub delta_min: Option<f64>,
    #[arg(long, value_name = "RAD_PER_S", allow_hyphen_values = true)]
    pub delta_max: Option<f64>,
    /// Detuning samples per time.
    #[arg(long)]
    pub n: Option<usize>,
    /// First time, s; 0.2 mirror periods by default.
    #[arg(long, value_name = "S")]
    pub t_start: Option<f64>,
    /// Last time, s; 50 mirror periods by default.
    #[arg(long, value_name = "S")]
    pub t_end: Option<f64>,
    /// Number of times.
    #[arg(long)]
    pub n_t: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct PeaksArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: SpectrumGrid,
    /// Minimum prominence relative to the peak height.
    #[arg(long)]
    pub prominence: Option<f64>,
    /// Linewidth for the resolvability report, rad/s; A21 by default.
    #[arg(long, value_name = "RAD_PER_S")]
    pub linewidth: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweepParam {
    Omega0,
    OmegaP,
    Amplitude,
    Z0,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    #[default]
    Geometric,
    Linear,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepTarget {
    Rate,
    Spectrum,
    Peaks,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Parameter to vary.
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long, default_value_t = 5)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = GridKind::Geometric)]
    pub grid: GridKind,
    /// Command evaluated at each point.
    #[arg(long, value_enum)]
    pub what: SweepTarget,
    #[arg(long = "t", value_name = "S")]
    pub t: Option<f64>,
    #[arg(long, value_name = "S")]
    pub t_start: Option<f64>,
    #[arg(long, value_name = "S")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_name = "RAD_PER_S", allow_hyphen_values = true)]
    pub delta_min: Option<f64>,
    #[arg(long, value_name = "RAD_PER_S", allow_hyphen_values = true)]
    pub delta_max: Option<f64>,
    #[arg(long, value_enum)]
    pub order: Option<OrderArg>,
    #[arg(long)]
    pub envelope: bool,
    #[arg(long)]
    pub prominence: Option<f64>,
    #[arg(long, value_name = "RAD_PER_S")]
    pub linewidth: Option<f64>,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Rate(a) => &a.common,
            Command::Spectrum(a) => &a.common,
            Command::Surface(a) => &a.common,
            Command::Peaks(a) => &a.common,
            Command::Validate(c) => c,
            Command::Sweep(a) => &a.common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Rate(_) => "rate",
            Command::Spectrum(_) => "spectrum",
            Command::Surface(_) => "surface",
            Command::Peaks(_) => "peaks",
            Command::Validate(_) => "validate",
            Command::Sweep(_) => "sweep",
        }
    }
}
