//! Physical inputs, derived dimensionless scales and the adiabatic-regime
//! validator.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Orientation of the atomic transition dipole relative to the plate
/// (the plate is the `z = 0` plane).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    X,
    Y,
    Z,
    #[default]
    Random,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Orientation::X => "x",
            Orientation::Y => "y",
            Orientation::Z => "z",
            Orientation::Random => "random",
        };
        f.write_str(s)
    }
}

/// Atom, mirror and field configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    /// Atomic transition angular frequency, rad/s.
    pub omega0: f64,
    /// Mirror oscillation angular frequency, rad/s.
    pub omega_p: f64,
    /// Oscillation amplitude, m.
    pub amplitude: f64,
    /// Mean atom-mirror distance, m.
    pub z0: f64,
    /// Einstein coefficient, 1/s. Only sets the unit of the outputs.
    pub a21: f64,
    /// Speed of light, m/s.
    pub c: f64,
    pub orientation: Orientation,
}

/// On-disk layout of a configuration file.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub omega0_rad_per_s: f64,
    pub omega_p_rad_per_s: f64,
    pub amplitude_m: f64,
    pub z0_m: f64,
    #[serde(default)]
    pub a21_per_s: Option<f64>,
    #[serde(default)]
    pub c_m_per_s: Option<f64>,
    #[serde(default)]
    pub orientation: Option<Orientation>,
}

impl From<&PhysicalParams> for ConfigFile {
    fn from(p: &PhysicalParams) -> Self {
        ConfigFile {
            omega0_rad_per_s: p.omega0,
            omega_p_rad_per_s: p.omega_p,
            amplitude_m: p.amplitude,
            z0_m: p.z0,
            a21_per_s: Some(p.a21),
            c_m_per_s: Some(p.c),
            orientation: Some(p.orientation),
        }
    }
}

impl PhysicalParams {
    /// Builds validated parameters with `a21 = 1`, vacuum `c` and a randomly
    /// oriented dipole.
    pub fn new(omega0: f64, omega_p: f64, amplitude: f64, z0: f64) -> Result<Self> {
        PhysicalParams {
            omega0,
            omega_p,
            amplitude,
            z0,
            a21: 1.0,
            c: SPEED_OF_LIGHT,
            orientation: Orientation::Random,
        }
        .validated()
    }

    /// Parameters used for the line spectrum at `t = 1 us`:
    /// `omega0 = 1e15`, `omega_p = 1.5e8`, `a = 2e-7 m`, `z0 = 1e-6 m`.
    pub fn line_spectrum_preset() -> Self {
        Self::new(1e15, 1.5e8, 2e-7, 1e-6).expect("preset is valid")
    }

    /// Same geometry with a ten times faster mirror, `omega_p = 1.5e9`.
    pub fn time_surface_preset() -> Self {
        Self::new(1e15, 1.5e9, 2e-7, 1e-6).expect("preset is valid")
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_amplitude(self, amplitude: f64) -> Result<Self> {
        PhysicalParams { amplitude, ..self }.validated()
    }

    pub fn from_config(cfg: &ConfigFile) -> Result<Self> {
        PhysicalParams {
            omega0: cfg.omega0_rad_per_s,
            omega_p: cfg.omega_p_rad_per_s,
            amplitude: cfg.amplitude_m,
            z0: cfg.z0_m,
            a21: cfg.a21_per_s.unwrap_or(1.0),
            c: cfg.c_m_per_s.unwrap_or(SPEED_OF_LIGHT),
            orientation: cfg.orientation.unwrap_or_default(),
        }
        .validated()
    }

    /// Checks every field invariant. `omega_p = 0` and `amplitude = 0` are
    /// accepted and describe a static mirror.
    pub fn validated(self) -> Result<Self> {
        fn positive(key: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    key,
                    reason: format!("must be finite and > 0, got {v}"),
                })
            }
        }
        fn non_negative(key: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    key,
                    reason: format!("must be finite and >= 0, got {v}"),
                })
            }
        }
        positive("omega0_rad_per_s", self.omega0)?;
        non_negative("omega_p_rad_per_s", self.omega_p)?;
        non_negative("amplitude_m", self.amplitude)?;
        positive("z0_m", self.z0)?;
        positive("a21_per_s", self.a21)?;
        positive("c_m_per_s", self.c)?;
        if self.amplitude >= self.z0 {
            return Err(Error::InvalidParam {
                key: "amplitude_m",
                reason: format!(
                    "must be smaller than z0_m = {} so the plate never reaches the atom, got {}",
                    self.z0, self.amplitude
                ),
            });
        }
        Ok(self)
    }

    pub fn trajectory(&self) -> crate::modes::MirrorTrajectory {
        crate::modes::MirrorTrajectory {
            z0: self.z0,
            amplitude: self.amplitude,
            omega_p: self.omega_p,
        }
    }

    /// Resonant wavenumber `omega0 / c`.
    pub fn k0(&self) -> f64 {
        self.omega0 / self.c
    }

    /// Static phase `2 k0 z0`.
    pub fn u0(&self) -> f64 {
        2.0 * self.k0() * self.z0
    }
}

/// Reads a JSON configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<PhysicalParams> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::ConfigIo {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text).map_err(|e| match e {
        Error::ConfigFormat { message, .. } => Error::ConfigFormat {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })
}

/// Parses the JSON configuration document.
pub fn parse_config(text: &str) -> Result<PhysicalParams> {
    let cfg: ConfigFile = serde_json::from_str(text).map_err(|e| Error::ConfigFormat {
        path: Default::default(),
        message: e.to_string(),
    })?;
    PhysicalParams::from_config(&cfg)
}

/// Dimensionless scales that control the adiabatic and small-amplitude
/// expansions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedScales {
    /// `omega0 / c`, 1/m.
    pub k0: f64,
    /// `2 k0 z0`.
    pub u0: f64,
    /// `a / z0`.
    pub eps_geom: f64,
    /// `a k0`.
    pub eps_wave: f64,
    /// `a omega_p / c`, peak plate speed over `c`.
    pub v_ratio: f64,
    /// `omega_p / omega0`.
    pub adiab_freq: f64,
    /// `omega_p z0 / c`.
    pub adiab_travel: f64,
}

pub fn derive_scales(p: &PhysicalParams) -> DerivedScales {
    let k0 = p.omega0 / p.c;
    DerivedScales {
        k0,
        u0: 2.0 * k0 * p.z0,
        eps_geom: p.amplitude / p.z0,
        eps_wave: p.amplitude * k0,
        v_ratio: p.amplitude * p.omega_p / p.c,
        adiab_freq: p.omega_p / p.omega0,
        adiab_travel: p.omega_p * p.z0 / p.c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub severity: Severity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub overall: Severity,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Warning thresholds for the adiabatic validator. Any ratio `>= 1` fails
/// regardless of these.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdiabaticThresholds {
    pub adiab_freq: f64,
    pub adiab_travel: f64,
    pub v_ratio: f64,
    pub eps_geom: f64,
    pub eps_wave_sq: f64,
}

impl Default for AdiabaticThresholds {
    fn default() -> Self {
        AdiabaticThresholds {
            adiab_freq: 1e-3,
            adiab_travel: 1e-2,
            v_ratio: 1e-3,
            eps_geom: 0.3,
            eps_wave_sq: 0.3,
        }
    }
}

pub fn validate_adiabatic(
    p: &PhysicalParams,
    thresholds: Option<AdiabaticThresholds>,
) -> ValidationReport {
    let th = thresholds.unwrap_or_default();
    let s = derive_scales(p);
    let grade = |name: &'static str, value: f64, threshold: f64| {
        let severity = if value.is_nan() || value >= 1.0 {
            Severity::Fail
        } else if value > threshold {
            Severity::Warn
        } else {
            Severity::Pass
        };
        Check {
            name,
            value,
            threshold,
            severity,
        }
    };
    let checks = vec![
        grade("adiab_freq", s.adiab_freq, th.adiab_freq),
        grade("adiab_travel", s.adiab_travel, th.adiab_travel),
        grade("v_ratio", s.v_ratio, th.v_ratio),
        grade("eps_geom", s.eps_geom, th.eps_geom),
        grade("eps_wave_sq", s.eps_wave * s.eps_wave, th.eps_wave_sq),
    ];
    let overall = checks
        .iter()
        .map(|c| c.severity)
        .max()
        .unwrap_or(Severity::Pass);
    ValidationReport { checks, overall }
}
