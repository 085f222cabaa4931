//! z-dependent scalar part of the field mode functions in front of the
//! moving plate, and their expansion in the oscillation amplitude.
//!
//! The transverse factors only contribute their continuum mean square, which
//! is applied by [`crate::oracle`]; everything here is a function of
//! `(k_z, z)` alone.

use serde::{Deserialize, Serialize};

/// Prescribed plate motion, expressed as the atom-plate distance
/// `z(t) = z0 - a sin(omega_p t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorTrajectory {
    pub z0: f64,
    pub amplitude: f64,
    pub omega_p: f64,
}

impl MirrorTrajectory {
    /// Plate displacement `a sin(omega_p t)` towards the atom.
    pub fn displacement(&self, t: f64) -> f64 {
        self.amplitude * (self.omega_p * t).sin()
    }

    pub fn distance(&self, t: f64) -> f64 {
        self.z0 - self.displacement(t)
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega_p
    }
}

/// Dipole component the scalar function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    ParallelX,
    ParallelY,
    PerpendicularZ,
}

impl ModeKind {
    pub const ALL: [ModeKind; 3] = [ModeKind::ParallelX, ModeKind::ParallelY, ModeKind::PerpendicularZ];

    pub fn is_parallel(self) -> bool {
        !matches!(self, ModeKind::PerpendicularZ)
    }

    /// Cartesian index of the component (x = 0, y = 1, z = 2).
    pub fn axis(self) -> usize {
        match self {
            ModeKind::ParallelX => 0,
            ModeKind::ParallelY => 1,
            ModeKind::PerpendicularZ => 2,
        }
    }
}

/// `sin(kz z)` for the parallel components, `cos(kz z)` for the normal one.
pub fn mode_scalar(kind: ModeKind, kz: f64, z: f64) -> f64 {
    if kind.is_parallel() {
        (kz * z).sin()
    } else {
        (kz * z).cos()
    }
}

/// Value and first two `z0` derivatives of the scalar mode function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoeffs {
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
}

pub fn expansion_coeffs(kind: ModeKind, kz: f64, z0: f64) -> ExpansionCoeffs {
    let (s, c) = (kz * z0).sin_cos();
    let (f0, f1) = if kind.is_parallel() { (s, kz * c) } else { (c, -kz * s) };
    ExpansionCoeffs {
        f0,
        f1,
        f2: -kz * kz * f0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeOrder {
    Exact,
    SecondOrder,
}

/// Scalar mode function at the instantaneous plate position.
pub fn mode_at_time(kind: ModeKind, kz: f64, traj: &MirrorTrajectory, t: f64, order: ModeOrder) -> f64 {
    match order {
        ModeOrder::Exact => mode_scalar(kind, kz, traj.distance(t)),
        ModeOrder::SecondOrder => {
            let e = expansion_coeffs(kind, kz, traj.z0);
            let s = (traj.omega_p * t).sin();
            let a = traj.amplitude;
            e.f0 - a * e.f1 * s + 0.5 * a * a * e.f2 * s * s
        }
    }
}
