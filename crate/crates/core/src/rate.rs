//! Angular brackets, the adiabatic decay rate and decay probabilities.
//!
//! Every bracket is a function of the dimensionless phase `U = 2 k0 z`. Rates
//! are normalised so that each orientation tends to 1 far from the plate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::linspace;
use crate::params::{Orientation, PhysicalParams};
use crate::quadrature::{integrate_adaptive, Tolerance};

/// Below this phase the closed forms lose digits to cancellation and the
/// power series is used instead.
pub const SERIES_SWITCH: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketKind {
    /// Orientation-averaged static rate.
    B0Random,
    /// Coefficient of `(a/z0) sin(omega_p t)` in the first-order rate.
    B1RandomFirstOrder,
    /// Weight of the `h2` channel of the spectrum.
    B2Spectrum,
    /// Weight of the `h3` channel of the spectrum.
    B3Spectrum,
    /// Dipole parallel to the plate.
    RParallel,
    /// Dipole normal to the plate.
    RPerpendicular,
}

impl BracketKind {
    pub const ALL: [BracketKind; 6] = [
        BracketKind::B0Random,
        BracketKind::B1RandomFirstOrder,
        BracketKind::B2Spectrum,
        BracketKind::B3Spectrum,
        BracketKind::RParallel,
        BracketKind::RPerpendicular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BracketKind::B0Random => "B0",
            BracketKind::B1RandomFirstOrder => "B1",
            BracketKind::B2Spectrum => "B2",
            BracketKind::B3Spectrum => "B3",
            BracketKind::RParallel => "R_parallel",
            BracketKind::RPerpendicular => "R_perpendicular",
        }
    }
}

/// Angular bracket at phase `u >= 0`.
pub fn bracket(kind: BracketKind, u: f64) -> f64 {
    if u < SERIES_SWITCH {
        bracket_series(kind, u)
    } else {
        bracket_closed_form(kind, u)
    }
}

/// Closed forms in `sin U`, `cos U` and inverse powers of `U`.
pub fn bracket_closed_form(kind: BracketKind, u: f64) -> f64 {
    let (s, c) = u.sin_cos();
    let u2 = u * u;
    let u3 = u2 * u;
    match kind {
        BracketKind::B0Random => 1.0 - s / u - 2.0 * c / u2 + 2.0 * s / u3,
        BracketKind::B1RandomFirstOrder => c - 3.0 * s / u - 6.0 * c / u2 + 6.0 * s / u3,
        BracketKind::B2Spectrum => 1.0 / 3.0 + spectrum_tail(s, c, u),
        BracketKind::B3Spectrum => -1.0 / 3.0 + spectrum_tail(s, c, u),
        BracketKind::RParallel => 1.0 - 1.5 * (s / u + c / u2 - s / u3),
        BracketKind::RPerpendicular => 1.0 - 3.0 * (c / u2 - s / u3),
    }
}

// Shared oscillating part of the h2/h3 brackets.
fn spectrum_tail(s: f64, c: f64, u: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    let u4 = u2 * u2;
    let u5 = u4 * u;
    s / u + 4.0 * c / u2 - 12.0 * s / u3 - 24.0 * c / u4 + 24.0 * s / u5
}

/// `int_{-1}^{1} mu^n cos(u mu) dmu` for even `n`, summed as a power series.
fn cos_moment_series(n: u32, u: f64) -> f64 {
    let u2 = u * u;
    let mut term = 1.0; // (-1)^k u^{2k} / (2k)!
    let mut sum = 0.0;
    for k in 0..40u32 {
        let contrib = term / f64::from(n + 2 * k + 1);
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs() {
            break;
        }
        term *= -u2 / f64::from((2 * k + 1) * (2 * k + 2));
    }
    2.0 * sum
}

/// `sum_k (-1)^k u^{2k} / ((2k+1)! (2k+5))`.
fn b1_series_core(u: f64) -> f64 {
    let u2 = u * u;
    let mut term = 1.0; // (-1)^k u^{2k} / (2k+1)!
    let mut sum = 0.0;
    for k in 0..40u32 {
        let contrib = term / f64::from(2 * k + 5);
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs() {
            break;
        }
        term *= -u2 / f64::from((2 * k + 2) * (2 * k + 3));
    }
    sum
}

/// Power-series evaluation, accurate for small `u`.
pub fn bracket_series(kind: BracketKind, u: f64) -> f64 {
    match kind {
        BracketKind::B0Random => 1.0 - 0.5 * cos_moment_series(2, u),
        BracketKind::B1RandomFirstOrder => -u * u * b1_series_core(u),
        BracketKind::B2Spectrum => 1.0 / 3.0 + 0.5 * cos_moment_series(4, u),
        BracketKind::B3Spectrum => -1.0 / 3.0 + 0.5 * cos_moment_series(4, u),
        BracketKind::RParallel => 1.0 - 0.375 * (cos_moment_series(0, u) + cos_moment_series(2, u)),
        BracketKind::RPerpendicular => 1.0 + 0.75 * (cos_moment_series(0, u) - cos_moment_series(2, u)),
    }
}

/// Static rate bracket for a dipole orientation.
pub fn orientation_bracket(orientation: Orientation, u: f64) -> f64 {
    let kind = match orientation {
        Orientation::X | Orientation::Y => BracketKind::RParallel,
        Orientation::Z => BracketKind::RPerpendicular,
        Orientation::Random => BracketKind::B0Random,
    };
    bracket(kind, u)
}

/// Instantaneous decay rate `Gamma(t) / A21`: the static rate evaluated at
/// the instantaneous distance `z0 - a sin(omega_p t)`.
pub fn rate_exact(p: &PhysicalParams, t: f64) -> f64 {
    let u = 2.0 * p.k0() * p.trajectory().distance(t);
    orientation_bracket(p.orientation, u)
}

/// Decay rate to first order in `a / z0`. Random orientation only.
pub fn rate_first_order(p: &PhysicalParams, t: f64) -> Result<f64> {
    if p.orientation != Orientation::Random {
        return Err(Error::UnsupportedOrientation(p.orientation.to_string()));
    }
    let u0 = p.u0();
    Ok(bracket(BracketKind::B0Random, u0)
        + (p.amplitude / p.z0) * (p.omega_p * t).sin() * bracket(BracketKind::B1RandomFirstOrder, u0))
}

/// `int_0^t Gamma(t')/A21 dt'`, in seconds. Multiply by `A21` for the decay
/// probability.
pub fn decay_probability(p: &PhysicalParams, t: f64) -> Result<f64> {
    decay_probability_between(p, 0.0, t)
}

/// `int_{t_a}^{t_b} Gamma(t')/A21 dt'`.
pub fn decay_probability_between(p: &PhysicalParams, t_a: f64, t_b: f64) -> Result<f64> {
    if !(t_a >= 0.0 && t_b >= 0.0) {
        return Err(Error::InvalidGrid(format!("times must be >= 0, got [{t_a}, {t_b}]")));
    }
    let span = t_b - t_a;
    if span == 0.0 {
        return Ok(0.0);
    }
    // integrate over the unit interval so the absolute floor is dimensionless
    let r = integrate_adaptive(|s| rate_exact(p, t_a + span * s), 0.0, 1.0, Tolerance::default())?;
    Ok(r.value * span)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RateOrder {
    #[default]
    Exact,
    FirstOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub orientation: Orientation,
    pub order: RateOrder,
}

pub fn rate_series(
    p: &PhysicalParams,
    t_start: f64,
    t_end: f64,
    n_points: usize,
    order: RateOrder,
) -> Result<RateSeries> {
    let times = linspace(t_start, t_end, n_points)?;
    let values = match order {
        RateOrder::Exact => times.iter().map(|&t| rate_exact(p, t)).collect(),
        RateOrder::FirstOrder => times
            .iter()
            .map(|&t| rate_first_order(p, t))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(RateSeries {
        times,
        values,
        orientation: p.orientation,
        order,
    })
}
