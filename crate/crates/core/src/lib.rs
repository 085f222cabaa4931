//! Spontaneous emission of a two-level atom in front of a perfectly
//! reflecting plate that oscillates adiabatically along
//! `z(t) = z0 - a sin(omega_p t)`.
//!
//! The crate evaluates the time-dependent decay rate, the finite-time
//! emission spectrum up to second order in the oscillation amplitude, and
//! ships brute-force quadrature oracles that re-derive every closed form
//! independently. All rates are expressed in units of the Einstein
//! coefficient `A21`; spectral densities in units of `A21` per rad/s.

pub mod error;
pub mod grid;
pub mod modes;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod rate;
pub mod spectrum;

pub use error::{Error, Result};
pub use modes::{ExpansionCoeffs, MirrorTrajectory, ModeKind, ModeOrder};
pub use params::{DerivedScales, Orientation, PhysicalParams, Severity, ValidationReport};
pub use rate::{BracketKind, RateOrder, RateSeries};
pub use spectrum::{Peak, PeakClass, PeakReport, SpectrumSeries};
